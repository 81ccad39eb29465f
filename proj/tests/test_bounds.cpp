#include <doctest.h>

#include <cmath>
#include <map>

#include <boost/math/special_functions/zeta.hpp>

#include "oracles.hpp"
#include "qlb/bounds.hpp"
#include "qlb/dynamics.hpp"

using namespace qlb;
using oracle::Big;

namespace {

const Big kBigE = boost::multiprecision::exp(Big(1));

Big big_pair_sum(const FFunction& f, const FiniteMetricSpace& s, const SiteSet& x, const SiteSet& y) {
  Big acc = 0;
  for (Site a : x)
    for (Site b : y) acc += Big(f(s.distance(a, b)));
  return acc;
}

Big big_tail(double t, double k) {
  return Big(oracle::exp_tail(t, static_cast<int>(std::ceil(k - 1e-12))));
}

double brute_G(const FFunction& f, const FiniteMetricSpace& s, double r) {
  double best = 0.0;
  for (Site x = 0; x < s.size(); ++x) {
    double acc = 0.0;
    for (Site y = 0; y < s.size(); ++y)
      if (s.distance(x, y) > r) acc += f(s.distance(x, y));
    best = std::max(best, acc);
  }
  return best;
}

Big big_time_factor(const ModelConstants& c, double t) {
  Big v(c.v), tt(t);
  return tt + (Big(c.C_F) + Big(c.F_norm)) / Big(c.C_F) * ((boost::multiprecision::exp(v * tt) - 1) / v - tt);
}

bool rel_close(double got, const Big& want, double tol) {
  const double w = want.convert_to<double>();
  return std::abs(got - w) <= tol * std::max(std::abs(w), 1e-300);
}

struct Fixture {
  FiniteMetricSpace chain = FiniteMetricSpace::chain(4);
  FFunction f = FFunction::power(3);
  DissipativeInteraction model = long_range_zz(chain, 1.0, 3.0, 0.5);
  ModelConstants c = model_constants(model, f, 1.0);
  SiteSet lambda = chain.all();
};

}  // namespace

TEST_CASE("model constants") {
  Fixture fx;
  CHECK(fx.c.v == fx.c.f_norm_L * fx.c.C_F);
  CHECK(fx.c.C_F == conv_constant(fx.f, fx.chain));
  CHECK(fx.c.F_norm == f_norm(fx.f, fx.chain));
  CHECK(fx.c.R0 == 3.0);
  CHECK(fx.c.kappa == nu_regularity(fx.chain, 1.0));
  CHECK(fx.c.G(1.0) == doctest::Approx(brute_G(fx.f, fx.chain, 1.0)).epsilon(1e-15));
}

TEST_CASE("quasi-locality formulas against high-precision oracle") {
  Fixture fx;
  const SiteSet x{0}, y{3};
  const double t = 0.5, kcb = 2.0, an = 1.0;
  Big pref = Big(kcb) * Big(an) / Big(fx.c.C_F) * big_pair_sum(fx.f, fx.chain, x, y);
  for (double R : {1.0, 2.0, 3.0}) {
    Big want = pref * big_tail(fx.c.v * t, 3.0 / R);
    CHECK(rel_close(rhs_appLRB(fx.c, kcb, an, x, y, t, R), want, 1e-12));
  }
  Big nvz = pref * (boost::multiprecision::exp(Big(fx.c.v) * Big(t)) - 1);
  CHECK(rel_close(rhs_NVZ(fx.c, kcb, an, x, y, t), nvz, 1e-12));

  const double m = 1.0;  // d = 3, R0 = 3
  Big vt = Big(fx.c.v) * Big(t);
  Big fr = Big(kcb) * Big(an) * Big(1) * Big(fx.c.F_norm) / Big(fx.c.C_F) *
           boost::multiprecision::pow(kBigE * vt, m) * boost::multiprecision::exp(vt);
  CHECK(rel_close(rhs_frLRB(fx.c, kcb, an, 1, 3.0, t), fr, 1e-12));

  auto nn = tfim_dissipative(FiniteMetricSpace::chain(4), 0.5, 0.3, 0.2);
  auto cn = model_constants(nn, fx.f, 1.0);
  Big vt3 = Big(cn.v) * Big(t);
  Big fr3 = Big(kcb) * Big(cn.F_norm) / Big(cn.C_F) * boost::multiprecision::pow(kBigE * vt3, 3) *
            boost::multiprecision::exp(-3 * boost::multiprecision::log(Big(3)) + vt3);
  CHECK(rel_close(rhs_frLRB(cn, kcb, 1.0, 1, 3.0, t), fr3, 1e-12));
  CHECK_THROWS_AS(rhs_appLRB(fx.c, kcb, an, {0, 1}, {1, 2}, t, 1), ConfigError);
  CHECK_THROWS_AS(rhs_frLRB(model_constants(DissipativeInteraction(fx.chain, SiteDims::qubits(4), {}), fx.f, 1.0),
                            kcb, an, 1, 3.0, t),
                  ConfigError);
}

TEST_CASE("truncation and locality formulas against high-precision oracle") {
  Fixture fx;
  const SiteSet x{0};
  const double t = 0.7, an = 1.0;
  for (double R : {1.0, 2.0, 3.0})
    for (double r : {0.0, 1.0, 2.0}) {
      SiteSet xr = inflate(fx.chain, x, r);
      double g = brute_G(fx.f, fx.chain, R / 2);
      Big bracket = Big(t) * Big(static_cast<double>(xr.size()));
      Big outside = big_pair_sum(fx.f, fx.chain, x, fx.lambda.minus(xr));
      if (outside > 0) bracket += big_tail(fx.c.v * t, 1 + r / R) / Big(fx.c.v) / Big(fx.c.C_F) * outside;
      Big want = Big(an) * Big(fx.c.f_norm_L) * Big(g) * bracket;
      double got = rhs_dyn_diff(fx.c, an, x, fx.lambda, t, r, R);
      if (g == 0)
        CHECK(got == 0.0);
      else
        CHECK(rel_close(got, want, 1e-12));
    }
  for (double r : {1.0, 2.0}) {
    SiteSet xr = inflate(fx.chain, x, r);
    Big want = Big(an) * Big(fx.c.f_norm_L) * big_time_factor(fx.c, t) *
               big_pair_sum(fx.f, fx.chain, x, fx.lambda.minus(xr));
    auto got = rhs_gen_sl_app(fx.c, an, x, fx.lambda, t, r);
    CHECK(got.valid);
    CHECK(rel_close(got.value, want, 1e-12));

    SiteSet y{3}, yr = inflate(fx.chain, y, r);
    Big cg = 2 * Big(an) * Big(0.5) * Big(fx.c.f_norm_L) * big_time_factor(fx.c, t) *
             (big_pair_sum(fx.f, fx.chain, x, fx.lambda.minus(xr)) +
              big_pair_sum(fx.f, fx.chain, y, fx.lambda.minus(yr)));
    CHECK(rel_close(rhs_cor_general(fx.c, an, 0.5, x, y, fx.lambda, r, t).value, cg, 1e-12));
  }
  CHECK_FALSE(rhs_gen_sl_app(fx.c, an, x, fx.lambda, t, 0.5).valid);
  CHECK_FALSE(rhs_cor_general(fx.c, an, 1, x, {3}, fx.lambda, 0.5, t).valid);
  for (double t2 : {1e-12, 1e-9, 1e-5, 0.1, 0.49, 0.51, 3.0}) {
    Big want = (boost::multiprecision::exp(Big(fx.c.v) * Big(t2)) - 1) / Big(fx.c.v) - Big(t2);
    CHECK(rel_close(integral_expm1(fx.c.v, t2), want, 1e-13));
  }
  CHECK(integral_expm1(0.0, 2.0) == 0.0);
}

TEST_CASE("zero at t = 0 and monotone in t") {
  Fixture fx;
  const SiteSet x{0}, y{3};
  PolyParams p;
  CHECK(rhs_appLRB(fx.c, 2, 1, x, y, 0, 1) == 0.0);
  CHECK(rhs_NVZ(fx.c, 2, 1, x, y, 0) == 0.0);
  CHECK(rhs_frLRB(fx.c, 2, 1, 1, 3, 0) == 0.0);
  CHECK(rhs_dyn_diff(fx.c, 1, x, fx.lambda, 0, 1, 1) == 0.0);
  CHECK(rhs_gen_LRB(fx.c, 2, 1, x, y, fx.lambda, 0, 1, 1, FirstTerm::analytic) == 0.0);
  CHECK(rhs_gen_sl_app(fx.c, 1, x, fx.lambda, 0, 1).value == 0.0);
  CHECK(rhs_cor_general(fx.c, 1, 1, x, y, fx.lambda, 1, 0).value == 0.0);
  CHECK(rhs_appLRB(fx.c, 2, 0, x, y, 0.5, 1) == 0.0);

  double prev[6] = {0, 0, 0, 0, 0, 0};
  for (double t = 0; t <= 3; t += 0.125) {
    double now[6] = {rhs_appLRB(fx.c, 2, 1, x, y, t, 1), rhs_NVZ(fx.c, 2, 1, x, y, t),
                     rhs_frLRB(fx.c, 2, 1, 1, 3, t), rhs_dyn_diff(fx.c, 1, x, fx.lambda, t, 1, 1),
                     rhs_gen_sl_app(fx.c, 1, x, fx.lambda, t, 1).value,
                     rhs_cor_general(fx.c, 1, 1, x, y, fx.lambda, 1, t).value};
    for (int i = 0; i < 6; ++i) {
      CHECK(now[i] >= prev[i]);
      prev[i] = now[i];
    }
    for (double R : {0.5, 1.0, 2.0, 3.0, 8.0})
      CHECK(rhs_appLRB(fx.c, 2, 1, x, y, t, R) <= rhs_NVZ(fx.c, 2, 1, x, y, t));
  }
}

TEST_CASE("recovery of the static bound") {
  Fixture fx;
  const SiteSet x{0}, y{3};
  for (double t = 0; t <= 2; t += 0.25)
    for (double R : {6.0, 7.0, 10.0}) {
      double gen = rhs_gen_LRB(fx.c, 2, 1, x, y, fx.lambda, t, 1, R, FirstTerm::analytic);
      CHECK(gen == rhs_appLRB(fx.c, 2, 1, x, y, t, R));
      CHECK(gen <= rhs_NVZ(fx.c, 2, 1, x, y, t));
      CHECK(rhs_gen_LRB(fx.c, 2, 1, x, y, fx.lambda, t, 1, R, FirstTerm::exact, 0.25) == 0.25);
    }
}

TEST_CASE("power-law parameter window and constants") {
  auto chain = FiniteMetricSpace::chain(5);
  auto model = long_range_zz(chain, 1.0, 4.0, 0.5);
  auto c = model_constants(model, FFunction::power(4), 1.0);
  PolyParams p;
  CHECK(p.alpha_eps(4, 1) == doctest::Approx(1.5));
  CHECK(p.exponent(4, 1) == doctest::Approx(0.05));
  CHECK(poly_window(c, p).empty());
  PolyParams bad{0.5, 0.9};
  CHECK_FALSE(poly_window(c, bad).empty());
  auto flagged = rhs_sl_poly(c, 1, 1, 2, 0.1, bad);
  CHECK_FALSE(flagged.valid);
  CHECK(std::isnan(flagged.value));

  Big ce(boost::math::zeta(1.5));
  Big kappa(c.kappa), CF(c.C_F), Fn(c.F_norm), fl(c.f_norm_L);
  Big two_pow = boost::multiprecision::pow(Big(2), Big(3)) * boost::multiprecision::pow(Big(2), Big(0.7));
  Big C_lrb = kappa * ce * fl * (kBigE + two_pow * (ce + CF) / CF);
  Big C_loc = kappa * ce / CF * (kappa * two_pow * (ce + CF) + kBigE * (CF + Fn));
  CHECK(rel_close(poly_constant_lrb(c, p), C_lrb, 1e-12));
  CHECK(rel_close(poly_constant_local(c, p), C_loc, 1e-12));
  Big q = Big(0.7) * Big(1.5) - 1;
  Big Cp = 3 * C_loc / (kBigE * Big(c.v)) * boost::multiprecision::pow(Big(2), q - Big(0.02));
  CHECK(rel_close(fp_poly_constant(c, p, 0.02), Cp, 1e-12));

  ModelConstants given = c;
  given.kappa = 2;
  given.C_F = 3;
  given.F_norm = 2;
  Big ce_given(c_epsilon(0.5).value);
  Big want = Big(2) * ce_given / 3 * (Big(2) * two_pow * (ce_given + 3) + kBigE * 5);
  CHECK(rel_close(poly_constant_local(given, p), want, 1e-12));
  CHECK(std::abs(c_epsilon(0.5).value - 2.6123753486854883) < 1e-12);

  auto lrb = rhs_poly_lrb(c, 2, 1, 1, 4, 0.0, p);
  CHECK(lrb.valid);
  CHECK(lrb.value == 0.0);
  auto lrb2 = rhs_poly_lrb(c, 2, 1, 1, 4, 0.01, p);
  Big want_lrb = C_lrb * 2 * Big(0.01) / boost::multiprecision::pow(Big(5), q);
  CHECK(rel_close(lrb2.value, want_lrb, 1e-12));
  CHECK_FALSE(rhs_poly_lrb(c, 2, 1, 1, 4, 10.0, p).valid);
  CHECK_FALSE(rhs_poly_lrb(c, 2, 1, 1, 0.5, 0.0, p).valid);

  auto sl = rhs_sl_poly(c, 1, 1, 2, 0.01, p);
  auto cor = rhs_cor_poly(c, 1, 1, 1, 1, 2, 0.01, p);
  CHECK(cor.value == doctest::Approx(3.0 * 2.0 * sl.value).epsilon(1e-14));
}

TEST_CASE("fixed-point evaluators") {
  auto chain = FiniteMetricSpace::chain(5);
  auto model = long_range_zz(chain, 1.0, 4.0, 0.5);
  auto f0 = FFunction::power(4);
  auto w = weighted_constants(model, f0, 0.5, 1.0);
  Governance two = [](double) { return 2.0; };
  Governance zero = [](double) { return 0.0; };
  CHECK(rhs_fp_exponential(w, 0, 1, 1, 1, 4, two) == 0.0);
  double with_two = rhs_fp_exponential(w, 1, 1, 1, 1, 4, two);
  double with_zero = rhs_fp_exponential(w, 1, 1, 1, 1, 4, zero);
  CHECK(with_two - with_zero == doctest::Approx(6.0).epsilon(1e-12));

  double ta = 0.5 * 4 / (4 * w.a.v);
  Big first = 2 * Big(1) * Big(2) * Big(w.a.f_norm_L) * Big(w.F0_norm) * big_time_factor(w.a, ta) *
              boost::multiprecision::exp(Big(-1.0));
  CHECK(rel_close(with_zero, first, 1e-12));
  CHECK(w.F0_norm == f_norm(f0, chain));
  CHECK(w.a.F_norm <= w.F0_norm);
  CHECK_THROWS_AS(rhs_fp_exponential(w, 1, 1, 1, 1, 2, two), ConfigError);

  auto c = model_constants(model, f0, 1.0);
  PolyParams p;
  CHECK(rhs_fp_poly(c, 1, 0, 1, 1, 4, p, 0.02, zero).value == 0.0);
  CHECK_THROWS_AS(rhs_fp_poly(c, 1, 1, 1, 1, 4, p, 0.06, zero), ConfigError);
  CHECK_THROWS_AS(rhs_fp_poly(c, 1, 1, 1, 1, 4, p, 0.0, zero), ConfigError);
  CHECK_THROWS_AS(rhs_fp_poly(c, 1, 1, 1, 1, 2, p, 0.02, zero), ConfigError);
  auto fp = rhs_fp_poly(c, 1, 1, 1, 1, 4, p, 0.02, two);
  Big q = Big(0.05);
  Big want = Big(fp_poly_constant(c, p, 0.02)) * 2 * Big(c.f_norm_L) /
                 boost::multiprecision::pow(Big(5), q - Big(0.02)) +
             6;
  CHECK(rel_close(fp.value, want, 1e-12));
}

TEST_CASE("surface-set lemma against exhaustive enumeration") {
  auto chain = FiniteMetricSpace::chain(5);
  auto f = FFunction::power(3);
  auto model = long_range_zz(chain, 1.0, 3.0, 0.4);
  auto c = model_constants(model, f, 1.0);
  SiteSet lambda = chain.all();
  std::map<SiteSet, double> cb;
  for (const auto& t : model.terms()) cb[t.support] += t.cb_upper;
  for (double r : {0.0, 1.0, 2.0})
    for (SiteSet x : {SiteSet{0}, SiteSet{2}, SiteSet{1, 2}}) {
      SiteSet xr = inflate(chain, x, r);
      for (Site anchor : x) {
        double lhs = 0.0;
        for (int mask = 1; mask < 32; ++mask) {
          std::vector<Site> z;
          for (int b = 0; b < 5; ++b)
            if (mask & (1 << b)) z.push_back(b);
          SiteSet zs(z);
          bool surface = zs.intersects(xr) && zs.intersects(lambda.minus(xr));
          if (!surface || zs.intersects(x) || !cb.count(zs)) continue;
          double s = 0.0;
          for (Site w : zs) s += f(std::abs(anchor - w));
          lhs += cb[zs] * s;
        }
        double tail = 0.0;
        for (Site y : lambda.minus(xr)) tail += f(std::abs(anchor - y));
        auto rep = lemma_nos_check(model, c, lambda, x, r, anchor);
        CHECK(rep.lhs == doctest::Approx(lhs).epsilon(1e-14));
        CHECK(rep.rhs == doctest::Approx(c.f_norm_L * (c.C_F + c.F_norm) * tail).epsilon(1e-14));
        CHECK(rep.pass);
      }
    }
  auto full = lemma_nos_check(model, c, lambda, {0}, 10, 0);
  CHECK(full.lhs == 0.0);
  CHECK(full.rhs == 0.0);
  CHECK(full.pass);
  CHECK_THROWS_AS(lemma_nos_check(model, c, lambda, {0}, 1, 3), ConfigError);
}

TEST_CASE("report settlement") {
  BoundReport rep;
  settle(rep, 1.0, FlaggedValue{2.0, true, {}});
  CHECK(rep.pass);
  CHECK(rep.slack == 1.0);
  settle(rep, 1.0 + 5e-10, FlaggedValue{1.0, true, {}});
  CHECK(rep.pass);
  settle(rep, 1.0 + 5e-9, FlaggedValue{1.0, true, {}});
  CHECK_FALSE(rep.pass);
  settle(rep, 0.0, FlaggedValue{1.0, false, {"r >= 1"}});
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.valid);
  settle(rep, 0.0, FlaggedValue{NAN, true, {}});
  CHECK_FALSE(rep.pass);
}

TEST_CASE("bounds dominate exact dynamics on a small chain") {
  auto chain = FiniteMetricSpace::chain(4);
  auto f = FFunction::power(3);
  auto model = long_range_zz(chain, 1.0, 3.0, 0.5);
  auto c = model_constants(model, f, 1.0);
  auto dims = model.dims();
  SiteSet lambda = chain.all();
  auto gen = generator(model, lambda);
  auto a = ObservableOp::local(named_operator('X'), {0}, dims);
  auto k = commutator_map(ObservableOp::local(named_operator('X'), {3}, dims));
  for (double t : {0.1, 0.5, 1.0}) {
    double lhs = lhs_quasi_locality(k, gen, t, a);
    CHECK(lhs > 0);
    CHECK(lhs <= rhs_NVZ(c, k.cb_upper(), 1, {0}, {3}, t));
    for (double R : {1.0, 2.0, 3.0}) {
      CHECK(lhs_truncation_error(model, lambda, R, t, a) <= rhs_dyn_diff(c, 1, {0}, lambda, t, 1, R) + 1e-12);
      auto trunc = generator(model, lambda, GeneratorMode::truncated(R));
      CHECK(lhs_quasi_locality(k, trunc, t, a) <= rhs_appLRB(c, k.cb_upper(), 1, {0}, {3}, t, R) + 1e-12);
    }
    CHECK(lhs_local_error(model, lambda, {0}, 1, t, a) <= rhs_gen_sl_app(c, 1, {0}, lambda, t, 1).value);
  }
}
