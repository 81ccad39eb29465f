#include "qlb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qlb {

namespace {

constexpr double kE = 2.718281828459045235360287;

void require_disjoint(const SiteSet& x, const SiteSet& y) {
  if (x.empty() || y.empty()) throw ConfigError("empty observable support");
  if (x.intersects(y)) {
    throw ConfigError("supports " + x.to_string() + " and " + y.to_string() + " overlap");
  }
}

SiteSet local_region(const ModelConstants& c, const SiteSet& x, const SiteSet& lambda, double r) {
  return inflate(c.space(), x, r).intersect(lambda);
}

double c_eps(const PolyParams& p) { return c_epsilon(p.epsilon).value; }

}  // namespace

ModelConstants model_constants(const DissipativeInteraction& interaction, const FFunction& f,
                               double nu) {
  ModelConstants c;
  c.profile = std::make_shared<const DecayProfile>(f, interaction.space());
  c.f_norm_L = interaction_f_norm(interaction, f);
  c.sup_norm = interaction.sup_norm();
  c.C_F = c.profile->conv_constant();
  c.F_norm = c.profile->norm();
  c.v = c.f_norm_L * c.C_F;
  c.nu = nu;
  c.kappa = nu_regularity(interaction.space(), nu);
  c.R0 = interaction.range();
  return c;
}

void settle(BoundReport& report, double lhs, const FlaggedValue& rhs, double tol) {
  report.lhs = lhs;
  report.rhs = rhs.value;
  report.slack = rhs.value - lhs;
  report.valid = rhs.valid;
  report.violations = rhs.violations;
  const bool finite = std::isfinite(report.slack);
  report.pass = report.valid && finite && report.slack >= -tol * std::max(1.0, rhs.value);
}

double integral_expm1(double v, double t) {
  if (t < 0) throw ConfigError("negative time");
  const double x = v * t;
  if (std::abs(x) > 0.5) return std::expm1(x) / v - t;
  // t sum_{n>=2} x^{n-1}/n!
  double term = x / 2.0;
  double sum = term;
  for (int n = 3; n < 60; ++n) {
    term *= x / n;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return t * sum;
}

double exp_tail_over_v(double v, double t, double k) {
  if (v > 0) return exp_tail(v * t, k) / v;
  const double m = std::ceil(k - 1e-12 * std::max(1.0, k));
  if (m <= 0) return std::numeric_limits<double>::infinity();
  return m <= 1 ? t : 0.0;
}

double local_time_factor(const ModelConstants& c, double t) {
  return t + (c.C_F + c.F_norm) / c.C_F * integral_expm1(c.v, t);
}

double rhs_appLRB(const ModelConstants& c, double k_cb, double a_norm, const SiteSet& x,
                  const SiteSet& y, double t, double R) {
  require_disjoint(x, y);
  if (!(R > 0)) throw ConfigError("truncation range must be positive");
  if (t < 0) throw ConfigError("negative time");
  const double d = set_distance(c.space(), x, y);
  return k_cb * a_norm / c.C_F * exp_tail(c.v * t, d / R) * c.pair_sum(x, y);
}

double rhs_NVZ(const ModelConstants& c, double k_cb, double a_norm, const SiteSet& x,
               const SiteSet& y, double t) {
  require_disjoint(x, y);
  if (t < 0) throw ConfigError("negative time");
  return k_cb * a_norm / c.C_F * std::expm1(c.v * t) * c.pair_sum(x, y);
}

double rhs_frLRB(const ModelConstants& c, double k_cb, double a_norm, std::size_t x_size,
                 double d, double t) {
  if (!(c.R0 > 0)) throw ConfigError("finite-range bound needs a positive interaction range");
  if (!(d > 0)) throw ConfigError("finite-range bound needs d(X,Y) > 0");
  if (t < 0) throw ConfigError("negative time");
  const double m = std::ceil(d / c.R0 - 1e-12 * std::max(1.0, d / c.R0));
  const double vt = c.v * t;
  if (vt == 0.0) return 0.0;
  const double log_factor = m * (1.0 + std::log(vt)) - m * std::log(m) + vt;
  return k_cb * a_norm * static_cast<double>(x_size) * c.F_norm / c.C_F * std::exp(log_factor);
}

double dyn_diff_bracket(const ModelConstants& c, const SiteSet& x, const SiteSet& lambda,
                        double t, double r, double R) {
  if (t < 0 || r < 0) throw ConfigError("negative time or radius");
  if (!(R > 0)) throw ConfigError("truncation range must be positive");
  const SiteSet xr = local_region(c, x, lambda, r);
  const double outside = c.pair_sum(x, lambda.minus(xr));
  double second = 0.0;
  if (outside > 0) second = exp_tail_over_v(c.v, t, 1.0 + r / R) / c.C_F * outside;
  return t * static_cast<double>(xr.size()) + second;
}

double rhs_dyn_diff(const ModelConstants& c, double a_norm, const SiteSet& x,
                    const SiteSet& lambda, double t, double r, double R) {
  const double g = c.G(R / 2.0);
  if (g == 0.0) return 0.0;
  return a_norm * c.f_norm_L * g * dyn_diff_bracket(c, x, lambda, t, r, R);
}

double rhs_gen_LRB(const ModelConstants& c, double k_cb, double a_norm, const SiteSet& x,
                   const SiteSet& y, const SiteSet& lambda, double t, double r, double R,
                   FirstTerm mode, double exact_first) {
  const double first =
      mode == FirstTerm::exact ? exact_first : rhs_appLRB(c, k_cb, a_norm, x, y, t, R);
  require_disjoint(x, y);
  return first + k_cb * rhs_dyn_diff(c, a_norm, x, lambda, t, r, R);
}

FlaggedValue rhs_gen_sl_app(const ModelConstants& c, double a_norm, const SiteSet& x,
                            const SiteSet& lambda, double t, double r) {
  FlaggedValue out;
  if (r < 1) {
    out.valid = false;
    out.violations.push_back("r >= 1");
  }
  const SiteSet xr = local_region(c, x, lambda, r);
  out.value = a_norm * c.f_norm_L * local_time_factor(c, t) * c.pair_sum(x, lambda.minus(xr));
  return out;
}

FlaggedValue rhs_cor_general(const ModelConstants& c, double a_norm, double b_norm,
                             const SiteSet& x, const SiteSet& y, const SiteSet& lambda, double r,
                             double t) {
  FlaggedValue out;
  if (r < 1) {
    out.valid = false;
    out.violations.push_back("r >= 1");
  }
  const double sums = c.pair_sum(x, lambda.minus(local_region(c, x, lambda, r))) +
                      c.pair_sum(y, lambda.minus(local_region(c, y, lambda, r)));
  out.value = 2.0 * a_norm * b_norm * c.f_norm_L * local_time_factor(c, t) * sums;
  return out;
}

std::vector<std::string> poly_window(const ModelConstants& c, const PolyParams& p) {
  std::vector<std::string> v;
  const FFunction& f = c.profile->function();
  if (!f.is_power_law()) {
    v.push_back("F is a power law");
    return v;
  }
  const double alpha = f.alpha();
  if (!(alpha > 2.0 * c.nu + 1.0)) v.push_back("alpha > 2 nu + 1");
  if (!(p.epsilon > 0 && p.epsilon < alpha - 2.0 * c.nu - 1.0)) {
    v.push_back("0 < epsilon < alpha - 2 nu - 1");
  }
  if (!(p.delta > 0 && p.delta < 1)) v.push_back("0 < delta < 1");
  if (!(p.exponent(alpha, c.nu) > 0)) v.push_back("(1 - delta) alpha_eps > nu");
  return v;
}

double poly_constant_lrb(const ModelConstants& c, const PolyParams& p) {
  const double ae = p.alpha_eps(c.profile->function().alpha(), c.nu);
  const double ce = c_eps(p);
  return c.kappa * ce * c.f_norm_L *
         (kE + std::exp2(2.0 * ae) * std::exp2(1.0 - p.delta) * (ce + c.C_F) / c.C_F);
}

double poly_constant_local(const ModelConstants& c, const PolyParams& p) {
  const double ae = p.alpha_eps(c.profile->function().alpha(), c.nu);
  const double ce = c_eps(p);
  return c.kappa * ce / c.C_F *
         (c.kappa * std::exp2(2.0 * ae) * std::exp2(1.0 - p.delta) * (ce + c.C_F) +
          kE * (c.C_F + c.F_norm));
}

double fp_poly_constant(const ModelConstants& c, const PolyParams& p, double eta) {
  const double q = p.exponent(c.profile->function().alpha(), c.nu);
  return 3.0 * poly_constant_local(c, p) / (kE * c.v) * std::exp2(q - eta);
}

namespace {

FlaggedValue poly_value(const ModelConstants& c, const PolyParams& p, double distance, double t,
                        const char* distance_name,
                        double (*constant)(const ModelConstants&, const PolyParams&),
                        double prefactor) {
  FlaggedValue out;
  out.violations = poly_window(c, p);
  if (t < 0) throw ConfigError("negative time");
  if (!out.violations.empty()) {
    out.valid = false;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  if (!(distance >= 1)) out.violations.push_back(std::string(distance_name) + " >= 1");
  if (!(kE * c.v * t <= std::pow(std::max(distance, 0.0), p.delta))) {
    out.violations.push_back(std::string("e v t <= ") + distance_name + "^delta");
  }
  out.valid = out.violations.empty();
  const double q = p.exponent(c.profile->function().alpha(), c.nu);
  out.value = constant(c, p) * prefactor * t / std::pow(1.0 + distance, q);
  return out;
}

}  // namespace

FlaggedValue rhs_poly_lrb(const ModelConstants& c, double k_cb, double a_norm,
                          std::size_t x_size, double d, double t, const PolyParams& p) {
  return poly_value(c, p, d, t, "d", poly_constant_lrb,
                    k_cb * a_norm * static_cast<double>(x_size));
}

FlaggedValue rhs_sl_poly(const ModelConstants& c, double a_norm, std::size_t x_size, double r,
                         double t, const PolyParams& p) {
  return poly_value(c, p, r, t, "r", poly_constant_local,
                    a_norm * static_cast<double>(x_size) * c.f_norm_L);
}

FlaggedValue rhs_cor_poly(const ModelConstants& c, double a_norm, double b_norm,
                          std::size_t x_size, std::size_t y_size, double r, double t,
                          const PolyParams& p) {
  return poly_value(c, p, r, t, "r", poly_constant_local,
                    3.0 * a_norm * b_norm * static_cast<double>(x_size + y_size) * c.f_norm_L);
}

WeightedConstants weighted_constants(const DissipativeInteraction& interaction,
                                     const FFunction& f0, double a, double nu) {
  if (!(a > 0)) throw ConfigError("exponential weight a must be positive");
  WeightedConstants w;
  w.a = model_constants(interaction, FFunction::weighted(a, f0), nu);
  w.a_weight = a;
  w.F0_norm = f_norm(f0, interaction.space());
  return w;
}

double rhs_fp_exponential(const WeightedConstants& c, double a_norm, double b_norm,
                          std::size_t x_size, std::size_t y_size, double d, const Governance& g) {
  if (!(d > 2)) throw ConfigError("exponential fixed-point bound needs d(X,Y) > 2");
  if (!(c.a.v > 0)) throw ConfigError("exponential fixed-point bound needs a positive velocity");
  const double ta = c.a_weight * d / (4.0 * c.a.v);
  const double first = 2.0 * a_norm * b_norm * static_cast<double>(x_size + y_size) *
                       c.a.f_norm_L * c.F0_norm * local_time_factor(c.a, ta) *
                       std::exp(-c.a_weight * d / 2.0);
  return first + 3.0 * a_norm * b_norm * g(ta);
}

FlaggedValue rhs_fp_poly(const ModelConstants& c, double a_norm, double b_norm,
                         std::size_t x_size, std::size_t y_size, double d, const PolyParams& p,
                         double eta, const Governance& g) {
  if (!(d > 2)) throw ConfigError("polynomial fixed-point bound needs d(X,Y) > 2");
  FlaggedValue out;
  out.violations = poly_window(c, p);
  if (!out.violations.empty()) {
    out.valid = false;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double q = p.exponent(c.profile->function().alpha(), c.nu);
  if (!(eta > 0 && eta < std::min(p.delta, q))) {
    throw ConfigError("eta_exp must lie in (0, min(delta, (1 - delta) alpha_eps - nu))");
  }
  if (!(c.v > 0)) throw ConfigError("polynomial fixed-point bound needs a positive velocity");
  const double t = std::pow(d, eta) / (kE * c.v * std::exp2(eta));
  out.value = fp_poly_constant(c, p, eta) * a_norm * b_norm *
                  static_cast<double>(x_size + y_size) * c.f_norm_L / std::pow(1.0 + d, q - eta) +
              3.0 * a_norm * b_norm * g(t);
  return out;
}

BoundReport lemma_nos_check(const DissipativeInteraction& interaction, const ModelConstants& c,
                            const SiteSet& lambda, const SiteSet& x_set, double r, Site x,
                            double tol) {
  if (!x_set.contains(x)) throw ConfigError("anchor site not in X");
  if (!x_set.is_subset_of(lambda)) throw ConfigError("X not inside the volume");
  if (r < 0) throw ConfigError("negative radius");
  const FiniteMetricSpace& space = c.space();
  const SiteSet xr = local_region(c, x_set, lambda, r);
  const SiteSet outside = lambda.minus(xr);
  std::map<SiteSet, double> merged;
  for (const LindbladTerm& t : interaction.terms()) merged[t.support] += t.cb_upper;
  double lhs = 0.0;
  for (const auto& [z, cb] : merged) {
    if (!z.is_subset_of(lambda) || !z.intersects(xr) || !z.intersects(outside)) continue;
    if (z.intersects(x_set)) continue;
    double s = 0.0;
    for (Site w : z) s += c.F(space.distance(x, w));
    lhs += cb * s;
  }
  double tail = 0.0;
  for (Site y : outside) tail += c.F(space.distance(x, y));
  BoundReport rep;
  rep.theorem = "lemma_nos";
  rep.r = r;
  rep.X = x_set;
  rep.Y = SiteSet{x};
  FlaggedValue rhs{c.f_norm_L * (c.C_F + c.F_norm) * tail, true, {}};
  settle(rep, lhs, rhs, tol);
  return rep;
}

}  // namespace qlb
