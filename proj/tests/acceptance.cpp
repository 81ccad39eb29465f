// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "oracles.hpp"
#include "qlb/experiment.hpp"

using namespace qlb;

namespace {

constexpr int kPoolSize = 50;
constexpr std::uint64_t kPoolSeed = 1;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Tracker {
 public:
  void require(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      if (first_.empty()) first_ = what;
    }
  }
  void worst(double value) { worst_ = std::max(worst_, value); }

  Outcome outcome(const std::string& summary) const {
    std::ostringstream out;
    out << summary << "; checks=" << checks_ << " failures=" << failures_;
    if (worst_ > 0) out << " worst=" << worst_;
    if (!first_.empty()) out << " first: " << first_;
    return {failures_ == 0, out.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  double worst_ = 0.0;
  std::string first_;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<double> grid(double tmax, int points) {
  std::vector<double> t;
  for (int i = 0; i < points; ++i) t.push_back(tmax * i / (points - 1));
  return t;
}

StateFunctional random_product(const ModelContext& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Matrix> sites;
  for (std::size_t i = 0; i < m.lambda().size(); ++i) {
    Vector psi(2);
    psi << cplx(normal(rng), normal(rng)), cplx(normal(rng), normal(rng));
    psi.normalize();
    sites.push_back(psi * psi.adjoint());
  }
  return StateFunctional::product(sites, m.lambda(), m.interaction().dims());
}

bool passes(const BoundReport& r) { return !r.valid || r.pass; }

std::string describe(const BoundReport& r) {
  std::ostringstream out;
  out << r.theorem << (r.mode.empty() ? "" : "/" + r.mode) << " " << r.model << " t=" << r.t
      << " R=" << r.R << " r=" << r.r << " lhs=" << r.lhs << " rhs=" << r.rhs;
  return out.str();
}

// Shared pool of seeded random models and their domination reports.
struct Pool {
  std::vector<ModelContext> models;
  std::vector<std::vector<BoundReport>> reports;
  SuiteOptions options;

  Pool() {
    options.models = kPoolSize;
    options.seed = kPoolSeed;
    for (int i = 0; i < kPoolSize; ++i) models.push_back(random_context(kPoolSeed + i));
  }

  void ensure_reports() {
    if (!reports.empty()) return;
    for (std::size_t i = 0; i < models.size(); ++i) {
      reports.push_back(random_model_reports(models[i], options, (kPoolSeed + i) ^ 0xabcdefULL));
    }
  }

  std::vector<double> t_grid(const ModelContext& m) const {
    return grid(m.constants().v > 0 ? 2.0 / m.constants().v : 1.0, options.t_points);
  }
};

Outcome semigroup_validity(Pool& pool) {
  Tracker tr;
  const std::vector<double> times = {0.0, 0.1, 0.5, 1.0, 2.0};
  for (const ModelContext& m : pool.models) {
    const Superoperator& gen = m.full();
    const int dim = m.interaction().dims().total(m.lambda());
    const Vector id = vectorize(Matrix::Identity(dim, dim));
    std::vector<Matrix> props;
    for (double t : times) props.push_back(propagator(gen, t).matrix);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double unit = (props[i] * id - id).cwiseAbs().maxCoeff();
      tr.worst(unit);
      tr.require(unit <= 1e-10, m.name() + fmt(" unitality t=%g err=%g", times[i], unit));
      const Superoperator st{props[i], m.lambda(), m.interaction().dims(), Picture::heisenberg};
      const double choi = choi_min_eigenvalue(adjoint_generator(st));
      tr.require(choi >= -1e-10, m.name() + fmt(" choi t=%g min=%g", times[i], choi));
      for (std::size_t j = i; j < times.size(); ++j) {
        const Matrix joint = propagator(gen, times[i] + times[j]).matrix;
        const double law = max_abs(props[i] * props[j] - joint);
        tr.worst(law);
        tr.require(law <= 1e-10, m.name() + fmt(" semigroup s=%g t=%g err=%g", times[i], times[j], law));
      }
    }
  }
  return tr.outcome(std::to_string(pool.models.size()) + " models");
}

Outcome count_reports(Pool& pool, const std::vector<std::string>& theorems, Tracker& tr) {
  pool.ensure_reports();
  int rows = 0;
  for (const auto& reps : pool.reports)
    for (const BoundReport& r : reps) {
      if (std::find(theorems.begin(), theorems.end(), r.theorem) == theorems.end()) continue;
      ++rows;
      tr.require(passes(r), describe(r));
    }
  return {true, std::to_string(rows) + " rows"};
}

Outcome quasi_locality(Pool& pool) {
  Tracker tr;
  const auto rows = count_reports(pool, {"appLRB", "NVZ"}, tr);
  for (const ModelContext& m : pool.models) {
    const double d = m.distance();
    tr.require(d >= 2 && d <= 4, m.name() + fmt(" d(X,Y)=%g", d));
    tr.require(m.x().size() == 1 && m.y().size() == 1, m.name() + " single-site observables");
  }
  return tr.outcome(rows.detail);
}

Outcome truncation_errors(Pool& pool) {
  Tracker tr;
  const auto rows = count_reports(pool, {"dyn_diff", "gen_LRB", "gen_sl_app", "lemma_nos"}, tr);
  int saturated = 0;
  for (const ModelContext& m : pool.models) {
    const double r0 = m.constants().R0;
    std::vector<double> ranges = {r0, r0 + 1};
    for (double R : pool.options.R)
      if (R >= r0) ranges.push_back(R);
    for (double R : ranges)
      for (double t : pool.t_grid(m)) {
        const double err = lhs_truncation_error(m.interaction(), m.lambda(), R, t, m.a());
        ++saturated;
        tr.worst(err);
        tr.require(err <= 1e-10, m.name() + fmt(" saturation R=%g t=%g err=%g", R, t, err));
      }
  }
  return tr.outcome(rows.detail + ", " + std::to_string(saturated) + " saturation checks");
}

Outcome nvz_recovery(Pool& pool) {
  Tracker tr;
  for (const ModelContext& m : pool.models) {
    const ModelConstants& c = m.constants();
    const double R = 2.0 * c.space().diameter();
    tr.require(c.G(R / 2.0) == 0.0, m.name() + " G(R/2) vanishes");
    for (double t : pool.t_grid(m)) {
      const double app = rhs_appLRB(c, m.k().cb_upper(), m.a_norm(), m.x(), m.y(), t, R);
      const double nvz = rhs_NVZ(c, m.k().cb_upper(), m.a_norm(), m.x(), m.y(), t);
      for (double r : pool.options.r) {
        const double gen = rhs_gen_LRB(c, m.k().cb_upper(), m.a_norm(), m.x(), m.y(), m.lambda(),
                                       t, r, R, FirstTerm::analytic);
        tr.require(gen == app, m.name() + fmt(" gen_LRB=%.17g appLRB=%.17g t=%g", gen, app, t));
      }
      tr.require(app <= nvz + 1e-12 * std::max(1.0, nvz),
                 m.name() + fmt(" appLRB=%.17g NVZ=%.17g t=%g", app, nvz, t));
    }
  }
  return tr.outcome(std::to_string(pool.models.size()) + " models, R = 2 diam");
}

// Long-range ZZ chain with a transverse field, decay profile (1+r)^-4.
ModelContext power_law_chain() {
  auto chain = FiniteMetricSpace::chain(5);
  auto base = long_range_zz(chain, 0.6, 4.0, 0.4);
  auto dims = base.dims();
  std::vector<LindbladTerm> terms = base.terms();
  for (Site s : chain.all()) {
    terms.push_back(make_term("field", {s}, 0.5 * named_operator('X'), {}, dims));
  }
  DissipativeInteraction interaction(chain, dims, std::move(terms));
  auto a = ObservableOp::local(named_operator('X'), {0}, dims);
  auto b = ObservableOp::local(named_operator('X'), {4}, dims);
  return ModelContext(std::move(interaction), FFunction::power(4.0), 1.0, a, b, commutator_map(b),
                      "power_law_chain");
}

using Big = boost::multiprecision::cpp_dec_float_50;

struct BigConstants {
  Big kappa, C_F, F_norm, f_norm_L, C_eps;
};

BigConstants big_constants(const ModelContext& m, double alpha, double nu, double eps) {
  const FiniteMetricSpace& space = m.interaction().space();
  const int n = space.size();
  auto F = [&](double r) { return boost::multiprecision::pow(Big(1) + Big(r), Big(-alpha)); };
  BigConstants out;
  for (int x = 0; x < n; ++x)
    for (int k = 1; k <= static_cast<int>(std::ceil(space.diameter())) + 1; ++k) {
      int count = 0;
      for (int y = 0; y < n; ++y) count += space.distance(x, y) <= k ? 1 : 0;
      out.kappa = std::max(out.kappa, Big(count) / boost::multiprecision::pow(Big(k), Big(nu)));
    }
  for (int x = 0; x < n; ++x) {
    Big row = 0;
    for (int y = 0; y < n; ++y) row += F(space.distance(x, y));
    out.F_norm = std::max(out.F_norm, row);
    for (int y = 0; y < n; ++y) {
      Big conv = 0;
      for (int z = 0; z < n; ++z) conv += F(space.distance(x, z)) * F(space.distance(z, y));
      out.C_F = std::max(out.C_F, conv / F(space.distance(x, y)));
      Big anchored = 0;
      for (const LindbladTerm& term : m.interaction().terms()) {
        if (!term.support.contains(x) || !term.support.contains(y)) continue;
        Big norm = 2 * Big(op_norm(term.H));
        for (const Matrix& k : term.kraus) norm += 2 * Big(op_norm(k)) * Big(op_norm(k));
        anchored += norm;
      }
      out.f_norm_L = std::max(out.f_norm_L, anchored / F(space.distance(x, y)));
    }
  }
  out.C_eps = boost::math::zeta(Big(1) + Big(eps));
  return out;
}

double rel_err(double got, const Big& want) {
  return static_cast<double>(boost::multiprecision::abs(Big(got) - want) / boost::multiprecision::abs(want));
}

Outcome power_law() {
  Tracker tr;
  const ModelContext m = power_law_chain();
  const PolyParams p{0.5, 0.3};
  const double eta = 0.02;
  const ModelConstants& c = m.constants();
  tr.require(poly_window(c, p).empty(), "parameter window");

  const BigConstants big = big_constants(m, 4.0, 1.0, p.epsilon);
  const Big e = boost::multiprecision::exp(Big(1));
  const Big ae = Big(4) - 1 - 1 - Big(p.epsilon);
  const Big q = (1 - Big(p.delta)) * ae - 1;
  const Big shift = boost::multiprecision::pow(Big(2), 2 * ae) *
                    boost::multiprecision::pow(Big(2), 1 - Big(p.delta));
  const Big C = big.kappa * big.C_eps * big.f_norm_L * (e + shift * (big.C_eps + big.C_F) / big.C_F);
  const Big C_loc = big.kappa * big.C_eps / big.C_F *
                    (big.kappa * shift * (big.C_eps + big.C_F) + e * (big.C_F + big.F_norm));
  const Big C_fp = 3 * C_loc / (e * big.f_norm_L * big.C_F) * boost::multiprecision::pow(Big(2), q - Big(eta));
  for (auto [name, got, want] : {std::tuple{"C", poly_constant_lrb(c, p), C},
                                 std::tuple{"C'", poly_constant_local(c, p), C_loc},
                                 std::tuple{"C_fp", fp_poly_constant(c, p, eta), C_fp}}) {
    const double err = rel_err(got, want);
    tr.worst(err);
    tr.require(err <= 1e-12, std::string(name) + fmt(" relative error %g", err));
  }
  tr.require(rel_err(c.kappa, big.kappa) <= 1e-12, "kappa from geometry");

  // Runs past the validity window so both flag states occur.
  const double d = m.distance();
  const double t_max = 1.5 * std::pow(d, p.delta) / (std::exp(1.0) * c.v);
  int valid = 0, rows = 0;
  auto record = [&](const BoundReport& r) {
    ++rows;
    if (r.valid) ++valid;
    tr.require(passes(r), describe(r));
  };
  for (double t : grid(t_max, 10)) {
    record(certify_poly_lrb(m, t, p, kDefaultSlackTolerance));
    for (double r : {1.0, 2.0, 3.0}) {
      record(certify_sl_poly(m, t, r, p, kDefaultSlackTolerance));
      record(certify_cor_poly(m, t, r, p, kDefaultSlackTolerance));
    }
  }
  const auto omega = StateFunctional::maximally_mixed(m.lambda(), m.interaction().dims());
  const auto fp = certify_fixed_point(m, omega, grid(8.0, 9), 0.5, p, eta, false, true,
                                      kDefaultSlackTolerance);
  for (const BoundReport& r : fp.reports) record(r);
  tr.require(valid > 0, "some grid point is valid");
  return tr.outcome(std::to_string(rows) + " rows, " + std::to_string(valid) + " valid");
}

Outcome correlation_decay(Pool& pool) {
  Tracker tr;
  int rows = 0;
  for (std::size_t i = 0; i < pool.models.size(); ++i) {
    const ModelContext& m = pool.models[i];
    const int last = m.interaction().space().size() - 1;
    tr.require(m.x() == SiteSet{0} && m.y() == SiteSet{last}, m.name() + " X={0}, Y={N-1}");
    const StateFunctional omega = random_product(m, 7919 + i);
    const double r = 1.0;
    for (double t : pool.t_grid(m)) {
      ++rows;
      const double corr = std::abs(correlation(omega, m.full(), t, m.a(), m.b()));
      const double cab = c_ab(m, t, r);
      const FlaggedValue rhs =
          rhs_cor_general(m.constants(), m.a_norm(), m.b_norm(), m.x(), m.y(), m.lambda(), r, t);
      tr.require(rhs.valid, m.name() + " cor_general hypotheses");
      tr.require(corr <= cab + 1e-9 * std::max(1.0, cab),
                 m.name() + fmt(" |corr|=%.6g c_ab=%.6g t=%g", corr, cab, t) +
                     fmt(" d=%g", m.distance()));
      tr.require(cab <= rhs.value + 1e-9 * std::max(1.0, rhs.value),
                 m.name() + fmt(" c_ab=%.6g rhs=%.6g t=%g", cab, rhs.value, t));
    }
  }
  return tr.outcome(std::to_string(rows) + " grid points");
}

Outcome fixed_point_suite() {
  Tracker tr;
  auto chain = FiniteMetricSpace::chain(4);
  auto interaction = tfim_dissipative(chain, 0.2, 0.0, 1.0);
  auto dims = interaction.dims();
  auto a = ObservableOp::local(named_operator('X'), {0}, dims);
  auto b = ObservableOp::local(named_operator('X'), {3}, dims);
  const ModelContext m(interaction, FFunction::power(4.0), 1.0, a, b, commutator_map(b),
                       "damped_chain");
  tr.require(m.distance() == 3.0, "d(X,Y) = 3");
  const std::vector<double> t_grid = grid(8.0, 16);

  const FixedPointAnalysis fp = analyse_fixed_point(m.full(), t_grid);
  const Matrix& rho = fp.rho;
  const double herm = max_abs(rho - rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es((rho + rho.adjoint()) / 2);
  tr.require(herm <= 1e-10, fmt("stationary state hermitian err=%g", herm));
  tr.require(es.eigenvalues().minCoeff() >= -1e-10, fmt("stationary state PSD min=%g", es.eigenvalues().minCoeff()));
  tr.require(std::abs(rho.trace() - 1.0) <= 1e-10, "stationary state trace 1");
  const Superoperator schrodinger = adjoint_generator(m.full());
  const double invariance = (schrodinger.matrix * vectorize(rho)).cwiseAbs().maxCoeff();
  tr.require(invariance <= 1e-10, fmt("stationary state invariant err=%g", invariance));
  try {
    stationary_state(m.full());
  } catch (const DegenerateFixedPoint& e) {
    tr.require(false, "stationary state unique");
  }
  tr.require(fp.gap.gamma > 0, fmt("spectral gap %g", fp.gap.gamma));

  const Envelope& env = fp.envelope;
  for (const EnvelopeSample& s : env.samples) {
    tr.require(s.lower <= s.upper * (1 + 1e-12), fmt("envelope bracket t=%g", s.t));
    tr.require(s.upper <= env.c * std::exp(-env.gamma * s.t) * (1 + 1e-12),
               fmt("envelope t=%g upper=%g", s.t, s.upper));
  }
  EtaBracket last{};
  for (double t : t_grid) {
    last = mixing_eta(m.full(), t, rho);
    tr.require(last.lower <= last.upper * (1 + 1e-12), fmt("eta bracket t=%g", t));
  }
  tr.require(last.upper < 1e-3,
             fmt("eta upper at t=%g is %g (lower %g)", t_grid.back(), last.upper, last.lower));

  const StateFunctional omega = StateFunctional::maximally_mixed(m.lambda(), dims);
  const auto reports = certify_fixed_point(m, omega, t_grid, 0.5, PolyParams{}, 0.02, true, false,
                                           kDefaultSlackTolerance);
  for (const BoundReport& r : reports.reports) {
    tr.require(r.valid && r.pass, describe(r));
  }
  return tr.outcome(fmt("gap=%g c=%g eta_upper(8)=%g", fp.gap.gamma, env.c, last.upper));
}

Outcome spectral_identities() {
  Tracker tr;
  std::vector<Superoperator> gens;
  gens.push_back(generator(tfim_dissipative(FiniteMetricSpace::chain(4), 0.2, 0.0, 1.0),
                           FiniteMetricSpace::chain(4).all()));
  gens.push_back(generator(tfim_dissipative(FiniteMetricSpace::chain(3), 0.7, 0.5, 0.6),
                           FiniteMetricSpace::chain(3).all()));
  gens.push_back(power_law_chain().full());
  for (const Superoperator& g : gens) {
    const GapInfo gap = spectral_gap(g);
    tr.worst(gap.radius_error);
    tr.require(gap.radius_error <= 1e-8, fmt("radius relative error %g", gap.radius_error));
  }

  auto dims = SiteDims::qubits(1);
  DissipativeInteraction sz(FiniteMetricSpace::chain(1), dims,
                            {make_term("h", {0}, named_operator('Z'), {}, dims)});
  const auto points = periodic_points(generator(sz, SiteSet{0}));
  for (double im : {-2.0, 2.0}) {
    const auto hit = std::find_if(points.begin(), points.end(), [&](const PeriodicPoint& p) {
      return std::abs(p.lambda - cplx(0, im)) <= 1e-10;
    });
    tr.require(hit != points.end() && hit->multiplicity == 1, fmt("periodic point %gi", im));
  }
  return tr.outcome(std::to_string(gens.size()) + " gap checks, sigma_z periodic points");
}

Outcome numerical_kernels() {
  Tracker tr;
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.5 * i;
    for (int k = 0; k <= 20; ++k) {
      const double want = oracle::exp_tail(t, k);
      const double got = exp_tail(t, k);
      const double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
      tr.worst(err);
      tr.require(err <= 1e-12, fmt("exp_tail(%g, %g) err=%g", t, k, err));
    }
  }
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix gen = oracle::random_lindbladian(4, 2, rng);
    const Superoperator s{gen, {0, 1}, SiteDims::qubits(2), Picture::heisenberg};
    for (double t : {0.25, 1.0, 3.0}) {
      const Vector v = oracle::random_matrix(16, rng).col(0);
      const Vector ref = oracle::ode_propagate(gen, v, t);
      const double err = (propagator(s, t).matrix * v - ref).cwiseAbs().maxCoeff() /
                         std::max(1.0, ref.cwiseAbs().maxCoeff());
      tr.require(err <= 1e-8, fmt("propagator vs ODE t=%g err=%g", t, err));
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = oracle::random_matrix(4, rng), a = oracle::random_matrix(4, rng),
                 y = oracle::random_matrix(4, rng);
    const Vector lhs = vectorize(x * a * y);
    const Vector rhs = kron(y.transpose(), x) * vectorize(a);
    const double err = (lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, lhs.cwiseAbs().maxCoeff());
    tr.require(err <= 1e-14, fmt("vec identity err=%g", err));
  }
  return tr.outcome("exp_tail grid 21x21, 15 propagators, 20 vec identities");
}

}  // namespace

int main() {
  Pool pool;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"semigroup validity", [&] { return semigroup_validity(pool); }},
      {"quasi-locality domination", [&] { return quasi_locality(pool); }},
      {"truncation and locality errors", [&] { return truncation_errors(pool); }},
      {"finite-volume recovery", [&] { return nvz_recovery(pool); }},
      {"power-law theorems", [] { return power_law(); }},
      {"correlation decay", [&] { return correlation_decay(pool); }},
      {"fixed-point suite", [] { return fixed_point_suite(); }},
      {"spectral identities", [] { return spectral_identities(); }},
      {"numerical kernels", [] { return numerical_kernels(); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s [%zu] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
