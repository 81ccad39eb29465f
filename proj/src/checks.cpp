#include "qlb/checks.hpp"

#include <cmath>

namespace qlb {

namespace {

BoundReport base_report(const ModelContext& m, const char* theorem) {
  BoundReport r;
  r.theorem = theorem;
  r.model = m.name();
  r.X = m.x();
  r.Y = m.y();
  return r;
}

}  // namespace

ModelContext::ModelContext(DissipativeInteraction interaction, FFunction f, double nu,
                           ObservableOp a, ObservableOp b, ObservationMap k, std::string name)
    : interaction_(std::move(interaction)),
      f_(std::move(f)),
      consts_(model_constants(interaction_, f_, nu)),
      lambda_(interaction_.space().all()),
      a_(embed(a, a.support())),
      b_(embed(b, b.support())),
      k_(std::move(k)),
      name_(std::move(name)),
      a_norm_(op_norm(a_)),
      b_norm_(op_norm(b_)) {
  if (a_.support().empty() || b_.support().empty()) {
    throw ConfigError("observables need a nonempty support");
  }
  if (!interaction_.space().contains(a_.support()) || !interaction_.space().contains(b_.support())) {
    throw ConfigError("observable support outside the space");
  }
}

double ModelContext::distance() const { return set_distance(interaction_.space(), x(), y()); }

const Superoperator& ModelContext::full() const {
  if (!full_) full_ = generator(interaction_, lambda_);
  return *full_;
}

const Superoperator& ModelContext::truncated(double R) const {
  auto it = truncated_.find(R);
  if (it == truncated_.end()) {
    it = truncated_.emplace(R, generator(interaction_, lambda_, GeneratorMode::truncated(R))).first;
  }
  return it->second;
}

const Superoperator& ModelContext::confined(const SiteSet& region) const {
  const SiteSet key = region.intersect(lambda_);
  auto it = confined_.find(key);
  if (it == confined_.end()) {
    it = confined_.emplace(key, generator(interaction_, lambda_, GeneratorMode::sub(key))).first;
  }
  return it->second;
}

SiteSet ModelContext::inflated(const SiteSet& s, double r) const {
  return inflate(interaction_.space(), s, r).intersect(lambda_);
}

ObservableOp ModelContext::evolve_full(double t, const ObservableOp& op) const {
  return evolve(full(), t, op);
}

double local_error(const ModelContext& m, const ObservableOp& op, const SiteSet& support, double t,
                   double r) {
  return evolution_difference(m.full(), m.confined(m.inflated(support, r)), t, op);
}

double c_ab(const ModelContext& m, double t, double r) {
  const ObservableOp a = embed(m.a(), m.lambda());
  const ObservableOp b = embed(m.b(), m.lambda());
  return m.a_norm() * local_error(m, b, m.y(), t, r) + m.b_norm() * local_error(m, a, m.x(), t, r) +
         local_error(m, a * b, m.x().unite(m.y()), t, r);
}

BoundReport certify_appLRB(const ModelContext& m, double t, double R, double tol) {
  BoundReport rep = base_report(m, "appLRB");
  rep.t = t;
  rep.R = R;
  rep.d = m.distance();
  const double lhs = lhs_quasi_locality(m.k(), m.truncated(R), t, m.a());
  settle(rep, lhs,
         {rhs_appLRB(m.constants(), m.k().cb_upper(), m.a_norm(), m.x(), m.y(), t, R), true, {}},
         tol);
  return rep;
}

BoundReport certify_NVZ(const ModelContext& m, double t, double tol) {
  BoundReport rep = base_report(m, "NVZ");
  rep.t = t;
  rep.d = m.distance();
  const double lhs = lhs_quasi_locality(m.k(), m.full(), t, m.a());
  settle(rep, lhs, {rhs_NVZ(m.constants(), m.k().cb_upper(), m.a_norm(), m.x(), m.y(), t), true, {}},
         tol);
  return rep;
}

BoundReport certify_frLRB(const ModelContext& m, double t, double tol) {
  BoundReport rep = base_report(m, "frLRB");
  rep.t = t;
  rep.d = m.distance();
  rep.R = m.constants().R0;
  const double lhs = lhs_quasi_locality(m.k(), m.full(), t, m.a());
  FlaggedValue rhs;
  if (!(m.constants().R0 > 0)) {
    rhs.valid = false;
    rhs.violations.push_back("R0 > 0");
    rhs.value = std::numeric_limits<double>::quiet_NaN();
  } else {
    rhs.value = rhs_frLRB(m.constants(), m.k().cb_upper(), m.a_norm(), m.x().size(), rep.d, t);
  }
  settle(rep, lhs, rhs, tol);
  return rep;
}

BoundReport certify_dyn_diff(const ModelContext& m, double t, double R, double r, double tol) {
  BoundReport rep = base_report(m, "dyn_diff");
  rep.t = t;
  rep.R = R;
  rep.r = r;
  const double lhs = evolution_difference(m.full(), m.truncated(R), t, m.a());
  settle(rep, lhs, {rhs_dyn_diff(m.constants(), m.a_norm(), m.x(), m.lambda(), t, r, R), true, {}},
         tol);
  return rep;
}

BoundReport certify_gen_LRB(const ModelContext& m, double t, double R, double r, FirstTerm mode,
                            double tol) {
  BoundReport rep = base_report(m, mode == FirstTerm::exact ? "gen_LRB" : "gen_LRB_analytic");
  rep.mode = mode == FirstTerm::exact ? "exact" : "analytic";
  rep.t = t;
  rep.R = R;
  rep.r = r;
  rep.d = m.distance();
  const double lhs = lhs_quasi_locality(m.k(), m.full(), t, m.a());
  const double first =
      mode == FirstTerm::exact ? lhs_quasi_locality(m.k(), m.truncated(R), t, m.a()) : 0.0;
  settle(rep, lhs,
         {rhs_gen_LRB(m.constants(), m.k().cb_upper(), m.a_norm(), m.x(), m.y(), m.lambda(), t, r,
                      R, mode, first),
          true,
          {}},
         tol);
  return rep;
}

BoundReport certify_gen_sl_app(const ModelContext& m, double t, double r, double tol) {
  BoundReport rep = base_report(m, "gen_sl_app");
  rep.t = t;
  rep.r = r;
  const double lhs = local_error(m, m.a(), m.x(), t, r);
  settle(rep, lhs, rhs_gen_sl_app(m.constants(), m.a_norm(), m.x(), m.lambda(), t, r), tol);
  return rep;
}

BoundReport certify_cor_general(const ModelContext& m, double t, double r, double tol) {
  BoundReport rep = base_report(m, "cor_general");
  rep.t = t;
  rep.r = r;
  rep.d = m.distance();
  FlaggedValue rhs =
      rhs_cor_general(m.constants(), m.a_norm(), m.b_norm(), m.x(), m.y(), m.lambda(), r, t);
  if (!(rep.d >= 1)) {
    rhs.valid = false;
    rhs.violations.push_back("d(X,Y) >= 1");
  }
  settle(rep, c_ab(m, t, r), rhs, tol);
  return rep;
}

BoundReport certify_poly_lrb(const ModelContext& m, double t, const PolyParams& p, double tol) {
  BoundReport rep = base_report(m, "poly_lrb");
  rep.t = t;
  rep.d = m.distance();
  rep.epsilon = p.epsilon;
  rep.delta = p.delta;
  const double lhs = lhs_quasi_locality(m.k(), m.full(), t, m.a());
  settle(rep, lhs,
         rhs_poly_lrb(m.constants(), m.k().cb_upper(), m.a_norm(), m.x().size(), rep.d, t, p), tol);
  return rep;
}

BoundReport certify_sl_poly(const ModelContext& m, double t, double r, const PolyParams& p,
                            double tol) {
  BoundReport rep = base_report(m, "sl_poly");
  rep.t = t;
  rep.r = r;
  rep.epsilon = p.epsilon;
  rep.delta = p.delta;
  const double lhs = local_error(m, m.a(), m.x(), t, r);
  settle(rep, lhs, rhs_sl_poly(m.constants(), m.a_norm(), m.x().size(), r, t, p), tol);
  return rep;
}

BoundReport certify_cor_poly(const ModelContext& m, double t, double r, const PolyParams& p,
                             double tol) {
  BoundReport rep = base_report(m, "cor_poly");
  rep.t = t;
  rep.r = r;
  rep.d = m.distance();
  rep.epsilon = p.epsilon;
  rep.delta = p.delta;
  FlaggedValue rhs = rhs_cor_poly(m.constants(), m.a_norm(), m.b_norm(), m.x().size(),
                                  m.y().size(), r, t, p);
  if (!(rep.d >= 1)) {
    rhs.valid = false;
    rhs.violations.push_back("d(X,Y) >= 1");
  }
  settle(rep, c_ab(m, t, r), rhs, tol);
  return rep;
}

BoundReport certify_g_decaying(const ModelContext& m, const StateFunctional& omega, double t,
                               double r, double tol) {
  const double d = m.distance();
  FlaggedValue rhs;
  if (!(d >= 2)) rhs.violations.push_back("d(X,Y) >= 2");
  if (!(r >= 1)) rhs.violations.push_back("r >= 1");
  if (2 * r > d + kMetricTolerance) rhs.violations.push_back("2r <= d(X,Y)");
  rhs.valid = rhs.violations.empty();
  const SiteSet xr = m.inflated(m.x(), r);
  const SiteSet yr = m.inflated(m.y(), r);
  const double gov = omega.governance(static_cast<double>(xr.size()),
                                      static_cast<double>(yr.size()),
                                      set_distance(m.interaction().space(), xr, yr));
  rhs.value = m.a_norm() * m.b_norm() * gov + c_ab(m, t, r);
  BoundReport rep = base_report(m, "g_decaying");
  rep.t = t;
  rep.r = r;
  rep.d = d;
  settle(rep, std::abs(correlation(omega, m.full(), t, m.a(), m.b())), rhs, tol);
  return rep;
}

std::vector<BoundReport> certify_lemma_nos(const ModelContext& m, double r, double tol) {
  std::vector<BoundReport> out;
  for (Site x : m.x()) {
    BoundReport rep = lemma_nos_check(m.interaction(), m.constants(), m.lambda(), m.x(), r, x, tol);
    rep.model = m.name();
    out.push_back(std::move(rep));
  }
  return out;
}

FixedPointReports certify_fixed_point(const ModelContext& m, const StateFunctional& omega,
                                      const std::vector<double>& t_grid, double a,
                                      const PolyParams& p, double eta, bool exponential,
                                      bool polynomial, double tol) {
  FixedPointReports out;
  out.analysis = analyse_fixed_point(m.full(), t_grid);
  const Governance g = out.analysis.envelope.governance();
  for (double t : t_grid) {
    BoundReport rep = check_steadystate1(out.analysis.rho, g, m.full(), m.a(), m.b(), t, omega, tol);
    rep.model = m.name();
    rep.d = m.distance();
    out.reports.push_back(std::move(rep));
  }
  const StateFunctional pi =
      StateFunctional::from_density(out.analysis.rho, m.lambda(), m.interaction().dims());
  const ObservableOp ea = embed(m.a(), m.lambda());
  const ObservableOp eb = embed(m.b(), m.lambda());
  const double lhs = std::abs(pi(ea * eb) - pi(ea) * pi(eb));
  const double d = m.distance();
  if (exponential) {
    const WeightedConstants w =
        weighted_constants(m.interaction(), m.f(), a, m.constants().nu);
    BoundReport rep = base_report(m, "fp_exponential");
    rep.d = d;
    rep.t = a * d / (4.0 * w.a.v);
    settle(rep, lhs,
           {rhs_fp_exponential(w, m.a_norm(), m.b_norm(), m.x().size(), m.y().size(), d, g), true,
            {}},
           tol);
    out.reports.push_back(std::move(rep));
  }
  if (polynomial) {
    BoundReport rep = base_report(m, "fp_poly");
    rep.d = d;
    rep.epsilon = p.epsilon;
    rep.delta = p.delta;
    rep.eta = eta;
    settle(rep, lhs,
           rhs_fp_poly(m.constants(), m.a_norm(), m.b_norm(), m.x().size(), m.y().size(), d, p,
                       eta, g),
           tol);
    out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace qlb
