#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "qlb/bounds.hpp"
#include "qlb/correlations.hpp"
#include "qlb/dynamics.hpp"
#include "qlb/model.hpp"

namespace qlb {

/// One model instance with its observables, constants and cached generators.
class ModelContext {
 public:
  ModelContext(DissipativeInteraction interaction, FFunction f, double nu, ObservableOp a,
               ObservableOp b, ObservationMap k, std::string name = "model");

  const DissipativeInteraction& interaction() const { return interaction_; }
  const FFunction& f() const { return f_; }
  const ModelConstants& constants() const { return consts_; }
  const SiteSet& lambda() const { return lambda_; }
  const ObservableOp& a() const { return a_; }
  const ObservableOp& b() const { return b_; }
  const ObservationMap& k() const { return k_; }
  const SiteSet& x() const { return a_.support(); }
  const SiteSet& y() const { return b_.support(); }
  const std::string& name() const { return name_; }
  double a_norm() const { return a_norm_; }
  double b_norm() const { return b_norm_; }
  double distance() const;

  const Superoperator& full() const;
  const Superoperator& truncated(double R) const;
  /// Generator of the dynamics confined to `region` (intersected with lambda).
  const Superoperator& confined(const SiteSet& region) const;
  SiteSet inflated(const SiteSet& s, double r) const;

  ObservableOp evolve_full(double t, const ObservableOp& op) const;

 private:
  DissipativeInteraction interaction_;
  FFunction f_;
  ModelConstants consts_;
  SiteSet lambda_;
  ObservableOp a_;
  ObservableOp b_;
  ObservationMap k_;
  std::string name_;
  double a_norm_;
  double b_norm_;
  mutable std::optional<Superoperator> full_;
  mutable std::map<double, Superoperator> truncated_;
  mutable std::map<SiteSet, Superoperator> confined_;
};

BoundReport certify_appLRB(const ModelContext& m, double t, double R, double tol);
BoundReport certify_NVZ(const ModelContext& m, double t, double tol);
BoundReport certify_frLRB(const ModelContext& m, double t, double tol);
BoundReport certify_dyn_diff(const ModelContext& m, double t, double R, double r, double tol);
BoundReport certify_gen_LRB(const ModelContext& m, double t, double R, double r, FirstTerm mode,
                            double tol);
BoundReport certify_gen_sl_app(const ModelContext& m, double t, double r, double tol);
BoundReport certify_cor_general(const ModelContext& m, double t, double r, double tol);
BoundReport certify_poly_lrb(const ModelContext& m, double t, const PolyParams& p, double tol);
BoundReport certify_sl_poly(const ModelContext& m, double t, double r, const PolyParams& p,
                            double tol);
BoundReport certify_cor_poly(const ModelContext& m, double t, double r, const PolyParams& p,
                             double tol);
BoundReport certify_g_decaying(const ModelContext& m, const StateFunctional& omega, double t,
                               double r, double tol);
/// One report per anchor site of X.
std::vector<BoundReport> certify_lemma_nos(const ModelContext& m, double r, double tol);

/// ||T_t(A) - T_t^{X(r)}(A)|| with the cached generators.
double local_error(const ModelContext& m, const ObservableOp& op, const SiteSet& support, double t,
                   double r);
/// C_{A,B}(r, t) with the cached generators.
double c_ab(const ModelContext& m, double t, double r);

struct FixedPointReports {
  FixedPointAnalysis analysis;
  std::vector<BoundReport> reports;
};

/// steadystate1 on t_grid, plus the exponential (weight a) and polynomial fixed-point lemmas.
FixedPointReports certify_fixed_point(const ModelContext& m, const StateFunctional& omega,
                                      const std::vector<double>& t_grid, double a,
                                      const PolyParams& p, double eta, bool exponential,
                                      bool polynomial, double tol);

}  // namespace qlb
