#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qlb/decay.hpp"
#include "qlb/geometry.hpp"
#include "qlb/model.hpp"

namespace qlb {

inline constexpr double kDefaultSlackTolerance = 1e-9;

/// Everything the analytic right-hand sides need about one model.
struct ModelConstants {
  double f_norm_L = 0.0;   // ||L||_F
  double sup_norm = 0.0;   // ||L||_inf
  double C_F = 0.0;
  double F_norm = 0.0;     // ||F||
  double v = 0.0;          // ||L||_F C_F
  double kappa = 0.0;
  double nu = 0.0;
  double R0 = 0.0;
  std::shared_ptr<const DecayProfile> profile;

  const FiniteMetricSpace& space() const { return profile->space(); }
  double F(double r) const { return (*profile)(r); }
  double G(double r) const { return profile->tail(r); }
  double pair_sum(const SiteSet& x, const SiteSet& y) const { return profile->pair_sum(x, y); }
};

ModelConstants model_constants(const DissipativeInteraction& interaction, const FFunction& f,
                               double nu);

/// A right-hand side together with the hypotheses it was evaluated under.
struct FlaggedValue {
  double value = 0.0;
  bool valid = true;
  std::vector<std::string> violations;
};

struct BoundReport {
  std::string theorem;
  std::string mode;
  double t = std::numeric_limits<double>::quiet_NaN();
  double R = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double d = std::numeric_limits<double>::quiet_NaN();
  SiteSet X;
  SiteSet Y;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  std::string model;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool valid = true;
  bool pass = true;
  std::vector<std::string> violations;
};

/// Fills lhs/rhs/slack/valid/pass: pass iff valid and slack >= -tol max(1, rhs).
void settle(BoundReport& report, double lhs, const FlaggedValue& rhs,
            double tol = kDefaultSlackTolerance);

/// int_0^t (e^{vs} - 1) ds, cancellation-free for small vt.
double integral_expm1(double v, double t);

/// E_{vt}(k) / v, with its v -> 0 limit.
double exp_tail_over_v(double v, double t, double k);

/// t + ((C_F + ||F||)/C_F) int_0^t (e^{vs} - 1) ds
double local_time_factor(const ModelConstants& c, double t);

double rhs_appLRB(const ModelConstants& c, double k_cb, double a_norm, const SiteSet& x,
                  const SiteSet& y, double t, double R);

double rhs_NVZ(const ModelConstants& c, double k_cb, double a_norm, const SiteSet& x,
               const SiteSet& y, double t);

double rhs_frLRB(const ModelConstants& c, double k_cb, double a_norm, std::size_t x_size,
                 double d, double t);

/// The bracket t|X(r)| + E_{vt}(1 + r/R)/(v C_F) sum_{x in X, y in lambda \ X(r)} F.
double dyn_diff_bracket(const ModelConstants& c, const SiteSet& x, const SiteSet& lambda,
                        double t, double r, double R);

double rhs_dyn_diff(const ModelConstants& c, double a_norm, const SiteSet& x,
                    const SiteSet& lambda, double t, double r, double R);

enum class FirstTerm { exact, analytic };

/// With FirstTerm::exact, `exact_first` must hold ||K(T_t^{lambda,R}(A))||.
double rhs_gen_LRB(const ModelConstants& c, double k_cb, double a_norm, const SiteSet& x,
                   const SiteSet& y, const SiteSet& lambda, double t, double r, double R,
                   FirstTerm mode, double exact_first = 0.0);

FlaggedValue rhs_gen_sl_app(const ModelConstants& c, double a_norm, const SiteSet& x,
                            const SiteSet& lambda, double t, double r);

FlaggedValue rhs_cor_general(const ModelConstants& c, double a_norm, double b_norm,
                             const SiteSet& x, const SiteSet& y, const SiteSet& lambda, double r,
                             double t);

/// Exponent relations shared by every power-law statement.
struct PolyParams {
  double epsilon = 0.5;
  double delta = 0.3;

  double alpha_eps(double alpha, double nu) const { return alpha - nu - 1.0 - epsilon; }
  double exponent(double alpha, double nu) const { return (1.0 - delta) * alpha_eps(alpha, nu) - nu; }
};

/// Window violations of (alpha, nu, epsilon, delta); empty when admissible.
std::vector<std::string> poly_window(const ModelConstants& c, const PolyParams& p);

/// kappa C_eps ||L||_F (e + 2^{2 alpha_eps} 2^{1-delta} (C_eps + C_F)/C_F)
double poly_constant_lrb(const ModelConstants& c, const PolyParams& p);

/// (kappa C_eps / C_F)(kappa 2^{2 alpha_eps} 2^{1-delta} (C_eps + C_F) + e (C_F + ||F||))
double poly_constant_local(const ModelConstants& c, const PolyParams& p);

/// (3 C / (e v)) 2^{p - eta} with C the local constant and p the decay exponent.
double fp_poly_constant(const ModelConstants& c, const PolyParams& p, double eta);

FlaggedValue rhs_poly_lrb(const ModelConstants& c, double k_cb, double a_norm,
                          std::size_t x_size, double d, double t, const PolyParams& p);

FlaggedValue rhs_sl_poly(const ModelConstants& c, double a_norm, std::size_t x_size, double r,
                         double t, const PolyParams& p);

FlaggedValue rhs_cor_poly(const ModelConstants& c, double a_norm, double b_norm,
                          std::size_t x_size, std::size_t y_size, double r, double t,
                          const PolyParams& p);

/// Convergence profile g(t) of a dynamical fixed point.
using Governance = std::function<double(double)>;

/// Constants for the weighted profile F_a plus ||F_0||.
struct WeightedConstants {
  ModelConstants a;
  double a_weight = 0.0;
  double F0_norm = 0.0;
};

WeightedConstants weighted_constants(const DissipativeInteraction& interaction,
                                     const FFunction& f0, double a, double nu);

double rhs_fp_exponential(const WeightedConstants& c, double a_norm, double b_norm,
                          std::size_t x_size, std::size_t y_size, double d, const Governance& g);

FlaggedValue rhs_fp_poly(const ModelConstants& c, double a_norm, double b_norm,
                         std::size_t x_size, std::size_t y_size, double d, const PolyParams& p,
                         double eta, const Governance& g);

/// Exhaustive LHS and analytic RHS of the surface-set estimate anchored at x.
BoundReport lemma_nos_check(const DissipativeInteraction& interaction, const ModelConstants& c,
                            const SiteSet& lambda, const SiteSet& x_set, double r, Site x,
                            double tol = kDefaultSlackTolerance);

}  // namespace qlb
