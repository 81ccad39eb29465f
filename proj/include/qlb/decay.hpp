#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qlb/geometry.hpp"

namespace qlb {

/// Non-increasing, strictly positive decay profile F on [0, inf).
///
/// Three kinds are supported: power law (1+r)^-alpha, exponential weighting
/// e^{-a r} F_0(r) of another profile, and a tabulated profile (linear
/// interpolation between grid points, constant beyond the last one).
class FFunction {
 public:
  enum class Kind { power, weighted, tabulated };

  static FFunction power(double alpha);
  static FFunction weighted(double a, FFunction base);
  static FFunction table(std::vector<std::pair<double, double>> points);
  /// Two whitespace-separated columns: r F(r).
  static FFunction table_file(const std::string& path);

  double operator()(double r) const;

  Kind kind() const { return kind_; }
  /// Power-law exponent; for a weighted profile, the exponent of its base (if any).
  double alpha() const;
  bool is_power_law() const { return kind_ == Kind::power; }
  double weight() const { return a_; }
  const FFunction& base() const;
  std::string descriptor() const;

 private:
  FFunction() = default;

  Kind kind_ = Kind::power;
  double alpha_ = 0.0;
  double a_ = 0.0;
  std::shared_ptr<const FFunction> base_;
  std::vector<std::pair<double, double>> points_;
  std::string source_;
};

/// ||F|| = sup_x sum_y F(d(x,y)), diagonal term included.
double f_norm(const FFunction& f, const FiniteMetricSpace& space);

/// Smallest C with sum_z F(d(x,z)) F(d(z,y)) <= C F(d(x,y)) for all x, y.
double conv_constant(const FFunction& f, const FiniteMetricSpace& space);

/// G(r) = sup_x sum_{y : d(x,y) > r} F(d(x,y)).
double tail_G(const FFunction& f, const FiniteMetricSpace& space, double r);

/// kappa * sum_{n=floor(r)}^{ceil(diam)-1} (1+n)^nu F(n); zero once r >= diam.
/// Shells with n >= diam are empty, so the truncated sum still dominates G.
double g_regular_bound(const FFunction& f, const FiniteMetricSpace& space, double kappa, double nu,
                       double r);

/// sum_{x in X} sum_{y in Y} F(d(x,y)). An empty Y gives 0.
double pair_sum(const FFunction& f, const FiniteMetricSpace& space, const SiteSet& x,
                const SiteSet& y);

/// Tail of the exponential series: sum_{n >= ceil(k)} t^n / n!.
double exp_tail(double t, double k);

struct SeriesValue {
  double value;
  double half_width;
};

/// C_eps = sum_{n>=0} (1+n)^{-1-eps}.
SeriesValue c_epsilon(double eps);

/// Constants of one decay profile on one space, computed once.
class DecayProfile {
 public:
  DecayProfile(FFunction f, FiniteMetricSpace space);

  const FFunction& function() const { return f_; }
  const FiniteMetricSpace& space() const { return space_; }
  double operator()(double r) const { return f_(r); }
  double norm() const { return norm_; }
  double conv_constant() const { return conv_; }
  double tail(double r) const { return tail_G(f_, space_, r); }
  double pair_sum(const SiteSet& x, const SiteSet& y) const {
    return qlb::pair_sum(f_, space_, x, y);
  }

 private:
  FFunction f_;
  FiniteMetricSpace space_;
  double norm_;
  double conv_;
};

}  // namespace qlb
