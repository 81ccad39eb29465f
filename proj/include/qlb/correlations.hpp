#pragma once

#include <functional>
#include <vector>

#include "qlb/bounds.hpp"
#include "qlb/dynamics.hpp"
#include "qlb/model.hpp"

namespace qlb {

/// G_Lambda(|X|, |Y|, d) governing the spatial correlations of a state.
using CorrelationGovernance = std::function<double(double, double, double)>;

class StateFunctional {
 public:
  enum class Kind { product, explicit_density };

  /// One single-site density per site of the volume, in ascending site order.
  static StateFunctional product(const std::vector<Matrix>& site_densities, SiteSet volume,
                                 const SiteDims& dims);
  static StateFunctional maximally_mixed(SiteSet volume, const SiteDims& dims);
  /// Governance defaults to the trivial constant 2.
  static StateFunctional from_density(Matrix rho, SiteSet volume, const SiteDims& dims);

  Kind kind() const { return kind_; }
  const Matrix& density() const { return rho_; }
  const SiteSet& volume() const { return volume_; }
  const SiteDims& dims() const { return dims_; }
  double governance(double nx, double ny, double d) const { return governance_(nx, ny, d); }
  void set_governance(CorrelationGovernance g) { governance_ = std::move(g); }

  /// Tr(rho A), A embedded into the state's volume.
  cplx operator()(const ObservableOp& a) const;

 private:
  StateFunctional(Kind kind, Matrix rho, SiteSet volume, const SiteDims& dims);

  Kind kind_;
  Matrix rho_;
  SiteSet volume_;
  SiteDims dims_;
  CorrelationGovernance governance_;
};

/// omega(T_t(AB)) - omega(T_t(A)) omega(T_t(B))
cplx correlation(const StateFunctional& omega, const Superoperator& gen, double t,
                 const ObservableOp& a, const ObservableOp& b);

/// The three-term strictly-local comparison quantity C_{A,B}(r, t).
double c_ab(const DissipativeInteraction& interaction, const SiteSet& lambda, const SiteSet& x,
            const SiteSet& y, double r, double t, const ObservableOp& a, const ObservableOp& b);

BoundReport check_g_decaying(const StateFunctional& omega, const DissipativeInteraction& interaction,
                             const SiteSet& lambda, const SiteSet& x, const SiteSet& y, double r,
                             double t, const ObservableOp& a, const ObservableOp& b,
                             double tol = kDefaultSlackTolerance);

class DegenerateFixedPoint : public NumericalError {
 public:
  DegenerateFixedPoint(const std::string& what, int dimension)
      : NumericalError(what), dimension_(dimension) {}
  int dimension() const { return dimension_; }

 private:
  int dimension_;
};

/// Unique density in the kernel of a Schrodinger generator (Heisenberg input is adjointed).
Matrix stationary_state(const Superoperator& gen);

struct PeriodicPoint {
  cplx lambda;
  int multiplicity;
};

/// Eigenvalues with |Re| <= 1e-9, grouped, ascending imaginary part.
std::vector<PeriodicPoint> periodic_points(const Superoperator& gen);

struct GapInfo {
  double gamma = 0.0;
  double omega0 = 0.0;
  /// Spectral radius of exp(L)(1 - P) and its relative deviation from e^{omega0}.
  double radius = 0.0;
  double radius_error = 0.0;
};

GapInfo spectral_gap(const Superoperator& gen);

struct EnvelopeSample {
  double t;
  double lower;
  double upper;
};

struct Envelope {
  double c = 0.0;
  double gamma = 0.0;
  std::vector<EnvelopeSample> samples;

  /// min(2, c e^{-gamma t})
  double g(double t) const;
  Governance governance() const;
};

/// Brackets of ||T_t^dagger - P^dagger||_{1->1} on the grid and the certified exponential envelope.
Envelope convergence_envelope(const Superoperator& gen, const Matrix& rho,
                              const std::vector<double>& t_grid, double gamma);

struct EtaBracket {
  double lower;
  double upper;
};

/// Mixing coefficient bracket at time t: half the envelope bracket.
EtaBracket mixing_eta(const Superoperator& gen, double t, const Matrix& rho);

struct FixedPointAnalysis {
  Matrix rho;
  GapInfo gap;
  std::vector<PeriodicPoint> periodic;
  Envelope envelope;
};

FixedPointAnalysis analyse_fixed_point(const Superoperator& gen, const std::vector<double>& t_grid);

/// |pi(AB) - pi(A)pi(B)| against |omega(T_t(A B_t))| + 3 ||A|| ||B|| g(t).
BoundReport check_steadystate1(const Matrix& rho, const Governance& g, const Superoperator& gen,
                               const ObservableOp& a, const ObservableOp& b, double t,
                               const StateFunctional& omega, double tol = kDefaultSlackTolerance);

}  // namespace qlb
