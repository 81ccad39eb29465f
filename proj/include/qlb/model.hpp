#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qlb/decay.hpp"
#include "qlb/geometry.hpp"
#include "qlb/qalgebra.hpp"
#include "qlb/types.hpp"

namespace qlb {

enum class Picture { heisenberg, schrodinger };

/// Linear map on the vectorised algebra of `volume` (column stacking).
struct Superoperator {
  Matrix matrix;
  SiteSet volume;
  SiteDims dims;
  Picture picture = Picture::heisenberg;

  int hilbert_dim() const { return dims.total(volume); }
};

/// One Lindblad term L_Z(A) = i[H,A] + sum_j (K_j* A K_j - 1/2 {K_j* K_j, A}).
/// H and the K_j are stored as matrices on the support Z itself.
struct LindbladTerm {
  std::string label;
  SiteSet support;
  Matrix H;
  std::vector<Matrix> kraus;
  double cb_upper = 0.0;
  double cb_lower = 0.0;
};

/// Builds a term, checking hermiticity of H and computing its cb bracket.
LindbladTerm make_term(std::string label, SiteSet support, Matrix h, std::vector<Matrix> kraus,
                       const SiteDims& dims);

class DissipativeInteraction {
 public:
  DissipativeInteraction(FiniteMetricSpace space, SiteDims dims, std::vector<LindbladTerm> terms);

  const FiniteMetricSpace& space() const { return space_; }
  const SiteDims& dims() const { return dims_; }
  const std::vector<LindbladTerm>& terms() const { return terms_; }

  /// max over supports Z of the summed cb_upper of the terms on Z.
  double sup_norm() const { return sup_norm_; }
  /// Largest support diameter.
  double range() const { return range_; }
  /// Sum of cb_upper over terms whose support contains both x and y.
  double anchored_sum(Site x, Site y) const;
  /// Deterministic hash of the full term list.
  std::uint64_t hash() const;

 private:
  FiniteMetricSpace space_;
  SiteDims dims_;
  std::vector<LindbladTerm> terms_;
  double sup_norm_ = 0.0;
  double range_ = 0.0;
};

/// Heisenberg-picture super-operator of one term embedded into `volume`.
Superoperator lindblad_superop(const LindbladTerm& term, const SiteSet& volume, const SiteDims& dims);

struct GeneratorMode {
  enum class Kind { full, truncated, subvolume };
  Kind kind = Kind::full;
  double R = 0.0;
  SiteSet subvolume;

  static GeneratorMode full() { return {}; }
  static GeneratorMode truncated(double r) { return {Kind::truncated, r, {}}; }
  static GeneratorMode sub(SiteSet s) { return {Kind::subvolume, 0.0, std::move(s)}; }
};

/// Terms included in the generator on `lambda` for the given mode.
std::vector<const LindbladTerm*> selected_terms(const DissipativeInteraction& interaction,
                                                const SiteSet& lambda, const GeneratorMode& mode);

/// Sum of the selected terms, as a Heisenberg generator on vec(A_lambda).
/// In subvolume mode the result still acts on the algebra of `lambda`.
Superoperator generator(const DissipativeInteraction& interaction, const SiteSet& lambda,
                        const GeneratorMode& mode = GeneratorMode::full());

/// Smallest M with sum_{Z contains x,y} cb_upper(Z) <= M F(d(x,y)) over all pairs (x = y included).
double interaction_f_norm(const DissipativeInteraction& interaction, const FFunction& f);

/// ||L||_inf 2^{kappa R0^nu - 2} / F(R0).
double finite_range_fnorm_bound(const DissipativeInteraction& interaction, const FFunction& f,
                                double kappa, double nu);

/// Adjoint under the trace pairing: the conjugate transpose; flips the picture.
Superoperator adjoint_generator(const Superoperator& gen);

/// Nearest-neighbour J ZZ, on-site h X, on-site amplitude damping sqrt(gamma)|0><1|.
DissipativeInteraction tfim_dissipative(const FiniteMetricSpace& space, double J, double h,
                                        double gamma);

/// J (1+d)^{-alpha_int} ZZ on every pair, on-site amplitude damping sqrt(gamma)|0><1|.
DissipativeInteraction long_range_zz(const FiniteMetricSpace& space, double J, double alpha_int,
                                     double gamma);

}  // namespace qlb
