#pragma once

#include "qlb/model.hpp"
#include "qlb/qalgebra.hpp"

namespace qlb {

/// Dense exponentials are refused above this super-operator dimension.
inline constexpr int kMaxDenseSuperDim = 4096;

/// exp(t gen), Pade-13 scaling and squaring.
Superoperator propagator(const Superoperator& gen, double t);

/// exp(t M) v by scaled truncated Taylor steps; never forms the exponential.
Vector expm_action(const Matrix& m, double t, const Vector& v);

/// T_t(A) for a Heisenberg generator; A is embedded into the generator's volume first.
ObservableOp evolve(const Superoperator& gen, double t, const ObservableOp& a);

/// ||K(T_t(A))||. Throws if supp(K) meets supp(A).
double lhs_quasi_locality(const ObservationMap& k, const Superoperator& gen, double t,
                          const ObservableOp& a);

/// ||T_t(A) - S_t(A)|| for two generators on the same volume.
double evolution_difference(const Superoperator& gen, const Superoperator& other, double t,
                            const ObservableOp& a);

/// ||T_t^lambda(A) - T_t^{lambda,R}(A)||.
double lhs_truncation_error(const DissipativeInteraction& interaction, const SiteSet& lambda,
                            double R, double t, const ObservableOp& a);

/// ||T_t^lambda(A) - T_t^{X(r)}(A)||, the local dynamics acting inside lambda.
double lhs_local_error(const DissipativeInteraction& interaction, const SiteSet& lambda,
                       const SiteSet& x, double r, double t, const ObservableOp& a);

/// Choi matrix sum_ij E_ij (x) Phi(E_ij) of a map given on vectorised operators.
Matrix choi_matrix(const Superoperator& map);

/// Smallest eigenvalue of the hermitian part of the Choi matrix.
double choi_min_eigenvalue(const Superoperator& map);

}  // namespace qlb
