#pragma once

#include <cstdint>
#include <vector>

#include "qlb/geometry.hpp"
#include "qlb/types.hpp"

namespace qlb {

/// Local Hilbert-space dimension of every site of the universe.
class SiteDims {
 public:
  SiteDims() = default;
  explicit SiteDims(std::vector<int> dims);
  static SiteDims qubits(int n) { return SiteDims(std::vector<int>(n, 2)); }

  int of(Site s) const { return dims_.at(s); }
  /// Product of local dimensions over a volume.
  int total(const SiteSet& volume) const;
  int size() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& values() const { return dims_; }

  friend bool operator==(const SiteDims&, const SiteDims&) = default;

 private:
  std::vector<int> dims_;
};

/// Operator on the tensor product over `volume`; acts trivially outside `support`.
/// Tensor factors follow the ascending site order of the volume, first site leftmost.
class ObservableOp {
 public:
  ObservableOp(Matrix m, SiteSet support, SiteSet volume, const SiteDims& dims);

  /// Operator given on its own support (volume == support).
  static ObservableOp local(Matrix m, SiteSet support, const SiteDims& dims);
  static ObservableOp identity(SiteSet volume, const SiteDims& dims);

  const Matrix& matrix() const { return m_; }
  const SiteSet& support() const { return support_; }
  const SiteSet& volume() const { return volume_; }
  const SiteDims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  ObservableOp adjoint() const;
  /// Product within a common volume; supports are united.
  ObservableOp operator*(const ObservableOp& other) const;
  ObservableOp operator+(const ObservableOp& other) const;
  ObservableOp operator-(const ObservableOp& other) const;
  ObservableOp scaled(cplx s) const;

 private:
  Matrix m_;
  SiteSet support_;
  SiteSet volume_;
  SiteDims dims_;
};

Matrix kron(const Matrix& a, const Matrix& b);

/// Single-qubit named operators: I, X, Y, Z, P = |1><0|, M = |0><1|.
Matrix named_operator(char name);

/// Embed a matrix on `from` (tensor order of `from`) into the larger volume `to`.
Matrix embed_matrix(const Matrix& m, const SiteSet& from, const SiteSet& to, const SiteDims& dims);

/// Express `op` as an operator on `volume` (which must contain its support).
ObservableOp embed(const ObservableOp& op, const SiteSet& volume);

/// Largest singular value.
double op_norm(const Matrix& m);
double op_norm(const ObservableOp& a);
/// Sum of singular values.
double trace_norm(const Matrix& m);

/// Column stacking: vec(A)[i + j*D] = A(i,j).
Vector vectorize(const Matrix& a);
Matrix devectorize(const Vector& v, int dim);
ObservableOp devectorize(const Vector& v, const SiteSet& volume, const SiteDims& dims);

/// Identity-free probe operators on a support: every non-identity Weyl/Pauli
/// string (when at most 256 of them) plus a few seeded Haar-ish unitaries.
std::vector<Matrix> probe_operators(const SiteSet& support, const SiteDims& dims,
                                    std::uint64_t seed = 0x5eed);

/// Element of CB_0(Y), stored as a finite sum A -> sum_k L_k A R_k with
/// L_k, R_k on the support Y. Bracket [cb_lower, cb_upper] for its cb-norm.
class ObservationMap {
 public:
  enum class Kind { commutator, general };

  /// A -> [B, A]
  static ObservationMap commutator(const ObservableOp& b);
  /// Arbitrary map given by its matrix on vec(A_Y); must annihilate the identity.
  static ObservationMap general(const Matrix& superop, SiteSet support, const SiteDims& dims);

  ObservableOp apply(const ObservableOp& a) const;

  Kind kind() const { return kind_; }
  const SiteSet& support() const { return support_; }
  double cb_upper() const { return cb_upper_; }
  double cb_lower() const { return cb_lower_; }
  /// Matrix on vec(A_Y).
  Matrix superop() const;

 private:
  ObservationMap() = default;
  void compute_lower_bound();

  Kind kind_ = Kind::commutator;
  SiteSet support_;
  SiteDims dims_;
  std::vector<std::pair<Matrix, Matrix>> factors_;
  double cb_upper_ = 0.0;
  double cb_lower_ = 0.0;
};

inline ObservationMap commutator_map(const ObservableOp& b) { return ObservationMap::commutator(b); }
inline ObservableOp apply_map(const ObservationMap& k, const ObservableOp& a) { return k.apply(a); }

}  // namespace qlb
