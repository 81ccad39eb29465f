#include "qlb/qalgebra.hpp"

#include <algorithm>
#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace qlb {

namespace {

void require_dims(const SiteDims& dims, const SiteSet& set) {
  for (Site s : set) {
    if (s < 0 || s >= dims.size()) {
      throw ConfigError("site " + std::to_string(s) + " has no local dimension");
    }
  }
}

// For every basis index of `to`, the index of its `from` digits and of the remaining digits.
struct Split {
  std::vector<int> inner;
  std::vector<int> outer;
  int outer_dim = 1;
};

Split split_indices(const SiteSet& from, const SiteSet& to, const SiteDims& dims) {
  const int n = static_cast<int>(to.size());
  std::vector<int> d(n);
  std::vector<bool> in(n);
  for (int k = 0; k < n; ++k) {
    d[k] = dims.of(to[k]);
    in[k] = from.contains(to[k]);
  }
  const int total = dims.total(to);
  Split out;
  out.inner.resize(total);
  out.outer.resize(total);
  for (int k = 0; k < n; ++k) {
    if (!in[k]) out.outer_dim *= d[k];
  }
  std::vector<int> digit(n, 0);
  for (int idx = 0; idx < total; ++idx) {
    int a = 0;
    int b = 0;
    for (int k = 0; k < n; ++k) {
      if (in[k]) {
        a = a * d[k] + digit[k];
      } else {
        b = b * d[k] + digit[k];
      }
    }
    out.inner[idx] = a;
    out.outer[idx] = b;
    for (int k = n - 1; k >= 0; --k) {
      if (++digit[k] < d[k]) break;
      digit[k] = 0;
    }
  }
  return out;
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx rjj = r(j, j);
    if (std::abs(rjj) > 0) q.col(j) *= rjj / std::abs(rjj);
  }
  return q;
}

// Generalised Pauli (shift^a clock^b) on a single site of dimension d.
Matrix weyl(int d, int a, int b) {
  Matrix m = Matrix::Zero(d, d);
  const double pi = std::acos(-1.0);
  for (int k = 0; k < d; ++k) {
    m((k + a) % d, k) = std::polar(1.0, 2.0 * pi * b * k / d);
  }
  return m;
}

}  // namespace

SiteDims::SiteDims(std::vector<int> dims) : dims_(std::move(dims)) {
  for (int d : dims_) {
    if (d < 1) throw ConfigError("local dimension must be positive");
  }
}

int SiteDims::total(const SiteSet& volume) const {
  long long p = 1;
  for (Site s : volume) {
    p *= of(s);
    if (p > (1LL << 30)) throw NumericalError("Hilbert space dimension overflow");
  }
  return static_cast<int>(p);
}

ObservableOp::ObservableOp(Matrix m, SiteSet support, SiteSet volume, const SiteDims& dims)
    : m_(std::move(m)), support_(std::move(support)), volume_(std::move(volume)), dims_(dims) {
  require_dims(dims_, volume_);
  if (!support_.is_subset_of(volume_)) {
    throw ConfigError("support " + support_.to_string() + " not inside volume " +
                      volume_.to_string());
  }
  const int d = dims_.total(volume_);
  if (m_.rows() != d || m_.cols() != d) {
    throw ConfigError("operator dimension " + std::to_string(m_.rows()) + "x" +
                      std::to_string(m_.cols()) + " does not match volume dimension " +
                      std::to_string(d));
  }
}

ObservableOp ObservableOp::local(Matrix m, SiteSet support, const SiteDims& dims) {
  SiteSet volume = support;
  return ObservableOp(std::move(m), std::move(support), std::move(volume), dims);
}

ObservableOp ObservableOp::identity(SiteSet volume, const SiteDims& dims) {
  const int d = dims.total(volume);
  return ObservableOp(Matrix::Identity(d, d), SiteSet{}, std::move(volume), dims);
}

ObservableOp ObservableOp::adjoint() const {
  return ObservableOp(m_.adjoint(), support_, volume_, dims_);
}

ObservableOp ObservableOp::operator*(const ObservableOp& other) const {
  if (volume_ != other.volume_) throw ConfigError("product of operators on different volumes");
  return ObservableOp(m_ * other.m_, support_.unite(other.support_), volume_, dims_);
}

ObservableOp ObservableOp::operator+(const ObservableOp& other) const {
  if (volume_ != other.volume_) throw ConfigError("sum of operators on different volumes");
  return ObservableOp(m_ + other.m_, support_.unite(other.support_), volume_, dims_);
}

ObservableOp ObservableOp::operator-(const ObservableOp& other) const {
  if (volume_ != other.volume_) throw ConfigError("difference of operators on different volumes");
  return ObservableOp(m_ - other.m_, support_.unite(other.support_), volume_, dims_);
}

ObservableOp ObservableOp::scaled(cplx s) const {
  return ObservableOp(s * m_, support_, volume_, dims_);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix named_operator(char name) {
  Matrix m = Matrix::Zero(2, 2);
  const cplx i(0.0, 1.0);
  switch (name) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    case 'P': m << 0, 0, 1, 0; break;
    case 'M': m << 0, 1, 0, 0; break;
    default: throw ConfigError(std::string("unknown operator name '") + name + "'");
  }
  return m;
}

Matrix embed_matrix(const Matrix& m, const SiteSet& from, const SiteSet& to, const SiteDims& dims) {
  require_dims(dims, to);
  if (!from.is_subset_of(to)) {
    throw ConfigError("cannot embed " + from.to_string() + " into " + to.to_string());
  }
  const int df = dims.total(from);
  if (m.rows() != df || m.cols() != df) throw ConfigError("operator dimension mismatch in embed");
  const Split sp = split_indices(from, to, dims);
  const int d = dims.total(to);
  Matrix out = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      if (sp.outer[i] == sp.outer[j]) out(i, j) = m(sp.inner[i], sp.inner[j]);
    }
  }
  return out;
}

ObservableOp embed(const ObservableOp& op, const SiteSet& volume) {
  if (op.volume() == volume) return op;
  // Reduce to the support first: the operator acts trivially elsewhere.
  const SiteSet& vol = op.volume();
  const SiteSet& sup = op.support();
  if (!sup.is_subset_of(volume)) {
    throw ConfigError("support " + sup.to_string() + " not inside volume " + volume.to_string());
  }
  Matrix local;
  if (vol == sup) {
    local = op.matrix();
  } else {
    const Split sp = split_indices(sup, vol, op.dims());
    const int ds = op.dims().total(sup);
    local = Matrix::Zero(ds, ds);
    for (int j = 0; j < op.dim(); ++j) {
      if (sp.outer[j] != 0) continue;
      for (int i = 0; i < op.dim(); ++i) {
        if (sp.outer[i] == 0) local(sp.inner[i], sp.inner[j]) = op.matrix()(i, j);
      }
    }
  }
  return ObservableOp(embed_matrix(local, sup, volume, op.dims()), sup, volume, op.dims());
}

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double op_norm(const ObservableOp& a) { return op_norm(a.matrix()); }

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

Vector vectorize(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix devectorize(const Vector& v, int dim) {
  if (static_cast<long long>(dim) * dim != v.size()) {
    throw ConfigError("vector of length " + std::to_string(v.size()) +
                      " is not a vectorised " + std::to_string(dim) + "x" + std::to_string(dim) +
                      " matrix");
  }
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

ObservableOp devectorize(const Vector& v, const SiteSet& volume, const SiteDims& dims) {
  return ObservableOp(devectorize(v, dims.total(volume)), volume, volume, dims);
}

std::vector<Matrix> probe_operators(const SiteSet& support, const SiteDims& dims,
                                    std::uint64_t seed) {
  std::vector<Matrix> probes;
  const int dim = dims.total(support);
  long long count = 1;
  for (Site s : support) count *= static_cast<long long>(dims.of(s)) * dims.of(s);
  if (count <= 257) {
    const int n = static_cast<int>(support.size());
    std::vector<int> code(n, 0);
    for (long long c = 0; c < count; ++c) {
      long long rest = c;
      for (int k = n - 1; k >= 0; --k) {
        const int d2 = dims.of(support[k]) * dims.of(support[k]);
        code[k] = static_cast<int>(rest % d2);
        rest /= d2;
      }
      if (c == 0) continue;
      Matrix m = Matrix::Identity(1, 1);
      for (int k = 0; k < n; ++k) {
        const int d = dims.of(support[k]);
        m = kron(m, weyl(d, code[k] / d, code[k] % d));
      }
      probes.push_back(std::move(m));
    }
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 8; ++k) probes.push_back(random_unitary(dim, rng));
  return probes;
}

ObservationMap ObservationMap::commutator(const ObservableOp& b) {
  ObservationMap k;
  k.kind_ = Kind::commutator;
  k.support_ = b.support();
  k.dims_ = b.dims();
  const ObservableOp local = embed(b, b.support());
  const int d = local.dim();
  const Matrix id = Matrix::Identity(d, d);
  k.factors_.emplace_back(local.matrix(), id);
  k.factors_.emplace_back(-id, local.matrix());
  k.cb_upper_ = 2.0 * op_norm(local);
  k.compute_lower_bound();
  return k;
}

ObservationMap ObservationMap::general(const Matrix& superop, SiteSet support,
                                       const SiteDims& dims) {
  require_dims(dims, support);
  const int d = dims.total(support);
  if (superop.rows() != d * d || superop.cols() != d * d) {
    throw ConfigError("super-operator dimension does not match support " + support.to_string());
  }
  const Vector image = superop * vectorize(Matrix::Identity(d, d));
  if (image.norm() > 1e-12 * std::max(1.0, superop.norm())) {
    throw ConfigError("observation map does not annihilate the identity");
  }
  // Realignment: S[a + b d, c + e d] = sum_k L_k(a,c) R_k(e,b).
  Matrix realigned(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        for (int e = 0; e < d; ++e) realigned(a + c * d, e + b * d) = superop(a + b * d, c + e * d);
      }
    }
  }
  Eigen::BDCSVD<Matrix> svd(realigned, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ObservationMap k;
  k.kind_ = Kind::general;
  k.support_ = std::move(support);
  k.dims_ = dims;
  const auto& sv = svd.singularValues();
  const double floor = 1e-14 * (sv.size() > 0 ? sv(0) : 0.0);
  for (Eigen::Index j = 0; j < sv.size(); ++j) {
    if (sv(j) <= floor) break;
    Matrix l = sv(j) * devectorize(Vector(svd.matrixU().col(j)), d);
    Matrix r = devectorize(Vector(svd.matrixV().col(j).conjugate()), d);
    k.cb_upper_ += op_norm(l) * op_norm(r);
    k.factors_.emplace_back(std::move(l), std::move(r));
  }
  k.compute_lower_bound();
  return k;
}

void ObservationMap::compute_lower_bound() {
  double best = 0.0;
  for (const Matrix& u : probe_operators(support_, dims_)) {
    const ObservableOp probe(u, support_, support_, dims_);
    best = std::max(best, op_norm(apply(probe)) / op_norm(u));
  }
  cb_lower_ = std::min(best, cb_upper_);
}

ObservableOp ObservationMap::apply(const ObservableOp& a) const {
  const SiteSet& volume = a.volume();
  if (!support_.is_subset_of(volume)) {
    throw ConfigError("observation map support " + support_.to_string() +
                      " not inside operator volume " + volume.to_string());
  }
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  for (const auto& [l, r] : factors_) {
    out += embed_matrix(l, support_, volume, a.dims()) * a.matrix() *
           embed_matrix(r, support_, volume, a.dims());
  }
  return ObservableOp(std::move(out), a.support().unite(support_), volume, a.dims());
}

Matrix ObservationMap::superop() const {
  const int d = dims_.total(support_);
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const auto& [l, r] : factors_) s += kron(r.transpose(), l);
  return s;
}

}  // namespace qlb
