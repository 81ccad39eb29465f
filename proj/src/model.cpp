#include "qlb/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qlb {

namespace {

std::uint64_t hash_matrix(const Matrix& m, std::uint64_t h) {
  const auto* p = reinterpret_cast<const char*>(m.data());
  return fnv1a(std::string_view(p, sizeof(cplx) * m.size()), h);
}

// Local Heisenberg generator on vec(A_Z).
Matrix local_superop(const Matrix& h, const std::vector<Matrix>& kraus) {
  const Eigen::Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  Matrix g = cplx(0.0, 1.0) * h;
  for (const Matrix& k : kraus) g -= 0.5 * k.adjoint() * k;
  Matrix s = kron(id, g) + kron(g.conjugate(), id);
  for (const Matrix& k : kraus) s += kron(k.transpose(), k.adjoint());
  return s;
}

}  // namespace

LindbladTerm make_term(std::string label, SiteSet support, Matrix h, std::vector<Matrix> kraus,
                       const SiteDims& dims) {
  if (support.empty()) throw ConfigError("term '" + label + "' has empty support");
  const int d = dims.total(support);
  if (h.size() == 0) h = Matrix::Zero(d, d);
  if (h.rows() != d || h.cols() != d) {
    throw ConfigError("term '" + label + "': Hamiltonian dimension does not match support " +
                      support.to_string());
  }
  if ((h - h.adjoint()).norm() > 1e-12 * std::max(1.0, h.norm())) {
    throw ConfigError("term '" + label + "': Hamiltonian is not self-adjoint");
  }
  double upper = 2.0 * op_norm(h);
  for (const Matrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw ConfigError("term '" + label + "': Kraus dimension does not match support " +
                        support.to_string());
    }
    const double n = op_norm(k);
    upper += 2.0 * n * n;
  }
  LindbladTerm t{std::move(label), support, std::move(h), std::move(kraus), upper, 0.0};
  const Matrix s = local_superop(t.H, t.kraus);
  double best = 0.0;
  for (const Matrix& u : probe_operators(support, dims)) {
    const Matrix image = devectorize(Vector(s * vectorize(u)), d);
    best = std::max(best, op_norm(image) / op_norm(u));
  }
  t.cb_lower = std::min(best, upper);
  return t;
}

DissipativeInteraction::DissipativeInteraction(FiniteMetricSpace space, SiteDims dims,
                                               std::vector<LindbladTerm> terms)
    : space_(std::move(space)), dims_(std::move(dims)), terms_(std::move(terms)) {
  if (dims_.size() != space_.size()) {
    throw ConfigError("local dimensions given for " + std::to_string(dims_.size()) +
                      " sites, space has " + std::to_string(space_.size()));
  }
  std::map<SiteSet, double> merged;
  for (const LindbladTerm& t : terms_) {
    if (!space_.contains(t.support)) {
      throw ConfigError("term '" + t.label + "' support " + t.support.to_string() +
                        " outside the space");
    }
    merged[t.support] += t.cb_upper;
    range_ = std::max(range_, diameter(space_, t.support));
  }
  for (const auto& [z, c] : merged) sup_norm_ = std::max(sup_norm_, c);
}

double DissipativeInteraction::anchored_sum(Site x, Site y) const {
  double s = 0.0;
  for (const LindbladTerm& t : terms_) {
    if (t.support.contains(x) && t.support.contains(y)) s += t.cb_upper;
  }
  return s;
}

std::uint64_t DissipativeInteraction::hash() const {
  std::uint64_t h = fnv1a(space_.descriptor());
  for (const auto& row : space_.table()) {
    h = fnv1a(std::string_view(reinterpret_cast<const char*>(row.data()),
                               sizeof(double) * row.size()),
              h);
  }
  for (const LindbladTerm& t : terms_) {
    h = fnv1a(t.label + t.support.to_string(), h);
    h = hash_matrix(t.H, h);
    for (const Matrix& k : t.kraus) h = hash_matrix(k, h);
  }
  return h;
}

Superoperator lindblad_superop(const LindbladTerm& term, const SiteSet& volume,
                               const SiteDims& dims) {
  if (!term.support.is_subset_of(volume)) {
    throw ConfigError("term support " + term.support.to_string() + " not inside " +
                      volume.to_string());
  }
  const Matrix h = embed_matrix(term.H, term.support, volume, dims);
  std::vector<Matrix> kraus;
  for (const Matrix& k : term.kraus) kraus.push_back(embed_matrix(k, term.support, volume, dims));
  return {local_superop(h, kraus), volume, dims, Picture::heisenberg};
}

std::vector<const LindbladTerm*> selected_terms(const DissipativeInteraction& interaction,
                                                const SiteSet& lambda, const GeneratorMode& mode) {
  std::vector<const LindbladTerm*> out;
  const FiniteMetricSpace& space = interaction.space();
  for (const LindbladTerm& t : interaction.terms()) {
    if (!t.support.is_subset_of(lambda)) continue;
    switch (mode.kind) {
      case GeneratorMode::Kind::full:
        break;
      case GeneratorMode::Kind::truncated:
        if (diameter(space, t.support) > mode.R + kMetricTolerance) continue;
        break;
      case GeneratorMode::Kind::subvolume:
        if (!t.support.is_subset_of(mode.subvolume)) continue;
        break;
    }
    out.push_back(&t);
  }
  return out;
}

Superoperator generator(const DissipativeInteraction& interaction, const SiteSet& lambda,
                        const GeneratorMode& mode) {
  if (!interaction.space().contains(lambda)) {
    throw ConfigError("volume " + lambda.to_string() + " outside the space");
  }
  if (mode.kind == GeneratorMode::Kind::truncated && !(mode.R > 0)) {
    throw ConfigError("truncation range must be positive");
  }
  const SiteDims& dims = interaction.dims();
  const int d = dims.total(lambda);
  Matrix g = Matrix::Zero(d, d);
  std::vector<Matrix> kraus;
  for (const LindbladTerm* t : selected_terms(interaction, lambda, mode)) {
    g += cplx(0.0, 1.0) * embed_matrix(t->H, t->support, lambda, dims);
    for (const Matrix& k : t->kraus) {
      Matrix ke = embed_matrix(k, t->support, lambda, dims);
      g -= 0.5 * ke.adjoint() * ke;
      kraus.push_back(std::move(ke));
    }
  }
  const Matrix id = Matrix::Identity(d, d);
  Matrix s = kron(id, g) + kron(g.conjugate(), id);
  for (const Matrix& k : kraus) s += kron(k.transpose(), k.adjoint());
  return {std::move(s), lambda, dims, Picture::heisenberg};
}

double interaction_f_norm(const DissipativeInteraction& interaction, const FFunction& f) {
  const FiniteMetricSpace& space = interaction.space();
  const int n = space.size();
  double m = 0.0;
  for (int x = 0; x < n; ++x) {
    for (int y = x; y < n; ++y) {
      const double s = interaction.anchored_sum(x, y);
      if (s > 0) m = std::max(m, s / f(space.distance(x, y)));
    }
  }
  return m;
}

double finite_range_fnorm_bound(const DissipativeInteraction& interaction, const FFunction& f,
                                double kappa, double nu) {
  const double r0 = interaction.range();
  if (!(r0 > 0)) throw ConfigError("finite-range bound needs a positive interaction range");
  return interaction.sup_norm() * std::exp2(kappa * std::pow(r0, nu) - 2.0) / f(r0);
}

Superoperator adjoint_generator(const Superoperator& gen) {
  return {gen.matrix.adjoint(), gen.volume, gen.dims,
          gen.picture == Picture::heisenberg ? Picture::schrodinger : Picture::heisenberg};
}

DissipativeInteraction tfim_dissipative(const FiniteMetricSpace& space, double J, double h,
                                        double gamma) {
  const SiteDims dims = SiteDims::qubits(space.size());
  const Matrix z = named_operator('Z');
  const Matrix x = named_operator('X');
  const Matrix lower = named_operator('M');
  std::vector<LindbladTerm> terms;
  for (int i = 0; i < space.size(); ++i) {
    std::vector<Matrix> k;
    if (gamma > 0) k.push_back(std::sqrt(gamma) * lower);
    terms.push_back(make_term("onsite", SiteSet{i}, h * x, std::move(k), dims));
  }
  for (int i = 0; i < space.size(); ++i) {
    for (int j = i + 1; j < space.size(); ++j) {
      if (std::abs(space.distance(i, j) - 1.0) > kMetricTolerance) continue;
      terms.push_back(make_term("zz", SiteSet{i, j}, J * kron(z, z), {}, dims));
    }
  }
  return DissipativeInteraction(space, dims, std::move(terms));
}

DissipativeInteraction long_range_zz(const FiniteMetricSpace& space, double J, double alpha_int,
                                     double gamma) {
  const SiteDims dims = SiteDims::qubits(space.size());
  const Matrix z = named_operator('Z');
  const Matrix lower = named_operator('M');
  std::vector<LindbladTerm> terms;
  for (int i = 0; i < space.size(); ++i) {
    std::vector<Matrix> k;
    if (gamma > 0) k.push_back(std::sqrt(gamma) * lower);
    terms.push_back(make_term("onsite", SiteSet{i}, Matrix(), std::move(k), dims));
  }
  for (int i = 0; i < space.size(); ++i) {
    for (int j = i + 1; j < space.size(); ++j) {
      const double c = J * std::pow(1.0 + space.distance(i, j), -alpha_int);
      terms.push_back(make_term("zz", SiteSet{i, j}, c * kron(z, z), {}, dims));
    }
  }
  return DissipativeInteraction(space, dims, std::move(terms));
}

}  // namespace qlb
