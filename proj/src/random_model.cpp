#include "qlb/random_model.hpp"

#include <cmath>
#include <random>

namespace qlb {

namespace {

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  }
  Matrix h = 0.5 * (g + g.adjoint());
  return h / op_norm(h);
}

Matrix random_operator(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(normal(rng), normal(rng));
  }
  return g / op_norm(g);
}

}  // namespace

RandomModel random_model(std::uint64_t seed, const RandomModelParams& params) {
  if (params.max_sites > params.ceiling) {
    throw ConfigError("random model size " + std::to_string(params.max_sites) +
                      " exceeds the ceiling " + std::to_string(params.ceiling));
  }
  if (params.min_sites < 1 || params.min_sites > params.max_sites) {
    throw ConfigError("invalid random model size range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size_dist(params.min_sites, params.max_sites);
  std::uniform_int_distribution<int> gap_dist(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  int n = 1;
  std::vector<double> pos;
  for (int attempt = 0;; ++attempt) {
    n = size_dist(rng);
    pos.assign(1, 0.0);
    for (int i = 1; i < n; ++i) pos.push_back(pos.back() + gap_dist(rng));
    const double d = pos.back();
    if (n == 1 || (d >= params.d_min && d <= params.d_max)) break;
    if (attempt > 1000) throw ConfigError("no random geometry satisfies the distance window");
  }
  std::vector<std::vector<double>> table(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) table[i][j] = std::abs(pos[i] - pos[j]);
  }
  FiniteMetricSpace space = FiniteMetricSpace::from_table(table);
  const double alpha = params.alpha_min + (params.alpha_max - params.alpha_min) * unit(rng);
  FFunction f = FFunction::power(alpha);
  const SiteDims dims = SiteDims::qubits(n);

  std::vector<LindbladTerm> terms;
  for (int i = 0; i < n; ++i) {
    const double hs = 0.2 + 0.8 * unit(rng);
    const double ks = 0.2 + 0.6 * unit(rng);
    Matrix h = hs * random_hermitian(2, rng);
    Matrix k = ks * random_operator(2, rng);
    terms.push_back(make_term("onsite", SiteSet{i}, std::move(h), {std::move(k)}, dims));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double fd = f(space.distance(i, j));
      Matrix h = (0.2 + 0.8 * unit(rng)) * fd * random_hermitian(4, rng);
      std::vector<Matrix> kraus;
      if (unit(rng) < 0.3) kraus.push_back(std::sqrt(0.5 * fd) * random_operator(4, rng));
      terms.push_back(make_term("pair", SiteSet{i, j}, std::move(h), std::move(kraus), dims));
    }
  }
  DissipativeInteraction interaction(space, dims, std::move(terms));
  ObservableOp a = ObservableOp::local(random_hermitian(2, rng), SiteSet{0}, dims);
  ObservableOp b = ObservableOp::local(random_hermitian(2, rng), SiteSet{n - 1}, dims);
  std::uint64_t h = interaction.hash();
  h = fnv1a(f.descriptor(), h);
  for (const Matrix* m : {&a.matrix(), &b.matrix()}) {
    h = fnv1a(std::string_view(reinterpret_cast<const char*>(m->data()), sizeof(cplx) * m->size()), h);
  }
  return {std::move(space), std::move(f), std::move(interaction), std::move(a), std::move(b), h};
}

ModelContext random_context(std::uint64_t seed, const RandomModelParams& params, double nu) {
  RandomModel m = random_model(seed, params);
  ObservationMap k = ObservationMap::commutator(m.b);
  return ModelContext(std::move(m.interaction), std::move(m.f), nu, std::move(m.a), std::move(m.b),
                      std::move(k), "random:" + std::to_string(seed));
}

}  // namespace qlb
