#include "qlb/dynamics.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace qlb {

Superoperator propagator(const Superoperator& gen, double t) {
  if (!(t >= 0)) throw ConfigError("propagator needs t >= 0");
  if (gen.matrix.rows() > kMaxDenseSuperDim) {
    throw NumericalError("super-operator dimension " + std::to_string(gen.matrix.rows()) +
                         " exceeds the dense exponential ceiling");
  }
  Matrix e = (t * gen.matrix).exp();
  if (!e.allFinite()) throw NumericalError("matrix exponential overflowed");
  return {std::move(e), gen.volume, gen.dims, gen.picture};
}

Vector expm_action(const Matrix& m, double t, const Vector& v) {
  if (!(t >= 0)) throw ConfigError("expm_action needs t >= 0");
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  const double scaled = t * norm1;
  const int steps = std::max(1, static_cast<int>(std::ceil(scaled)));
  const double h = t / steps;
  Vector out = v;
  for (int s = 0; s < steps; ++s) {
    Vector term = out;
    Vector sum = out;
    for (int k = 1; k < 200; ++k) {
      term = (h / k) * (m * term);
      sum += term;
      if (term.lpNorm<1>() <= 1e-18 * sum.lpNorm<1>()) break;
    }
    out = std::move(sum);
  }
  if (!out.allFinite()) throw NumericalError("expm_action overflowed");
  return out;
}

ObservableOp evolve(const Superoperator& gen, double t, const ObservableOp& a) {
  if (gen.dims != a.dims()) throw ConfigError("generator and operator use different local dims");
  if (!a.support().is_subset_of(gen.volume)) {
    throw ConfigError("operator support " + a.support().to_string() +
                      " outside generator volume " + gen.volume.to_string());
  }
  const ObservableOp in = embed(a, gen.volume);
  const Vector out = expm_action(gen.matrix, t, vectorize(in.matrix()));
  return ObservableOp(devectorize(out, in.dim()), gen.volume, gen.volume, gen.dims);
}

double lhs_quasi_locality(const ObservationMap& k, const Superoperator& gen, double t,
                          const ObservableOp& a) {
  if (k.support().intersects(a.support())) {
    throw ConfigError("observation map support " + k.support().to_string() +
                      " overlaps operator support " + a.support().to_string());
  }
  return op_norm(k.apply(evolve(gen, t, a)));
}

double evolution_difference(const Superoperator& gen, const Superoperator& other, double t,
                            const ObservableOp& a) {
  if (gen.volume != other.volume) throw ConfigError("generators act on different volumes");
  return op_norm(evolve(gen, t, a).matrix() - evolve(other, t, a).matrix());
}

double lhs_truncation_error(const DissipativeInteraction& interaction, const SiteSet& lambda,
                            double R, double t, const ObservableOp& a) {
  return evolution_difference(generator(interaction, lambda),
                              generator(interaction, lambda, GeneratorMode::truncated(R)), t, a);
}

double lhs_local_error(const DissipativeInteraction& interaction, const SiteSet& lambda,
                       const SiteSet& x, double r, double t, const ObservableOp& a) {
  if (!a.support().is_subset_of(x)) {
    throw ConfigError("operator support " + a.support().to_string() + " not inside " +
                      x.to_string());
  }
  const SiteSet local = inflate(interaction.space(), x, r).intersect(lambda);
  return evolution_difference(generator(interaction, lambda),
                              generator(interaction, lambda, GeneratorMode::sub(local)), t, a);
}

Matrix choi_matrix(const Superoperator& map) {
  const Eigen::Index n = map.matrix.rows();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n || map.matrix.cols() != n) {
    throw ConfigError("super-operator is not square on a vectorised algebra");
  }
  Matrix c(n, n);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) c(i * d + a, j * d + b) = map.matrix(a + b * d, i + j * d);
      }
    }
  }
  return c;
}

double choi_min_eigenvalue(const Superoperator& map) {
  const Matrix c = choi_matrix(map);
  const Matrix herm = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace qlb
