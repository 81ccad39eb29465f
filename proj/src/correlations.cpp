#include "qlb/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gsl/gsl_multimin.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace qlb {

namespace {

constexpr double kPeriodicTolerance = 1e-9;
constexpr double kNullTolerance = 1e-10;
constexpr double kRankGap = 1e3;
constexpr int kMultistarts = 64;
constexpr int kRefined = 4;
constexpr int kSimplexIterations = 500;

Superoperator heisenberg(const Superoperator& gen) {
  return gen.picture == Picture::heisenberg ? gen : adjoint_generator(gen);
}

Superoperator schrodinger(const Superoperator& gen) {
  return gen.picture == Picture::schrodinger ? gen : adjoint_generator(gen);
}

Eigen::VectorXcd eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue computation did not converge");
  return es.eigenvalues();
}

SiteSet region(const DissipativeInteraction& interaction, const SiteSet& x, const SiteSet& lambda,
               double r) {
  return inflate(interaction.space(), x, r).intersect(lambda);
}

// Pure state from 2D real coordinates.
Vector pure_state(const double* p, int dim) {
  Vector psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = cplx(p[2 * i], p[2 * i + 1]);
  const double n = psi.norm();
  if (n == 0.0) psi(0) = 1.0;
  else psi /= n;
  return psi;
}

struct Objective {
  const Matrix* s;
  const Matrix* rho;
  int dim;

  double operator()(const Vector& psi) const {
    const Matrix p = psi * psi.adjoint();
    const Matrix out = devectorize(Vector(*s * vectorize(p)), dim);
    return trace_norm(out - *rho);
  }
};

double simplex_target(const gsl_vector* x, void* params) {
  const auto* obj = static_cast<const Objective*>(params);
  return -(*obj)(pure_state(x->data, obj->dim));
}

double refine(const Objective& obj, const Vector& start) {
  const int n = 2 * obj.dim;
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* step = gsl_vector_alloc(n);
  for (int i = 0; i < obj.dim; ++i) {
    gsl_vector_set(x, 2 * i, start(i).real());
    gsl_vector_set(x, 2 * i + 1, start(i).imag());
  }
  gsl_vector_set_all(step, 0.2);
  gsl_multimin_function f{&simplex_target, static_cast<std::size_t>(n),
                          const_cast<Objective*>(&obj)};
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(m, &f, x, step);
  for (int it = 0; it < kSimplexIterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(m) != 0) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-10) == GSL_SUCCESS) break;
  }
  // Re-evaluate at the returned point so the value is an attained one.
  const double best = obj(pure_state(gsl_multimin_fminimizer_x(m)->data, obj.dim));
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return best;
}

// Lower bound of sup over pure psi of ||S(psi psi*) - rho||_1.
double pure_state_maximum(const Matrix& s, const Matrix& rho, std::uint64_t seed) {
  const int dim = static_cast<int>(rho.rows());
  const Objective obj{&s, &rho, dim};
  std::vector<std::pair<double, Vector>> starts;
  for (int i = 0; i < dim && static_cast<int>(starts.size()) < kMultistarts; ++i) {
    Vector e = Vector::Zero(dim);
    e(i) = 1.0;
    starts.emplace_back(obj(e), e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  while (static_cast<int>(starts.size()) < kMultistarts) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(normal(rng), normal(rng));
    v.normalize();
    starts.emplace_back(obj(v), v);
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = starts.front().first;
  for (int k = 0; k < kRefined && k < static_cast<int>(starts.size()); ++k) {
    best = std::max(best, refine(obj, starts[k].second));
  }
  return best;
}

}  // namespace

StateFunctional::StateFunctional(Kind kind, Matrix rho, SiteSet volume, const SiteDims& dims)
    : kind_(kind), rho_(std::move(rho)), volume_(std::move(volume)), dims_(dims) {
  const int d = dims_.total(volume_);
  if (rho_.rows() != d || rho_.cols() != d) throw ConfigError("density dimension mismatch");
  if ((rho_ - rho_.adjoint()).norm() > 1e-12 * std::max(1.0, rho_.norm())) {
    throw ConfigError("density is not hermitian");
  }
  if (std::abs(rho_.trace() - cplx(1.0)) > 1e-12) throw ConfigError("density trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12) throw ConfigError("density is not positive");
  if (kind_ == Kind::product) {
    governance_ = [](double, double, double dist) { return dist > 0 ? 0.0 : 2.0; };
  } else {
    governance_ = [](double, double, double) { return 2.0; };
  }
}

StateFunctional StateFunctional::product(const std::vector<Matrix>& site_densities, SiteSet volume,
                                         const SiteDims& dims) {
  if (site_densities.size() != volume.size()) {
    throw ConfigError("product state needs one density per site of " + volume.to_string());
  }
  Matrix rho = Matrix::Identity(1, 1);
  for (std::size_t k = 0; k < site_densities.size(); ++k) {
    if (site_densities[k].rows() != dims.of(volume[k])) {
      throw ConfigError("site density dimension mismatch at site " + std::to_string(volume[k]));
    }
    rho = kron(rho, site_densities[k]);
  }
  return StateFunctional(Kind::product, std::move(rho), std::move(volume), dims);
}

StateFunctional StateFunctional::maximally_mixed(SiteSet volume, const SiteDims& dims) {
  std::vector<Matrix> sites;
  for (Site s : volume) {
    const int d = dims.of(s);
    sites.push_back(Matrix::Identity(d, d) / static_cast<double>(d));
  }
  return product(sites, std::move(volume), dims);
}

StateFunctional StateFunctional::from_density(Matrix rho, SiteSet volume, const SiteDims& dims) {
  return StateFunctional(Kind::explicit_density, std::move(rho), std::move(volume), dims);
}

cplx StateFunctional::operator()(const ObservableOp& a) const {
  const ObservableOp in = embed(a, volume_);
  return (rho_ * in.matrix()).trace();
}

cplx correlation(const StateFunctional& omega, const Superoperator& gen, double t,
                 const ObservableOp& a, const ObservableOp& b) {
  const ObservableOp ea = embed(a, gen.volume);
  const ObservableOp eb = embed(b, gen.volume);
  const cplx ab = omega(evolve(gen, t, ea * eb));
  return ab - omega(evolve(gen, t, ea)) * omega(evolve(gen, t, eb));
}

double c_ab(const DissipativeInteraction& interaction, const SiteSet& lambda, const SiteSet& x,
            const SiteSet& y, double r, double t, const ObservableOp& a, const ObservableOp& b) {
  if (!a.support().is_subset_of(x) || !b.support().is_subset_of(y)) {
    throw ConfigError("observable supports must lie in X and Y");
  }
  const Superoperator full = generator(interaction, lambda);
  const ObservableOp ea = embed(a, lambda);
  const ObservableOp eb = embed(b, lambda);
  auto local = [&](const SiteSet& s) {
    return generator(interaction, lambda, GeneratorMode::sub(region(interaction, s, lambda, r)));
  };
  return op_norm(ea) * evolution_difference(full, local(y), t, eb) +
         op_norm(eb) * evolution_difference(full, local(x), t, ea) +
         evolution_difference(full, local(x.unite(y)), t, ea * eb);
}

BoundReport check_g_decaying(const StateFunctional& omega, const DissipativeInteraction& interaction,
                             const SiteSet& lambda, const SiteSet& x, const SiteSet& y, double r,
                             double t, const ObservableOp& a, const ObservableOp& b, double tol) {
  const FiniteMetricSpace& space = interaction.space();
  const double d = set_distance(space, x, y);
  FlaggedValue rhs;
  if (!(d >= 2)) rhs.violations.push_back("d(X,Y) >= 2");
  if (!(r >= 1)) rhs.violations.push_back("r >= 1");
  if (2 * r > d + kMetricTolerance) rhs.violations.push_back("2r <= d(X,Y)");
  rhs.valid = rhs.violations.empty();
  const SiteSet xr = region(interaction, x, lambda, r);
  const SiteSet yr = region(interaction, y, lambda, r);
  const double an = op_norm(a);
  const double bn = op_norm(b);
  const double gov = omega.governance(static_cast<double>(xr.size()),
                                      static_cast<double>(yr.size()), set_distance(space, xr, yr));
  rhs.value = an * bn * gov + c_ab(interaction, lambda, x, y, r, t, a, b);
  const Superoperator gen = generator(interaction, lambda);
  BoundReport rep;
  rep.theorem = "g_decaying";
  rep.t = t;
  rep.r = r;
  rep.d = d;
  rep.X = x;
  rep.Y = y;
  settle(rep, std::abs(correlation(omega, gen, t, a, b)), rhs, tol);
  return rep;
}

Matrix stationary_state(const Superoperator& gen) {
  const Superoperator s = schrodinger(gen);
  const int dim = s.hilbert_dim();
  Eigen::BDCSVD<Matrix> svd(s.matrix, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index n = sv.size();
  const double scale = sv(0);
  Eigen::Index null_dim = 0;
  while (null_dim < n && sv(n - 1 - null_dim) <= kNullTolerance * scale) ++null_dim;
  if (scale == 0.0) null_dim = n;
  if (null_dim != 1) {
    throw DegenerateFixedPoint("non-unique fixed point: null space dimension " +
                                   std::to_string(null_dim),
                               static_cast<int>(null_dim));
  }
  const double inside = sv(n - 1);
  const double outside = sv(n - 2);
  if (inside > 0 && outside / inside < kRankGap) {
    throw NumericalError("ambiguous rank of the generator kernel");
  }
  Matrix rho = devectorize(Vector(svd.matrixV().col(n - 1)), dim);
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-8) throw NumericalError("kernel vector has vanishing trace");
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw NumericalError("stationary state is not positive");
  return rho;
}

std::vector<PeriodicPoint> periodic_points(const Superoperator& gen) {
  const Eigen::VectorXcd ev = eigenvalues(gen.matrix);
  std::vector<double> im;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).real()) <= kPeriodicTolerance) im.push_back(ev(i).imag());
  }
  std::sort(im.begin(), im.end());
  std::vector<PeriodicPoint> out;
  std::size_t i = 0;
  while (i < im.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < im.size() && std::abs(im[j] - im[i]) <= 1e-7 * std::max(1.0, std::abs(im[i]))) {
      sum += im[j];
      ++j;
    }
    out.push_back({cplx(0.0, sum / static_cast<double>(j - i)), static_cast<int>(j - i)});
    i = j;
  }
  return out;
}

GapInfo spectral_gap(const Superoperator& gen) {
  const Superoperator h = heisenberg(gen);
  const Eigen::VectorXcd ev = eigenvalues(h.matrix);
  int zeros = 0;
  double gamma = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i).real()) <= kPeriodicTolerance) {
      if (std::abs(ev(i).imag()) > kPeriodicTolerance) {
        throw NumericalError("not mixing: nonzero periodic point present");
      }
      ++zeros;
      continue;
    }
    gamma = std::min(gamma, -ev(i).real());
  }
  if (zeros != 1) throw DegenerateFixedPoint("non-unique fixed point: kernel dimension " +
                                                 std::to_string(zeros),
                                             zeros);
  if (!(gamma > 0) || !std::isfinite(gamma)) throw NumericalError("no positive spectral gap");
  const Matrix rho = stationary_state(h);
  const int dim = h.hilbert_dim();
  const Matrix p = vectorize(Matrix::Identity(dim, dim)) * vectorize(rho).adjoint();
  const Matrix e = h.matrix.exp();
  const Eigen::VectorXcd rev = eigenvalues(e - e * p);
  GapInfo info;
  info.gamma = gamma;
  info.omega0 = -gamma;
  info.radius = rev.cwiseAbs().maxCoeff();
  info.radius_error = std::abs(info.radius - std::exp(info.omega0)) / std::exp(info.omega0);
  return info;
}

double Envelope::g(double t) const { return std::min(2.0, c * std::exp(-gamma * t)); }

Governance Envelope::governance() const {
  const Envelope copy = *this;
  return [copy](double t) { return copy.g(t); };
}

namespace {

EnvelopeSample envelope_sample(const Superoperator& h, const Matrix& rho, double t) {
  const int dim = h.hilbert_dim();
  const Matrix s = (t * h.matrix).exp().adjoint();
  const Matrix p = vectorize(rho) * vectorize(Matrix::Identity(dim, dim)).adjoint();
  const double upper = std::sqrt(static_cast<double>(dim)) * op_norm(s - p);
  const double lower = pure_state_maximum(s, rho, 0x9e3779b97f4a7c15ULL);
  return {t, lower, upper};
}

}  // namespace

Envelope convergence_envelope(const Superoperator& gen, const Matrix& rho,
                              const std::vector<double>& t_grid, double gamma) {
  const Superoperator h = heisenberg(gen);
  Envelope env;
  env.gamma = gamma;
  for (double t : t_grid) {
    if (t < 0) throw ConfigError("negative time in envelope grid");
    const EnvelopeSample s = envelope_sample(h, rho, t);
    env.c = std::max(env.c, s.upper * std::exp(gamma * t));
    env.samples.push_back(s);
  }
  return env;
}

EtaBracket mixing_eta(const Superoperator& gen, double t, const Matrix& rho) {
  const EnvelopeSample s = envelope_sample(heisenberg(gen), rho, t);
  return {0.5 * s.lower, 0.5 * s.upper};
}

FixedPointAnalysis analyse_fixed_point(const Superoperator& gen, const std::vector<double>& t_grid) {
  FixedPointAnalysis fp;
  fp.periodic = periodic_points(gen);
  fp.gap = spectral_gap(gen);
  fp.rho = stationary_state(gen);
  fp.envelope = convergence_envelope(gen, fp.rho, t_grid, fp.gap.gamma);
  return fp;
}

BoundReport check_steadystate1(const Matrix& rho, const Governance& g, const Superoperator& gen,
                               const ObservableOp& a, const ObservableOp& b, double t,
                               const StateFunctional& omega, double tol) {
  if (a.support().intersects(b.support())) {
    throw ConfigError("supports " + a.support().to_string() + " and " + b.support().to_string() +
                      " overlap");
  }
  const Superoperator h = heisenberg(gen);
  const StateFunctional pi = StateFunctional::from_density(rho, h.volume, h.dims);
  const ObservableOp ea = embed(a, h.volume);
  const ObservableOp eb = embed(b, h.volume);
  const double lhs = std::abs(pi(ea * eb) - pi(ea) * pi(eb));
  const ObservableOp id = ObservableOp::identity(h.volume, h.dims);
  const ObservableOp bt = eb - id.scaled(omega(evolve(h, t, eb)));
  FlaggedValue rhs;
  rhs.value = std::abs(omega(evolve(h, t, ea * bt))) + 3.0 * op_norm(a) * op_norm(b) * g(t);
  BoundReport rep;
  rep.theorem = "steadystate1";
  rep.t = t;
  rep.X = a.support();
  rep.Y = b.support();
  rep.d = std::numeric_limits<double>::quiet_NaN();
  settle(rep, lhs, rhs, tol);
  return rep;
}

}  // namespace qlb
