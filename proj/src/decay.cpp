#include "qlb/decay.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qlb/types.hpp"

namespace qlb {

FFunction FFunction::power(double alpha) {
  if (!(alpha > 0)) throw ConfigError("power-law exponent must be positive");
  FFunction f;
  f.kind_ = Kind::power;
  f.alpha_ = alpha;
  return f;
}

FFunction FFunction::weighted(double a, FFunction base) {
  if (!(a >= 0)) throw ConfigError("weight a must be nonnegative");
  FFunction f;
  f.kind_ = Kind::weighted;
  f.a_ = a;
  f.base_ = std::make_shared<const FFunction>(std::move(base));
  return f;
}

FFunction FFunction::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw ConfigError("tabulated F-function needs at least one point");
  std::sort(points.begin(), points.end());
  if (points.front().first > 0) throw ConfigError("tabulated F-function must start at r = 0");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].second > 0)) throw ConfigError("tabulated F-function must be strictly positive");
    if (i > 0 && points[i].second > points[i - 1].second)
      throw ConfigError("tabulated F-function must be non-increasing");
    if (i > 0 && points[i].first == points[i - 1].first)
      throw ConfigError("tabulated F-function has a repeated grid point");
  }
  FFunction f;
  f.kind_ = Kind::tabulated;
  f.points_ = std::move(points);
  return f;
}

FFunction FFunction::table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open F-function table '" + path + "'");
  std::vector<std::pair<double, double>> pts;
  double r, v;
  while (in >> r >> v) pts.emplace_back(r, v);
  if (!in.eof()) throw ConfigError("malformed F-function table '" + path + "'");
  FFunction f = table(std::move(pts));
  f.source_ = path;
  return f;
}

double FFunction::operator()(double r) const {
  switch (kind_) {
    case Kind::power:
      return std::pow(1.0 + r, -alpha_);
    case Kind::weighted:
      return std::exp(-a_ * r) * (*base_)(r);
    case Kind::tabulated: {
      if (r <= points_.front().first) return points_.front().second;
      if (r >= points_.back().first) return points_.back().second;
      auto hi = std::upper_bound(points_.begin(), points_.end(), std::make_pair(r, 0.0),
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
      auto lo = hi - 1;
      const double w = (r - lo->first) / (hi->first - lo->first);
      return (1 - w) * lo->second + w * hi->second;
    }
  }
  return 0.0;
}

double FFunction::alpha() const {
  if (kind_ == Kind::power) return alpha_;
  if (kind_ == Kind::weighted) return base_->alpha();
  throw Error("tabulated F-function has no power-law exponent");
}

const FFunction& FFunction::base() const {
  if (kind_ != Kind::weighted) throw Error("F-function is not weighted");
  return *base_;
}

std::string FFunction::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::power:
      os << "power(" << alpha_ << ")";
      break;
    case Kind::weighted:
      os << "weighted(" << a_ << ", " << base_->descriptor() << ")";
      break;
    case Kind::tabulated:
      os << "table(" << (source_.empty() ? "inline" : source_) << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

double f_norm(const FFunction& f, const FiniteMetricSpace& space) {
  double best = 0.0;
  for (Site x = 0; x < space.size(); ++x) {
    double s = 0.0;
    for (Site y = 0; y < space.size(); ++y) s += f(space.distance(x, y));
    best = std::max(best, s);
  }
  return best;
}

double conv_constant(const FFunction& f, const FiniteMetricSpace& space) {
  const int n = space.size();
  std::vector<double> fv(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) fv[x * n + y] = f(space.distance(x, y));
  double best = 0.0;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      double s = 0.0;
      for (int z = 0; z < n; ++z) s += fv[x * n + z] * fv[z * n + y];
      best = std::max(best, s / fv[x * n + y]);
    }
  }
  return best;
}

double tail_G(const FFunction& f, const FiniteMetricSpace& space, double r) {
  if (r < 0) throw Error("tail_G: r must be nonnegative");
  if (r >= space.diameter()) return 0.0;
  double best = 0.0;
  for (Site x = 0; x < space.size(); ++x) {
    double s = 0.0;
    for (Site y = 0; y < space.size(); ++y) {
      const double d = space.distance(x, y);
      if (d > r + kMetricTolerance) s += f(d);
    }
    best = std::max(best, s);
  }
  return best;
}

double g_regular_bound(const FFunction& f, const FiniteMetricSpace& space, double kappa, double nu,
                       double r) {
  if (r < 0) throw Error("g_regular_bound: r must be nonnegative");
  const double diam = space.diameter();
  if (r >= diam) return 0.0;
  const int last = static_cast<int>(std::ceil(diam - kMetricTolerance)) - 1;
  double s = 0.0;
  for (int n = static_cast<int>(std::floor(r)); n <= last; ++n) s += std::pow(1.0 + n, nu) * f(n);
  return kappa * s;
}

double pair_sum(const FFunction& f, const FiniteMetricSpace& space, const SiteSet& x,
                const SiteSet& y) {
  double s = 0.0;
  for (Site a : x)
    for (Site b : y) s += f(space.distance(a, b));
  return s;
}

double exp_tail(double t, double k) {
  if (!(t >= 0)) throw Error("exp_tail: t must be nonnegative");
  if (!(k >= 0)) throw Error("exp_tail: k must be nonnegative");
  // Guard against k = n + roundoff; rounding down only enlarges the tail.
  const double m_real = std::ceil(k - 1e-12 * std::max(1.0, k));
  const long m = static_cast<long>(std::max(m_real, 0.0));
  if (m == 0) return std::exp(t);
  if (t == 0) return 0.0;
  if (m == 1) return std::expm1(t);

  if (static_cast<double>(m) <= t) {
    // Tail is a sizeable fraction of e^t: subtract a compensated partial sum.
    double sum = 0.0, comp = 0.0, term = 1.0;
    for (long n = 0; n < m; ++n) {
      if (n > 0) term *= t / static_cast<double>(n);
      const double y = term - comp;
      const double s = sum + y;
      comp = (s - sum) - y;
      sum = s;
    }
    return std::exp(t) - sum;
  }

  // m > t: terms decrease from t^m/m! on; sum them forward.
  double term = 1.0;
  for (long n = 1; n <= m; ++n) {
    term *= t / static_cast<double>(n);
    if (term == 0.0) return 0.0;
  }
  double sum = term;
  for (long n = m + 1;; ++n) {
    term *= t / static_cast<double>(n);
    sum += term;
    if (term <= 1e-18 * sum) break;
  }
  return sum;
}

SeriesValue c_epsilon(double eps) {
  if (!(eps > 0)) throw Error("c_epsilon: divergent series (eps must be positive)");
  // Partial sum up to N-1, then Euler-Maclaurin for the remainder.
  constexpr int N = 200;
  const double s = 1.0 + eps;
  double head = 0.0;
  for (int n = N - 1; n >= 0; --n) head += std::pow(1.0 + n, -s);
  const double x = 1.0 + N;
  const double integral = std::pow(x, -eps) / eps;
  const double f0 = std::pow(x, -s);
  const double d1 = -s * std::pow(x, -s - 1);
  const double d3 = -s * (s + 1) * (s + 2) * std::pow(x, -s - 3);
  const double d5 = -s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * std::pow(x, -s - 5);
  const double tail = integral + f0 / 2 - d1 / 12 + d3 / 720 - d5 / 30240;
  return {head + tail, std::abs(d5) / 30240};
}

DecayProfile::DecayProfile(FFunction f, FiniteMetricSpace space)
    : f_(std::move(f)), space_(std::move(space)) {
  norm_ = f_norm(f_, space_);
  conv_ = qlb::conv_constant(f_, space_);
}

}  // namespace qlb
