#include "qlb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qlb/types.hpp"

namespace qlb {

SiteSet::SiteSet(std::initializer_list<Site> sites) : SiteSet(std::vector<Site>(sites)) {}

SiteSet::SiteSet(std::vector<Site> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

SiteSet SiteSet::range(int n) {
  SiteSet s;
  s.sites_.resize(std::max(n, 0));
  for (int i = 0; i < n; ++i) s.sites_[i] = i;
  return s;
}

bool SiteSet::contains(Site s) const {
  return std::binary_search(sites_.begin(), sites_.end(), s);
}

bool SiteSet::is_subset_of(const SiteSet& other) const {
  return std::includes(other.sites_.begin(), other.sites_.end(), sites_.begin(), sites_.end());
}

bool SiteSet::intersects(const SiteSet& other) const {
  auto a = sites_.begin();
  auto b = other.sites_.begin();
  while (a != sites_.end() && b != other.sites_.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

SiteSet SiteSet::unite(const SiteSet& other) const {
  SiteSet out;
  std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                 std::back_inserter(out.sites_));
  return out;
}

SiteSet SiteSet::intersect(const SiteSet& other) const {
  SiteSet out;
  std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(out.sites_));
  return out;
}

SiteSet SiteSet::minus(const SiteSet& other) const {
  SiteSet out;
  std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                      std::back_inserter(out.sites_));
  return out;
}

int SiteSet::index_of(Site s) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  if (it == sites_.end() || *it != s) return -1;
  return static_cast<int>(it - sites_.begin());
}

std::string SiteSet::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (i) os << ',';
    os << sites_[i];
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::vector<double>> table, std::string descriptor) {
  const std::size_t n = table.size();
  if (n == 0) throw ConfigError("metric space must have at least one point");
  for (const auto& row : table) {
    if (row.size() != n) throw ConfigError("distance table is not square");
  }
  double diam = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (std::abs(table[x][x]) > kMetricTolerance)
      throw ConfigError("distance table has nonzero diagonal at point " + std::to_string(x));
    table[x][x] = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      const double d = table[x][y];
      if (!std::isfinite(d)) throw ConfigError("distance table has a non-finite entry");
      if (std::abs(d - table[y][x]) > kMetricTolerance)
        throw ConfigError("distance table is not symmetric at (" + std::to_string(x) + "," +
                          std::to_string(y) + ")");
      if (x != y && d <= kMetricTolerance)
        throw ConfigError("distinct points " + std::to_string(x) + " and " + std::to_string(y) +
                          " are at distance zero");
      diam = std::max(diam, d);
    }
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (table[x][z] > table[x][y] + table[y][z] + kMetricTolerance)
          throw ConfigError("triangle inequality violated on (" + std::to_string(x) + "," +
                            std::to_string(y) + "," + std::to_string(z) + ")");

  auto data = std::make_shared<Data>();
  data->dist = std::move(table);
  data->diameter = diam;
  data->descriptor = std::move(descriptor);
  data_ = std::move(data);
}

FiniteMetricSpace FiniteMetricSpace::chain(int n) {
  if (n <= 0) throw ConfigError("chain length must be positive");
  std::vector<std::vector<double>> t(n, std::vector<double>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) t[x][y] = std::abs(x - y);
  return FiniteMetricSpace(std::move(t), "chain(" + std::to_string(n) + ")");
}

FiniteMetricSpace FiniteMetricSpace::grid(int nx, int ny, GridMetric metric) {
  if (nx <= 0 || ny <= 0) throw ConfigError("grid extents must be positive");
  const int n = nx * ny;
  std::vector<std::vector<double>> t(n, std::vector<double>(n));
  // site index = ix * ny + iy
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int dx = std::abs(a / ny - b / ny);
      const int dy = std::abs(a % ny - b % ny);
      t[a][b] = metric == GridMetric::l1 ? dx + dy : std::max(dx, dy);
    }
  }
  const char* m = metric == GridMetric::l1 ? "l1" : "linf";
  return FiniteMetricSpace(std::move(t), "grid(" + std::to_string(nx) + "," + std::to_string(ny) +
                                             ",metric=" + m + ")");
}

FiniteMetricSpace FiniteMetricSpace::from_table(std::vector<std::vector<double>> table) {
  return FiniteMetricSpace(std::move(table), "explicit");
}

bool FiniteMetricSpace::contains(const SiteSet& set) const {
  return set.empty() || (set.sites().front() >= 0 && set.sites().back() < size());
}

// ---------------------------------------------------------------------------

namespace {

void require_nonempty(const SiteSet& s, const char* what) {
  if (s.empty()) throw Error(std::string("empty site set (") + what + ")");
}

void require_member(const FiniteMetricSpace& space, const SiteSet& s) {
  if (!space.contains(s)) throw Error("site set " + s.to_string() + " is not contained in the space");
}

}  // namespace

double set_distance(const FiniteMetricSpace& space, const SiteSet& x, const SiteSet& y) {
  require_nonempty(x, "set_distance");
  require_nonempty(y, "set_distance");
  require_member(space, x);
  require_member(space, y);
  double best = std::numeric_limits<double>::infinity();
  for (Site a : x)
    for (Site b : y) best = std::min(best, space.distance(a, b));
  return best;
}

double diameter(const FiniteMetricSpace& space, const SiteSet& x) {
  require_nonempty(x, "diameter");
  require_member(space, x);
  double best = 0.0;
  for (Site a : x)
    for (Site b : x) best = std::max(best, space.distance(a, b));
  return best;
}

SiteSet ball(const FiniteMetricSpace& space, Site x, double n) {
  if (!space.contains(x)) throw Error("ball centre " + std::to_string(x) + " is not in the space");
  std::vector<Site> members;
  for (Site y = 0; y < space.size(); ++y)
    if (space.distance(x, y) <= n + kMetricTolerance) members.push_back(y);
  return SiteSet(std::move(members));
}

SiteSet inflate(const FiniteMetricSpace& space, const SiteSet& x, double r) {
  require_member(space, x);
  std::vector<Site> members;
  for (Site y = 0; y < space.size(); ++y) {
    for (Site a : x) {
      if (space.distance(a, y) <= r + kMetricTolerance) {
        members.push_back(y);
        break;
      }
    }
  }
  return SiteSet(std::move(members));
}

std::vector<SiteSet> surface_sets(const FiniteMetricSpace& space, const SiteSet& lambda,
                                  const SiteSet& x, const std::vector<SiteSet>& candidates) {
  require_member(space, lambda);
  if (!x.is_subset_of(lambda))
    throw Error("surface_sets: X " + x.to_string() + " is not contained in " + lambda.to_string());
  const SiteSet outside = lambda.minus(x);
  std::vector<SiteSet> out;
  for (const SiteSet& z : candidates) {
    if (z.is_subset_of(lambda) && z.intersects(x) && z.intersects(outside)) out.push_back(z);
  }
  return out;
}

namespace {

template <typename Count>
double regularity_scan(const FiniteMetricSpace& space, double exponent, Count count) {
  const int nmax = static_cast<int>(std::ceil(space.diameter() - kMetricTolerance));
  double kappa = 0.0;
  for (Site x = 0; x < space.size(); ++x) {
    for (int n = 0; n <= std::max(nmax, 0); ++n) {
      const double c = count(x, n);
      kappa = std::max(kappa, c / std::pow(n + 1.0, exponent));
    }
  }
  return kappa;
}

}  // namespace

double nu_regularity(const FiniteMetricSpace& space, double nu) {
  if (!(nu > 0)) throw Error("nu must be positive");
  return regularity_scan(space, nu, [&](Site x, int n) {
    return static_cast<double>(ball(space, x, n + 1).size());
  });
}

double nu_surface_regularity(const FiniteMetricSpace& space, double nu) {
  if (!(nu > 0)) throw Error("nu must be positive");
  return regularity_scan(space, nu - 1.0, [&](Site x, int n) {
    return static_cast<double>(ball(space, x, n + 1).size() - ball(space, x, n).size());
  });
}

}  // namespace qlb
