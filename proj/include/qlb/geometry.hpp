#pragma once

#include <compare>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace qlb {

/// Index of a point in a FiniteMetricSpace.
using Site = int;

/// Absolute tolerance used for every metric comparison.
inline constexpr double kMetricTolerance = 1e-12;

/// Sorted, duplicate-free set of sites. The ascending order is also the
/// tensor-factor order whenever the set is used as a volume.
class SiteSet {
 public:
  SiteSet() = default;
  SiteSet(std::initializer_list<Site> sites);
  explicit SiteSet(std::vector<Site> sites);

  /// {0, 1, ..., n-1}
  static SiteSet range(int n);

  bool empty() const { return sites_.empty(); }
  std::size_t size() const { return sites_.size(); }
  bool contains(Site s) const;
  bool is_subset_of(const SiteSet& other) const;
  bool intersects(const SiteSet& other) const;

  SiteSet unite(const SiteSet& other) const;
  SiteSet intersect(const SiteSet& other) const;
  SiteSet minus(const SiteSet& other) const;

  /// Position of `s` inside the set, or -1.
  int index_of(Site s) const;

  const std::vector<Site>& sites() const { return sites_; }
  auto begin() const { return sites_.begin(); }
  auto end() const { return sites_.end(); }
  Site operator[](std::size_t i) const { return sites_[i]; }

  std::string to_string() const;

  friend bool operator==(const SiteSet&, const SiteSet&) = default;
  friend auto operator<=>(const SiteSet&, const SiteSet&) = default;

 private:
  std::vector<Site> sites_;
};

enum class GridMetric { l1, linf };

/// Finite metric space: the whole verification universe.
///
/// The distance table is validated on construction (zero diagonal, symmetry,
/// positivity off the diagonal, triangle inequality on all triples). Copies
/// share the immutable table.
class FiniteMetricSpace {
 public:
  static FiniteMetricSpace chain(int n);
  static FiniteMetricSpace grid(int nx, int ny, GridMetric metric = GridMetric::l1);
  static FiniteMetricSpace from_table(std::vector<std::vector<double>> table);

  int size() const { return static_cast<int>(data_->dist.size()); }
  double distance(Site x, Site y) const { return data_->dist[x][y]; }
  double diameter() const { return data_->diameter; }
  SiteSet all() const { return SiteSet::range(size()); }
  bool contains(Site s) const { return s >= 0 && s < size(); }
  bool contains(const SiteSet& set) const;

  /// Lattice descriptor this space was built from: chain(N), grid(Nx,Ny,metric=...) or explicit.
  const std::string& descriptor() const { return data_->descriptor; }
  const std::vector<std::vector<double>>& table() const { return data_->dist; }

 private:
  struct Data {
    std::vector<std::vector<double>> dist;
    double diameter = 0.0;
    std::string descriptor;
  };
  FiniteMetricSpace(std::vector<std::vector<double>> table, std::string descriptor);

  std::shared_ptr<const Data> data_;
};

/// min over pairs; 0 iff the sets intersect.
double set_distance(const FiniteMetricSpace& space, const SiteSet& x, const SiteSet& y);

double diameter(const FiniteMetricSpace& space, const SiteSet& x);

/// Closed ball {y : d(x,y) <= n}.
SiteSet ball(const FiniteMetricSpace& space, Site x, double n);

/// r-inflation X(r): union of closed balls of radius r around X.
SiteSet inflate(const FiniteMetricSpace& space, const SiteSet& x, double r);

/// Candidates Z with Z inside lambda meeting both X and lambda \ X.
std::vector<SiteSet> surface_sets(const FiniteMetricSpace& space, const SiteSet& lambda,
                                  const SiteSet& x, const std::vector<SiteSet>& candidates);

/// Smallest kappa with |b_x(n+1)| <= kappa (n+1)^nu for every x and every
/// integer n in [0, ceil(diam)].
double nu_regularity(const FiniteMetricSpace& space, double nu);

/// Diagnostic only: smallest kappa with |b_x(n+1) \ b_x(n)| <= kappa (n+1)^(nu-1).
double nu_surface_regularity(const FiniteMetricSpace& space, double nu);

}  // namespace qlb
