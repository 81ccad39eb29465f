#pragma once

#include <cstdint>

#include "qlb/checks.hpp"

namespace qlb {

struct RandomModelParams {
  int min_sites = 3;
  int max_sites = 4;
  /// Ceiling on the number of sites; larger requests are refused.
  int ceiling = 5;
  double alpha_min = 2.5;
  double alpha_max = 4.0;
  /// Accepted distances d(X, Y) between the two observables.
  double d_min = 2.0;
  double d_max = 4.0;
};

struct RandomModel {
  FiniteMetricSpace space;
  FFunction f;
  DissipativeInteraction interaction;
  ObservableOp a;
  ObservableOp b;
  std::uint64_t hash;
};

/// Sites on a line with spacings in {1, 2}; F = (1+r)^-alpha; every pair carries a Hamiltonian
/// of strength ~F(d), every site a Hamiltonian and a Kraus operator. A = observable at the
/// first site, B = observable at the last one. Deterministic in the seed.
RandomModel random_model(std::uint64_t seed, const RandomModelParams& params = {});

/// Commutator observation map with B, wrapped with constants and caches.
ModelContext random_context(std::uint64_t seed, const RandomModelParams& params = {},
                            double nu = 1.0);

}  // namespace qlb
