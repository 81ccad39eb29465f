#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlb/decay.hpp"
#include "qlb/geometry.hpp"
#include "qlb/model.hpp"
#include "qlb/qalgebra.hpp"

namespace qlb {

using Json = nlohmann::ordered_json;

struct SpaceSpec {
  std::string type = "chain";  // chain | grid | explicit
  int n = 0;
  int nx = 0;
  int ny = 0;
  std::string metric = "l1";
  std::vector<std::vector<double>> table;
};

struct DecaySpec {
  std::string type = "power";  // power | weighted | table
  double alpha = 0.0;
  double a = 0.0;
  std::shared_ptr<DecaySpec> base;
  std::vector<std::pair<double, double>> points;
  std::string file;
};

struct TermSpec {
  std::string label;
  std::vector<int> support;
  std::string H;
  std::vector<std::string> kraus;
};

struct InteractionSpec {
  std::string family = "tfim_dissipative";  // tfim_dissipative | long_range_zz | explicit
  double J = 0.0;
  double h = 0.0;
  double gamma = 0.0;
  double alpha_int = 0.0;
  std::vector<TermSpec> terms;
};

struct ObservableSpec {
  std::vector<int> support;
  std::string op;
};

struct KSpec {
  std::string type = "commutator";  // commutator | explicit
  /// commutator: the operator B of A -> [B, A]; defaults to observable B.
  std::optional<ObservableSpec> op;
  /// explicit: super-operator on vec(A_support) as rows of [re, im] pairs.
  std::vector<int> support;
  std::vector<std::vector<std::pair<double, double>>> matrix;
};

struct GridSpec {
  std::vector<double> t;
  std::vector<double> R;
  std::vector<double> r;
};

struct PolySpec {
  double epsilon = 0.5;
  double delta = 0.3;
  double eta = 0.02;
};

struct StateSpec {
  std::string type = "maximally_mixed";  // maximally_mixed | stationary | product
  std::vector<std::string> sites;
};

struct FixedPointSpec {
  std::vector<double> t_grid;
  double a = 0.5;
};

struct OutputSpec {
  std::string dir = "out";
  std::string format = "both";
};

struct ExperimentConfig {
  SpaceSpec space;
  DecaySpec decay;
  double nu = 1.0;
  InteractionSpec interaction;
  ObservableSpec A;
  ObservableSpec B;
  KSpec K;
  GridSpec grids;
  std::optional<std::vector<std::string>> theorems;
  PolySpec poly;
  StateSpec state;
  FixedPointSpec fixed_point;
  std::uint64_t seed = 0;
  OutputSpec output;
};

/// Every theorem name understood by the runner.
const std::vector<std::string>& known_theorems();

ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);
Json to_json(const ExperimentConfig& c);

/// Operator literal such as "0.5*Z0*Z1 + X0 - i*Y2" on `support`.
/// `where` names the config location used in error messages.
Matrix parse_operator(const std::string& text, const SiteSet& support, const SiteDims& dims,
                      const std::string& where);

/// Single-qubit density literal: up, down, mixed, plus, minus.
Matrix parse_density(const std::string& text, const std::string& where);

FiniteMetricSpace build_space(const SpaceSpec& s);
FFunction build_decay(const DecaySpec& s);
DissipativeInteraction build_interaction(const InteractionSpec& s, const FiniteMetricSpace& space);
ObservableOp build_observable(const ObservableSpec& s, const SiteDims& dims, const std::string& where);

}  // namespace qlb
