#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlb/bounds.hpp"

namespace qlb {

/// Shortest text that reads back to the same double: 17 significant digits, nan/inf spelled out.
std::string format_double(double x);

/// Stable sort by (theorem, t, R, r); NaN parameters sort first.
void sort_reports(std::vector<BoundReport>& reports);

void write_csv(std::ostream& out, const std::vector<BoundReport>& reports);
nlohmann::ordered_json reports_json(const std::vector<BoundReport>& reports);

struct Tally {
  int pass = 0;
  int fail = 0;
  int invalid = 0;
  double worst_slack = 0.0;
  bool has_slack = false;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::map<std::string, double> wall_seconds;
  std::map<std::string, Tally> tallies;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

/// Counts every report; invalid rows are tallied separately and never count as failures.
std::map<std::string, Tally> tally(const std::vector<BoundReport>& reports);

nlohmann::ordered_json manifest_json(const RunManifest& m);

/// True iff every valid report passes.
bool all_valid_pass(const std::vector<BoundReport>& reports);

}  // namespace qlb
