#include "qlb/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <Eigen/Core>

namespace qlb {

namespace {

double sort_key(double x) { return std::isnan(x) ? -std::numeric_limits<double>::infinity() : x; }

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void sort_reports(std::vector<BoundReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const BoundReport& a, const BoundReport& b) {
    if (a.theorem != b.theorem) return a.theorem < b.theorem;
    if (sort_key(a.t) != sort_key(b.t)) return sort_key(a.t) < sort_key(b.t);
    if (sort_key(a.R) != sort_key(b.R)) return sort_key(a.R) < sort_key(b.R);
    return sort_key(a.r) < sort_key(b.r);
  });
}

void write_csv(std::ostream& out, const std::vector<BoundReport>& reports) {
  out << "theorem,t,R,r,d,lhs,rhs,slack,valid,pass\n";
  for (const BoundReport& r : reports) {
    out << r.theorem << ',' << format_double(r.t) << ',' << format_double(r.R) << ','
        << format_double(r.r) << ',' << format_double(r.d) << ',' << format_double(r.lhs) << ','
        << format_double(r.rhs) << ',' << format_double(r.slack) << ','
        << (r.valid ? "true" : "false") << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

nlohmann::ordered_json reports_json(const std::vector<BoundReport>& reports) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const BoundReport& r : reports) {
    nlohmann::ordered_json j;
    j["theorem"] = r.theorem;
    if (!r.mode.empty()) j["mode"] = r.mode;
    j["model"] = r.model;
    j["t"] = number(r.t);
    j["R"] = number(r.R);
    j["r"] = number(r.r);
    j["d"] = number(r.d);
    j["X"] = r.X.sites();
    j["Y"] = r.Y.sites();
    j["epsilon"] = number(r.epsilon);
    j["delta"] = number(r.delta);
    j["eta"] = number(r.eta);
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["slack"] = number(r.slack);
    j["valid"] = r.valid;
    j["pass"] = r.pass;
    j["violations"] = r.violations;
    rows.push_back(std::move(j));
  }
  return nlohmann::ordered_json{{"reports", rows}};
}

std::map<std::string, Tally> tally(const std::vector<BoundReport>& reports) {
  std::map<std::string, Tally> out;
  for (const BoundReport& r : reports) {
    Tally& t = out[r.theorem];
    if (!r.valid) {
      ++t.invalid;
      continue;
    }
    if (r.pass) ++t.pass;
    else ++t.fail;
    if (std::isfinite(r.slack) && (!t.has_slack || r.slack < t.worst_slack)) {
      t.worst_slack = r.slack;
      t.has_slack = true;
    }
  }
  return out;
}

nlohmann::ordered_json manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["versions"] = {{"qlb", "1.0.0"},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"compiler", __VERSION__}};
  j["wall_seconds"] = m.wall_seconds;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  for (const auto& [name, tl] : m.tallies) {
    t[name] = {{"pass", tl.pass},
               {"fail", tl.fail},
               {"invalid", tl.invalid},
               {"worst_slack", tl.has_slack ? number(tl.worst_slack) : nlohmann::ordered_json()}};
  }
  j["tallies"] = t;
  if (!m.extra.empty()) j["extra"] = m.extra;
  return j;
}

bool all_valid_pass(const std::vector<BoundReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const BoundReport& r) { return !r.valid || r.pass; });
}

}  // namespace qlb
