#include "qlb/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

namespace qlb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool wants(const std::vector<std::string>& theorems, const char* name) {
  return std::find(theorems.begin(), theorems.end(), name) != theorems.end();
}

std::vector<double> time_grid(double v, int points) {
  std::vector<double> t;
  const double tmax = v > 0 ? 2.0 / v : 1.0;
  for (int i = 0; i < points; ++i) t.push_back(points == 1 ? 0.0 : tmax * i / (points - 1));
  return t;
}

StateFunctional random_product_state(const ModelContext& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Matrix> sites;
  for (Site s : m.lambda()) {
    (void)s;
    Vector psi(2);
    psi << cplx(normal(rng), normal(rng)), cplx(normal(rng), normal(rng));
    psi.normalize();
    Matrix rho = psi * psi.adjoint();
    rho /= rho.trace();
    sites.push_back(rho);
  }
  return StateFunctional::product(sites, m.lambda(), m.interaction().dims());
}

}  // namespace

std::vector<std::string> theorem_family(const std::string& command) {
  if (command == "certify-lrb") {
    return {"appLRB", "NVZ", "frLRB", "gen_LRB", "gen_LRB_analytic", "poly_lrb"};
  }
  if (command == "certify-truncation") return {"dyn_diff"};
  if (command == "certify-local") return {"gen_sl_app", "lemma_nos", "sl_poly"};
  if (command == "certify-correlations") return {"g_decaying", "cor_general", "cor_poly"};
  if (command == "fixed-point") return {"steadystate1", "fp_exponential", "fp_poly"};
  if (command == "sweep") return known_theorems();
  throw ConfigError("unknown command '" + command + "'");
}

std::vector<std::string> select_theorems(const ExperimentConfig& config, const std::string& command) {
  const std::vector<std::string> family = theorem_family(command);
  if (!config.theorems) {
    if (command != "sweep" || !config.fixed_point.t_grid.empty()) return family;
    // A sweep without a fixed_point section skips the fixed-point family.
    const std::vector<std::string> fixed = theorem_family("fixed-point");
    std::vector<std::string> out;
    for (const std::string& name : family) {
      if (!wants(fixed, name.c_str())) out.push_back(name);
    }
    return out;
  }
  std::vector<std::string> out;
  for (const std::string& name : *config.theorems) {
    if (wants(family, name.c_str()) && !wants(out, name.c_str())) out.push_back(name);
  }
  return out;
}

ModelContext build_context(const ExperimentConfig& config) {
  FiniteMetricSpace space = build_space(config.space);
  DissipativeInteraction interaction = build_interaction(config.interaction, space);
  const SiteDims& dims = interaction.dims();
  ObservableOp a = build_observable(config.A, dims, "observables.A.op");
  ObservableOp b = build_observable(config.B, dims, "observables.B.op");
  std::optional<ObservationMap> k;
  if (config.K.type == "commutator") {
    k = ObservationMap::commutator(config.K.op ? build_observable(*config.K.op, dims, "K.op.op") : b);
  } else {
    const int n = static_cast<int>(config.K.matrix.size());
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(config.K.matrix[i].size()) != n) throw ConfigError("K.matrix: not square");
      for (int j = 0; j < n; ++j) s(i, j) = cplx(config.K.matrix[i][j].first, config.K.matrix[i][j].second);
    }
    k = ObservationMap::general(s, SiteSet(config.K.support), dims);
  }
  return ModelContext(std::move(interaction), build_decay(config.decay), config.nu, std::move(a),
                      std::move(b), std::move(*k), "config");
}

StateFunctional build_state(const ExperimentConfig& config, const ModelContext& m) {
  const SiteDims& dims = m.interaction().dims();
  if (config.state.type == "product") {
    std::vector<Matrix> sites;
    for (std::size_t i = 0; i < config.state.sites.size(); ++i) {
      sites.push_back(parse_density(config.state.sites[i], "state.sites[" + std::to_string(i) + "]"));
    }
    return StateFunctional::product(sites, m.lambda(), dims);
  }
  if (config.state.type == "stationary") {
    return StateFunctional::from_density(stationary_state(m.full()), m.lambda(), dims);
  }
  return StateFunctional::maximally_mixed(m.lambda(), dims);
}

RunResult run_experiment(const ExperimentConfig& config, const std::vector<std::string>& theorems,
                         double tol) {
  RunResult result;
  const auto start = Clock::now();
  if (theorems.empty()) {
    result.manifest.config_hash = config_hash(config);
    result.manifest.wall_seconds["total"] = 0.0;
    return result;
  }
  const ModelContext m = build_context(config);
  const PolyParams p{config.poly.epsilon, config.poly.delta};
  const GridSpec& g = config.grids;
  auto& out = result.reports;
  auto timed = [&](const char* name, auto&& body) {
    if (!wants(theorems, name)) return;
    const auto t0 = Clock::now();
    body();
    result.manifest.wall_seconds[name] = seconds_since(t0);
  };
  timed("appLRB", [&] {
    for (double t : g.t)
      for (double R : g.R) out.push_back(certify_appLRB(m, t, R, tol));
  });
  timed("NVZ", [&] {
    for (double t : g.t) out.push_back(certify_NVZ(m, t, tol));
  });
  timed("frLRB", [&] {
    for (double t : g.t) out.push_back(certify_frLRB(m, t, tol));
  });
  timed("dyn_diff", [&] {
    for (double t : g.t)
      for (double R : g.R)
        for (double r : g.r) out.push_back(certify_dyn_diff(m, t, R, r, tol));
  });
  timed("gen_LRB", [&] {
    for (double t : g.t)
      for (double R : g.R)
        for (double r : g.r) out.push_back(certify_gen_LRB(m, t, R, r, FirstTerm::exact, tol));
  });
  timed("gen_LRB_analytic", [&] {
    for (double t : g.t)
      for (double R : g.R)
        for (double r : g.r) out.push_back(certify_gen_LRB(m, t, R, r, FirstTerm::analytic, tol));
  });
  timed("gen_sl_app", [&] {
    for (double t : g.t)
      for (double r : g.r) out.push_back(certify_gen_sl_app(m, t, r, tol));
  });
  timed("lemma_nos", [&] {
    for (double r : g.r)
      for (BoundReport& rep : certify_lemma_nos(m, r, tol)) out.push_back(std::move(rep));
  });
  timed("cor_general", [&] {
    for (double t : g.t)
      for (double r : g.r) out.push_back(certify_cor_general(m, t, r, tol));
  });
  timed("poly_lrb", [&] {
    for (double t : g.t) out.push_back(certify_poly_lrb(m, t, p, tol));
  });
  timed("sl_poly", [&] {
    for (double t : g.t)
      for (double r : g.r) out.push_back(certify_sl_poly(m, t, r, p, tol));
  });
  timed("cor_poly", [&] {
    for (double t : g.t)
      for (double r : g.r) out.push_back(certify_cor_poly(m, t, r, p, tol));
  });
  timed("g_decaying", [&] {
    const StateFunctional omega = build_state(config, m);
    for (double t : g.t)
      for (double r : g.r) out.push_back(certify_g_decaying(m, omega, t, r, tol));
  });
  const bool ss = wants(theorems, "steadystate1");
  const bool fpe = wants(theorems, "fp_exponential");
  const bool fpp = wants(theorems, "fp_poly");
  if (ss || fpe || fpp) {
    const auto t0 = Clock::now();
    if (config.fixed_point.t_grid.empty()) throw ConfigError("fixed_point.t_grid: empty grid");
    const StateFunctional omega = build_state(config, m);
    FixedPointReports fp = certify_fixed_point(m, omega, config.fixed_point.t_grid,
                                               config.fixed_point.a, p, config.poly.eta, fpe, fpp, tol);
    for (BoundReport& rep : fp.reports) {
      if (rep.theorem == "steadystate1" && !ss) continue;
      out.push_back(std::move(rep));
    }
    const FixedPointAnalysis& a = fp.analysis;
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const EnvelopeSample& s : a.envelope.samples) {
      samples.push_back({{"t", s.t}, {"lower", s.lower}, {"upper", s.upper},
                         {"eta_lower", 0.5 * s.lower}, {"eta_upper", 0.5 * s.upper}});
    }
    result.manifest.extra["fixed_point"] = {{"gap", a.gap.gamma},
                                            {"omega0", a.gap.omega0},
                                            {"radius_relative_error", a.gap.radius_error},
                                            {"envelope_c", a.envelope.c},
                                            {"samples", samples}};
    result.fixed_point = std::move(fp.analysis);
    result.manifest.wall_seconds["fixed_point"] = seconds_since(t0);
  }
  sort_reports(out);
  result.manifest.config_hash = config_hash(config);
  result.manifest.tallies = tally(out);
  result.manifest.wall_seconds["total"] = seconds_since(start);
  return result;
}

std::vector<BoundReport> random_model_reports(const ModelContext& m, const SuiteOptions& options,
                                              std::uint64_t state_seed) {
  std::vector<BoundReport> out;
  const double tol = options.tol;
  const StateFunctional omega = random_product_state(m, state_seed);
  for (double t : time_grid(m.constants().v, options.t_points)) {
    out.push_back(certify_NVZ(m, t, tol));
    out.push_back(certify_frLRB(m, t, tol));
    for (double R : options.R) {
      out.push_back(certify_appLRB(m, t, R, tol));
      for (double r : options.r) {
        out.push_back(certify_dyn_diff(m, t, R, r, tol));
        out.push_back(certify_gen_LRB(m, t, R, r, FirstTerm::exact, tol));
        out.push_back(certify_gen_LRB(m, t, R, r, FirstTerm::analytic, tol));
      }
    }
    for (double r : options.r) {
      out.push_back(certify_gen_sl_app(m, t, r, tol));
      out.push_back(certify_cor_general(m, t, r, tol));
      out.push_back(certify_g_decaying(m, omega, t, r, tol));
    }
  }
  for (double r : options.r) {
    for (BoundReport& rep : certify_lemma_nos(m, r, tol)) out.push_back(std::move(rep));
  }
  return out;
}

RunResult run_random_suite(const SuiteOptions& options) {
  if (options.models < 0) throw ConfigError("--models must be nonnegative");
  RunResult result;
  const auto start = Clock::now();
  nlohmann::ordered_json hashes = nlohmann::ordered_json::array();
  for (int i = 0; i < options.models; ++i) {
    const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(i);
    const RandomModel rm = random_model(seed, options.params);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(rm.hash));
    hashes.push_back({{"seed", seed}, {"hash", hex}});
    const ModelContext m = random_context(seed, options.params);
    for (BoundReport& rep : random_model_reports(m, options, seed ^ 0xabcdefULL)) {
      result.reports.push_back(std::move(rep));
    }
  }
  sort_reports(result.reports);
  result.manifest.command = "random-suite";
  result.manifest.tallies = tally(result.reports);
  result.manifest.extra["models"] = hashes;
  result.manifest.wall_seconds["total"] = seconds_since(start);
  return result;
}

void write_outputs(const RunResult& result, const std::string& dir, const std::string& format) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  if (format == "csv" || format == "both") {
    std::ofstream csv(base / "reports.csv");
    write_csv(csv, result.reports);
  }
  if (format == "json" || format == "both") {
    std::ofstream js(base / "reports.json");
    js << reports_json(result.reports).dump(2) << '\n';
  }
  std::ofstream man(base / "manifest.json");
  man << manifest_json(result.manifest).dump(2) << '\n';
}

std::string config_hash(const ExperimentConfig& config) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json(config).dump())));
  return hex;
}

}  // namespace qlb
