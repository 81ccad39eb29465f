#include "qlb/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qlb {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

template <class T>
T as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(where, std::string("wrong type (") + e.what() + ")");
  }
}

template <class T>
T value_or(const Json& j, const char* key, T fallback, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return as<T>(*it, where + "." + key);
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return it.key() == k; }) == allowed.end()) {
      fail(where, "unknown key '" + it.key() + "'");
    }
  }
}

SpaceSpec parse_space(const Json& j, const std::string& where) {
  SpaceSpec s;
  s.type = as<std::string>(member(j, "type", where), where + ".type");
  if (s.type == "chain") {
    check_keys(j, {"type", "n"}, where);
    s.n = as<int>(member(j, "n", where), where + ".n");
  } else if (s.type == "grid") {
    check_keys(j, {"type", "nx", "ny", "metric"}, where);
    s.nx = as<int>(member(j, "nx", where), where + ".nx");
    s.ny = as<int>(member(j, "ny", where), where + ".ny");
    s.metric = value_or<std::string>(j, "metric", "l1", where);
    if (s.metric != "l1" && s.metric != "linf") fail(where + ".metric", "unknown metric " + s.metric);
  } else if (s.type == "explicit") {
    check_keys(j, {"type", "table"}, where);
    s.table = as<std::vector<std::vector<double>>>(member(j, "table", where), where + ".table");
  } else {
    fail(where + ".type", "unknown space descriptor '" + s.type + "'");
  }
  return s;
}

DecaySpec parse_decay(const Json& j, const std::string& where) {
  DecaySpec s;
  s.type = as<std::string>(member(j, "type", where), where + ".type");
  if (s.type == "power") {
    check_keys(j, {"type", "alpha"}, where);
    s.alpha = as<double>(member(j, "alpha", where), where + ".alpha");
  } else if (s.type == "weighted") {
    check_keys(j, {"type", "a", "base"}, where);
    s.a = as<double>(member(j, "a", where), where + ".a");
    s.base = std::make_shared<DecaySpec>(parse_decay(member(j, "base", where), where + ".base"));
  } else if (s.type == "table") {
    check_keys(j, {"type", "points", "file"}, where);
    if (j.contains("file")) {
      s.file = as<std::string>(j["file"], where + ".file");
    } else {
      s.points = as<std::vector<std::pair<double, double>>>(member(j, "points", where),
                                                            where + ".points");
    }
  } else {
    fail(where + ".type", "unknown decay descriptor '" + s.type + "'");
  }
  return s;
}

ObservableSpec parse_observable(const Json& j, const std::string& where) {
  check_keys(j, {"support", "op"}, where);
  ObservableSpec o;
  o.support = as<std::vector<int>>(member(j, "support", where), where + ".support");
  o.op = as<std::string>(member(j, "op", where), where + ".op");
  return o;
}

InteractionSpec parse_interaction(const Json& j, const std::string& where) {
  InteractionSpec s;
  s.family = as<std::string>(member(j, "family", where), where + ".family");
  if (s.family == "tfim_dissipative") {
    check_keys(j, {"family", "J", "h", "gamma"}, where);
    s.J = as<double>(member(j, "J", where), where + ".J");
    s.h = as<double>(member(j, "h", where), where + ".h");
    s.gamma = as<double>(member(j, "gamma", where), where + ".gamma");
  } else if (s.family == "long_range_zz") {
    check_keys(j, {"family", "J", "alpha_int", "gamma"}, where);
    s.J = as<double>(member(j, "J", where), where + ".J");
    s.alpha_int = as<double>(member(j, "alpha_int", where), where + ".alpha_int");
    s.gamma = as<double>(member(j, "gamma", where), where + ".gamma");
  } else if (s.family == "explicit") {
    check_keys(j, {"family", "terms"}, where);
    const Json& terms = member(j, "terms", where);
    if (!terms.is_array()) fail(where + ".terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const std::string w = where + ".terms[" + std::to_string(i) + "]";
      check_keys(terms[i], {"label", "support", "H", "kraus"}, w);
      TermSpec t;
      t.label = value_or<std::string>(terms[i], "label", "term" + std::to_string(i), w);
      t.support = as<std::vector<int>>(member(terms[i], "support", w), w + ".support");
      t.H = value_or<std::string>(terms[i], "H", "", w);
      t.kraus = value_or<std::vector<std::string>>(terms[i], "kraus", {}, w);
      s.terms.push_back(std::move(t));
    }
  } else {
    fail(where + ".family", "unknown interaction descriptor '" + s.family + "'");
  }
  return s;
}

int space_size(const SpaceSpec& s) {
  if (s.type == "chain") return s.n;
  if (s.type == "grid") return s.nx * s.ny;
  return static_cast<int>(s.table.size());
}

void check_sites(const std::vector<int>& sites, int n, const std::string& where) {
  if (sites.empty()) fail(where, "empty support");
  for (int s : sites) {
    if (s < 0 || s >= n) {
      fail(where, "dangling site " + std::to_string(s) + " (space has " + std::to_string(n) +
                      " sites)");
    }
  }
}

// ---- operator literals ----

struct Token {
  enum Kind { number, imag, op, star, plus, minus, end } kind;
  double value = 0.0;
  char name = 0;
  int site = -1;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& text, const std::string& where) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text.substr(i), &used);
      } catch (const std::exception&) {
        fail(where, "bad number at column " + std::to_string(i + 1));
      }
      out.push_back({Token::number, v, 0, -1, i});
      i += used;
    } else if (c == 'i') {
      out.push_back({Token::imag, 0.0, 0, -1, i});
      ++i;
    } else if (std::string("XYZPMI").find(c) != std::string::npos) {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      const int site = j > i + 1 ? std::stoi(text.substr(i + 1, j - i - 1)) : -1;
      if (site < 0 && c != 'I') fail(where, std::string("operator ") + c + " needs a site index");
      out.push_back({Token::op, 0.0, c, site, i});
      i = j;
    } else if (c == '*') {
      out.push_back({Token::star, 0.0, 0, -1, i++});
    } else if (c == '+') {
      out.push_back({Token::plus, 0.0, 0, -1, i++});
    } else if (c == '-') {
      out.push_back({Token::minus, 0.0, 0, -1, i++});
    } else {
      fail(where, std::string("unexpected character '") + c + "' at column " + std::to_string(i + 1));
    }
  }
  out.push_back({Token::end, 0.0, 0, -1, text.size()});
  return out;
}

}  // namespace

Matrix parse_operator(const std::string& text, const SiteSet& support, const SiteDims& dims,
                      const std::string& where) {
  const int d = dims.total(support);
  Matrix total = Matrix::Zero(d, d);
  const std::vector<Token> tokens = tokenize(text, where);
  std::size_t k = 0;
  auto expect_factor = [&](const Token& t) {
    if (t.kind != Token::number && t.kind != Token::imag && t.kind != Token::op) {
      fail(where, "expected a factor at column " + std::to_string(t.pos + 1));
    }
  };
  if (tokens[0].kind == Token::end) fail(where, "empty operator");
  while (tokens[k].kind != Token::end) {
    double sign = 1.0;
    while (tokens[k].kind == Token::plus || tokens[k].kind == Token::minus) {
      if (tokens[k].kind == Token::minus) sign = -sign;
      ++k;
    }
    cplx coeff = sign;
    Matrix term = Matrix::Identity(d, d);
    expect_factor(tokens[k]);
    while (true) {
      const Token& t = tokens[k];
      expect_factor(t);
      if (t.kind == Token::number) {
        coeff *= t.value;
      } else if (t.kind == Token::imag) {
        coeff *= cplx(0.0, 1.0);
      } else if (t.name != 'I' || t.site >= 0) {
        if (!support.contains(t.site)) {
          fail(where, "dangling site " + std::to_string(t.site) + " (support " +
                          support.to_string() + ")");
        }
        if (dims.of(t.site) != 2) fail(where, "named operators need a qubit site");
        term = term * embed_matrix(named_operator(t.name), SiteSet{t.site}, support, dims);
      }
      ++k;
      if (tokens[k].kind != Token::star) break;
      ++k;
    }
    total += coeff * term;
    if (tokens[k].kind != Token::end && tokens[k].kind != Token::plus &&
        tokens[k].kind != Token::minus) {
      fail(where, "expected '+', '-' or '*' at column " + std::to_string(tokens[k].pos + 1));
    }
  }
  return total;
}

Matrix parse_density(const std::string& text, const std::string& where) {
  Matrix m = Matrix::Zero(2, 2);
  if (text == "up") m(0, 0) = 1.0;
  else if (text == "down") m(1, 1) = 1.0;
  else if (text == "mixed") m = 0.5 * Matrix::Identity(2, 2);
  else if (text == "plus") m.setConstant(0.5);
  else if (text == "minus") m << 0.5, -0.5, -0.5, 0.5;
  else fail(where, "unknown density literal '" + text + "'");
  return m;
}

const std::vector<std::string>& known_theorems() {
  static const std::vector<std::string> names = {
      "appLRB",     "NVZ",         "frLRB",      "dyn_diff", "gen_LRB",
      "gen_LRB_analytic", "gen_sl_app", "lemma_nos", "cor_general", "poly_lrb",
      "sl_poly",    "cor_poly",    "g_decaying", "steadystate1", "fp_exponential",
      "fp_poly"};
  return names;
}

ExperimentConfig parse_config(const Json& j) {
  const std::string root = "config";
  check_keys(j, {"space", "decay", "nu", "interaction", "observables", "K", "grids", "theorems",
                 "poly", "state", "fixed_point", "seed", "output"},
             root);
  ExperimentConfig c;
  c.space = parse_space(member(j, "space", root), "space");
  c.decay = parse_decay(member(j, "decay", root), "decay");
  c.nu = value_or<double>(j, "nu", 1.0, root);
  c.interaction = parse_interaction(member(j, "interaction", root), "interaction");

  const Json& obs = member(j, "observables", root);
  check_keys(obs, {"A", "B"}, "observables");
  c.A = parse_observable(member(obs, "A", "observables"), "observables.A");
  c.B = parse_observable(member(obs, "B", "observables"), "observables.B");

  if (j.contains("K")) {
    const Json& k = j["K"];
    c.K.type = as<std::string>(member(k, "type", "K"), "K.type");
    if (c.K.type == "commutator") {
      check_keys(k, {"type", "op"}, "K");
      if (k.contains("op")) c.K.op = parse_observable(k["op"], "K.op");
    } else if (c.K.type == "explicit") {
      check_keys(k, {"type", "support", "matrix"}, "K");
      c.K.support = as<std::vector<int>>(member(k, "support", "K"), "K.support");
      c.K.matrix = as<std::vector<std::vector<std::pair<double, double>>>>(
          member(k, "matrix", "K"), "K.matrix");
    } else {
      fail("K.type", "unknown observation map '" + c.K.type + "'");
    }
  }

  if (j.contains("grids")) {
    const Json& g = j["grids"];
    check_keys(g, {"t", "R", "r"}, "grids");
    c.grids.t = value_or<std::vector<double>>(g, "t", {0.0}, "grids");
    c.grids.R = value_or<std::vector<double>>(g, "R", {1.0}, "grids");
    c.grids.r = value_or<std::vector<double>>(g, "r", {1.0}, "grids");
  } else {
    c.grids = {{0.0}, {1.0}, {1.0}};
  }
  if (c.grids.t.empty() || c.grids.R.empty() || c.grids.r.empty()) fail("grids", "empty grid");
  for (double t : c.grids.t) {
    if (!(t >= 0)) fail("grids.t", "times must be nonnegative");
  }
  for (double R : c.grids.R) {
    if (!(R > 0)) fail("grids.R", "truncation ranges must be positive");
  }
  for (double r : c.grids.r) {
    if (!(r >= 0)) fail("grids.r", "radii must be nonnegative");
  }

  if (j.contains("theorems")) {
    c.theorems = as<std::vector<std::string>>(j["theorems"], "theorems");
    for (const std::string& name : *c.theorems) {
      const auto& known = known_theorems();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        fail("theorems", "unknown theorem '" + name + "'");
      }
    }
  }
  if (j.contains("poly")) {
    const Json& p = j["poly"];
    check_keys(p, {"epsilon", "delta", "eta"}, "poly");
    c.poly.epsilon = value_or<double>(p, "epsilon", c.poly.epsilon, "poly");
    c.poly.delta = value_or<double>(p, "delta", c.poly.delta, "poly");
    c.poly.eta = value_or<double>(p, "eta", c.poly.eta, "poly");
  }
  if (j.contains("state")) {
    const Json& s = j["state"];
    if (s.is_string()) {
      c.state.type = s.get<std::string>();
    } else {
      check_keys(s, {"type", "sites"}, "state");
      c.state.type = as<std::string>(member(s, "type", "state"), "state.type");
      c.state.sites = value_or<std::vector<std::string>>(s, "sites", {}, "state");
    }
    if (c.state.type != "maximally_mixed" && c.state.type != "stationary" &&
        c.state.type != "product") {
      fail("state", "unknown state descriptor '" + c.state.type + "'");
    }
  }
  if (j.contains("fixed_point")) {
    const Json& f = j["fixed_point"];
    check_keys(f, {"t_grid", "a"}, "fixed_point");
    c.fixed_point.t_grid = value_or<std::vector<double>>(f, "t_grid", {}, "fixed_point");
    c.fixed_point.a = value_or<double>(f, "a", c.fixed_point.a, "fixed_point");
  }
  c.seed = value_or<std::uint64_t>(j, "seed", 0, root);
  if (j.contains("output")) {
    const Json& o = j["output"];
    check_keys(o, {"dir", "format"}, "output");
    c.output.dir = value_or<std::string>(o, "dir", c.output.dir, "output");
    c.output.format = value_or<std::string>(o, "format", c.output.format, "output");
    if (c.output.format != "csv" && c.output.format != "json" && c.output.format != "both") {
      fail("output.format", "expected csv, json or both");
    }
  }

  // Cross references.
  const int n = space_size(c.space);
  if (n < 1) fail("space", "space needs at least one site");
  const SiteDims dims = SiteDims::qubits(n);
  check_sites(c.A.support, n, "observables.A.support");
  check_sites(c.B.support, n, "observables.B.support");
  parse_operator(c.A.op, SiteSet(c.A.support), dims, "observables.A.op");
  parse_operator(c.B.op, SiteSet(c.B.support), dims, "observables.B.op");
  if (c.K.op) {
    check_sites(c.K.op->support, n, "K.op.support");
    parse_operator(c.K.op->op, SiteSet(c.K.op->support), dims, "K.op.op");
  }
  if (c.K.type == "explicit") check_sites(c.K.support, n, "K.support");
  for (std::size_t i = 0; i < c.interaction.terms.size(); ++i) {
    const TermSpec& t = c.interaction.terms[i];
    const std::string w = "interaction.terms[" + std::to_string(i) + "]";
    check_sites(t.support, n, w + ".support");
    if (!t.H.empty()) parse_operator(t.H, SiteSet(t.support), dims, w + ".H");
    for (std::size_t q = 0; q < t.kraus.size(); ++q) {
      parse_operator(t.kraus[q], SiteSet(t.support), dims, w + ".kraus[" + std::to_string(q) + "]");
    }
  }
  if (c.state.type == "product") {
    if (static_cast<int>(c.state.sites.size()) != n) {
      fail("state.sites", "product state needs one density per site");
    }
    for (std::size_t i = 0; i < c.state.sites.size(); ++i) {
      parse_density(c.state.sites[i], "state.sites[" + std::to_string(i) + "]");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return parse_config(j);
}

namespace {

Json decay_json(const DecaySpec& d) {
  Json j;
  j["type"] = d.type;
  if (d.type == "power") j["alpha"] = d.alpha;
  if (d.type == "weighted") {
    j["a"] = d.a;
    j["base"] = decay_json(*d.base);
  }
  if (d.type == "table") {
    if (!d.file.empty()) j["file"] = d.file;
    else j["points"] = d.points;
  }
  return j;
}

Json observable_json(const ObservableSpec& o) { return Json{{"support", o.support}, {"op", o.op}}; }

}  // namespace

Json to_json(const ExperimentConfig& c) {
  Json j;
  Json space;
  space["type"] = c.space.type;
  if (c.space.type == "chain") space["n"] = c.space.n;
  if (c.space.type == "grid") {
    space["nx"] = c.space.nx;
    space["ny"] = c.space.ny;
    space["metric"] = c.space.metric;
  }
  if (c.space.type == "explicit") space["table"] = c.space.table;
  j["space"] = space;
  j["decay"] = decay_json(c.decay);
  j["nu"] = c.nu;
  Json inter;
  inter["family"] = c.interaction.family;
  if (c.interaction.family == "tfim_dissipative") {
    inter["J"] = c.interaction.J;
    inter["h"] = c.interaction.h;
    inter["gamma"] = c.interaction.gamma;
  } else if (c.interaction.family == "long_range_zz") {
    inter["J"] = c.interaction.J;
    inter["alpha_int"] = c.interaction.alpha_int;
    inter["gamma"] = c.interaction.gamma;
  } else {
    Json terms = Json::array();
    for (const TermSpec& t : c.interaction.terms) {
      terms.push_back(Json{{"label", t.label}, {"support", t.support}, {"H", t.H}, {"kraus", t.kraus}});
    }
    inter["terms"] = terms;
  }
  j["interaction"] = inter;
  j["observables"] = Json{{"A", observable_json(c.A)}, {"B", observable_json(c.B)}};
  Json k;
  k["type"] = c.K.type;
  if (c.K.op) k["op"] = observable_json(*c.K.op);
  if (c.K.type == "explicit") {
    k["support"] = c.K.support;
    k["matrix"] = c.K.matrix;
  }
  j["K"] = k;
  j["grids"] = Json{{"t", c.grids.t}, {"R", c.grids.R}, {"r", c.grids.r}};
  if (c.theorems) j["theorems"] = *c.theorems;
  j["poly"] = Json{{"epsilon", c.poly.epsilon}, {"delta", c.poly.delta}, {"eta", c.poly.eta}};
  Json state;
  state["type"] = c.state.type;
  if (c.state.type == "product") state["sites"] = c.state.sites;
  j["state"] = state;
  j["fixed_point"] = Json{{"t_grid", c.fixed_point.t_grid}, {"a", c.fixed_point.a}};
  j["seed"] = c.seed;
  j["output"] = Json{{"dir", c.output.dir}, {"format", c.output.format}};
  return j;
}

FiniteMetricSpace build_space(const SpaceSpec& s) {
  if (s.type == "chain") return FiniteMetricSpace::chain(s.n);
  if (s.type == "grid") {
    return FiniteMetricSpace::grid(s.nx, s.ny, s.metric == "linf" ? GridMetric::linf : GridMetric::l1);
  }
  return FiniteMetricSpace::from_table(s.table);
}

FFunction build_decay(const DecaySpec& s) {
  if (s.type == "power") return FFunction::power(s.alpha);
  if (s.type == "weighted") return FFunction::weighted(s.a, build_decay(*s.base));
  if (!s.file.empty()) return FFunction::table_file(s.file);
  return FFunction::table(s.points);
}

DissipativeInteraction build_interaction(const InteractionSpec& s, const FiniteMetricSpace& space) {
  if (s.family == "tfim_dissipative") return tfim_dissipative(space, s.J, s.h, s.gamma);
  if (s.family == "long_range_zz") return long_range_zz(space, s.J, s.alpha_int, s.gamma);
  const SiteDims dims = SiteDims::qubits(space.size());
  std::vector<LindbladTerm> terms;
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    const TermSpec& t = s.terms[i];
    const std::string w = "interaction.terms[" + std::to_string(i) + "]";
    const SiteSet support(t.support);
    Matrix h = t.H.empty() ? Matrix() : parse_operator(t.H, support, dims, w + ".H");
    std::vector<Matrix> kraus;
    for (std::size_t q = 0; q < t.kraus.size(); ++q) {
      kraus.push_back(parse_operator(t.kraus[q], support, dims, w + ".kraus[" + std::to_string(q) + "]"));
    }
    terms.push_back(make_term(t.label, support, std::move(h), std::move(kraus), dims));
  }
  return DissipativeInteraction(space, dims, std::move(terms));
}

ObservableOp build_observable(const ObservableSpec& s, const SiteDims& dims, const std::string& where) {
  const SiteSet support(s.support);
  return ObservableOp::local(parse_operator(s.op, support, dims, where), support, dims);
}

}  // namespace qlb
