#include "pursuit/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pursuit/errors.hpp"

namespace pursuit {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "run.mode",           "run.n",
      "run.seed",           "run.out",
      "params.lambda",      "params.mu",
      "params.mu_b",        "params.alpha",
      "params.alpha0",      "params.nu",
      "integration.T",      "integration.dt",
      "integration.record_every", "integration.window",
      "initial.kind",       "initial.half_width",
      "initial.beacon_x",   "initial.beacon_y",
      "initial.kappa1",     "initial.rho1",
      "equilibrium.m",      "equilibrium.direction",
      "manifold.k",         "portrait.kappa_min",
      "portrait.kappa_max", "portrait.kappa_samples",
      "portrait.rho_min",   "portrait.rho_max",
      "portrait.rho_samples", "portrait.seeds",
      "sweep.parameter",    "sweep.from",
      "sweep.to",           "sweep.samples",
      "sweep.workers",
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

// Bare keys resolve within the current section, or by a unique suffix match
// when no section has been opened yet.
std::string resolve_key(const std::string& raw, const std::string& section) {
  const std::string key = trim(raw);
  if (key.find('.') != std::string::npos) {
    if (!known_keys().count(key)) throw ConfigError(key, "unknown key");
    return key;
  }
  if (!section.empty()) {
    const std::string full = section + "." + key;
    if (!known_keys().count(full)) throw ConfigError(full, "unknown key");
    return full;
  }
  std::string match;
  for (const auto& k : known_keys()) {
    if (k.size() > key.size() && k.compare(k.size() - key.size(), key.size(), key) == 0 &&
        k[k.size() - key.size() - 1] == '.') {
      if (!match.empty()) throw ConfigError(key, "ambiguous key; qualify it with a section");
      match = k;
    }
  }
  if (match.empty()) throw ConfigError(key, "unknown key");
  return match;
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + t + "'");
  return v;
}

long long parse_int(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError(key, "expected an integer, got '" + t + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError(key, "expected an unsigned 64-bit integer, got '" + t + "'");
  return v;
}

// Scalar broadcast to n entries, or an explicit list of exactly n.
std::vector<double> per_agent(const std::string& text, int n, const std::string& key, bool angle) {
  const auto parts = split(text, ',');
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(angle ? parse_angle(p, key) : parse_double(p, key));
  if (out.size() == 1) return std::vector<double>(n, out.front());
  if (static_cast<int>(out.size()) != n)
    throw ConfigError(key, "expected 1 or n=" + std::to_string(n) + " values, got " + std::to_string(out.size()));
  return out;
}

class Reader {
 public:
  explicit Reader(const std::map<std::string, std::string>& e) : e_(e) {}
  bool has(const std::string& k) const { return e_.count(k) != 0; }
  const std::string& raw(const std::string& k) const {
    const auto it = e_.find(k);
    if (it == e_.end()) throw ConfigError(k, "required key missing");
    return it->second;
  }
  double num(const std::string& k, double fallback) const { return has(k) ? parse_double(raw(k), k) : fallback; }
  double ang(const std::string& k, double fallback) const { return has(k) ? parse_angle(raw(k), k) : fallback; }
  long long integer(const std::string& k, long long fallback) const {
    return has(k) ? parse_int(raw(k), k) : fallback;
  }

 private:
  const std::map<std::string, std::string>& e_;
};

void check_assumptions(const ControlParams& p, bool a1, bool a2, bool a3, bool a4, RunMode mode) {
  const HomogeneityFlags f = HomogeneityFlags::of(p);
  const std::string why = std::string("must be common to all agents for ") + to_string(mode) + " mode";
  if (a1 && !f.equal_speed) throw ConfigError("params.nu", why);
  if (a2 && !f.equal_gains) throw ConfigError("params.mu_b", "params.mu and params.mu_b " + why);
  if (a3 && !f.common_alpha0) throw ConfigError("params.alpha0", why);
  if (a4 && !f.common_alpha) throw ConfigError("params.alpha", why);
}

void require_k(const RunConfig& c) {
  if (!c.k) throw ConfigError("manifold.k", std::string("required for ") + to_string(c.mode) + " mode");
  if (*c.k < 1 || *c.k > c.n - 1)
    throw ConfigError("manifold.k", "must satisfy 1 <= k <= n-1 (got " + std::to_string(*c.k) + ")");
}

void require_m(const RunConfig& c) {
  if (!c.m) throw ConfigError("equilibrium.m", std::string("required for ") + to_string(c.mode) + " mode");
  if (*c.m < 0) throw ConfigError("equilibrium.m", "must be non-negative");
}

void validate(RunConfig& c) {
  const ControlParams& p = c.params;
  if (!(p.lambda > 0.0 && p.lambda < 1.0))
    throw ConfigError("params.lambda", "must lie in the open interval (0, 1)");
  for (int i = 0; i < c.n; ++i) {
    if (!(p.mu[i] > 0)) throw ConfigError("params.mu", "gains must be positive");
    if (!(p.mu_b[i] > 0)) throw ConfigError("params.mu_b", "gains must be positive");
    if (!(p.nu[i] > 0)) throw ConfigError("params.nu", "speeds must be positive");
  }
  if (!(c.dt > 0)) throw ConfigError("integration.dt", "must be positive");
  if (!(c.duration >= 0)) throw ConfigError("integration.T", "must be non-negative");
  if (c.record_every < 1) throw ConfigError("integration.record_every", "must be at least 1");
  if (!(c.window > 0)) throw ConfigError("integration.window", "must be positive");
  if (!(c.half_width > 0)) throw ConfigError("initial.half_width", "must be positive");
  if (!(c.rho1 > 0)) throw ConfigError("initial.rho1", "must be positive");
  if (c.direction != "both" && c.direction != "ccw" && c.direction != "cw")
    throw ConfigError("equilibrium.direction", "must be one of both, ccw, cw");

  switch (c.mode) {
    case RunMode::Simulate:
      if (c.initial == InitialKind::Equilibrium) {
        require_m(c);
        check_assumptions(p, true, true, true, false, c.mode);
      } else if (c.initial == InitialKind::Lift) {
        require_k(c);
      }
      break;
    case RunMode::ShapeSim:
      check_assumptions(p, true, true, true, false, c.mode);
      if (c.initial == InitialKind::Equilibrium) require_m(c);
      if (c.initial == InitialKind::Lift) require_k(c);
      break;
    case RunMode::Equilibria:
      check_assumptions(p, true, true, true, false, c.mode);
      break;
    case RunMode::Stability:
      check_assumptions(p, true, true, true, true, c.mode);
      require_m(c);
      break;
    case RunMode::PureShape:
      check_assumptions(p, true, true, true, true, c.mode);
      require_k(c);
      break;
    case RunMode::Portrait:
      check_assumptions(p, true, true, true, true, c.mode);
      require_k(c);
      if (c.grid.kappa_samples < 1) throw ConfigError("portrait.kappa_samples", "must be at least 1");
      if (c.grid.rho_samples < 1) throw ConfigError("portrait.rho_samples", "must be at least 1");
      if (!(c.grid.kappa_min > -kPi - 1e-12) || c.grid.kappa_min > c.grid.kappa_max)
        throw ConfigError("portrait.kappa_min", "grid must lie within (-pi, pi] with kappa_min <= kappa_max");
      if (c.grid.kappa_max > kPi + 1e-12) throw ConfigError("portrait.kappa_max", "must not exceed pi");
      if (!(c.grid.rho_min > 0)) throw ConfigError("portrait.rho_min", "must be positive");
      if (c.grid.rho_max < c.grid.rho_min) throw ConfigError("portrait.rho_max", "must be >= rho_min");
      break;
    case RunMode::Sweep: {
      check_assumptions(p, true, true, true, true, c.mode);
      require_m(c);
      static const std::set<std::string> params{"lambda", "alpha", "alpha0", "mu"};
      if (c.sweep_parameter.empty()) throw ConfigError("sweep.parameter", "required for sweep mode");
      if (!params.count(c.sweep_parameter))
        throw ConfigError("sweep.parameter", "must be one of lambda, alpha, alpha0, mu");
      if (c.sweep_samples < 1) throw ConfigError("sweep.samples", "required for sweep mode and must be >= 1");
      if (c.workers < 1) throw ConfigError("sweep.workers", "must be at least 1");
      if (c.sweep_parameter == "lambda") {
        if (!(c.sweep_from > 0 && c.sweep_from < 1)) throw ConfigError("sweep.from", "lambda must lie in (0, 1)");
        if (!(c.sweep_to > 0 && c.sweep_to < 1)) throw ConfigError("sweep.to", "lambda must lie in (0, 1)");
      }
      if (c.sweep_parameter == "mu") {
        if (!(c.sweep_from > 0)) throw ConfigError("sweep.from", "gains must be positive");
        if (!(c.sweep_to > 0)) throw ConfigError("sweep.to", "gains must be positive");
      }
      break;
    }
  }
}

RunConfig build(const std::map<std::string, std::string>& e, RunMode mode) {
  const Reader r(e);
  RunConfig c;
  c.mode = mode;
  c.entries = e;
  if (r.has("run.mode")) {
    const auto m = parse_mode(trim(r.raw("run.mode")));
    if (!m) throw ConfigError("run.mode", "unknown mode '" + r.raw("run.mode") + "'");
    if (*m != mode)
      throw ConfigError("run.mode", std::string("config is for ") + to_string(*m) + " mode, requested " +
                                        to_string(mode));
  }
  const long long n = r.integer("run.n", 0);
  if (!r.has("run.n")) throw ConfigError("run.n", "required key missing");
  if (n < 2) throw ConfigError("run.n", "need at least 2 agents");
  if (n > 4096) throw ConfigError("run.n", "too many agents");
  c.n = static_cast<int>(n);
  if (r.has("run.seed")) c.seed = parse_u64(r.raw("run.seed"), "run.seed");
  if (r.has("run.out")) c.out_dir = trim(r.raw("run.out"));

  ControlParams& p = c.params;
  p.lambda = parse_double(r.raw("params.lambda"), "params.lambda");
  p.mu = r.has("params.mu") ? per_agent(r.raw("params.mu"), c.n, "params.mu", false) : std::vector<double>(c.n, 1.0);
  p.mu_b = r.has("params.mu_b") ? per_agent(r.raw("params.mu_b"), c.n, "params.mu_b", false) : p.mu;
  p.alpha = per_agent(r.raw("params.alpha"), c.n, "params.alpha", true);
  p.alpha0 = per_agent(r.raw("params.alpha0"), c.n, "params.alpha0", true);
  p.nu = r.has("params.nu") ? per_agent(r.raw("params.nu"), c.n, "params.nu", false) : std::vector<double>(c.n, 1.0);

  c.duration = r.num("integration.T", c.duration);
  c.dt = r.num("integration.dt", c.dt);
  c.record_every = static_cast<int>(r.integer("integration.record_every", c.record_every));
  c.window = r.num("integration.window", c.window);

  if (r.has("initial.kind")) {
    const std::string k = trim(r.raw("initial.kind"));
    if (k == "random") c.initial = InitialKind::Random;
    else if (k == "equilibrium") c.initial = InitialKind::Equilibrium;
    else if (k == "lift") c.initial = InitialKind::Lift;
    else throw ConfigError("initial.kind", "must be one of random, equilibrium, lift");
  }
  c.half_width = r.num("initial.half_width", c.half_width);
  c.beacon = {r.num("initial.beacon_x", 0.0), r.num("initial.beacon_y", 0.0)};
  c.kappa1 = r.ang("initial.kappa1", c.kappa1);
  c.rho1 = r.num("initial.rho1", c.rho1);

  if (r.has("equilibrium.m")) c.m = static_cast<int>(r.integer("equilibrium.m", 0));
  if (r.has("equilibrium.direction")) c.direction = trim(r.raw("equilibrium.direction"));
  if (r.has("manifold.k")) c.k = static_cast<int>(r.integer("manifold.k", 0));

  c.grid.kappa_min = r.ang("portrait.kappa_min", c.grid.kappa_min);
  c.grid.kappa_max = r.ang("portrait.kappa_max", c.grid.kappa_max);
  c.grid.kappa_samples = static_cast<int>(r.integer("portrait.kappa_samples", c.grid.kappa_samples));
  c.grid.rho_min = r.num("portrait.rho_min", c.grid.rho_min);
  c.grid.rho_max = r.num("portrait.rho_max", c.grid.rho_max);
  c.grid.rho_samples = static_cast<int>(r.integer("portrait.rho_samples", c.grid.rho_samples));
  if (r.has("portrait.seeds")) {
    for (const auto& item : split(r.raw("portrait.seeds"), ';')) {
      if (item.empty()) continue;
      const auto colon = item.find(':');
      if (colon == std::string::npos)
        throw ConfigError("portrait.seeds", "entries must look like kappa1:rho1 separated by ';'");
      c.portrait_seeds.emplace_back(parse_angle(item.substr(0, colon), "portrait.seeds"),
                                    parse_double(item.substr(colon + 1), "portrait.seeds"));
    }
  }

  if (r.has("sweep.parameter")) c.sweep_parameter = trim(r.raw("sweep.parameter"));
  c.sweep_from = r.ang("sweep.from", 0.0);
  c.sweep_to = r.ang("sweep.to", 0.0);
  c.sweep_samples = static_cast<int>(r.integer("sweep.samples", 0));
  c.workers = static_cast<int>(r.integer("sweep.workers", c.workers));

  validate(c);
  return c;
}

void apply_override(std::map<std::string, std::string>& e, const std::string& ov) {
  const auto eq = ov.find('=');
  if (eq == std::string::npos) throw ConfigError(trim(ov), "override must be key=value");
  e[resolve_key(ov.substr(0, eq), "")] = trim(ov.substr(eq + 1));
}

}  // namespace

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::Simulate: return "simulate";
    case RunMode::ShapeSim: return "shape-sim";
    case RunMode::Equilibria: return "equilibria";
    case RunMode::Stability: return "stability";
    case RunMode::PureShape: return "pure-shape";
    case RunMode::Portrait: return "portrait";
    case RunMode::Sweep: return "sweep";
  }
  return "?";
}

std::optional<RunMode> parse_mode(const std::string& name) {
  for (RunMode m : {RunMode::Simulate, RunMode::ShapeSim, RunMode::Equilibria, RunMode::Stability,
                    RunMode::PureShape, RunMode::Portrait, RunMode::Sweep})
    if (name == to_string(m)) return m;
  return std::nullopt;
}

double parse_angle(const std::string& text, const std::string& key) {
  std::string t = trim(text);
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    std::string head = trim(t.substr(0, t.size() - 2));
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    double factor = 1.0;
    if (head.empty() || head == "+") factor = 1.0;
    else if (head == "-") factor = -1.0;
    else if (const auto slash = head.find('/'); slash != std::string::npos) {
      const double num = parse_double(head.substr(0, slash), key);
      const double den = parse_double(head.substr(slash + 1), key);
      if (den == 0.0) throw ConfigError(key, "zero denominator in angle '" + t + "'");
      factor = num / den;
    } else {
      factor = parse_double(head, key);
    }
    return factor * kPi;
  }
  // "pi/4" style.
  if (t.rfind("pi/", 0) == 0 || t.rfind("-pi/", 0) == 0) {
    const bool neg = t[0] == '-';
    const double den = parse_double(t.substr(neg ? 4 : 3), key);
    if (den == 0.0) throw ConfigError(key, "zero denominator in angle '" + t + "'");
    return (neg ? -kPi : kPi) / den;
  }
  return parse_double(t, key);
}

RunConfig parse_config_text(const std::string& text, RunMode mode, const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> entries;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", "line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> sections{"run", "params", "integration", "initial",
                                                  "equilibrium", "manifold", "portrait", "sweep"};
      if (!sections.count(section)) throw ConfigError(section, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = resolve_key(line.substr(0, eq), section);
    if (entries.count(key)) throw ConfigError(key, "duplicate key");
    entries[key] = trim(line.substr(eq + 1));
  }
  for (const auto& ov : overrides) apply_override(entries, ov);
  return build(entries, mode);
}

RunConfig parse_config_file(const std::string& path, RunMode mode, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), mode, overrides);
}

std::uint64_t RunConfig::hash() const {
  // FNV-1a over the canonical entries, excluding the output location.
  std::uint64_t h = 1469598103934665603ull;
  const auto mix = [&](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ull;
    }
  };
  mix(std::string("mode=") + to_string(mode) + "\n");
  for (const auto& [k, v] : entries) {
    if (k == "run.out" || k == "run.seed") continue;
    mix(k + "=" + v + "\n");
  }
  mix("run.seed=" + std::to_string(seed) + "\n");
  return h;
}

}  // namespace pursuit
