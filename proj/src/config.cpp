/*
 *  Copyright 2026 The slipcert Authors
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing, software
 *  distributed under the License is distributed on an "AS IS" BASIS,
 *  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *  See the License for the specific language governing permissions and
 *  limitations under the License.
 */

#include "slipcert/config.hpp"

#include "slipcert/error.hpp"

#include <charconv>
#include <fstream>
#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace slipcert {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_number(const Entry& e, const std::string& key) {
  const std::string v = trim(e.value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(e.line, key + ": expected a number, got '" + e.value + "'");
  return out;
}

long long to_integer(const Entry& e, const std::string& key) {
  const std::string v = trim(e.value);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(e.line, key + ": expected an integer, got '" + e.value + "'");
  return out;
}

bool to_bool(const Entry& e, const std::string& key) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  throw ConfigError(e.line, key + ": expected true or false, got '" + e.value + "'");
}

// "c,rate,onset; c,rate,onset"; onset may be omitted.
ExpSum to_terms(const Entry& e, const std::string& key) {
  ExpSum out;
  if (trim(e.value).empty()) return out;
  for (const auto& item : split(e.value, ';')) {
    if (item.empty()) continue;
    const auto parts = split(item, ',');
    if (parts.size() < 2 || parts.size() > 3)
      throw ConfigError(e.line, key + ": each term is 'coefficient, rate[, onset]'");
    ExpTerm t;
    t.coefficient = to_number({parts[0], e.line}, key);
    t.rate = to_number({parts[1], e.line}, key);
    if (parts.size() == 3) t.onset = to_number({parts[2], e.line}, key);
    out.terms.push_back(t);
  }
  return out;
}

std::vector<double> to_list(const Entry& e, const std::string& key) {
  std::vector<double> out;
  if (trim(e.value).empty()) return out;
  for (const auto& item : split(e.value, ',')) out.push_back(to_number({item, e.line}, key));
  return out;
}

class Reader {
public:
  explicit Reader(const std::string& text) {
    std::istringstream is(text);
    std::string raw;
    std::size_t line = 0;
    Section* current = nullptr;
    while (std::getline(is, raw)) {
      ++line;
      // '#' starts a comment anywhere; ';' only at line start, since it
      // also separates kernel terms.
      std::string s = raw;
      const auto hash = s.find('#');
      if (hash != std::string::npos) s = s.substr(0, hash);
      s = trim(s);
      if (!s.empty() && s.front() == ';') continue;
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError(line, "unterminated section header '" + s + "'");
        const std::string name = trim(s.substr(1, s.size() - 2));
        static const std::vector<std::string> known{"pll", "system", "certificate", "simulation"};
        if (std::find(known.begin(), known.end(), name) == known.end())
          throw ConfigError(line, "unknown section [" + name + "]");
        if (sections_.count(name)) throw ConfigError(line, "duplicate section [" + name + "]");
        current = &sections_[name];
        current->line = line;
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value', got '" + s + "'");
      if (!current) throw ConfigError(line, "key outside of any section");
      const std::string key = trim(s.substr(0, eq));
      if (key.empty()) throw ConfigError(line, "empty key");
      if (current->entries.count(key)) throw ConfigError(line, "duplicate key '" + key + "'");
      current->entries[key] = {trim(s.substr(eq + 1)), line};
    }
  }

  bool has(const std::string& section) const { return sections_.count(section) > 0; }
  std::size_t line_of(const std::string& section) const {
    auto it = sections_.find(section);
    return it == sections_.end() ? 0 : it->second.line;
  }

  const Entry* get(const std::string& section, const std::string& key) {
    auto it = sections_.find(section);
    if (it == sections_.end()) return nullptr;
    auto e = it->second.entries.find(key);
    if (e == it->second.entries.end()) return nullptr;
    used_.insert(section + "." + key);
    return &e->second;
  }

  void reject_unknown() const {
    for (const auto& [name, sec] : sections_)
      for (const auto& [key, entry] : sec.entries)
        if (!used_.count(name + "." + key))
          throw ConfigError(entry.line, "unknown key '" + key + "' in [" + name + "]");
  }

private:
  std::map<std::string, Section> sections_;
  std::set<std::string> used_;
};

double root_choice(const Entry& e, const PeriodicNonlinearity& nl) {
  if (e.value == "stable" || e.value == "unstable") {
    const auto roots = nl.roots_with_slope(e.value == "stable" ? 1 : -1);
    if (roots.empty()) throw ConfigError(e.line, "phi has no " + e.value + " root");
    return roots.front();
  }
  return to_number(e, "initial_phase");
}

void require(bool ok, const Entry& e, const std::string& what) {
  if (!ok) throw ConfigError(e.line, what);
}

PllSpec read_pll(Reader& r, CertProblem& problem) {
  PllSpec pll;
  const std::string sec = "pll";
  if (auto e = r.get(sec, "T")) {
    pll.T = to_number(*e, "T");
    require(pll.T > 0.0, *e, "T must be positive");
  }
  if (auto e = r.get(sec, "s")) {
    pll.s = to_number(*e, "s");
    require(pll.s > 0.0 && pll.s < 1.0, *e, "s must lie in (0, 1)");
  }
  if (auto e = r.get(sec, "beta")) {
    pll.beta = to_number(*e, "beta");
    require(pll.beta > 0.0 && pll.beta <= 1.0, *e, "beta must lie in (0, 1]");
  }
  const Entry* h = r.get(sec, "h");
  const Entry* h0 = r.get(sec, "h0");
  if (h && h0) throw ConfigError(h0->line, "give either h or h0, not both");
  if (h) pll.h = to_number(*h, "h");
  if (h0) pll.h = to_number(*h0, "h0") * pll.T;
  if (h || h0) require(pll.h > 0.0, h ? *h : *h0, "h must be positive");

  const auto nl = PeriodicNonlinearity::sine(pll.beta);
  const auto stable = nl.roots_with_slope(1);
  double phase = stable.empty() ? nl.roots().front() : stable.front();
  if (auto e = r.get(sec, "initial_phase")) phase = root_choice(*e, nl);
  double slope = 0.0;
  if (auto e = r.get(sec, "history_slope")) slope = to_number(*e, "history_slope");
  if (auto e = r.get(sec, "history")) {
    if (e->value == "constant") {
      if (slope != 0.0) throw ConfigError(e->line, "constant history with a nonzero history_slope");
    } else if (e->value != "linear") {
      throw ConfigError(e->line, "history must be 'constant' or 'linear'");
    }
  }
  pll.history = slope == 0.0 ? History::constant(phase) : History::linear(phase, slope);
  pll.initial_rate = pll_rate_for_nominal_b(pll);
  if (auto e = r.get(sec, "initial_rate"); e && e->value != "auto")
    pll.initial_rate = to_number(*e, "initial_rate");
  try {
    pll.validate();
    problem = pll_problem(pll);
  } catch (const DomainError& err) {
    throw ConfigError(r.line_of(sec), err.what());
  }
  return pll;
}

void read_system(Reader& r, CertProblem& problem) {
  const std::string sec = "system";
  SystemSpec spec;
  try {
    std::string kind = "sine";
    if (auto e = r.get(sec, "nonlinearity")) kind = e->value;
    if (kind == "sine") {
      double beta = 0.0;
      if (auto e = r.get(sec, "beta")) {
        beta = to_number(*e, "beta");
        require(beta >= 0.0 && beta <= 1.0, *e, "beta must lie in [0, 1]");
      }
      spec.nonlinearity = PeriodicNonlinearity::sine(beta);
    } else if (kind == "fourier") {
      double offset = 0.0;
      std::vector<double> sn, cs;
      if (auto e = r.get(sec, "offset")) offset = to_number(*e, "offset");
      if (auto e = r.get(sec, "sin")) sn = to_list(*e, "sin");
      if (auto e = r.get(sec, "cos")) cs = to_list(*e, "cos");
      spec.nonlinearity = PeriodicNonlinearity::fourier(offset, sn, cs);
    } else {
      throw ConfigError(r.get(sec, "nonlinearity")->line, "nonlinearity must be 'sine' or 'fourier'");
    }
    if (auto e = r.get(sec, "rho")) spec.rho = to_number(*e, "rho");
    if (auto e = r.get(sec, "h")) {
      spec.h = to_number(*e, "h");
      require(spec.h >= 0.0, *e, "h must be >= 0");
    }
    if (auto e = r.get(sec, "kernel")) spec.kernel = to_terms(*e, "kernel");
    if (auto e = r.get(sec, "forcing")) spec.forcing.terms = to_terms(*e, "forcing");
    if (auto e = r.get(sec, "time_scale")) {
      spec.time_scale = to_number(*e, "time_scale");
      require(spec.time_scale > 0.0, *e, "time_scale must be positive");
    }
    double rate_floor = 1e300;
    for (const auto& t : spec.kernel.terms) rate_floor = std::min(rate_floor, t.rate);
    for (const auto& t : spec.forcing.terms.terms) rate_floor = std::min(rate_floor, t.rate);
    double r_env = rate_floor < 1e300 ? rate_floor : 1.0;
    if (auto e = r.get(sec, "r")) r_env = to_number(*e, "r");
    spec.envelope = fit_envelope(spec.kernel, spec.forcing, r_env);
    if (auto e = r.get(sec, "M")) spec.envelope.M = to_number(*e, "M");

    double phase = 0.0;
    if (auto e = r.get(sec, "initial_phase")) {
      phase = root_choice(*e, spec.nonlinearity);
    } else {
      const auto stable = spec.nonlinearity.roots_with_slope(1);
      phase = stable.empty() ? spec.nonlinearity.roots().front() : stable.front();
    }
    double slope = 0.0;
    if (auto e = r.get(sec, "history_slope")) slope = to_number(*e, "history_slope");
    spec.history = slope == 0.0 ? History::constant(phase) : History::linear(phase, slope);
    if (auto e = r.get(sec, "initial_rate")) spec.initial_rate = to_number(*e, "initial_rate");
    if (auto e = r.get(sec, "description")) spec.description = e->value;
    if (spec.description.empty()) spec.description = "system(" + spec.nonlinearity.name() + ")";
    validate_system(spec);
  } catch (const DomainError& err) {
    throw ConfigError(r.line_of(sec), err.what());
  }
  problem.system = spec;
  problem.pll.reset();
  problem.ic.sigma0 = spec.initial_phase();
}

void read_certificate(Reader& r, Config& cfg) {
  const std::string sec = "certificate";
  auto& s = cfg.search;
  if (auto e = r.get(sec, "theorem")) {
    try {
      s.theorem = parse_theorem(e->value);
    } catch (const DomainError& err) {
      throw ConfigError(e->line, err.what());
    }
  }
  if (auto e = r.get(sec, "strategy")) {
    try {
      s.strategy = parse_strategy(e->value);
    } catch (const DomainError& err) {
      throw ConfigError(e->line, err.what());
    }
  }
  if (auto e = r.get(sec, "k_cap")) {
    s.k_cap = static_cast<int>(to_integer(*e, "k_cap"));
    require(s.k_cap >= 0 && s.k_cap <= 4096, *e, "k_cap must lie in [0, 4096]");
  }
  if (auto e = r.get(sec, "seed")) s.seed = static_cast<std::uint64_t>(to_integer(*e, "seed"));
  if (auto e = r.get(sec, "Q")) {
    s.Q = to_number(*e, "Q");
    require(*s.Q >= 0.0, *e, "Q must be >= 0");
  }
  if (auto e = r.get(sec, "mu_tilde")) {
    s.mu_tilde = to_number(*e, "mu_tilde");
    require(s.mu_tilde > 0.0, *e, "mu_tilde must be positive");
  }
  if (auto e = r.get(sec, "slack")) {
    s.recipe_slack = to_number(*e, "slack");
    require(s.recipe_slack >= 0.0 && s.recipe_slack < 1.0, *e, "slack must lie in [0, 1)");
  }
  if (auto e = r.get(sec, "family")) cfg.family = to_bool(*e, "family");

  const char* names[] = {"theta", "epsilon", "delta", "tau"};
  const Entry* given[4];
  int count = 0;
  for (int i = 0; i < 4; ++i) count += (given[i] = r.get(sec, names[i])) != nullptr;
  const Entry* a = r.get(sec, "a");
  if (count > 0 && count < 4) {
    for (int i = 0; i < 4; ++i)
      if (given[i]) throw ConfigError(given[i]->line, "give all of theta, epsilon, delta, tau or none");
  }
  if (count == 4) {
    CertificateParams p;
    p.theta = to_number(*given[0], "theta");
    p.epsilon = to_number(*given[1], "epsilon");
    p.delta = to_number(*given[2], "delta");
    p.tau = to_number(*given[3], "tau");
    if (a) p.a = to_number(*a, "a");
    try {
      p.validate();
    } catch (const DomainError& err) {
      throw ConfigError(given[0]->line, err.what());
    }
    s.fixed = p;
  } else if (a) {
    throw ConfigError(a->line, "a needs explicit theta, epsilon, delta, tau");
  }
}

void read_simulation(Reader& r, Config& cfg) {
  const std::string sec = "simulation";
  auto& o = cfg.simulation;
  if (auto e = r.get(sec, "mu")) {
    o.mu = to_number(*e, "mu");
    require(*o.mu > 0.0, *e, "mu must be positive");
  }
  if (auto e = r.get(sec, "dt")) {
    o.dt = to_number(*e, "dt");
    require(o.dt > 0.0, *e, "dt must be positive");
  }
  if (auto e = r.get(sec, "horizon")) {
    o.horizon = to_number(*e, "horizon");
    require(o.horizon > 0.0, *e, "horizon must be positive");
  }
  if (auto e = r.get(sec, "tol_rate")) o.tol_rate = to_number(*e, "tol_rate");
  if (auto e = r.get(sec, "tol_residual")) o.tol_residual = to_number(*e, "tol_residual");
  if (auto e = r.get(sec, "early_exit")) o.early_exit = to_bool(*e, "early_exit");
  if (auto e = r.get(sec, "stepper")) {
    try {
      o.stepper = parse_stepper(e->value);
    } catch (const DomainError& err) {
      throw ConfigError(e->line, err.what());
    }
  }
}

} // namespace

Config parse_config(const std::string& text, const std::string& name) {
  Reader r(text);
  Config cfg;
  cfg.name = name;
  if (r.has("pll") == r.has("system"))
    throw ConfigError(0, name + ": exactly one of [pll] or [system] is required");
  if (r.has("pll")) {
    read_pll(r, cfg.problem);
  } else {
    read_system(r, cfg.problem);
  }
  read_certificate(r, cfg);
  read_simulation(r, cfg);
  r.reject_unknown();
  if (cfg.family) {
    if (!cfg.problem.pll)
      throw ConfigError(r.line_of("certificate"), "family = true needs a [pll] section");
    cfg.problem = pll_family_problem(*cfg.problem.pll);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read config '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path);
}

} // namespace slipcert
