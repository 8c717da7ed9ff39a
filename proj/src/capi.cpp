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

#include "slipcert/slipcert.h"

#include "slipcert/bounds.hpp"
#include "slipcert/config.hpp"
#include "slipcert/error.hpp"
#include "slipcert/frequency.hpp"
#include "slipcert/search.hpp"
#include "slipcert/simulator.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

struct slipcert_problem {
  slipcert::Config config;
};

struct slipcert_result {
  std::string text;
  std::string csv;
  std::string json;
  int k = -1;
  int r0 = -1;
  int slips = -1;
  int converged = -1;
  double q = std::numeric_limits<double>::quiet_NaN();
  double mu_max = std::numeric_limits<double>::quiet_NaN();
  double sup_dev = std::numeric_limits<double>::quiet_NaN();
};

namespace {

using namespace slipcert;

thread_local std::string g_last_error;

template <class Fn>
slipcert_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const ConfigError& e) {
    g_last_error = e.what();
    return SLIPCERT_INPUT_ERROR;
  } catch (const DomainError& e) {
    g_last_error = e.what();
    return SLIPCERT_INPUT_ERROR;
  } catch (const SimulationError& e) {
    g_last_error = e.what();
    return SLIPCERT_SIMULATION_FAILURE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SLIPCERT_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return SLIPCERT_INTERNAL_ERROR;
  }
}

slipcert_status need(const void* p, const char* what) {
  if (p) return SLIPCERT_OK;
  g_last_error = std::string(what) + " must not be null";
  return SLIPCERT_INPUT_ERROR;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

SearchOptions search_options(const Config& cfg, const slipcert_certify_options* o) {
  SearchOptions s = cfg.search;
  if (!o) return s;
  if (o->theorem != 0) {
    if (o->theorem < 1 || o->theorem > 4) throw DomainError("theorem must be 1..4");
    s.theorem = static_cast<Theorem>(o->theorem - 1);
  }
  if (o->k_cap >= 0) s.k_cap = o->k_cap;
  if (o->strategy >= 0) {
    if (o->strategy > 2) throw DomainError("strategy must be 0..2");
    s.strategy = static_cast<Strategy>(o->strategy);
  }
  if (o->has_seed) s.seed = o->seed;
  return s;
}

void fill_certificate(slipcert_result& r, const SearchResult& found) {
  if (!found.certificate) {
    r.text = found.diagnostics + "\n";
    nlohmann::json j;
    j["certified"] = false;
    j["diagnostics"] = found.diagnostics;
    r.json = j.dump(2);
    return;
  }
  const auto& c = *found.certificate;
  r.k = c.k;
  r.r0 = c.r0();
  r.q = c.q_used;
  if (c.mu_max) r.mu_max = *c.mu_max;
  r.text = certificate_report(c) + "  found by: " + found.found_by + "\n";
  if (!found.diagnostics.empty()) r.text += "  notes: " + found.diagnostics + "\n";
  auto j = nlohmann::json::parse(certificate_json(c));
  j["certified"] = true;
  j["found_by"] = found.found_by;
  r.json = j.dump(2);
}

} // namespace

extern "C" {

const char* slipcert_version(void) { return "1.0.0"; }

const char* slipcert_last_error(void) { return g_last_error.c_str(); }

slipcert_status slipcert_problem_load(const char* path, slipcert_problem** out) {
  if (auto s = need(path, "path"); s != SLIPCERT_OK) return s;
  if (auto s = need(out, "out"); s != SLIPCERT_OK) return s;
  *out = nullptr;
  return guarded([&] {
    *out = new slipcert_problem{load_config(path)};
    return SLIPCERT_OK;
  });
}

slipcert_status slipcert_problem_parse(const char* text, slipcert_problem** out) {
  if (auto s = need(text, "text"); s != SLIPCERT_OK) return s;
  if (auto s = need(out, "out"); s != SLIPCERT_OK) return s;
  *out = nullptr;
  return guarded([&] {
    *out = new slipcert_problem{parse_config(text)};
    return SLIPCERT_OK;
  });
}

void slipcert_problem_free(slipcert_problem* problem) { delete problem; }

void slipcert_certify_options_init(slipcert_certify_options* o) {
  if (!o) return;
  o->theorem = 0;
  o->k_cap = -1;
  o->strategy = -1;
  o->has_seed = 0;
  o->seed = 0;
}

slipcert_status slipcert_certify(const slipcert_problem* problem,
                                 const slipcert_certify_options* options, slipcert_result** out) {
  if (auto s = need(problem, "problem"); s != SLIPCERT_OK) return s;
  if (auto s = need(out, "out"); s != SLIPCERT_OK) return s;
  *out = nullptr;
  return guarded([&] {
    const auto opts = search_options(problem->config, options);
    const auto found = min_certified_k(problem->config.problem, opts);
    auto r = std::make_unique<slipcert_result>();
    fill_certificate(*r, found);
    *out = r.release();
    return found.certificate ? SLIPCERT_OK : SLIPCERT_NO_CERTIFICATE;
  });
}

void slipcert_simulate_options_init(slipcert_simulate_options* o) {
  if (!o) return;
  o->has_mu = 0;
  o->mu = 0.0;
  o->dt = 0.0;
  o->horizon = 0.0;
  o->stepper = -1;
  o->family = 0;
}

slipcert_status slipcert_simulate(const slipcert_problem* problem,
                                  const slipcert_simulate_options* options,
                                  slipcert_result** out) {
  if (auto s = need(problem, "problem"); s != SLIPCERT_OK) return s;
  if (auto s = need(out, "out"); s != SLIPCERT_OK) return s;
  *out = nullptr;
  return guarded([&] {
    const auto& cfg = problem->config;
    SimulationOptions sim = cfg.simulation;
    bool family = false;
    if (options) {
      if (options->has_mu) sim.mu = options->mu;
      if (options->dt > 0.0) sim.dt = options->dt;
      if (options->horizon > 0.0) sim.horizon = options->horizon;
      if (options->stepper >= 0) {
        if (options->stepper > 2) throw DomainError("stepper must be 0..2");
        sim.stepper = static_cast<Stepper>(options->stepper);
      }
      family = options->family != 0;
    }
    std::vector<SystemSpec> members;
    if (family) {
      if (!cfg.problem.pll) throw DomainError("the initial-condition family needs a [pll] section");
      for (const auto& p : pll_initial_family(*cfg.problem.pll))
        members.push_back(pll_to_volterra(p));
    } else if (cfg.problem.pll) {
      members.push_back(pll_to_volterra(*cfg.problem.pll));
    } else {
      members.push_back(cfg.problem.system);
    }

    auto r = std::make_unique<slipcert_result>();
    Trajectory worst_traj;
    SlipCount worst;
    std::size_t worst_index = 0;
    bool all_converged = true;
    for (std::size_t i = 0; i < members.size(); ++i) {
      Trajectory traj;
      const auto count = simulate_slips(members[i], sim, &traj);
      all_converged = all_converged && count.converged;
      if (i == 0 || count.sup_dev > worst.sup_dev) {
        worst = count;
        worst_index = i;
        worst_traj = std::move(traj);
      }
    }
    r->slips = worst.k;
    r->sup_dev = worst.sup_dev;
    r->converged = all_converged ? 1 : 0;
    std::ostringstream text;
    text << "slips=" << worst.k << " sup_dev=" << fmt(worst.sup_dev)
         << " converged=" << (all_converged ? "true" : "false") << "\n";
    r->text = text.str();
    std::ostringstream csv;
    write_trajectory_csv(csv, worst_traj);
    r->csv = csv.str();
    nlohmann::json j;
    j["slips"] = worst.k;
    j["sup_dev"] = worst.sup_dev;
    j["converged"] = all_converged;
    j["settle_time"] = worst.settle_time;
    j["members"] = members.size();
    j["worst_member"] = worst_index;
    j["worst_description"] = worst_traj.description;
    r->json = j.dump(2);
    *out = r.release();
    return SLIPCERT_OK;
  });
}

slipcert_status slipcert_reproduce(slipcert_result** out) {
  if (auto s = need(out, "out"); s != SLIPCERT_OK) return s;
  *out = nullptr;
  return guarded([&] {
    auto r = std::make_unique<slipcert_result>();
    std::ostringstream text;
    text << "beta,q,r0,expected_r0,status\n";
    nlohmann::json j;
    j["rows"] = nlohmann::json::array();
    bool all = true;
    std::string mismatches;
    for (const auto& b : builtin_configs()) {
      const auto cfg = parse_config(b.text, b.name);
      const auto found = min_certified_k(cfg.problem, cfg.search);
      const int r0 = found.certificate ? found.certificate->r0() : -1;
      const double q = found.certificate ? found.certificate->q_used
                                         : std::numeric_limits<double>::quiet_NaN();
      const bool match = r0 == b.expected_r0;
      all = all && match;
      if (!match)
        mismatches += "beta=" + fmt(b.beta) + ": r0=" + std::to_string(r0) + ", expected " +
                      std::to_string(b.expected_r0) + "\n";
      text << fmt(b.beta) << "," << fmt(q) << "," << r0 << "," << b.expected_r0 << ","
           << (match ? "ok" : "MISMATCH") << "\n";
      j["rows"].push_back({{"beta", b.beta},
                           {"q", q},
                           {"r0", r0},
                           {"k", found.certificate ? found.certificate->k : -1},
                           {"expected_r0", b.expected_r0},
                           {"match", match}});
    }
    j["all_match"] = all;
    r->text = text.str() + mismatches;
    r->csv = text.str();
    r->json = j.dump(2);
    *out = r.release();
    if (!all) g_last_error = "reproduction mismatch:\n" + mismatches;
    return all ? SLIPCERT_OK : SLIPCERT_REPRODUCE_MISMATCH;
  });
}

slipcert_status slipcert_sweep_mu(const slipcert_problem* problem, const double* mus,
                                  size_t n_mus, slipcert_result** out) {
  if (auto s = need(problem, "problem"); s != SLIPCERT_OK) return s;
  if (auto s = need(out, "out"); s != SLIPCERT_OK) return s;
  if (n_mus > 0)
    if (auto s = need(mus, "mus"); s != SLIPCERT_OK) return s;
  *out = nullptr;
  return guarded([&] {
    const auto& cfg = problem->config;
    const CertProblem target =
        cfg.problem.pll ? pll_family_problem(*cfg.problem.pll) : cfg.problem;
    SearchOptions opts = cfg.search;
    opts.theorem = Theorem::T4;
    const auto found = min_certified_k(target, opts);
    auto r = std::make_unique<slipcert_result>();
    if (!found.certificate) {
      fill_certificate(*r, found);
      *out = r.release();
      return SLIPCERT_NO_CERTIFICATE;
    }
    const auto& cert = *found.certificate;
    std::vector<double> list(mus, mus + n_mus);
    if (list.empty())
      for (double f : {0.9, 0.7, 0.5, 0.3, 0.1}) list.push_back(f * *cert.mu_max);
    const auto rows = mu_sweep(target, cert, list, cfg.simulation);
    r->k = cert.k;
    r->r0 = cert.r0();
    r->q = cert.q0;
    r->mu_max = *cert.mu_max;
    r->csv = mu_sweep_csv(rows);
    std::ostringstream text;
    text.precision(12);
    text << "singularly perturbed certificate: k = " << cert.k << ", r0 = " << cert.r0()
         << ", q0 = " << cert.q0 << ", mu_max = " << *cert.mu_max << "\n";
    r->text = text.str();
    nlohmann::json j;
    j["k"] = cert.k;
    j["mu_max"] = *cert.mu_max;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : rows)
      j["rows"].push_back({{"mu", row.mu},
                           {"q_mu", row.q_mu},
                           {"pd_ok", row.pd_ok},
                           {"sim_slips", row.sim_slips},
                           {"provisional", row.provisional}});
    r->json = j.dump(2);
    *out = r.release();
    return SLIPCERT_OK;
  });
}

slipcert_status slipcert_scan_fdi(const slipcert_problem* problem, double omega_max, int points,
                                  slipcert_result** out) {
  if (auto s = need(problem, "problem"); s != SLIPCERT_OK) return s;
  if (auto s = need(out, "out"); s != SLIPCERT_OK) return s;
  *out = nullptr;
  return guarded([&] {
    const auto& cfg = problem->config;
    const auto& nl = cfg.problem.system.nonlinearity;
    const auto tf = cfg.problem.pll
                        ? TransferFunction::pll(cfg.problem.pll->T, cfg.problem.pll->s,
                                                cfg.problem.pll->h)
                        : TransferFunction::from_system(cfg.problem.system);
    CertificateParams params;
    std::string source;
    if (cfg.search.fixed) {
      params = *cfg.search.fixed;
      source = "config";
    } else if (cfg.problem.pll) {
      const auto& p = *cfg.problem.pll;
      params = pll_recipe(p.T, p.s, p.h / p.T, cfg.search.recipe_slack).params;
      source = "recipe";
    } else {
      const auto found = min_certified_k(cfg.problem, cfg.search);
      if (!found.certificate) throw DomainError("no multipliers to scan: " + found.diagnostics);
      params = found.certificate->params;
      source = "search";
    }
    if (points < 2) points = 2001;
    if (!(omega_max > 0.0))
      omega_max = 10.0 * std::sqrt(std::abs(nl.alpha1()) * nl.alpha2() * params.delta / params.tau);
    const auto scan = popov_scan(tf, params, nl.alpha1(), nl.alpha2(), omega_max, points);
    std::ostringstream csv;
    csv.precision(12);
    csv << "omega,pi_value\n";
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& [w, v] : scan) {
      csv << w << "," << v << "\n";
      lo = std::min(lo, v);
    }
    auto r = std::make_unique<slipcert_result>();
    r->csv = csv.str();
    r->text = "multipliers from " + source + "; min Pi on grid = " + fmt(lo) + "\n";
    *out = r.release();
    return SLIPCERT_OK;
  });
}

const char* slipcert_result_text(const slipcert_result* r) { return r ? r->text.c_str() : ""; }
const char* slipcert_result_csv(const slipcert_result* r) { return r ? r->csv.c_str() : ""; }
const char* slipcert_result_json(const slipcert_result* r) { return r ? r->json.c_str() : ""; }
int slipcert_result_k(const slipcert_result* r) { return r ? r->k : -1; }
int slipcert_result_r0(const slipcert_result* r) { return r ? r->r0 : -1; }
int slipcert_result_slips(const slipcert_result* r) { return r ? r->slips : -1; }
int slipcert_result_converged(const slipcert_result* r) { return r ? r->converged : -1; }
double slipcert_result_q(const slipcert_result* r) {
  return r ? r->q : std::numeric_limits<double>::quiet_NaN();
}
double slipcert_result_mu_max(const slipcert_result* r) {
  return r ? r->mu_max : std::numeric_limits<double>::quiet_NaN();
}
double slipcert_result_sup_dev(const slipcert_result* r) {
  return r ? r->sup_dev : std::numeric_limits<double>::quiet_NaN();
}
void slipcert_result_free(slipcert_result* r) { delete r; }

double slipcert_pll_q(double T, double s, double beta, double h0) {
  if (!(T > 0.0 && s > 0.0 && s < 1.0 && beta > 0.0 && beta <= 1.0 && h0 >= 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  return bounds::pll_q(T, s, beta, h0);
}

} // extern "C"
