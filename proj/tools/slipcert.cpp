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

// Command-line front end. Talks to the library only through the C interface.

#include "slipcert/slipcert.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

struct ProblemDeleter {
  void operator()(slipcert_problem* p) const { slipcert_problem_free(p); }
};
struct ResultDeleter {
  void operator()(slipcert_result* r) const { slipcert_result_free(r); }
};
using ProblemPtr = std::unique_ptr<slipcert_problem, ProblemDeleter>;
using ResultPtr = std::unique_ptr<slipcert_result, ResultDeleter>;

int fail(slipcert_status status) {
  std::cerr << "slipcert: " << slipcert_last_error() << "\n";
  return static_cast<int>(status);
}

// Writes `content` to `path`, creating missing parent directories.
bool write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p);
  if (!out) {
    std::cerr << "slipcert: cannot write '" << path << "'\n";
    return false;
  }
  out << content;
  return static_cast<bool>(out);
}

int load(const std::string& path, ProblemPtr& problem) {
  slipcert_problem* raw = nullptr;
  const auto status = slipcert_problem_load(path.c_str(), &raw);
  problem.reset(raw);
  return status == SLIPCERT_OK ? 0 : fail(status);
}

int theorem_number(const std::string& name) {
  if (name.empty()) return 0;
  if (name == "T1" || name == "1") return 1;
  if (name == "T2" || name == "2") return 2;
  if (name == "T3" || name == "3") return 3;
  if (name == "T4" || name == "4") return 4;
  return -1;
}

int strategy_number(const std::string& name) {
  if (name.empty()) return -1;
  if (name == "recipe") return 0;
  if (name == "free") return 1;
  if (name == "auto") return 2;
  return -2;
}

int stepper_number(const std::string& name) {
  if (name.empty()) return -1;
  if (name == "auto") return 0;
  if (name == "rk4") return 1;
  if (name == "etd") return 2;
  return -2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slipped-cycle certificates for phase-synchronization systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", slipcert_version());

  std::string config;
  std::string out_path;
  bool json = false;

  auto* certify = app.add_subcommand("certify", "Find the smallest certified cycle bound");
  std::string theorem, strategy;
  int k_cap = -1;
  std::int64_t seed = -1;
  certify->add_option("config", config, "Configuration file")->required();
  certify->add_option("--theorem", theorem, "T1, T2, T3 or T4");
  certify->add_option("--k-cap", k_cap, "Largest k to try");
  certify->add_option("--strategy", strategy, "recipe, free or auto");
  certify->add_option("--seed", seed, "Seed for the simplex restarts");
  certify->add_flag("--json", json, "Print the certificate as JSON");
  certify->add_option("--out", out_path, "Also write the report to this file");

  auto* simulate = app.add_subcommand("simulate", "Integrate the system and count slipped cycles");
  double mu = -1.0, dt = 0.0, horizon = 0.0;
  std::string stepper;
  bool family = false;
  simulate->add_option("config", config, "Configuration file")->required();
  simulate->add_option("--mu", mu, "Singular perturbation parameter");
  simulate->add_option("--dt", dt, "Step size");
  simulate->add_option("--horizon", horizon, "Final time");
  simulate->add_option("--stepper", stepper, "auto, rk4 or etd");
  simulate->add_flag("--family", family, "Run the PLL initial-condition family, report the worst");
  simulate->add_option("--out", out_path, "Trajectory CSV (t,sigma,sigma_dot)");

  auto* reproduce = app.add_subcommand("reproduce", "Re-derive the built-in PLL example table");
  reproduce->add_flag("--json", json, "Machine-readable record");

  auto* sweep = app.add_subcommand("sweep-mu", "Tabulate q_mu, definiteness and slips over mu");
  std::vector<double> mus;
  double mu_min = 0.0, mu_max = 0.0;
  int points = 0;
  sweep->add_option("config", config, "Configuration file")->required();
  sweep->add_option("--mu", mus, "Explicit mu values, comma separated")->delimiter(',');
  sweep->add_option("--mu-min", mu_min, "Smallest mu of a log-spaced range");
  sweep->add_option("--mu-max", mu_max, "Largest mu of a log-spaced range");
  sweep->add_option("--points", points, "Number of range points");
  sweep->add_option("--out", out_path, "CSV output (mu,q_mu,pd_ok,sim_slips)");

  auto* scan = app.add_subcommand("scan", "Sample the frequency-domain inequality");
  double omega_max = 0.0;
  int scan_points = 2001;
  scan->add_option("config", config, "Configuration file")->required();
  scan->add_option("--omega-max", omega_max, "Upper end of the grid");
  scan->add_option("--points", scan_points, "Grid points");
  scan->add_option("--out", out_path, "CSV output (omega,pi_value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "slipcert: " << e.what() << "\n";
    return SLIPCERT_INPUT_ERROR;
  }

  if (reproduce->parsed()) {
    slipcert_result* raw = nullptr;
    const auto status = slipcert_reproduce(&raw);
    ResultPtr result(raw);
    if (!result) return fail(status);
    std::cout << (json ? std::string(slipcert_result_json(result.get())) + "\n"
                       : std::string(slipcert_result_text(result.get())));
    if (status != SLIPCERT_OK) std::cerr << "slipcert: " << slipcert_last_error();
    return status;
  }

  ProblemPtr problem;
  if (int rc = load(config, problem)) return rc;

  if (certify->parsed()) {
    slipcert_certify_options o;
    slipcert_certify_options_init(&o);
    o.theorem = theorem_number(theorem);
    o.strategy = strategy_number(strategy);
    if (o.theorem < 0 || o.strategy < -1) {
      std::cerr << "slipcert: unknown --theorem or --strategy value\n";
      return SLIPCERT_INPUT_ERROR;
    }
    if (certify->count("--k-cap")) {
      if (k_cap < 0) {
        std::cerr << "slipcert: --k-cap must be >= 0\n";
        return SLIPCERT_INPUT_ERROR;
      }
      o.k_cap = k_cap;
    }
    if (certify->count("--seed")) {
      o.has_seed = 1;
      o.seed = static_cast<std::uint64_t>(seed);
    }
    slipcert_result* raw = nullptr;
    const auto status = slipcert_certify(problem.get(), &o, &raw);
    ResultPtr result(raw);
    if (!result) return fail(status);
    const std::string report =
        json ? std::string(slipcert_result_json(result.get())) + "\n" : slipcert_result_text(result.get());
    std::cout << report;
    if (!out_path.empty() && !write_file(out_path, report)) return SLIPCERT_INPUT_ERROR;
    return status;
  }

  if (simulate->parsed()) {
    slipcert_simulate_options o;
    slipcert_simulate_options_init(&o);
    if (simulate->count("--mu")) {
      o.has_mu = 1;
      o.mu = mu;
    }
    o.dt = dt;
    o.horizon = horizon;
    o.stepper = stepper_number(stepper);
    o.family = family ? 1 : 0;
    if (o.stepper < -1) {
      std::cerr << "slipcert: unknown --stepper value\n";
      return SLIPCERT_INPUT_ERROR;
    }
    slipcert_result* raw = nullptr;
    const auto status = slipcert_simulate(problem.get(), &o, &raw);
    ResultPtr result(raw);
    if (!result) return fail(status);
    if (!out_path.empty() && !write_file(out_path, slipcert_result_csv(result.get())))
      return SLIPCERT_INPUT_ERROR;
    std::cout << slipcert_result_text(result.get());
    return status;
  }

  if (sweep->parsed()) {
    if (points > 0 || mu_min > 0.0 || mu_max > 0.0) {
      if (!(mu_min > 0.0 && mu_max >= mu_min && points >= 1)) {
        std::cerr << "slipcert: a range needs 0 < --mu-min <= --mu-max and --points >= 1\n";
        return SLIPCERT_INPUT_ERROR;
      }
      for (int i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        mus.push_back(mu_min * std::pow(mu_max / mu_min, f));
      }
    }
    slipcert_result* raw = nullptr;
    const auto status = slipcert_sweep_mu(problem.get(), mus.data(), mus.size(), &raw);
    ResultPtr result(raw);
    if (!result) return fail(status);
    std::cerr << slipcert_result_text(result.get());
    const std::string csv = slipcert_result_csv(result.get());
    if (!out_path.empty()) {
      if (!write_file(out_path, csv)) return SLIPCERT_INPUT_ERROR;
    } else {
      std::cout << csv;
    }
    return status;
  }

  if (scan->parsed()) {
    slipcert_result* raw = nullptr;
    const auto status = slipcert_scan_fdi(problem.get(), omega_max, scan_points, &raw);
    ResultPtr result(raw);
    if (!result) return fail(status);
    std::cerr << slipcert_result_text(result.get());
    const std::string csv = slipcert_result_csv(result.get());
    if (!out_path.empty()) {
      if (!write_file(out_path, csv)) return SLIPCERT_INPUT_ERROR;
    } else {
      std::cout << csv;
    }
    return status;
  }
  return SLIPCERT_INPUT_ERROR;
}
