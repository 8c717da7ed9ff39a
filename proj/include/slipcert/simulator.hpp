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

#ifndef SLIPCERT_SIMULATOR_HPP
#define SLIPCERT_SIMULATOR_HPP

#include "slipcert/system.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace slipcert {

/// `rk4` is the classical scheme and needs dt <= mu/10. `etd_rk4` integrates
/// the stiff term -sigma'/mu exactly (exponential time differencing) and
/// coincides with rk4 on the non-stiff components; it lifts the mu bound.
/// `automatic` picks etd_rk4 only when mu/20 would be the binding step limit.
enum class Stepper { automatic, rk4, etd_rk4 };

const char* stepper_name(Stepper s);
Stepper parse_stepper(const std::string& name);

struct SimulationOptions {
  std::optional<double> mu;
  double dt = 0.0;       // 0 selects default_dt
  double horizon = 0.0;  // 0 selects 5000 * time_scale
  double tol_rate = 1e-6;
  double tol_residual = 1e-6;
  /// Stop once the trailing 10% of the elapsed time meets both tolerances.
  bool early_exit = true;
  Stepper stepper = Stepper::automatic;
  /// |sigma| or |sigma'| beyond this counts as blow-up.
  double blowup = 1e8;
};

/// min(h/8, T/40, mu/20), ignoring mu for the etd stepper.
double default_dt(const SystemSpec& spec, std::optional<double> mu, Stepper stepper);
double default_horizon(const SystemSpec& spec);

struct Trajectory {
  std::vector<double> t;
  std::vector<double> sigma;
  std::vector<double> sigma_dot;
  /// One row per kernel term, aligned with t.
  std::vector<std::vector<double>> w;
  std::optional<double> mu;
  double dt = 0.0;
  double horizon = 0.0;
  Stepper stepper = Stepper::rk4;
  bool stopped_early = false;
  std::string spec_hash;
  std::string description;

  double end_time() const { return t.empty() ? 0.0 : t.back(); }
};

/// Fixed-step integration of the Volterra system (first-order form, or the
/// mu form mu sigma'' + sigma' = ... when options.mu is set). Throws
/// DomainError on a step-size violation and SimulationError on blow-up.
Trajectory integrate(const SystemSpec& spec, const SimulationOptions& options = {});

/// Integrates the PLL in its original second-order delay form, without the
/// Volterra reduction. Used to cross-check pll_to_volterra.
Trajectory integrate_pll_direct(const PllSpec& pll, const SimulationOptions& options = {});

struct ConvergenceResult {
  bool converged = false;
  /// Time after the last sample violating either tolerance (0 if none does).
  double settle_time = 0.0;
};

/// Converged when |sigma'| <= tol_rate and |phi(sigma)| <= tol_residual on the
/// trailing 10% of the trajectory.
ConvergenceResult detect_convergence(const Trajectory& traj, const PeriodicNonlinearity& nl,
                                     double tol_rate, double tol_residual);

struct SlipCount {
  int k = 0;
  /// sup |sigma(t) - sigma(0)|, taken over both signed extremes.
  double sup_dev = 0.0;
  double max_up = 0.0;
  double max_down = 0.0;
  bool converged = false;
  double settle_time = 0.0;
  /// Set when the trajectory did not converge; k is then only a lower bound.
  bool provisional = true;
};

/// k = floor(sup_dev / period), sup refined by a parabola through the
/// discrete extremum and its neighbours.
SlipCount count_slipped_cycles(const Trajectory& traj, double period,
                               const ConvergenceResult& convergence);

/// integrate + detect_convergence + count_slipped_cycles.
SlipCount simulate_slips(const SystemSpec& spec, const SimulationOptions& options,
                         Trajectory* keep = nullptr);

/// Runs each spec on its own worker; results are in input order.
std::vector<SlipCount> simulate_ensemble(const std::vector<SystemSpec>& specs,
                                         const SimulationOptions& options);

/// Writes `t,sigma,sigma_dot` with a `#` comment header carrying the spec.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// The documented initial-condition family for a PLL: sigma(0) at each root
/// of phi, linear histories with slopes linspace(-10, 10, 10), and sigma'(0)
/// chosen so that b = K(0) beta.
std::vector<PllSpec> pll_initial_family(const PllSpec& base);

} // namespace slipcert

#endif // SLIPCERT_SIMULATOR_HPP
