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

#ifndef SLIPCERT_SYSTEM_HPP
#define SLIPCERT_SYSTEM_HPP

#include "slipcert/nonlinearity.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slipcert {

/// coefficient * exp(-rate * (t - onset)) for t >= onset, zero before.
struct ExpTerm {
  double coefficient = 0.0;
  double rate = 1.0;
  double onset = 0.0;

  double operator()(double t) const;
  /// Laplace transform at complex p: coefficient * exp(-p onset) / (p + rate).
  std::complex<double> laplace(std::complex<double> p) const;
};

/// Finite sum of delayed exponentials. Kernels and the closed-form part of
/// the forcing use this representation.
struct ExpSum {
  std::vector<ExpTerm> terms;

  double operator()(double t) const;
  std::complex<double> laplace(std::complex<double> p) const;
  bool empty() const { return terms.empty(); }
  /// Sum of |coefficient| * exp(rate * onset): bounds |f(t)| * exp(r t) for r <= min rate.
  double min_rate() const;
};

/// Initial phase sigma0(t) on [-h, 0]: continuous piecewise-linear.
class History {
public:
  static History constant(double value);
  /// sigma0(t) = value_at_zero + slope * t.
  static History linear(double value_at_zero, double slope);
  /// Nodes (t, sigma) with ascending t, the last node at t = 0. Values
  /// before the first node are held constant.
  static History table(std::vector<std::pair<double, double>> nodes);

  double value(double t) const;
  /// One-sided (right) derivative; piecewise constant.
  double slope(double t) const;
  double at_zero() const { return value(0.0); }
  /// Node times strictly inside (a, b), for quadrature breakpoints.
  std::vector<double> kinks_in(double a, double b) const;
  std::string describe() const;

private:
  enum class Kind { Constant, Linear, Table };
  Kind kind_ = Kind::Constant;
  double value0_ = 0.0;
  double slope_ = 0.0;
  std::vector<std::pair<double, double>> nodes_;
};

/// alpha(t) = terms(t) + extra(t). `extra` must vanish for t >= extra_support.
struct Forcing {
  ExpSum terms;
  std::function<double(double)> extra;
  double extra_support = 0.0;

  double operator()(double t) const;
};

/// |alpha(t)| + |gamma(t)| <= M exp(-r t).
struct DecayEnvelope {
  double M = 1.0;
  double r = 1.0;
};

/// sigma' = alpha(t) + rho phi(sigma(t-h)) - int_0^t gamma(t-s) phi(sigma(s)) ds,
/// optionally with mu sigma'' added on the left.
struct SystemSpec {
  double rho = 0.0;
  double h = 0.0;
  ExpSum kernel;
  Forcing forcing;
  PeriodicNonlinearity nonlinearity = PeriodicNonlinearity::sine(0.0);
  DecayEnvelope envelope;
  std::optional<double> mu;
  History history = History::constant(0.0);
  /// sigma'(0); enters the mu > 0 dynamics and the q_mu bound.
  double initial_rate = 0.0;
  /// Characteristic time used for default step sizes (T for the PLL).
  double time_scale = 1.0;
  std::string description;

  double initial_phase() const { return history.at_zero(); }
};

/// The delayed PLL with a proportional-integral filter:
/// sigma'' + sigma'/T + phi(sigma(t-h)) + s T d/dt phi(sigma(t-h)) = 0, phi = sin - beta.
struct PllSpec {
  double T = 0.1;
  double s = 0.4;
  double beta = 0.9;
  double h = 0.1;
  History history = History::constant(0.0);
  double initial_rate = 0.0;

  double initial_phase() const { return history.at_zero(); }
  /// b = sigma'(0) + s T phi(sigma0(-h)).
  double b() const;
  /// K(0) = T.
  double dc_gain() const { return T; }
  void validate() const;
};

/// Initial rate for which b = K(0) beta holds given the history.
double pll_rate_for_nominal_b(const PllSpec& pll);

/// Checks positivity of every decay rate, onset >= 0 and the envelope bound
/// |alpha| + |gamma| <= M exp(-r t) on a grid over [0, 20/r]. Throws DomainError.
void validate_system(const SystemSpec& spec);

/// Smallest M (times `safety`) with |alpha(t)| + |gamma(t)| <= M exp(-r t) on a
/// grid over [0, 20/r] that includes every kernel onset and the forcing support edge.
DecayEnvelope fit_envelope(const ExpSum& kernel, const Forcing& forcing, double r,
                           double safety = 1.05);

/// Volterra form of the PLL: rho = -s T, gamma(t) = (1-s) exp(-(t-h)/T) for t >= h,
/// alpha(t) = exp(-t/T) (b - (1-s) J(t)); envelope r = 1/T, M from fit_envelope.
SystemSpec pll_to_volterra(const PllSpec& pll);

/// History integral J(t) = int_{-h}^{min(t,h)-h} exp((l+h)/T) phi(sigma0(l)) dl.
double pll_history_integral(const PllSpec& pll, const PeriodicNonlinearity& nl, double t);

/// alpha_mu(t) of the first-order Volterra reduction of the mu-perturbed equation.
double perturbed_forcing(const SystemSpec& spec, double mu, double t);
/// gamma_mu(t) of the same reduction. The delayed-feedback part contributes
/// -(rho/mu) exp(-(t-h)/mu) for t >= h.
double perturbed_kernel(const SystemSpec& spec, double mu, double t);

} // namespace slipcert

#endif // SLIPCERT_SYSTEM_HPP
