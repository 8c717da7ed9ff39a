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

#include "slipcert/bounds.hpp"

#include "slipcert/error.hpp"

#include <cmath>
#include <string>

namespace slipcert::bounds {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw DomainError(std::string(name) + " must be finite and >= 0");
}

} // namespace

double lemma2_q(double theta, double epsilon, double tau, double M, double r, double m,
                double rho) {
  if (!(r > 0.0)) throw DomainError("lemma2_q: r must be positive");
  require_nonnegative(theta, "theta");
  require_nonnegative(epsilon, "epsilon");
  require_nonnegative(tau, "tau");
  require_nonnegative(M, "M");
  require_nonnegative(m, "m");
  require_nonnegative(rho, "|rho|");
  const double et = epsilon + tau;
  return (theta * M * m + 2.0 * et * M * m * (M / r + rho) + et * M * M / 2.0) / r;
}

double q_mu(double theta, double epsilon, double tau, double M, double r, double m, double rho,
            double h, double mu, double rate0) {
  if (!(r > 0.0)) throw DomainError("q_mu: r must be positive");
  if (!(mu > 0.0)) throw DomainError("q_mu: mu must be positive");
  if (!(r * mu < 1.0)) throw DomainError("q_mu: requires mu < 1/r");
  require_nonnegative(theta, "theta");
  require_nonnegative(epsilon, "epsilon");
  require_nonnegative(tau, "tau");
  require_nonnegative(M, "M");
  require_nonnegative(m, "m");
  require_nonnegative(rho, "|rho|");
  require_nonnegative(h, "h");
  const double et = epsilon + tau;
  const double one_minus = 1.0 - r * mu;
  const double lead = (theta * m + 2.0 * et * m * (rho + M / r)) *
                      (mu * std::abs(rate0) + M / r + rho * m * h);
  // int_0^inf (M (e^{-rt} - e^{-t/mu}) / (1 - r mu))^2 dt. The cross term is
  // 2 mu / (1 + r mu); it equals M^2 / (2 r (1 + r mu)).
  const double forcing =
      M * M / (2.0 * one_minus * one_minus) * (mu - 4.0 * mu / (1.0 + r * mu) + 1.0 / r);
  const double delayed = rho * rho * m * m * (h + mu * std::exp(-h / mu) - mu);
  return lead + et * (0.5 * mu * rate0 * rate0 + forcing + delayed);
}

double q0(double theta, double epsilon, double tau, double M, double r, double m, double rho,
          double h) {
  require_nonnegative(h, "h");
  const double q = lemma2_q(theta, epsilon, tau, M, r, m, rho);
  const double et = epsilon + tau;
  return q + (theta * m + 2.0 * et * m * (M / r + rho)) * rho * m * h + et * rho * rho * m * m * h;
}

double pll_q(double T, double s, double beta, double h0) {
  const double A = 3.5 * beta * beta + 3.0;
  const double B = 3.0 * (1.0 - s) * (1.0 + beta) * (3.0 * beta + 1.0);
  const double C = 1.5 * (1.0 - s) * (1.0 - s) * (1.0 + beta) * (1.0 + beta);
  return T * T * (A + B * h0 + C * h0 * h0);
}

TailConstants lemma1_tail_constants(double theta, double epsilon, double delta, double tau,
                                    double alpha1, double alpha2, double m) {
  if (!(tau > 0.0) || !(delta > 0.0))
    throw DomainError("lemma1_tail_constants: tau and delta must be positive");
  if (!(alpha1 < 0.0 && alpha2 > 0.0))
    throw DomainError("lemma1_tail_constants: requires alpha1 < 0 < alpha2");
  const double slopes = std::abs(alpha1) * alpha2;
  TailConstants c{};
  c.lambda = std::sqrt(delta * slopes / tau);
  c.W = theta + std::sqrt(tau * delta * slopes) * (1.0 / alpha1 + 1.0 / alpha2);
  c.q3 = std::sqrt(tau) * c.W * c.W * m * m / (8.0 * (epsilon + tau) * std::sqrt(delta * slopes));
  return c;
}

} // namespace slipcert::bounds
