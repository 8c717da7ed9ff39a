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

#ifndef SLIPCERT_BOUNDS_HPP
#define SLIPCERT_BOUNDS_HPP

namespace slipcert::bounds {

// Explicit bounds on the quadratic functional I_T along solutions. Every
// input other than r is a magnitude and must be >= 0 (pass |rho|).

/// q = (1/r) (theta M m + 2 (eps + tau) M m (M/r + rho) + (eps + tau) M^2 / 2).
double lemma2_q(double theta, double epsilon, double tau, double M, double r, double m,
                double rho);

/// mu-dependent bound; requires 0 < mu < 1/r.
/// (theta m + 2 (eps + tau) m (rho + M/r)) (mu |rate0| + M/r + rho m h)
///   + (eps + tau) (mu rate0^2 / 2 + M^2 / (2 r (1 + r mu)) + rho^2 m^2 (h + mu e^{-h/mu} - mu)).
double q_mu(double theta, double epsilon, double tau, double M, double r, double m, double rho,
            double h, double mu, double rate0);

/// mu -> 0 limit of q_mu: q + (theta m + 2 (eps + tau) m (M/r + rho)) rho m h + (eps + tau) rho^2 m^2 h.
double q0(double theta, double epsilon, double tau, double M, double r, double m, double rho,
          double h);

/// PLL bound for b = K(0) beta: T^2 (A + B h0 + C h0^2).
double pll_q(double T, double s, double beta, double h0);

struct TailConstants {
  double lambda;
  double W;
  double q3;
};

/// lambda = sqrt(delta |a1| a2 / tau), W = theta + sqrt(tau delta |a1| a2) (1/a1 + 1/a2),
/// q3 = sqrt(tau) W^2 m^2 / (8 (eps + tau) sqrt(delta |a1| a2)).
TailConstants lemma1_tail_constants(double theta, double epsilon, double delta, double tau,
                                    double alpha1, double alpha2, double m);

} // namespace slipcert::bounds

#endif // SLIPCERT_BOUNDS_HPP
