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

// Frozen reference values. Produced by tests/oracles/fixtures.py (mpmath,
// 40 digits) before the library existed; do not regenerate from the library.

#ifndef SLIPCERT_TESTS_FIXTURES_HPP
#define SLIPCERT_TESTS_FIXTURES_HPP

#include <array>

namespace fixtures {

inline constexpr double kT = 0.1;
inline constexpr double kS = 0.4;
inline constexpr double kH0 = 1.0;

inline constexpr double kGamma0 = 1.28;
inline constexpr double kTwoSqrtEpsDelta = 0.999872;

struct Row {
  double beta;
  double q;
  double q_over_d;
  int r0;
};

inline constexpr std::array<Row, 3> kRows{{
    {0.9, 0.204384, 1.71572638204, 1},
    {0.92, 0.20947616, 2.46650704119, 2},
    {0.95, 0.217256, 5.23501842877, 5},
}};

// Sine characteristic, beta = 0.9.
inline constexpr double kIntAbs090 = 5.774729831411352493;
inline constexpr double kIntAbsPhi090 = 3.7174518137552036257;
inline constexpr double kIntAbsP090Eps1Tau1 = 7.0441818229598084845;
// r coefficients with theta = 1, k = 1, x = q(beta = 0.9).
inline constexpr double kR1 = -1.0146363462045493291;
inline constexpr double kR2 = -0.94385069701685451751;

// lemma2_q(theta=1, eps=1, tau=0, M=1, r=1, m=1, rho=0) = 1 + 2 + 0.5.
inline constexpr double kLemma2Example = 3.5;

// (1/mu) int_0^t exp((l - t)/mu) exp(-l) dl at mu = 1, t = 0.7.
inline constexpr double kConfluent07 = 0.34760971265398666029;

} // namespace fixtures

#endif // SLIPCERT_TESTS_FIXTURES_HPP
