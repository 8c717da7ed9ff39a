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

#ifndef SLIPCERT_PARAMS_HPP
#define SLIPCERT_PARAMS_HPP

namespace slipcert {

/// Free multipliers of the frequency-algebraic certificate plus the candidate
/// cycle count k ("fewer than k cycles are slipped").
struct CertificateParams {
  double theta = 1.0;
  double epsilon = 1.0;
  double delta = 1.0;
  double tau = 1.0;
  /// Convex weight in [0, 1]; a0 = 1 - a.
  double a = 1.0;
  int k = 1;

  double a0() const { return 1.0 - a; }
  /// Throws DomainError unless theta, epsilon, delta, tau > 0, a in [0, 1], k >= 1.
  void validate() const;
};

} // namespace slipcert

#endif // SLIPCERT_PARAMS_HPP
