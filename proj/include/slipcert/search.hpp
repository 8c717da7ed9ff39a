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

#ifndef SLIPCERT_SEARCH_HPP
#define SLIPCERT_SEARCH_HPP

#include "slipcert/certificates.hpp"
#include "slipcert/simulator.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace slipcert {

struct RecipeResult {
  CertificateParams params;  // k left at 1
  double gamma0 = 0.0;
  /// Set outside T <= 0.9, h0 <= 1.
  std::vector<std::string> warnings;
};

/// Analytic PLL parameters: theta = a = 1, eps = beta0/T, delta = alpha0 T,
/// tau = gamma0 T^3 with alpha0 = beta0 = (1 - gamma0 T^4)(1 - slack)/2.
/// The recipe puts Pi(0) exactly on 0; `slack` > 0 buys the strict margin a
/// floating-point check needs. Throws DomainError when gamma0 T^4 >= 1.
RecipeResult pll_recipe(double T, double s, double h0, double slack = 1e-9);

enum class Strategy { recipe, free, automatic };
const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);

/// A certification target. `pll` enables the analytic recipe and its explicit q.
struct CertProblem {
  SystemSpec system;
  std::optional<PllSpec> pll;
  InitialConditionAttestation ic;
};

CertProblem pll_problem(const PllSpec& pll);

/// PLL problem whose envelope M and sigma'(0) bound cover every member of
/// pll_initial_family(base). Theorem 4 needs this for a family-wide claim.
CertProblem pll_family_problem(const PllSpec& base);

struct SearchOptions {
  Theorem theorem = Theorem::T3;
  int k_cap = 64;
  Strategy strategy = Strategy::automatic;
  std::uint64_t seed = 0;
  int evaluations_per_k = 2000;
  int restarts = 8;
  /// Caller-supplied bound for Theorems 1 and 2.
  std::optional<double> Q;
  double mu_tilde = 0.01;
  double recipe_slack = 1e-9;
  /// When set, the only candidate: these multipliers tried for k = 1..k_cap.
  std::optional<CertificateParams> fixed;
  FdiOptions fdi;
};

struct NearMiss {
  int k = 0;
  CertificateParams params;
  double pd_score = -1e300;
  double fdi_score = -1e300;
  std::string source;
};

struct SearchResult {
  std::optional<SlipCertificate> certificate;
  /// Which candidate produced the certificate: "recipe", "simplex" or "fixed".
  std::string found_by;
  std::optional<NearMiss> near_miss;
  int evaluations = 0;
  std::string diagnostics;
};

/// Smallest k <= k_cap with a verified certificate. Every returned
/// certificate has passed revalidate().
SearchResult min_certified_k(const CertProblem& problem, const SearchOptions& options);

struct MuSweepRow {
  double mu = 0.0;
  double q_mu = 0.0;
  bool pd_ok = false;
  /// Worst simulated count over the problem's initial conditions.
  int sim_slips = 0;
  bool provisional = false;
};

/// One row per mu in (0, 1/r): q_mu, positive definiteness of T_j at the
/// certificate's k with its delta_bar, and the worst simulated slip count.
std::vector<MuSweepRow> mu_sweep(const CertProblem& problem, const SlipCertificate& cert,
                                 const std::vector<double>& mus, const SimulationOptions& sim);

std::string mu_sweep_csv(const std::vector<MuSweepRow>& rows);

/// Smallest eigenvalue of a symmetric 3x3 matrix (closed form).
double min_eigenvalue(const Matrix3& m);

} // namespace slipcert

#endif // SLIPCERT_SEARCH_HPP
