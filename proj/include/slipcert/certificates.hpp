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

#ifndef SLIPCERT_CERTIFICATES_HPP
#define SLIPCERT_CERTIFICATES_HPP

#include "slipcert/frequency.hpp"
#include "slipcert/nonlinearity.hpp"
#include "slipcert/params.hpp"
#include "slipcert/system.hpp"

#include <array>
#include <optional>
#include <string>

namespace slipcert {

/// sqrt((1 - phi'/alpha1)(1 - phi'/alpha2)). Radicands in [-1e-12, 0) are
/// clamped to 0; anything lower throws DomainError.
double phi_factor(const PeriodicNonlinearity& nl, double sigma);

/// sqrt(epsilon + tau Phi^2).
double p_factor(double epsilon, double tau, double phi_factor_value);

struct PeriodicIntegrals {
  double int_phi = 0.0;      // int phi
  double int_abs = 0.0;      // int |phi|
  double int_abs_Phi = 0.0;  // int Phi |phi|
  double int_abs_P = 0.0;    // int |phi| P(eps, tau, .)
  double epsilon = 0.0;
  double tau = 0.0;
};

/// One-period quadratures, split at the roots of phi and at the slope extremizers.
PeriodicIntegrals periodic_integrals(const PeriodicNonlinearity& nl, double epsilon, double tau);

/// Ratios (int phi -/+ x/(theta k)) / denominator for j = 1, 2 (index 0, 1).
struct RCoefficients {
  std::array<double, 2> r{};   // denominator int |phi|
  std::array<double, 2> r0{};  // denominator int Phi |phi|
  std::array<double, 2> r1{};  // denominator int |phi| P
};

RCoefficients r_coefficients(const PeriodicIntegrals& integrals, double theta, int k, double x);
RCoefficients r_coefficients(const PeriodicNonlinearity& nl, const CertificateParams& params,
                             double x);

/// phi(s) - r1_j |phi(s)| P(eps, tau, s).
double y_function(const PeriodicNonlinearity& nl, const RCoefficients& r, double epsilon,
                  double tau, int j, double sigma);
/// phi(s) - r_j |phi(s)|.
double f_function(const PeriodicNonlinearity& nl, const RCoefficients& r, int j, double sigma);
/// phi(s) - r0_j |phi(s)| Phi(s).
double psi_function(const PeriodicNonlinearity& nl, const RCoefficients& r, int j, double sigma);

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// [[eps, a theta r_j/2, 0], [a theta r_j/2, delta, a0 theta r0_j/2], [0, a0 theta r0_j/2, tau]].
Matrix3 t_matrix(const CertificateParams& params, double r_j, double r0_j);

/// Strict Sylvester criterion on the leading principal minors. Throws
/// DomainError for an asymmetric input.
bool is_positive_definite(const Matrix3& m);

enum class Theorem { T1, T2, T3, T4 };
const char* theorem_name(Theorem t);
Theorem parse_theorem(const std::string& name);

/// Attests phi(sigma(0)) = 0 for the certified initial states. When
/// `sigma0` is given it is checked to |phi(sigma0)| <= 1e-12.
struct InitialConditionAttestation {
  bool attested = false;
  std::optional<double> sigma0;
};

/// Free-parameter witness plus everything needed to re-check it.
struct SlipCertificate {
  int k = 0;
  Theorem theorem = Theorem::T3;
  CertificateParams params;
  double q_used = 0.0;
  std::string q_source;
  TransferFunction tf;
  double alpha1 = -1.0;
  double alpha2 = 1.0;
  FrequencyCheckResult fdi;
  PeriodicIntegrals integrals;
  RCoefficients r;
  std::array<Matrix3, 2> matrices{};

  // Theorem 4 only.
  std::optional<double> mu_max;
  std::optional<MuThreshold> mu_threshold;
  double mu_hat = 0.0;
  double delta_bar = 0.0;
  double q0 = 0.0;
  /// Inputs of q_mu: theta, epsilon, tau from params plus these.
  double M = 0.0, r_decay = 0.0, m = 0.0, rho_abs = 0.0, h = 0.0, rate0 = 0.0;

  /// Slipped-cycle bound in the "at most r0 cycles" convention: k - 1.
  int r0() const { return k - 1; }
};

/// Re-runs the stored conditions from the stored fields.
bool revalidate(const SlipCertificate& cert, const FdiOptions& options = {});

struct CheckOutcome {
  std::optional<SlipCertificate> certificate;
  bool fdi_ok = false;
  bool algebraic_ok = false;
  std::string diagnostics;
};

/// FDI plus 4 delta > theta^2 r1_j(k, theta, eps, tau, Q)^2 for j = 1, 2.
CheckOutcome theorem1_check(const TransferFunction& tf, const PeriodicNonlinearity& nl,
                            const CertificateParams& params, double Q,
                            const FdiOptions& options = {});

/// FDI plus positive definiteness of T_j(k, theta, Q), j = 1, 2.
CheckOutcome theorem2_check(const TransferFunction& tf, const PeriodicNonlinearity& nl,
                            const CertificateParams& params, double Q,
                            const FdiOptions& options = {});

/// Theorem 2 conditions with the explicit bound q; requires |alpha1| = alpha2
/// and an attested phi(sigma(0)) = 0.
CheckOutcome theorem3_check(const TransferFunction& tf, const PeriodicNonlinearity& nl,
                            const CertificateParams& params, double q,
                            const InitialConditionAttestation& ic, const FdiOptions& options = {},
                            std::string q_source = "caller");

/// Positive definiteness only (no frequency check) for given q; used by the
/// search inner loop and by Theorem 4's mu range construction.
bool matrices_positive_definite(const PeriodicIntegrals& integrals,
                                const CertificateParams& params, double q);

/// Singularly perturbed case: FDI for K, T_j(k, theta, q0) positive definite,
/// and a constructive validity range mu_max = min(mu_bar, mu_hat).
CheckOutcome theorem4_check(const SystemSpec& spec, const CertificateParams& params,
                            double mu_tilde, const InitialConditionAttestation& ic,
                            const FdiOptions& options = {});

/// Human-readable multi-line report.
std::string certificate_report(const SlipCertificate& cert);
/// JSON record with every witness number at full precision.
std::string certificate_json(const SlipCertificate& cert);

} // namespace slipcert

#endif // SLIPCERT_CERTIFICATES_HPP
