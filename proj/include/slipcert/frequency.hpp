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

#ifndef SLIPCERT_FREQUENCY_HPP
#define SLIPCERT_FREQUENCY_HPP

#include "slipcert/params.hpp"
#include "slipcert/system.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace slipcert {

/// K(p) = -rho exp(-h p) + int_0^inf gamma(t) exp(-p t) dt for an exponential-sum kernel.
struct TransferFunction {
  struct PllForm {
    double T;
    double s;
    double h;
  };

  double rho = 0.0;
  double h = 0.0;
  ExpSum kernel;
  /// Set when the function is known to equal T (T s p + 1)/(T p + 1) exp(-p h).
  std::optional<PllForm> pll_form;

  static TransferFunction from_system(const SystemSpec& spec);
  static TransferFunction pll(double T, double s, double h);

  /// Upper bound on |K(i w)|, non-increasing in w >= 0:
  /// |rho| + sum |c_i| / sqrt(w^2 + rate_i^2).
  double magnitude_bound(double omega) const;
};

std::complex<double> eval_K(const TransferFunction& tf, double omega);
/// The closed PLL form T (T s i w + 1) / (T i w + 1) exp(-i w h), evaluated directly.
std::complex<double> pll_K_closed_form(double T, double s, double h, double omega);
/// K(i w) / (1 + i mu w).
std::complex<double> eval_K_mu(const TransferFunction& tf, double omega, double mu);

/// Re{theta K - tau (K + i w/alpha1)^* (K + i w/alpha2)} - epsilon |K|^2 - delta at p = i w.
double popov_value(const TransferFunction& tf, const CertificateParams& params, double alpha1,
                   double alpha2, double omega);
/// Symmetric-slope form tau w^2 / ae^2 + theta Re K - (epsilon + tau) |K|^2 - delta.
double popov_value_symmetric(const TransferFunction& tf, const CertificateParams& params,
                             double ae, double omega);
/// Same inequality for K_mu = K / (1 + mu p), symmetric slopes, `params.delta` playing delta-bar.
double perturbed_popov_value(const TransferFunction& tf, const CertificateParams& params,
                             double ae, double mu, double omega);

struct FdiOptions {
  int grid_points = 2048;
  /// Subintervals used around each flagged discrete minimum before polishing.
  int refine_subdivisions = 16;
  /// A grid minimum is flagged for refinement when value < threshold * local scale.
  double refine_threshold = 1e-3;
  int max_doublings = 80;
};

struct FrequencyCheckResult {
  bool certified = false;
  double min_value = 0.0;
  double argmin = 0.0;
  int evaluations = 0;
  /// Omega of the dominance argument (e.g. ae sqrt(delta / tau)).
  double omega_base = 0.0;
  /// Omega_0 = omega_base * 2^j: beyond it the quadratic term provably dominates.
  double omega_cutoff = 0.0;
  int doublings = 0;
  bool tail_ok = false;
  /// Dominance margin evaluated at omega_cutoff.
  double tail_margin = 0.0;
  std::string tail_justification;
  /// Infimum over [0, omega_cutoff] of the strict variant (delta replaced by delta-bar).
  double delta1 = 0.0;
};

/// Checks the Popov-type inequality for all w >= 0: grid scan plus local
/// polishing on [0, Omega_0] and an analytic dominance bound beyond Omega_0.
/// `delta_bar`, when set, only affects the reported delta1 margin.
FrequencyCheckResult verify_fdi(const TransferFunction& tf, const CertificateParams& params,
                                double alpha1, double alpha2, const FdiOptions& options = {},
                                std::optional<double> delta_bar = std::nullopt);

/// Grid + polish minimum of `value` on [0, omega_max]; `scale` sets the
/// refinement threshold. Used by verify_fdi and the polynomial minorant check.
struct BandMinimum {
  double min_value;
  double argmin;
  int evaluations;
};
BandMinimum band_minimum(const std::function<double(double)>& value,
                         const std::function<double(double)>& scale, double omega_max,
                         const FdiOptions& options = {});

/// Omega(w) = Pi(w) (1 + T^2 w^2) for the PLL with theta = 1, ae = 1.
double pll_omega(double omega, double T, double s, double h, double epsilon, double delta,
                 double tau);
/// The even quartic lower bound Omega_0(w) <= Omega(w).
double pll_omega_minorant(double omega, double T, double s, double h, double epsilon,
                          double delta, double tau);

struct QuarticCoefficients {
  double c4;
  double c2;
  double c0;
};
QuarticCoefficients pll_minorant_coefficients(double T, double s, double h, double epsilon,
                                              double delta, double tau);

/// Nonnegativity of the PLL minorant for all w: grid scan + polynomial tail bound.
FrequencyCheckResult verify_pll_minorant(double T, double s, double h, double epsilon,
                                         double delta, double tau, const FdiOptions& options = {});

struct MuThreshold {
  bool certified = false;
  double mu_bar = 0.0;
  double delta1 = 0.0;
  double L1 = 0.0;
  double omega_base = 0.0;
  double omega_cutoff = 0.0;
  double ratio_term = 0.0;       // delta1 / L1 (infinite when L1 == 0)
  double curvature_term = 0.0;   // sqrt(2 delta1 tau / (ae^2 delta_bar))
  double curvature_exact = 0.0;  // sqrt(2 delta1 tau) / (ae delta_bar)
  double mu_tilde = 0.0;
  std::string diagnostics;
};

/// Upper bound mu_bar such that the perturbed inequality holds for every
/// mu < mu_bar. Requires the delta_bar variant to hold strictly.
MuThreshold mu_threshold(const TransferFunction& tf, const CertificateParams& params, double ae,
                         double delta_bar, double mu_tilde, const FdiOptions& options = {});

/// (omega, Pi(omega)) on a uniform grid over [0, omega_max].
std::vector<std::pair<double, double>> popov_scan(const TransferFunction& tf,
                                                  const CertificateParams& params, double alpha1,
                                                  double alpha2, double omega_max, int points);

} // namespace slipcert

#endif // SLIPCERT_FREQUENCY_HPP
