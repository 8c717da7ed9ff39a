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

#ifndef SLIPCERT_NONLINEARITY_HPP
#define SLIPCERT_NONLINEARITY_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace slipcert {

/// A C1, period-Delta phase-detector characteristic phi together with its
/// slope bounds alpha1 = inf phi', alpha2 = sup phi' and m = sup |phi|.
///
/// Instances are immutable. Construction validates alpha1 < 0 < alpha2 and
/// a non-positive mean over one period; violations throw DomainError.
class PeriodicNonlinearity {
public:
  using Fn = std::function<double(double)>;

  /// phi(s) = sin(s) - beta, with closed-form bounds. beta in [0, 1].
  static PeriodicNonlinearity sine(double beta);

  /// phi(s) = offset + sum_n (sin_coeffs[n-1] sin(n s) + cos_coeffs[n-1] cos(n s)), period 2*pi.
  static PeriodicNonlinearity fourier(double offset, std::vector<double> sin_coeffs,
                                      std::vector<double> cos_coeffs);

  /// General user-supplied characteristic. Slope bounds and sup|phi| come
  /// from a 4096-point grid refined by golden-section search; roots from
  /// grid bracketing refined by bisection; the mean by adaptive quadrature.
  static PeriodicNonlinearity from_functions(std::string name, double period, Fn phi, Fn dphi);

  double operator()(double sigma) const { return phi_(sigma); }
  double eval(double sigma) const { return phi_(sigma); }
  double deriv(double sigma) const { return dphi_(sigma); }

  double period() const { return period_; }
  double alpha1() const { return alpha1_; }
  double alpha2() const { return alpha2_; }
  /// m = sup |phi| over one period.
  double sup_abs() const { return sup_abs_; }
  /// Integral of phi over one period.
  double mean_integral() const { return mean_integral_; }
  /// Roots of phi in [0, period), ascending.
  std::span<const double> roots() const { return roots_; }
  /// With K(0) > 0 the loop linearizes to sigma' = -K(0) phi'(root) (sigma - root):
  /// roots with phi' > 0 are stable equilibria, phi' < 0 unstable.
  std::vector<double> roots_with_slope(int sign) const;
  /// Points in [0, period) where phi' attains alpha1 or alpha2 (where the
  /// slope-sector factor vanishes), ascending.
  std::span<const double> slope_extremizers() const { return slope_extremizers_; }

  bool symmetric_slopes(double tol = 1e-12) const;
  const std::string& name() const { return name_; }
  std::optional<double> sine_beta() const { return sine_beta_; }

private:
  PeriodicNonlinearity() = default;
  void validate() const;

  std::string name_;
  double period_ = 0.0;
  Fn phi_;
  Fn dphi_;
  double alpha1_ = 0.0;
  double alpha2_ = 0.0;
  double sup_abs_ = 0.0;
  double mean_integral_ = 0.0;
  std::vector<double> roots_;
  std::vector<double> slope_extremizers_;
  std::optional<double> sine_beta_;
};

} // namespace slipcert

#endif // SLIPCERT_NONLINEARITY_HPP
