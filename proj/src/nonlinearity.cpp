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

#include "slipcert/nonlinearity.hpp"

#include "slipcert/error.hpp"
#include "slipcert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace slipcert {

namespace {

constexpr int kGridPoints = 4096;

struct GridExtrema {
  double min;
  double max;
  double argmin;
  double argmax;
};

// Grid scan followed by golden-section polishing around the best nodes.
GridExtrema refined_extrema(const std::function<double(double)>& f, double period) {
  const double h = period / kGridPoints;
  int imin = 0;
  int imax = 0;
  double vmin = f(0.0);
  double vmax = vmin;
  for (int i = 1; i < kGridPoints; ++i) {
    const double v = f(i * h);
    if (v < vmin) {
      vmin = v;
      imin = i;
    }
    if (v > vmax) {
      vmax = v;
      imax = i;
    }
  }
  const auto lo = numerics::golden_section_min(f, (imin - 1) * h, (imin + 1) * h);
  const auto hi = numerics::golden_section_max(f, (imax - 1) * h, (imax + 1) * h);
  GridExtrema out{vmin, vmax, imin * h, imax * h};
  if (lo.value < vmin) {
    out.min = lo.value;
    out.argmin = lo.x;
  }
  if (hi.value > vmax) {
    out.max = hi.value;
    out.argmax = hi.x;
  }
  auto wrap = [period](double x) { return x - period * std::floor(x / period); };
  out.argmin = wrap(out.argmin);
  out.argmax = wrap(out.argmax);
  return out;
}

} // namespace

PeriodicNonlinearity PeriodicNonlinearity::sine(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw DomainError("sine nonlinearity: beta must lie in [0, 1], got " + std::to_string(beta));
  PeriodicNonlinearity nl;
  std::ostringstream name;
  name.precision(17);
  name << "sine(beta=" << beta << ")";
  nl.name_ = name.str();
  nl.period_ = 2.0 * std::numbers::pi;
  nl.phi_ = [beta](double s) { return std::sin(s) - beta; };
  nl.dphi_ = [](double s) { return std::cos(s); };
  nl.alpha1_ = -1.0;
  nl.alpha2_ = 1.0;
  nl.sup_abs_ = 1.0 + beta;
  nl.mean_integral_ = -2.0 * std::numbers::pi * beta;
  const double a = std::asin(beta);
  if (beta == 1.0) {
    nl.roots_ = {a};
  } else {
    nl.roots_ = {a, std::numbers::pi - a};
  }
  nl.slope_extremizers_ = {0.0, std::numbers::pi};
  nl.sine_beta_ = beta;
  nl.validate();
  return nl;
}

PeriodicNonlinearity PeriodicNonlinearity::fourier(double offset, std::vector<double> sin_coeffs,
                                                   std::vector<double> cos_coeffs) {
  auto phi = [=](double s) {
    double v = offset;
    for (std::size_t n = 0; n < sin_coeffs.size(); ++n) v += sin_coeffs[n] * std::sin((n + 1) * s);
    for (std::size_t n = 0; n < cos_coeffs.size(); ++n) v += cos_coeffs[n] * std::cos((n + 1) * s);
    return v;
  };
  auto dphi = [=](double s) {
    double v = 0.0;
    for (std::size_t n = 0; n < sin_coeffs.size(); ++n)
      v += (n + 1) * sin_coeffs[n] * std::cos((n + 1) * s);
    for (std::size_t n = 0; n < cos_coeffs.size(); ++n)
      v -= (n + 1) * cos_coeffs[n] * std::sin((n + 1) * s);
    return v;
  };
  std::ostringstream name;
  name.precision(17);
  name << "fourier(offset=" << offset << ", sin=[";
  for (std::size_t i = 0; i < sin_coeffs.size(); ++i) name << (i ? "," : "") << sin_coeffs[i];
  name << "], cos=[";
  for (std::size_t i = 0; i < cos_coeffs.size(); ++i) name << (i ? "," : "") << cos_coeffs[i];
  name << "])";
  return from_functions(name.str(), 2.0 * std::numbers::pi, phi, dphi);
}

PeriodicNonlinearity PeriodicNonlinearity::from_functions(std::string name, double period, Fn phi,
                                                          Fn dphi) {
  if (!(period > 0.0) || !std::isfinite(period))
    throw DomainError("nonlinearity period must be positive and finite");
  PeriodicNonlinearity nl;
  nl.name_ = std::move(name);
  nl.period_ = period;
  nl.phi_ = std::move(phi);
  nl.dphi_ = std::move(dphi);

  const auto slope = refined_extrema(nl.dphi_, period);
  nl.alpha1_ = slope.min;
  nl.alpha2_ = slope.max;
  nl.slope_extremizers_ = {std::min(slope.argmin, slope.argmax), std::max(slope.argmin, slope.argmax)};
  const auto value = refined_extrema(nl.phi_, period);
  nl.sup_abs_ = std::max(std::abs(value.min), std::abs(value.max));

  nl.roots_ = numerics::bracket_roots(nl.phi_, 0.0, period, kGridPoints);
  std::erase_if(nl.roots_, [period](double r) { return r >= period; });

  std::vector<double> breaks{0.0};
  breaks.insert(breaks.end(), nl.roots_.begin(), nl.roots_.end());
  breaks.push_back(period);
  nl.mean_integral_ = numerics::integrate(nl.phi_, breaks);
  nl.validate();
  return nl;
}

std::vector<double> PeriodicNonlinearity::roots_with_slope(int sign) const {
  std::vector<double> out;
  for (double r : roots_) {
    const double d = dphi_(r);
    if ((sign > 0 && d > 0.0) || (sign < 0 && d < 0.0)) out.push_back(r);
  }
  return out;
}

bool PeriodicNonlinearity::symmetric_slopes(double tol) const {
  return std::abs(std::abs(alpha1_) - alpha2_) <= tol * std::max(1.0, alpha2_);
}

void PeriodicNonlinearity::validate() const {
  if (!(alpha1_ < 0.0 && alpha2_ > 0.0))
    throw DomainError(name_ + ": slope bounds must satisfy alpha1 < 0 < alpha2");
  if (mean_integral_ > 1e-12 * std::max(1.0, sup_abs_ * period_))
    throw DomainError(name_ + ": integral of phi over one period must be <= 0");
  if (roots_.empty()) throw DomainError(name_ + ": phi has no root in one period");
}

} // namespace slipcert
