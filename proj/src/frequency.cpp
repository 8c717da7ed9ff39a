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

#include "slipcert/frequency.hpp"

#include "slipcert/error.hpp"
#include "slipcert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace slipcert {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};
constexpr int kMaxPolishedMinima = 64;

std::vector<double> band_grid(double omega_max, int points) {
  const int half = std::max(2, points / 2);
  std::vector<double> grid;
  grid.reserve(2 * half + 1);
  for (int i = 0; i < half; ++i) grid.push_back(omega_max * i / (half - 1));
  const double lo = std::log(omega_max * 1e-6);
  const double hi = std::log(omega_max);
  for (int i = 0; i < half; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / (half - 1)));
  grid.push_back(0.0);
  grid.push_back(omega_max);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  while (!grid.empty() && grid.back() > omega_max) grid.pop_back();
  return grid;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

} // namespace

void CertificateParams::validate() const {
  if (!(theta > 0.0 && epsilon > 0.0 && delta > 0.0 && tau > 0.0))
    throw DomainError("certificate multipliers theta, epsilon, delta, tau must be positive");
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("certificate weight a must lie in [0, 1]");
  if (k < 1) throw DomainError("candidate cycle count k must be >= 1");
}

TransferFunction TransferFunction::from_system(const SystemSpec& spec) {
  TransferFunction tf;
  tf.rho = spec.rho;
  tf.h = spec.h;
  tf.kernel = spec.kernel;
  return tf;
}

TransferFunction TransferFunction::pll(double T, double s, double h) {
  TransferFunction tf;
  tf.rho = -s * T;
  tf.h = h;
  tf.kernel.terms = {{1.0 - s, 1.0 / T, h}};
  tf.pll_form = PllForm{T, s, h};
  return tf;
}

double TransferFunction::magnitude_bound(double omega) const {
  double b = std::abs(rho);
  for (const auto& term : kernel.terms)
    b += std::abs(term.coefficient) / std::hypot(omega, term.rate);
  return b;
}

std::complex<double> eval_K(const TransferFunction& tf, double omega) {
  const std::complex<double> p = kI * omega;
  return -tf.rho * std::exp(-p * tf.h) + tf.kernel.laplace(p);
}

std::complex<double> pll_K_closed_form(double T, double s, double h, double omega) {
  const std::complex<double> p = kI * omega;
  return T * (T * s * p + 1.0) / (T * p + 1.0) * std::exp(-p * h);
}

std::complex<double> eval_K_mu(const TransferFunction& tf, double omega, double mu) {
  return eval_K(tf, omega) / (1.0 + kI * (mu * omega));
}

double popov_value(const TransferFunction& tf, const CertificateParams& params, double alpha1,
                   double alpha2, double omega) {
  const auto K = eval_K(tf, omega);
  const auto left = K + kI * (omega / alpha1);
  const auto right = K + kI * (omega / alpha2);
  const auto inner = params.theta * K - params.tau * std::conj(left) * right;
  return inner.real() - params.epsilon * std::norm(K) - params.delta;
}

double popov_value_symmetric(const TransferFunction& tf, const CertificateParams& params,
                             double ae, double omega) {
  const auto K = eval_K(tf, omega);
  return params.tau * omega * omega / (ae * ae) + params.theta * K.real() -
         (params.epsilon + params.tau) * std::norm(K) - params.delta;
}

double perturbed_popov_value(const TransferFunction& tf, const CertificateParams& params,
                             double ae, double mu, double omega) {
  const auto Km = eval_K_mu(tf, omega, mu);
  return params.theta * Km.real() - (params.epsilon + params.tau) * std::norm(Km) +
         params.tau * omega * omega / (ae * ae) - params.delta;
}

BandMinimum band_minimum(const std::function<double(double)>& value,
                         const std::function<double(double)>& scale, double omega_max,
                         const FdiOptions& options) {
  const auto grid = band_grid(omega_max, options.grid_points);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = value(grid[i]);
  int evaluations = static_cast<int>(grid.size());

  BandMinimum best{vals[0], grid[0], 0};
  std::vector<std::size_t> minima;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (vals[i] < best.min_value) best = {vals[i], grid[i], 0};
    const bool left_ok = i == 0 || vals[i] <= vals[i - 1];
    const bool right_ok = i + 1 == grid.size() || vals[i] <= vals[i + 1];
    if (left_ok && right_ok) minima.push_back(i);
  }
  std::stable_sort(minima.begin(), minima.end(),
                   [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
  if (minima.size() > kMaxPolishedMinima) minima.resize(kMaxPolishedMinima);

  auto counted = [&](double w) {
    ++evaluations;
    return value(w);
  };
  for (std::size_t i : minima) {
    double lo = grid[i == 0 ? 0 : i - 1];
    double hi = grid[std::min(i + 1, grid.size() - 1)];
    if (vals[i] < options.refine_threshold * scale(grid[i])) {
      const int n = std::max(2, options.refine_subdivisions);
      double best_w = grid[i];
      double best_v = vals[i];
      const double step = (hi - lo) / n;
      for (int j = 0; j <= n; ++j) {
        const double w = lo + j * step;
        const double v = counted(w);
        if (v < best_v) {
          best_v = v;
          best_w = w;
        }
      }
      if (best_v < best.min_value) best = {best_v, best_w, 0};
      lo = std::max(lo, best_w - step);
      hi = std::min(hi, best_w + step);
    }
    if (hi > lo) {
      const auto polished = numerics::golden_section_min(counted, lo, hi, 1e-13 * (1.0 + hi));
      if (polished.value < best.min_value) best = {polished.value, polished.x, 0};
    }
  }
  best.evaluations = evaluations;
  return best;
}

FrequencyCheckResult verify_fdi(const TransferFunction& tf, const CertificateParams& params,
                                double alpha1, double alpha2, const FdiOptions& options,
                                std::optional<double> delta_bar) {
  params.validate();
  if (!(alpha1 < 0.0 && alpha2 > 0.0)) throw DomainError("verify_fdi requires alpha1 < 0 < alpha2");

  FrequencyCheckResult result;
  const double slope_product = -alpha1 * alpha2;
  const double cross = std::abs(1.0 / alpha1 + 1.0 / alpha2);
  const double quad = params.tau / slope_product;

  // Dominance: quad w^2 - tau |cross| w B - theta B - (eps + tau) B^2 - delta > 0.
  // Divided by w^2 every subtracted piece is non-increasing, so it persists beyond the cutoff.
  auto dominance = [&](double w) {
    const double B = tf.magnitude_bound(w);
    return quad * w * w - params.tau * cross * w * B - params.theta * B -
           (params.epsilon + params.tau) * B * B - params.delta;
  };
  result.omega_base = std::sqrt(slope_product * params.delta / params.tau);
  double cutoff = result.omega_base;
  int j = 0;
  for (; j <= options.max_doublings; ++j, cutoff *= 2.0) {
    if (dominance(cutoff) > 0.0) break;
  }
  result.doublings = j;
  result.omega_cutoff = cutoff;
  result.tail_ok = j <= options.max_doublings;
  result.tail_margin = dominance(cutoff);
  result.tail_justification =
      "for w >= " + format_number(cutoff) + ": tau w^2/(|a1| a2) exceeds theta|K| + (eps+tau)|K|^2 + delta + tau|1/a1+1/a2| w |K| using |K(iw)| <= " +
      format_number(tf.magnitude_bound(cutoff)) + " (non-increasing bound), margin " +
      format_number(result.tail_margin);

  auto value = [&](double w) { return popov_value(tf, params, alpha1, alpha2, w); };
  auto scale = [&](double w) {
    const auto K = eval_K(tf, w);
    return std::abs(params.theta * K.real()) + (params.epsilon + params.tau) * std::norm(K) +
           params.delta + quad * w * w + params.tau * cross * w * std::abs(K.imag());
  };
  const auto band = band_minimum(value, scale, cutoff, options);
  result.min_value = band.min_value;
  result.argmin = band.argmin;
  result.evaluations = band.evaluations;
  result.certified = result.tail_ok && result.min_value >= 0.0;
  result.delta1 = result.min_value + (params.delta - delta_bar.value_or(params.delta));
  return result;
}

double pll_omega(double omega, double T, double s, double h, double epsilon, double delta,
                 double tau) {
  const double w2 = omega * omega;
  const double T2 = T * T;
  return tau * T2 * w2 * w2 +
         w2 * (T2 * T * s * std::cos(omega * h) - T2 * T2 * s * s * (epsilon + tau) + tau -
               delta * T2) -
         T2 * (1.0 - s) * omega * std::sin(omega * h) + T * std::cos(omega * h) -
         (epsilon + tau) * T2 - delta;
}

QuarticCoefficients pll_minorant_coefficients(double T, double s, double h, double epsilon,
                                              double delta, double tau) {
  const double T2 = T * T;
  const double T3 = T2 * T;
  return {tau * T2 - 0.5 * T3 * s * h * h,
          T3 * s - T2 * T2 * s * s * (epsilon + tau) + tau - delta * T2 - 0.5 * T * h * h -
              (1.0 - s) * T2 * h,
          T - (epsilon + tau) * T2 - delta};
}

double pll_omega_minorant(double omega, double T, double s, double h, double epsilon,
                          double delta, double tau) {
  const auto c = pll_minorant_coefficients(T, s, h, epsilon, delta, tau);
  const double w2 = omega * omega;
  return c.c4 * w2 * w2 + c.c2 * w2 + c.c0;
}

FrequencyCheckResult verify_pll_minorant(double T, double s, double h, double epsilon,
                                         double delta, double tau, const FdiOptions& options) {
  const auto c = pll_minorant_coefficients(T, s, h, epsilon, delta, tau);
  FrequencyCheckResult result;

  // For w >= 1: c4 w^4 + c2 w^2 + c0 >= w^2 (c4 w^2 - |c2| - |c0|) (or c2 w^2 - |c0| if c4 == 0).
  auto dominance = [&](double w) {
    if (c.c4 > 0.0) return c.c4 * w * w - std::abs(c.c2) - std::abs(c.c0);
    if (c.c4 == 0.0 && c.c2 > 0.0) return c.c2 - std::abs(c.c0) / (w * w);
    return -1.0;
  };
  result.omega_base = 1.0;
  double cutoff = 1.0;
  int j = 0;
  for (; j <= options.max_doublings; ++j, cutoff *= 2.0)
    if (dominance(cutoff) > 0.0) break;
  result.doublings = j;
  result.omega_cutoff = cutoff;
  result.tail_ok = j <= options.max_doublings;
  result.tail_margin = dominance(cutoff);
  result.tail_justification = "for w >= " + format_number(cutoff) +
                              ": leading quartic coefficient dominates, margin " +
                              format_number(result.tail_margin);

  auto value = [&](double w) { return pll_omega_minorant(w, T, s, h, epsilon, delta, tau); };
  auto scale = [&](double w) {
    const double w2 = w * w;
    return std::abs(c.c4) * w2 * w2 + std::abs(c.c2) * w2 + std::abs(c.c0) +
           std::numeric_limits<double>::min();
  };
  const auto band = band_minimum(value, scale, cutoff, options);
  result.min_value = band.min_value;
  result.argmin = band.argmin;
  result.evaluations = band.evaluations;
  result.certified = result.tail_ok && result.min_value >= 0.0;
  result.delta1 = result.min_value;
  return result;
}

MuThreshold mu_threshold(const TransferFunction& tf, const CertificateParams& params, double ae,
                         double delta_bar, double mu_tilde, const FdiOptions& options) {
  params.validate();
  if (!(ae > 0.0)) throw DomainError("mu_threshold: ae must be positive");
  if (!(delta_bar > 0.0 && delta_bar < params.delta))
    throw DomainError("mu_threshold: delta_bar must lie in (0, delta)");
  if (!(mu_tilde > 0.0)) throw DomainError("mu_threshold: mu_tilde must be positive");

  MuThreshold out;
  out.mu_tilde = mu_tilde;
  CertificateParams strict = params;
  strict.delta = delta_bar;
  const double quad = params.tau / (ae * ae);

  // Beyond Omega the mu^2 w^2 (tau w^2/ae^2 - delta_bar) term is nonnegative; the
  // remaining terms are dominated once quad w^2 beats theta B + (eps+tau) B^2 + delta_bar + theta mu_tilde w B.
  auto dominance = [&](double w) {
    const double B = tf.magnitude_bound(w);
    return quad * w * w - params.theta * B - (params.epsilon + params.tau) * B * B - delta_bar -
           params.theta * mu_tilde * w * B;
  };
  out.omega_base = ae * std::sqrt(delta_bar / params.tau);
  double cutoff = 2.0 * out.omega_base;
  int j = 1;
  for (; j <= options.max_doublings; ++j, cutoff *= 2.0)
    if (dominance(cutoff) > 0.0) break;
  if (j > options.max_doublings) {
    out.diagnostics = "no tail cutoff found";
    return out;
  }
  out.omega_cutoff = cutoff;

  auto strict_value = [&](double w) { return popov_value_symmetric(tf, strict, ae, w); };
  auto scale = [&](double w) {
    const auto K = eval_K(tf, w);
    return std::abs(params.theta * K.real()) + (params.epsilon + params.tau) * std::norm(K) +
           delta_bar + quad * w * w;
  };
  const auto band = band_minimum(strict_value, scale, cutoff, options);
  out.delta1 = band.min_value;
  if (!(out.delta1 > 0.0)) {
    out.diagnostics = "strict inequality fails: inf over [0, " + format_number(cutoff) +
                      "] is " + format_number(out.delta1) + " at w = " + format_number(band.argmin);
    return out;
  }

  auto im_term = [&](double w) { return -std::abs(params.theta * w * eval_K(tf, w).imag()); };
  auto im_scale = [&](double w) { return params.theta * w * tf.magnitude_bound(w) + 1.0; };
  FdiOptions sup_options = options;
  sup_options.refine_threshold = 0.0;
  const auto sup = band_minimum(im_term, im_scale, cutoff, sup_options);
  out.L1 = -2.0 * sup.min_value;

  out.ratio_term = out.L1 > 0.0 ? out.delta1 / out.L1 : std::numeric_limits<double>::infinity();
  out.curvature_term = std::sqrt(2.0 * out.delta1 * params.tau / (ae * ae * delta_bar));
  out.curvature_exact = std::sqrt(2.0 * out.delta1 * params.tau) / (ae * delta_bar);
  out.mu_bar = std::min({out.ratio_term, out.curvature_term, out.curvature_exact, mu_tilde});
  out.certified = out.mu_bar > 0.0;
  return out;
}

std::vector<std::pair<double, double>> popov_scan(const TransferFunction& tf,
                                                  const CertificateParams& params, double alpha1,
                                                  double alpha2, double omega_max, int points) {
  if (points < 2) throw DomainError("popov_scan needs at least two points");
  std::vector<std::pair<double, double>> out;
  out.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double w = omega_max * i / (points - 1);
    out.emplace_back(w, popov_value(tf, params, alpha1, alpha2, w));
  }
  return out;
}

} // namespace slipcert
