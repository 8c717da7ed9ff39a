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

#include "slipcert/system.hpp"

#include "slipcert/error.hpp"
#include "slipcert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace slipcert {

namespace {

// (1 - exp(-x)) / x, continuous at 0.
double one_minus_exp_over(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

// (1/mu) int_onset^t exp((l - t)/mu) * c exp(-a (l - onset)) dl for t >= onset.
double smoothed_term(const ExpTerm& term, double mu, double t) {
  if (t < term.onset) return 0.0;
  const double u = t - term.onset;
  const double d = 1.0 / mu - term.rate;
  return term.coefficient * std::exp(-term.rate * u) * (u / mu) * one_minus_exp_over(d * u);
}

// Cubic Hermite table of J(t) on [0, h] with exact node derivatives.
struct HistoryIntegralTable {
  double h = 0.0;
  std::vector<double> value;
  std::vector<double> deriv;

  double operator()(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= h) return value.back();
    const std::size_t n = value.size() - 1;
    const double step = h / static_cast<double>(n);
    const std::size_t i = std::min(n - 1, static_cast<std::size_t>(t / step));
    const double x = (t - i * step) / step;
    const double x2 = x * x;
    const double x3 = x2 * x;
    return (2 * x3 - 3 * x2 + 1) * value[i] + (x3 - 2 * x2 + x) * step * deriv[i] +
           (-2 * x3 + 3 * x2) * value[i + 1] + (x3 - x2) * step * deriv[i + 1];
  }
};

} // namespace

double ExpTerm::operator()(double t) const {
  return t >= onset ? coefficient * std::exp(-rate * (t - onset)) : 0.0;
}

std::complex<double> ExpTerm::laplace(std::complex<double> p) const {
  return coefficient * std::exp(-p * onset) / (p + rate);
}

double ExpSum::operator()(double t) const {
  double v = 0.0;
  for (const auto& term : terms) v += term(t);
  return v;
}

std::complex<double> ExpSum::laplace(std::complex<double> p) const {
  std::complex<double> v{0.0, 0.0};
  for (const auto& term : terms) v += term.laplace(p);
  return v;
}

double ExpSum::min_rate() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& term : terms) r = std::min(r, term.rate);
  return r;
}

History History::constant(double value) {
  History hist;
  hist.kind_ = Kind::Constant;
  hist.value0_ = value;
  return hist;
}

History History::linear(double value_at_zero, double slope) {
  History hist;
  hist.kind_ = Kind::Linear;
  hist.value0_ = value_at_zero;
  hist.slope_ = slope;
  return hist;
}

History History::table(std::vector<std::pair<double, double>> nodes) {
  if (nodes.empty()) throw DomainError("history table must have at least one node");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i].first > nodes[i - 1].first))
      throw DomainError("history table times must be strictly increasing");
  if (nodes.back().first != 0.0) throw DomainError("history table must end at t = 0");
  if (nodes.front().first > 0.0) throw DomainError("history table times must be <= 0");
  History hist;
  hist.kind_ = Kind::Table;
  hist.nodes_ = std::move(nodes);
  hist.value0_ = hist.nodes_.back().second;
  return hist;
}

double History::value(double t) const {
  switch (kind_) {
  case Kind::Constant:
    return value0_;
  case Kind::Linear:
    return value0_ + slope_ * t;
  case Kind::Table:
    break;
  }
  if (t <= nodes_.front().first) return nodes_.front().second;
  if (t >= nodes_.back().first) return nodes_.back().second;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                             [](double x, const auto& node) { return x < node.first; });
  const auto& [t1, v1] = *it;
  const auto& [t0, v0] = *(it - 1);
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

double History::slope(double t) const {
  switch (kind_) {
  case Kind::Constant:
    return 0.0;
  case Kind::Linear:
    return slope_;
  case Kind::Table:
    break;
  }
  if (t < nodes_.front().first || nodes_.size() < 2) return 0.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                             [](double x, const auto& node) { return x < node.first; });
  if (it == nodes_.end()) --it;
  const auto& [t1, v1] = *it;
  const auto& [t0, v0] = *(it - 1);
  return (v1 - v0) / (t1 - t0);
}

std::vector<double> History::kinks_in(double a, double b) const {
  std::vector<double> out;
  if (kind_ != Kind::Table) return out;
  for (const auto& node : nodes_)
    if (node.first > a && node.first < b) out.push_back(node.first);
  return out;
}

std::string History::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
  case Kind::Constant:
    os << "constant(" << value0_ << ")";
    break;
  case Kind::Linear:
    os << "linear(" << value0_ << ", slope=" << slope_ << ")";
    break;
  case Kind::Table:
    os << "table(";
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      os << (i ? "; " : "") << nodes_[i].first << ":" << nodes_[i].second;
    os << ")";
    break;
  }
  return os.str();
}

double Forcing::operator()(double t) const {
  double v = terms(t);
  if (extra && t < extra_support) v += extra(t);
  return v;
}

double PllSpec::b() const {
  return initial_rate + s * T * (std::sin(history.value(-h)) - beta);
}

void PllSpec::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("PLL: T must be positive");
  if (!(s > 0.0 && s < 1.0)) throw DomainError("PLL: s must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("PLL: beta must lie in (0, 1]");
  if (!(h >= 0.0) || !std::isfinite(h)) throw DomainError("PLL: h must be >= 0");
  if (!std::isfinite(initial_rate) || !std::isfinite(history.at_zero()))
    throw DomainError("PLL: initial state must be finite");
}

double pll_rate_for_nominal_b(const PllSpec& pll) {
  return pll.T * pll.beta - pll.s * pll.T * (std::sin(pll.history.value(-pll.h)) - pll.beta);
}

double pll_history_integral(const PllSpec& pll, const PeriodicNonlinearity& nl, double t) {
  const double upper = std::min(std::max(t, 0.0), pll.h) - pll.h;
  if (upper <= -pll.h) return 0.0;
  auto integrand = [&](double l) {
    return std::exp((l + pll.h) / pll.T) * nl(pll.history.value(l));
  };
  std::vector<double> breaks{-pll.h};
  for (double k : pll.history.kinks_in(-pll.h, upper)) breaks.push_back(k);
  breaks.push_back(upper);
  return numerics::integrate(integrand, breaks, 1e-12);
}

DecayEnvelope fit_envelope(const ExpSum& kernel, const Forcing& forcing, double r,
                           double safety) {
  if (!(r > 0.0)) throw DomainError("envelope decay rate r must be positive");
  std::vector<double> ts;
  const double horizon = 20.0 / r;
  constexpr int n = 4000;
  for (int i = 0; i <= n; ++i) ts.push_back(horizon * i / n);
  for (const auto& term : kernel.terms) ts.push_back(term.onset);
  for (const auto& term : forcing.terms.terms) ts.push_back(term.onset);
  if (forcing.extra) {
    const double support = forcing.extra_support;
    for (int i = 0; i <= 512; ++i) ts.push_back(support * i / 512.0);
    ts.push_back(std::nextafter(support, 0.0));
  }
  double M = 0.0;
  for (double t : ts) {
    if (t < 0.0) continue;
    M = std::max(M, (std::abs(forcing(t)) + std::abs(kernel(t))) * std::exp(r * t));
  }
  if (M == 0.0) M = std::numeric_limits<double>::min();
  return {safety * M, r};
}

void validate_system(const SystemSpec& spec) {
  if (!(spec.h >= 0.0) || !std::isfinite(spec.h)) throw DomainError("delay h must be >= 0");
  if (!std::isfinite(spec.rho)) throw DomainError("rho must be finite");
  auto check_terms = [](const ExpSum& sum, const char* what) {
    for (const auto& term : sum.terms) {
      if (!(term.rate > 0.0)) throw DomainError(std::string(what) + ": decay rates must be > 0");
      if (!(term.onset >= 0.0)) throw DomainError(std::string(what) + ": onsets must be >= 0");
    }
  };
  check_terms(spec.kernel, "kernel");
  check_terms(spec.forcing.terms, "forcing");
  if (!(spec.envelope.M > 0.0) || !(spec.envelope.r > 0.0))
    throw DomainError("envelope requires M > 0 and r > 0");
  if (spec.mu && !(*spec.mu > 0.0)) throw DomainError("mu must be > 0");

  const auto needed = fit_envelope(spec.kernel, spec.forcing, spec.envelope.r, 1.0);
  if (needed.M > spec.envelope.M * (1.0 + 1e-12))
    throw DomainError("envelope violated: |alpha| + |gamma| needs M >= " +
                      std::to_string(needed.M) + " for r = " + std::to_string(spec.envelope.r));
}

SystemSpec pll_to_volterra(const PllSpec& pll) {
  pll.validate();
  SystemSpec spec;
  spec.nonlinearity = PeriodicNonlinearity::sine(pll.beta);
  spec.rho = -pll.s * pll.T;
  spec.h = pll.h;
  spec.kernel.terms = {{1.0 - pll.s, 1.0 / pll.T, pll.h}};
  spec.history = pll.history;
  spec.initial_rate = pll.initial_rate;
  spec.time_scale = pll.T;

  const double b = pll.b();
  const double gain = 1.0 - pll.s;
  const double T = pll.T;

  std::function<double(double)> J;
  double J_h = 0.0;
  if (pll.h > 0.0) {
    auto table = std::make_shared<HistoryIntegralTable>();
    table->h = pll.h;
    constexpr std::size_t n = 1024;
    table->value.resize(n + 1);
    table->deriv.resize(n + 1);
    const auto& nl = spec.nonlinearity;
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = pll.h * static_cast<double>(i) / n;
      if (i > 0) {
        const double t0 = pll.h * static_cast<double>(i - 1) / n;
        std::vector<double> breaks{t0 - pll.h};
        for (double k : pll.history.kinks_in(t0 - pll.h, t - pll.h)) breaks.push_back(k);
        breaks.push_back(t - pll.h);
        acc += numerics::integrate(
            [&](double l) { return std::exp((l + pll.h) / T) * nl(pll.history.value(l)); }, breaks,
            1e-13);
      }
      table->value[i] = acc;
      table->deriv[i] = std::exp(t / T) * nl(pll.history.value(t - pll.h));
    }
    J_h = acc;
    J = [table](double t) { return (*table)(t); };
  }

  spec.forcing.terms.terms = {{b - gain * J_h, 1.0 / T, 0.0}};
  if (J) {
    spec.forcing.extra = [J, J_h, gain, T](double t) {
      return gain * std::exp(-t / T) * (J_h - J(t));
    };
    spec.forcing.extra_support = pll.h;
  }
  spec.envelope = fit_envelope(spec.kernel, spec.forcing, 1.0 / T);

  std::ostringstream os;
  os.precision(17);
  os << "pll(T=" << pll.T << ", s=" << pll.s << ", beta=" << pll.beta << ", h=" << pll.h
     << ", history=" << pll.history.describe() << ", rate0=" << pll.initial_rate << ")";
  spec.description = os.str();
  return spec;
}

double perturbed_kernel(const SystemSpec& spec, double mu, double t) {
  if (!(mu > 0.0)) throw DomainError("perturbed_kernel: mu must be > 0");
  if (t < 0.0) return 0.0;
  double v = 0.0;
  for (const auto& term : spec.kernel.terms) v += smoothed_term(term, mu, t);
  if (t >= spec.h) v -= spec.rho / mu * std::exp(-(t - spec.h) / mu);
  return v;
}

double perturbed_forcing(const SystemSpec& spec, double mu, double t) {
  if (!(mu > 0.0)) throw DomainError("perturbed_forcing: mu must be > 0");
  if (t <= 0.0) return spec.initial_rate;
  double v = spec.initial_rate * std::exp(-t / mu);
  for (const auto& term : spec.forcing.terms.terms) v += smoothed_term(term, mu, t);

  if (spec.forcing.extra) {
    const double upper = std::min(t, spec.forcing.extra_support);
    if (upper > 0.0) {
      v += numerics::integrate(
               [&](double l) { return std::exp((l - t) / mu) * spec.forcing.extra(l); }, 0.0,
               upper, 1e-11) /
           mu;
    }
  }

  if (spec.h > 0.0 && spec.rho != 0.0) {
    const double upper = std::min(t, spec.h) - spec.h;
    std::vector<double> breaks{-spec.h};
    for (double k : spec.history.kinks_in(-spec.h, upper)) breaks.push_back(k);
    breaks.push_back(upper);
    const auto& nl = spec.nonlinearity;
    const double J0 = numerics::integrate(
        [&](double l) { return std::exp((l + spec.h - t) / mu) * nl(spec.history.value(l)); },
        breaks, 1e-11 * mu);
    v += spec.rho / mu * J0;
  }
  return v;
}

} // namespace slipcert
