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

#include "doctest.h"

#include "slipcert/error.hpp"
#include "slipcert/simulator.hpp"
#include "slipcert/system.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace slipcert;
using std::numbers::pi;

namespace {

PllSpec example_pll(double beta, double phase, double slope = 0.0) {
  PllSpec p;
  p.T = 0.1;
  p.s = 0.4;
  p.beta = beta;
  p.h = 0.1;
  p.history = History::linear(phase, slope);
  p.initial_rate = pll_rate_for_nominal_b(p);
  return p;
}

double sup_gap(const Trajectory& a, const Trajectory& b) {
  const std::size_t n = std::min(a.t.size(), b.t.size());
  double g = 0.0;
  for (std::size_t i = 0; i < n; ++i) g = std::max(g, std::abs(a.sigma[i] - b.sigma[i]));
  return g;
}

Trajectory synthetic(double dt, int n, double (*f)(double)) {
  Trajectory tr;
  tr.dt = dt;
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    tr.t.push_back(t);
    tr.sigma.push_back(f(t));
    tr.sigma_dot.push_back((f(t + 1e-6) - f(t - 1e-6)) / 2e-6);
  }
  return tr;
}

} // namespace

TEST_CASE("free mu-form solution matches its closed form") {
  SystemSpec spec;
  spec.nonlinearity = PeriodicNonlinearity::sine(0.5);
  spec.history = History::constant(0.7);
  spec.initial_rate = 2.0;
  for (auto [mu, stepper] : {std::pair{0.05, Stepper::rk4}, std::pair{0.05, Stepper::etd_rk4},
                             std::pair{1e-4, Stepper::etd_rk4}}) {
    SimulationOptions o;
    o.mu = mu;
    o.stepper = stepper;
    o.dt = 0.002;
    o.horizon = 2.0;
    o.early_exit = false;
    const auto tr = integrate(spec, o);
    double err = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
      const double exact = 0.7 + 2.0 * mu * (1.0 - std::exp(-tr.t[i] / mu));
      err = std::max(err, std::abs(tr.sigma[i] - exact));
    }
    CHECK(err < 1e-9);
  }
}

TEST_CASE("decay rate near a stable equilibrium matches the linearization") {
  PllSpec p = example_pll(0.9, std::asin(0.9) + 1e-4);
  p.h = 0.0;
  p.initial_rate = 0.0;
  SimulationOptions o;
  o.horizon = 120.0;
  o.early_exit = false;
  const auto tr = integrate(pll_to_volterra(p), o);
  const double c = std::cos(std::asin(0.9));
  const double trace = 1.0 / p.T + p.s * p.T * c;
  const double slow = (-trace + std::sqrt(trace * trace - 4.0 * c)) / 2.0;
  auto dev = [&](double t) {
    const auto i = static_cast<std::size_t>(std::lround(t / tr.dt));
    return std::abs(tr.sigma[i] - std::asin(0.9));
  };
  const double rate = std::log(dev(60.0) / dev(110.0)) / 50.0;
  CHECK(std::abs(rate + slow) < 1e-4);
}

TEST_CASE("fourth-order convergence under step halving") {
  PllSpec p = example_pll(0.9, std::asin(0.9), 3.0);
  p.T = 0.5;
  p.initial_rate = pll_rate_for_nominal_b(p);
  const auto spec = pll_to_volterra(p);
  auto end_value = [&](double dt) {
    SimulationOptions o;
    o.dt = dt;
    o.horizon = 4.0;
    o.early_exit = false;
    return integrate(spec, o).sigma.back();
  };
  const double a = end_value(0.02), b = end_value(0.01), c = end_value(0.005);
  const double ratio = std::abs(a - b) / std::abs(b - c);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("Volterra form agrees with the direct delay equation") {
  for (double phase : {std::asin(0.9), pi - std::asin(0.9)}) {
    const auto p = example_pll(0.9, phase, -4.0);
    SimulationOptions o;
    o.horizon = 30.0;
    o.early_exit = false;
    const auto v = integrate(pll_to_volterra(p), o);
    const auto d = integrate_pll_direct(p, o);
    REQUIRE(v.t.size() == d.t.size());
    CHECK(sup_gap(v, d) < 1e-7);
  }
}

TEST_CASE("perturbed runs approach the unperturbed run as mu shrinks") {
  for (double phase : {std::asin(0.9), pi - std::asin(0.9)}) {
    const auto spec = pll_to_volterra(example_pll(0.9, phase, 5.0));
    SimulationOptions o;
    o.horizon = 40.0;
    o.early_exit = false;
    const auto base = integrate(spec, o);
    double prev = 1e300;
    for (double mu : {1e-2, 1e-3, 1e-4}) {
      auto om = o;
      om.mu = mu;
      const double gap = sup_gap(integrate(spec, om), base);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 1e-2);
  }
}

TEST_CASE("step-size preconditions") {
  const auto spec = pll_to_volterra(example_pll(0.9, std::asin(0.9)));
  SimulationOptions o;
  o.dt = 0.05;
  CHECK_THROWS_AS(integrate(spec, o), DomainError);
  o.dt = 0.001;
  o.mu = 1e-3;
  o.stepper = Stepper::rk4;
  CHECK_THROWS_AS(integrate(spec, o), DomainError);
  o.stepper = Stepper::etd_rk4;
  o.horizon = 1.0;
  CHECK_NOTHROW(integrate(spec, o));
}

TEST_CASE("blow-up guard") {
  const auto spec = pll_to_volterra(example_pll(0.9, pi - std::asin(0.9), 10.0));
  SimulationOptions o;
  o.blowup = 1.0;
  CHECK_THROWS_AS(integrate(spec, o), SimulationError);
}

TEST_CASE("default step and horizon") {
  const auto spec = pll_to_volterra(example_pll(0.9, std::asin(0.9)));
  CHECK(default_dt(spec, std::nullopt, Stepper::rk4) == doctest::Approx(0.0025));
  CHECK(default_dt(spec, 1e-3, Stepper::rk4) == doctest::Approx(5e-5));
  CHECK(default_dt(spec, 1e-3, Stepper::etd_rk4) == doctest::Approx(0.0025));
  CHECK(default_horizon(spec) == doctest::Approx(500.0));
}

TEST_CASE("slip counting on synthetic paths") {
  const auto flat = synthetic(0.01, 100, [](double) { return 1.0; });
  const auto still = count_slipped_cycles(flat, 2 * pi, {true, 0.0});
  CHECK(still.k == 0);
  CHECK(still.sup_dev == 0.0);
  CHECK_FALSE(still.provisional);

  const auto slip = synthetic(0.01, 3000, [](double t) { return 1.0 + 3 * pi * (1 - std::exp(-t)); });
  const auto one = count_slipped_cycles(slip, 2 * pi, {false, 0.0});
  CHECK(one.k == 1);
  CHECK(one.sup_dev == doctest::Approx(3 * pi).epsilon(1e-9));
  CHECK(one.provisional);

  const auto down = synthetic(0.01, 400, [](double t) { return -4.5 * pi * std::sin(t); });
  const auto two = count_slipped_cycles(down, 2 * pi, {false, 0.0});
  CHECK(two.k == 2);
  CHECK(two.max_down == doctest::Approx(4.5 * pi).epsilon(1e-6));
  CHECK(two.max_up == doctest::Approx(-4.5 * pi * std::sin(4.0)).epsilon(1e-6));
  CHECK(two.sup_dev == doctest::Approx(4.5 * pi).epsilon(1e-6));
}

TEST_CASE("convergence detection") {
  const auto nl = PeriodicNonlinearity::sine(0.5);
  Trajectory eq;
  for (int i = 0; i <= 100; ++i) {
    eq.t.push_back(0.1 * i);
    eq.sigma.push_back(std::asin(0.5));
    eq.sigma_dot.push_back(0.0);
  }
  const auto c = detect_convergence(eq, nl, 1e-6, 1e-6);
  CHECK(c.converged);
  CHECK(c.settle_time == 0.0);
  const auto grow = synthetic(0.1, 100, [](double t) { return t; });
  CHECK_FALSE(detect_convergence(grow, nl, 1e-6, 1e-6).converged);
}

TEST_CASE("equilibrium start stays put") {
  const auto s = simulate_slips(pll_to_volterra(example_pll(0.9, std::asin(0.9))), {});
  CHECK(s.k == 0);
  CHECK(s.converged);
  CHECK(s.sup_dev < 0.1);
}

TEST_CASE("unstable ridge start slips less than two cycles") {
  const auto s = simulate_slips(pll_to_volterra(example_pll(0.9, pi - std::asin(0.9))), {});
  CHECK(s.converged);
  CHECK(s.k <= 1);
}

TEST_CASE("initial-condition family") {
  const auto family = pll_initial_family(example_pll(0.9, 0.0));
  REQUIRE(family.size() == 20);
  const auto nl = PeriodicNonlinearity::sine(0.9);
  for (const auto& p : family) {
    CHECK(std::abs(nl(p.initial_phase())) < 1e-12);
    CHECK(p.b() == doctest::Approx(p.T * p.beta).epsilon(1e-14));
  }
  CHECK(family.front().history.slope(-0.05) == doctest::Approx(-10.0));
  CHECK(family.back().history.slope(-0.05) == doctest::Approx(10.0));
}

TEST_CASE("ensembles keep input order and match sequential runs") {
  std::vector<SystemSpec> specs;
  for (double slope : {-6.0, 0.0, 6.0})
    specs.push_back(pll_to_volterra(example_pll(0.92, pi - std::asin(0.92), slope)));
  SimulationOptions o;
  o.horizon = 30.0;
  const auto all = simulate_ensemble(specs, o);
  REQUIRE(all.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto one = simulate_slips(specs[i], o);
    CHECK(all[i].k == one.k);
    CHECK(all[i].sup_dev == one.sup_dev);
  }
}

TEST_CASE("trajectory CSV is deterministic and self-describing") {
  const auto spec = pll_to_volterra(example_pll(0.9, 2.0, 1.0));
  SimulationOptions o;
  o.horizon = 2.0;
  std::ostringstream a, b;
  write_trajectory_csv(a, integrate(spec, o));
  write_trajectory_csv(b, integrate(spec, o));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("# spec: pll(", 0) == 0);
  CHECK(a.str().find("\nt,sigma,sigma_dot\n") != std::string::npos);
}
