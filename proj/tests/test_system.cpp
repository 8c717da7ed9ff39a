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
#include "fixtures.hpp"

#include "slipcert/error.hpp"
#include "slipcert/system.hpp"

#include <cmath>

using namespace slipcert;

TEST_CASE("delayed exponential terms") {
  const ExpTerm term{2.0, 0.5, 1.0};
  CHECK(term(0.5) == 0.0);
  CHECK(term(1.0) == 2.0);
  CHECK(term(3.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  const std::complex<double> p{0.3, 1.7};
  const auto expect = 2.0 * std::exp(-p) / (p + 0.5);
  CHECK(std::abs(term.laplace(p) - expect) < 1e-15);
}

TEST_CASE("history shapes") {
  const auto c = History::constant(1.5);
  CHECK(c.value(-3) == 1.5);
  CHECK(c.slope(-1) == 0.0);
  const auto l = History::linear(1.0, 2.0);
  CHECK(l.value(-0.5) == doctest::Approx(0.0));
  CHECK(l.slope(-0.5) == 2.0);
  const auto t = History::table({{-1.0, 0.0}, {-0.5, 1.0}, {0.0, 0.0}});
  CHECK(t.value(-0.75) == doctest::Approx(0.5));
  CHECK(t.value(-2.0) == 0.0);
  CHECK(t.slope(-0.25) == doctest::Approx(-2.0));
  CHECK(t.kinks_in(-1.0, 0.0).size() == 1);
}

TEST_CASE("nominal initial rate gives b = K(0) beta") {
  PllSpec pll;
  pll.history = History::linear(0.3, -4.0);
  pll.initial_rate = pll_rate_for_nominal_b(pll);
  CHECK(pll.b() == doctest::Approx(pll.dc_gain() * pll.beta).epsilon(1e-14));
}

TEST_CASE("PLL Volterra form") {
  PllSpec pll;
  pll.T = 0.1;
  pll.s = 0.4;
  pll.beta = 0.9;
  pll.h = 0.1;
  pll.history = History::constant(std::asin(0.9));
  pll.initial_rate = pll_rate_for_nominal_b(pll);
  const auto spec = pll_to_volterra(pll);
  CHECK(spec.rho == doctest::Approx(-0.04));
  REQUIRE(spec.kernel.terms.size() == 1);
  CHECK(spec.kernel.terms[0].rate == doctest::Approx(10.0));
  CHECK(spec.kernel.terms[0].onset == doctest::Approx(0.1));
  CHECK(spec.envelope.r == doctest::Approx(10.0));
  CHECK_NOTHROW(validate_system(spec));
  // At an equilibrium history the forcing is exp(-t/T) b.
  CHECK(spec.forcing(0.05) == doctest::Approx(std::exp(-0.5) * pll.b()).epsilon(1e-12));
}

TEST_CASE("PLL parameter validation") {
  PllSpec pll;
  pll.beta = 1.5;
  CHECK_THROWS_AS(pll_to_volterra(pll), DomainError);
  pll.beta = 0.9;
  pll.s = 1.0;
  CHECK_THROWS_AS(pll_to_volterra(pll), DomainError);
}

TEST_CASE("envelope violations are rejected") {
  SystemSpec spec;
  spec.kernel.terms = {{3.0, 1.0, 0.0}};
  spec.envelope = {1.0, 1.0};
  CHECK_THROWS_AS(validate_system(spec), DomainError);
  spec.envelope = fit_envelope(spec.kernel, spec.forcing, 1.0);
  CHECK_NOTHROW(validate_system(spec));
  spec.envelope.r = 2.0;
  CHECK_THROWS_AS(validate_system(spec), DomainError);
}

TEST_CASE("perturbed kernel of an exponential is the confluent form") {
  SystemSpec spec;
  spec.kernel.terms = {{1.0, 1.0, 0.0}};
  CHECK(std::abs(perturbed_kernel(spec, 1.0, 0.7) - fixtures::kConfluent07) < 1e-12);
  CHECK_THROWS_AS(perturbed_kernel(spec, 0.0, 0.7), DomainError);
}

TEST_CASE("perturbed reduction approaches the unperturbed data") {
  SystemSpec spec;
  spec.kernel.terms = {{0.6, 10.0, 0.1}};
  spec.forcing.terms.terms = {{0.09, 10.0, 0.0}};
  spec.initial_rate = 0.09;
  for (double t : {0.05, 0.3, 1.0}) {
    CHECK(perturbed_kernel(spec, 1e-6, t) == doctest::Approx(spec.kernel(t)).epsilon(1e-4));
    CHECK(perturbed_forcing(spec, 1e-6, t) == doctest::Approx(spec.forcing(t)).epsilon(1e-4));
  }
}
