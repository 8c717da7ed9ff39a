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
#include "slipcert/nonlinearity.hpp"

#include <cmath>
#include <numbers>

using namespace slipcert;
using std::numbers::pi;

TEST_CASE("sine characteristic has closed-form bounds") {
  const auto nl = PeriodicNonlinearity::sine(0.9);
  CHECK(nl.period() == doctest::Approx(2 * pi));
  CHECK(nl.alpha1() == -1.0);
  CHECK(nl.alpha2() == 1.0);
  CHECK(nl.sup_abs() == doctest::Approx(1.9));
  CHECK(std::abs(nl.mean_integral() + 2 * pi * 0.9) < 1e-10);
  REQUIRE(nl.roots().size() == 2);
  CHECK(std::abs(nl.roots()[0] - std::asin(0.9)) < 1e-13);
  CHECK(std::abs(nl.roots()[1] - (pi - std::asin(0.9))) < 1e-13);
  CHECK(nl.symmetric_slopes());
}

TEST_CASE("stable roots have positive slope") {
  const auto nl = PeriodicNonlinearity::sine(0.5);
  const auto stable = nl.roots_with_slope(+1);
  const auto unstable = nl.roots_with_slope(-1);
  REQUIRE(stable.size() == 1);
  REQUIRE(unstable.size() == 1);
  CHECK(nl.deriv(stable[0]) > 0);
  CHECK(nl.deriv(unstable[0]) < 0);
}

TEST_CASE("out-of-range bias is rejected") {
  CHECK_THROWS_AS(PeriodicNonlinearity::sine(1.5), DomainError);
  CHECK_THROWS_AS(PeriodicNonlinearity::sine(-0.1), DomainError);
}

TEST_CASE("fourier characteristic matches the sine case") {
  const auto f = PeriodicNonlinearity::fourier(-0.3, {1.0}, {});
  const auto s = PeriodicNonlinearity::sine(0.3);
  for (double x = -3; x < 7; x += 0.37) {
    CHECK(f(x) == doctest::Approx(s(x)).epsilon(1e-14));
    CHECK(f.deriv(x) == doctest::Approx(s.deriv(x)).epsilon(1e-14));
  }
  CHECK(f.alpha1() == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(f.alpha2() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.sup_abs() == doctest::Approx(1.3).epsilon(1e-10));
}

TEST_CASE("positive mean is rejected") {
  CHECK_THROWS_AS(PeriodicNonlinearity::fourier(0.2, {1.0}, {}), DomainError);
}

TEST_CASE("generic characteristic from callables") {
  const auto nl = PeriodicNonlinearity::from_functions(
      "shifted", 2 * pi, [](double x) { return std::sin(x) + 0.5 * std::sin(2 * x) - 0.2; },
      [](double x) { return std::cos(x) + std::cos(2 * x); });
  CHECK(nl.alpha2() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(nl.alpha1() == doctest::Approx(-1.125).epsilon(1e-9));
  CHECK(nl.mean_integral() == doctest::Approx(-0.4 * pi).epsilon(1e-9));
  for (double r : nl.roots()) CHECK(std::abs(nl(r)) < 1e-12);
  CHECK_FALSE(nl.symmetric_slopes());
}
