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
#include "slipcert/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace slipcert;

TEST_CASE("golden section finds interior extrema") {
  const auto mn = numerics::golden_section_min([](double x) { return (x - 0.3) * (x - 0.3); }, -1, 2);
  CHECK(mn.x == doctest::Approx(0.3).epsilon(1e-8));
  const auto mx = numerics::golden_section_max([](double x) { return std::sin(x); }, 0, 3);
  CHECK(mx.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("golden section reports a better endpoint") {
  const auto mn = numerics::golden_section_min([](double x) { return x; }, 1, 2);
  CHECK(mn.x == 1.0);
}

TEST_CASE("bisection") {
  const double r = numerics::bisect_root([](double x) { return x * x - 2; }, 0, 2);
  CHECK(std::abs(r - std::numbers::sqrt2) < 1e-12);
  CHECK_THROWS_AS(numerics::bisect_root([](double x) { return x * x + 1; }, -1, 1),
                  NumericalError);
}

TEST_CASE("adaptive quadrature across kinks") {
  const std::array<double, 3> bp{0.0, std::asin(0.9), 2 * std::numbers::pi};
  const double v = numerics::integrate([](double x) { return std::sin(x); }, bp);
  CHECK(std::abs(v) < 1e-12);
  // A nearly vanishing integrand must not stall the absolute-tolerance loop.
  CHECK(std::abs(numerics::integrate([](double x) { return 1e-17 * x; }, 0, 1)) < 1e-16);
  CHECK(numerics::integrate([](double x) { return std::abs(x - 0.25); }, 0, 1) ==
        doctest::Approx(0.3125).epsilon(1e-9));
}

TEST_CASE("unreachable tolerance fails fast") {
  CHECK_THROWS_AS(numerics::integrate([](double x) { return 1e3 * std::exp(-x); }, 0, 10, 1e-30),
                  NumericalError);
}

TEST_CASE("root bracketing") {
  const auto roots = numerics::bracket_roots([](double x) { return std::sin(x) - 0.5; }, 0,
                                             2 * std::numbers::pi, 64);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - std::numbers::pi / 6) < 1e-12);
  CHECK(std::abs(roots[1] - 5 * std::numbers::pi / 6) < 1e-12);
  const auto node = numerics::bracket_roots([](double x) { return x - 0.5; }, 0, 1, 4);
  CHECK(node.size() == 1);
}
