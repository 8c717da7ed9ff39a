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

#ifndef SLIPCERT_NUMERICS_HPP
#define SLIPCERT_NUMERICS_HPP

#include <functional>
#include <span>
#include <vector>

namespace slipcert::numerics {

struct Extremum {
  double x;
  double value;
};

/// Golden-section search for a minimum of `f` on [a, b]. Returns the best
/// point seen, including the endpoints.
Extremum golden_section_min(const std::function<double(double)>& f, double a, double b,
                            double x_tol = 1e-12, int max_iter = 200);

/// Same as golden_section_min applied to -f.
Extremum golden_section_max(const std::function<double(double)>& f, double a, double b,
                            double x_tol = 1e-12, int max_iter = 200);

/// Bisection on a sign-changing bracket [a, b]; throws NumericalError otherwise.
double bisect_root(const std::function<double(double)>& f, double a, double b,
                   double x_tol = 1e-13);

/// Adaptive Gauss-Kronrod quadrature over each consecutive pair of `breakpoints`.
/// Throws NumericalError if the summed error estimate exceeds `abs_tol`.
double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 double abs_tol = 1e-10);

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10);

/// Sign changes of f on a uniform grid of `n` intervals over [a, b], each
/// polished by bisection. Exact zeros on grid nodes are reported once.
std::vector<double> bracket_roots(const std::function<double(double)>& f, double a, double b,
                                  int n, double x_tol = 1e-13);

} // namespace slipcert::numerics

#endif // SLIPCERT_NUMERICS_HPP
