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

#include "slipcert/numerics.hpp"

#include "slipcert/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace slipcert::numerics {

Extremum golden_section_min(const std::function<double(double)>& f, double a, double b,
                            double x_tol, int max_iter) {
  constexpr double kInvPhi = 0.6180339887498948482;
  Extremum best{a, f(a)};
  const double fb = f(b);
  if (fb < best.value) best = {b, fb};

  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && std::abs(b - a) > x_tol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  if (fc < best.value) best = {c, fc};
  if (fd < best.value) best = {d, fd};
  return best;
}

Extremum golden_section_max(const std::function<double(double)>& f, double a, double b,
                            double x_tol, int max_iter) {
  auto r = golden_section_min([&](double x) { return -f(x); }, a, b, x_tol, max_iter);
  return {r.x, -r.value};
}

double bisect_root(const std::function<double(double)>& f, double a, double b, double x_tol) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::signbit(fa) == std::signbit(fb))
    throw NumericalError("bisect_root: interval does not bracket a sign change");
  for (int i = 0; i < 200 && std::abs(b - a) > x_tol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

namespace {

using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Piece {
  double a, b, value, err, l1;
  bool operator<(const Piece& o) const { return err < o.err; }
};

Piece evaluate(const std::function<double(double)>& f, double a, double b) {
  Piece p{a, b, 0.0, 0.0, 0.0};
  p.value = Quad::integrate(f, a, b, 0, 0.0, &p.err, &p.l1);
  return p;
}

} // namespace

// Global adaptive scheme on an absolute target: always split the piece with
// the largest error estimate. Boost's own recursion uses a relative target,
// which never terminates on near-zero integrands.
double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 double abs_tol) {
  constexpr int max_pieces = 2000;
  std::priority_queue<Piece> heap;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    const Piece p = evaluate(f, breakpoints[i], breakpoints[i + 1]);
    err += p.err;
    heap.push(p);
  }
  for (int n = static_cast<int>(heap.size()); err > abs_tol && n < max_pieces; ++n) {
    const Piece worst = heap.top();
    // Round-off dominated: splitting cannot improve the estimate.
    if (worst.err <= 50.0 * std::numeric_limits<double>::epsilon() * worst.l1) break;
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    const Piece left = evaluate(f, worst.a, m);
    const Piece right = evaluate(f, m, worst.b);
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    if (!std::isfinite(left.value) || !std::isfinite(right.value)) break;
  }

  // Re-sum in ascending order of position for a deterministic result.
  std::vector<Piece> pieces;
  for (; !heap.empty(); heap.pop()) pieces.push_back(heap.top());
  std::sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  double total = 0.0;
  err = 0.0;
  for (const auto& p : pieces) {
    total += p.value;
    err += p.err;
  }
  if (!(err <= abs_tol) || !std::isfinite(total)) {
    std::ostringstream os;
    os << "quadrature did not converge (error estimate " << err << ", tolerance " << abs_tol
       << ")";
    throw NumericalError(os.str());
  }
  return total;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  const double pts[2] = {a, b};
  return integrate(f, std::span<const double>(pts, 2), abs_tol);
}

std::vector<double> bracket_roots(const std::function<double(double)>& f, double a, double b,
                                  int n, double x_tol) {
  std::vector<double> roots;
  const double h = (b - a) / n;
  double x0 = a;
  double f0 = f(x0);
  for (int i = 1; i <= n; ++i) {
    const double x1 = (i == n) ? b : a + i * h;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if (f1 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
      roots.push_back(bisect_root(f, x0, x1, x_tol));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

} // namespace slipcert::numerics
