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

#include "slipcert/simulator.hpp"

#include "slipcert/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace slipcert {

const char* stepper_name(Stepper s) {
  switch (s) {
  case Stepper::automatic:
    return "auto";
  case Stepper::rk4:
    return "rk4";
  case Stepper::etd_rk4:
    return "etd";
  }
  return "?";
}

Stepper parse_stepper(const std::string& name) {
  if (name == "auto") return Stepper::automatic;
  if (name == "rk4") return Stepper::rk4;
  if (name == "etd") return Stepper::etd_rk4;
  throw DomainError("unknown stepper '" + name + "' (expected auto, rk4 or etd)");
}

namespace {

double base_dt(const SystemSpec& spec) {
  double dt = spec.time_scale / 40.0;
  if (spec.h > 0.0) dt = std::min(dt, spec.h / 8.0);
  for (const auto& term : spec.kernel.terms)
    if (term.onset > 0.0) dt = std::min(dt, term.onset / 8.0);
  return dt;
}

Stepper resolve(const SystemSpec& spec, std::optional<double> mu, Stepper requested) {
  if (requested != Stepper::automatic) return requested;
  if (mu && *mu / 20.0 < base_dt(spec)) return Stepper::etd_rk4;
  return Stepper::rk4;
}

// Weights of one exponential RK4 step (Cox-Matthews form), all of Q and f
// multiplied by h. A zero linear part gives the classical RK4 weights.
struct EtdWeights {
  double E = 1.0, E2 = 1.0, Q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
};

using Cld = std::complex<long double>;
using Phi6 = std::array<long double, 6>;

// exp(z), exp(z/2), (exp(z/2) - 1)/z and the three fourth-order weights.
std::array<Cld, 6> phi_functions(Cld z) {
  const Cld ez = std::exp(z);
  const Cld z3 = z * z * z;
  return {ez,
          std::exp(z / 2.0L),
          (std::exp(z / 2.0L) - 1.0L) / z,
          (-4.0L - z + ez * (4.0L - 3.0L * z + z * z)) / z3,
          (2.0L + z + ez * (z - 2.0L)) / z3,
          (-4.0L - 3.0L * z - z * z + ez * (4.0L - z)) / z3};
}

constexpr Phi6 kPhiAtZero{1.0L, 1.0L, 0.5L, 1.0L / 6.0L, 1.0L / 6.0L, 1.0L / 6.0L};

// Evaluates g(z) (or the divided difference (g(z) - g(0))/z) for real z. Near
// 0 the value is the mean over a unit circle around z, which sidesteps the
// cancellation in the closed forms.
Phi6 phi_eval(long double z, bool divided) {
  auto at = [&](Cld w) {
    auto g = phi_functions(w);
    if (divided)
      for (int i = 0; i < 6; ++i) g[i] = (g[i] - kPhiAtZero[i]) / w;
    return g;
  };
  Phi6 out{};
  if (std::abs(z) < 0.5L) {
    constexpr int n = 64;
    const long double pi = 3.141592653589793238462643383279502884L;
    for (int j = 0; j < n; ++j) {
      const auto g = at(Cld(z, 0.0L) + std::polar(1.0L, 2.0L * pi * (j + 0.5L) / n));
      for (int i = 0; i < 6; ++i) out[i] += g[i].real() / n;
    }
  } else {
    const auto g = at(Cld(z, 0.0L));
    for (int i = 0; i < 6; ++i) out[i] = g[i].real();
  }
  return out;
}

EtdWeights to_weights(const Phi6& g, long double scale, double h) {
  EtdWeights w;
  w.E = static_cast<double>(scale * g[0]);
  w.E2 = static_cast<double>(scale * g[1]);
  w.Q = static_cast<double>(scale * h * g[2]);
  w.f1 = static_cast<double>(scale * h * g[3]);
  w.f2 = static_cast<double>(scale * h * g[4]);
  w.f3 = static_cast<double>(scale * h * g[5]);
  return w;
}

// Uniform-grid samples with derivatives; cubic Hermite lookup.
struct Series {
  std::vector<double> y;
  std::vector<double> dy;

  double at(double u, double dt) const {
    const std::size_t last = y.size() - 1;
    std::size_t j = static_cast<std::size_t>(std::floor(u / dt));
    if (j >= last) j = last - 1;
    const double s = u / dt - static_cast<double>(j);
    const double s2 = s * s;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s2 * (3.0 - 2.0 * s);
    const double h11 = s2 * (s - 1.0);
    return h00 * y[j] + h10 * dt * dy[j] + h01 * y[j + 1] + h11 * dt * dy[j + 1];
  }
};

// t - delay with the rounding residue at a grid-aligned u = 0 resolved by
// stage: the first stage of a step takes the right-hand limit (stored
// solution), later stages the left-hand one (history).
double lag(double t, double delay, double dt, bool first_stage) {
  const double u = t - delay;
  if (std::abs(u) > 1e-9 * dt) return u;
  return first_stage ? 0.0 : -1e-300;
}

std::string hash_hex(const std::string& text) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << std::hash<std::string>{}(text);
  return os.str();
}

// Generic fixed-step driver. The model fills N (the nonlinear part) for
// state y at time t; L holds the diagonal linear part used by the etd stepper.
// With `lambda` set, components 0 and 1 (sigma, sigma') carry the linear part
// [[0, 1], [0, lambda]] and are advanced exponentially; every other component
// (and both, without lambda) uses classical RK4.
struct Model {
  int dim = 0;
  std::optional<double> lambda;
  std::function<void(double, const std::vector<double>&, std::vector<double>&, bool)> N;
  // Full time derivative dy/dt from N and y.
  void full(const std::vector<double>& y, const std::vector<double>& n,
            std::vector<double>& out) const {
    for (int i = 0; i < dim; ++i) out[i] = n[i];
    if (lambda) {
      out[0] += y[1];
      out[1] += *lambda * y[1];
    }
  }
};

struct DriverResult {
  std::vector<Series> series;  // one per state component
  bool stopped_early = false;
};

// `observe(y, dy)` returns true while the tolerances are violated.
DriverResult drive(Model& model, std::vector<double> y0, double dt, double horizon,
                   double t_min, bool early_exit, double blowup,
                   const std::function<bool(const std::vector<double>&,
                                            const std::vector<double>&)>& violating,
                   std::vector<Series>*& live) {
  const int dim = model.dim;
  std::vector<EtdWeights> w(dim, to_weights(kPhiAtZero, 1.0L, dt));
  EtdWeights wc;  // sigma <- sigma' coupling, upper-right entry of g(h A)
  wc.E = wc.E2 = 0.0;
  if (model.lambda) {
    const long double z = static_cast<long double>(dt) * *model.lambda;
    w[1] = to_weights(phi_eval(z, false), 1.0L, dt);
    wc = to_weights(phi_eval(z, true), dt, dt);
  }
  const bool coupled = model.lambda.has_value();

  DriverResult out;
  out.series.resize(dim);
  live = &out.series;
  const std::size_t steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  for (auto& s : out.series) {
    s.y.reserve(steps + 1);
    s.dy.reserve(steps + 1);
    s.y.push_back(0.0);
  }
  for (int i = 0; i < dim; ++i) out.series[i].y[0] = y0[i];

  std::vector<double> y = std::move(y0), Nu(dim), Na(dim), Nb(dim), Nc(dim), a(dim), b(dim),
                      c(dim), dy(dim);
  double last_violation = -1.0;
  for (std::size_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    model.N(t, y, Nu, true);
    model.full(y, Nu, dy);
    for (int i = 0; i < dim; ++i) out.series[i].dy.push_back(dy[i]);
    if (violating(y, dy)) last_violation = t;
    if (n == steps) break;
    if (early_exit && t >= t_min && last_violation + dt <= 0.9 * t) {
      out.stopped_early = true;
      break;
    }

    for (int i = 0; i < dim; ++i) a[i] = w[i].E2 * y[i] + w[i].Q * Nu[i];
    if (coupled) a[0] += wc.E2 * y[1] + wc.Q * Nu[1];
    model.N(t + dt / 2.0, a, Na, false);
    for (int i = 0; i < dim; ++i) b[i] = w[i].E2 * y[i] + w[i].Q * Na[i];
    if (coupled) b[0] += wc.E2 * y[1] + wc.Q * Na[1];
    model.N(t + dt / 2.0, b, Nb, false);
    for (int i = 0; i < dim; ++i) c[i] = w[i].E2 * a[i] + w[i].Q * (2.0 * Nb[i] - Nu[i]);
    if (coupled) c[0] += wc.E2 * a[1] + wc.Q * (2.0 * Nb[1] - Nu[1]);
    model.N(t + dt, c, Nc, false);
    const double y1 = y[1];
    for (int i = 0; i < dim; ++i)
      y[i] = w[i].E * y[i] + w[i].f1 * Nu[i] + 2.0 * w[i].f2 * (Na[i] + Nb[i]) + w[i].f3 * Nc[i];
    if (coupled)
      y[0] += wc.E * y1 + wc.f1 * Nu[1] + 2.0 * wc.f2 * (Na[1] + Nb[1]) + wc.f3 * Nc[1];

    for (int i = 0; i < dim; ++i) {
      if (!std::isfinite(y[i]) || std::abs(y[i]) > blowup) {
        std::ostringstream os;
        os.precision(12);
        os << "blow-up at t = " << t + dt << ": state component " << i << " = " << y[i]
           << " (dt = " << dt << ")";
        throw SimulationError(os.str());
      }
      out.series[i].y.push_back(y[i]);
    }
  }
  return out;
}

void check_step(const SystemSpec& spec, std::optional<double> mu, Stepper stepper, double dt,
                double horizon) {
  auto fail = [&](const std::string& what, double limit) {
    std::ostringstream os;
    os.precision(12);
    os << "step-size precondition violated: dt = " << dt << " exceeds " << what << " = " << limit;
    throw DomainError(os.str());
  };
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const double slack = 1.0 + 1e-12;
  if (spec.h > 0.0 && dt > spec.h / 4.0 * slack) fail("h/4", spec.h / 4.0);
  for (const auto& term : spec.kernel.terms)
    if (term.onset > 0.0 && dt > term.onset / 4.0 * slack) fail("onset/4", term.onset / 4.0);
  if (dt > spec.time_scale / 20.0 * slack) fail("T/20", spec.time_scale / 20.0);
  if (mu && stepper == Stepper::rk4 && dt > *mu / 10.0 * slack) fail("mu/10", *mu / 10.0);
  if (mu && !(*mu > 0.0)) throw DomainError("mu must be positive");
}

} // namespace

double default_dt(const SystemSpec& spec, std::optional<double> mu, Stepper stepper) {
  double dt = base_dt(spec);
  if (mu && resolve(spec, mu, stepper) == Stepper::rk4) dt = std::min(dt, *mu / 20.0);
  return dt;
}

double default_horizon(const SystemSpec& spec) { return 5000.0 * spec.time_scale; }

Trajectory integrate(const SystemSpec& spec, const SimulationOptions& options) {
  const auto mu = options.mu ? options.mu : spec.mu;
  const Stepper stepper = resolve(spec, mu, options.stepper);
  const double dt = options.dt > 0.0 ? options.dt : default_dt(spec, mu, stepper);
  const double horizon = options.horizon > 0.0 ? options.horizon : default_horizon(spec);
  check_step(spec, mu, stepper, dt, horizon);

  const auto& nl = spec.nonlinearity;
  const auto& terms = spec.kernel.terms;
  const int nk = static_cast<int>(terms.size());
  const int off = mu ? 2 : 1;

  Model model;
  model.dim = off + nk;
  if (mu && stepper == Stepper::etd_rk4) model.lambda = -1.0 / *mu;

  std::vector<Series>* hist = nullptr;
  const bool etd_v = mu && stepper == Stepper::etd_rk4;
  model.N = [&](double t, const std::vector<double>& y, std::vector<double>& n, bool first) {
    const double sigma = y[0];
    double delayed;
    if (spec.h == 0.0) {
      delayed = sigma;
    } else {
      const double u = lag(t, spec.h, dt, first);
      delayed = u < 0.0 ? spec.history.value(u) : (*hist)[0].at(u, dt);
    }
    double F = spec.forcing(t) + spec.rho * nl(delayed);
    for (int i = 0; i < nk; ++i) {
      const auto& term = terms[i];
      double W;
      if (term.onset == 0.0) {
        W = y[off + i];
      } else {
        const double u = lag(t, term.onset, dt, first);
        W = u <= 0.0 ? 0.0 : (*hist)[off + i].at(u, dt);
      }
      F -= term.coefficient * W;
    }
    if (mu) {
      n[0] = etd_v ? 0.0 : y[1];
      n[1] = etd_v ? F / *mu : (F - y[1]) / *mu;
    } else {
      n[0] = F;
    }
    const double phi = nl(sigma);
    for (int i = 0; i < nk; ++i) n[off + i] = -terms[i].rate * y[off + i] + phi;
  };

  std::vector<double> y0(model.dim, 0.0);
  y0[0] = spec.initial_phase();
  if (mu) y0[1] = spec.initial_rate;

  const double tol_rate = options.tol_rate;
  const double tol_res = options.tol_residual;
  auto violating = [&](const std::vector<double>& y, const std::vector<double>& dy) {
    return std::abs(dy[0]) > tol_rate || std::abs(nl(y[0])) > tol_res;
  };
  double t_min = 20.0 * spec.time_scale + 2.0 * spec.h;
  for (const auto& term : terms) t_min = std::max(t_min, 2.0 * term.onset);

  auto res = drive(model, y0, dt, horizon, t_min, options.early_exit, options.blowup, violating,
                   hist);

  Trajectory traj;
  const std::size_t len = res.series[0].y.size();
  traj.t.resize(len);
  for (std::size_t i = 0; i < len; ++i) traj.t[i] = static_cast<double>(i) * dt;
  traj.sigma = std::move(res.series[0].y);
  traj.sigma_dot = std::move(res.series[0].dy);
  for (int i = 0; i < nk; ++i) traj.w.push_back(std::move(res.series[off + i].y));
  traj.mu = mu;
  traj.dt = dt;
  traj.horizon = horizon;
  traj.stepper = stepper;
  traj.stopped_early = res.stopped_early;
  traj.description = spec.description;
  std::ostringstream key;
  key.precision(17);
  key << spec.description << "|rho=" << spec.rho << "|h=" << spec.h << "|phi=" << nl.name()
      << "|sigma0=" << spec.initial_phase() << "|rate0=" << spec.initial_rate;
  for (const auto& term : terms) key << "|k" << term.coefficient << "," << term.rate << "," << term.onset;
  traj.spec_hash = hash_hex(key.str());
  return traj;
}

Trajectory integrate_pll_direct(const PllSpec& pll, const SimulationOptions& options) {
  pll.validate();
  const auto nl = PeriodicNonlinearity::sine(pll.beta);
  SystemSpec shape;
  shape.h = pll.h;
  shape.time_scale = pll.T;
  const Stepper stepper = options.stepper == Stepper::automatic ? Stepper::rk4 : options.stepper;
  if (options.mu) throw DomainError("integrate_pll_direct: mu is not supported");
  const double dt = options.dt > 0.0 ? options.dt : default_dt(shape, std::nullopt, stepper);
  const double horizon = options.horizon > 0.0 ? options.horizon : default_horizon(shape);
  check_step(shape, std::nullopt, stepper, dt, horizon);

  Model model;
  model.dim = 2;
  std::vector<Series>* hist = nullptr;
  model.N = [&](double t, const std::vector<double>& y, std::vector<double>& n, bool first) {
    const double u = lag(t, pll.h, dt, first);
    double sd;
    double vd;
    if (u < 0.0) {
      sd = pll.history.value(u);
      vd = pll.history.slope(u);
    } else {
      sd = (*hist)[0].at(u, dt);
      vd = (*hist)[1].at(u, dt);
    }
    n[0] = y[1];
    n[1] = -y[1] / pll.T - nl(sd) - pll.s * pll.T * nl.deriv(sd) * vd;
  };
  auto violating = [&](const std::vector<double>& y, const std::vector<double>& dy) {
    return std::abs(dy[0]) > options.tol_rate || std::abs(nl(y[0])) > options.tol_residual;
  };
  auto res = drive(model, {pll.initial_phase(), pll.initial_rate}, dt, horizon,
                   20.0 * pll.T + 2.0 * pll.h, options.early_exit, options.blowup, violating,
                   hist);

  Trajectory traj;
  const std::size_t len = res.series[0].y.size();
  traj.t.resize(len);
  for (std::size_t i = 0; i < len; ++i) traj.t[i] = static_cast<double>(i) * dt;
  traj.sigma = std::move(res.series[0].y);
  traj.sigma_dot = std::move(res.series[1].y);
  traj.dt = dt;
  traj.horizon = horizon;
  traj.stepper = stepper;
  traj.stopped_early = res.stopped_early;
  std::ostringstream os;
  os.precision(17);
  os << "pll-direct(T=" << pll.T << ", s=" << pll.s << ", beta=" << pll.beta << ", h=" << pll.h
     << ", history=" << pll.history.describe() << ", rate0=" << pll.initial_rate << ")";
  traj.description = os.str();
  traj.spec_hash = hash_hex(os.str());
  return traj;
}

ConvergenceResult detect_convergence(const Trajectory& traj, const PeriodicNonlinearity& nl,
                                     double tol_rate, double tol_residual) {
  ConvergenceResult out;
  if (traj.t.empty()) return out;
  std::ptrdiff_t last_bad = -1;
  for (std::size_t i = 0; i < traj.t.size(); ++i)
    if (std::abs(traj.sigma_dot[i]) > tol_rate || std::abs(nl(traj.sigma[i])) > tol_residual)
      last_bad = static_cast<std::ptrdiff_t>(i);
  const double t_end = traj.t.back();
  if (last_bad < 0) {
    out.converged = true;
    out.settle_time = 0.0;
    return out;
  }
  if (static_cast<std::size_t>(last_bad) + 1 >= traj.t.size()) return out;
  out.settle_time = traj.t[last_bad + 1];
  out.converged = traj.t[last_bad] < 0.9 * t_end;
  return out;
}

SlipCount count_slipped_cycles(const Trajectory& traj, double period,
                               const ConvergenceResult& convergence) {
  if (!(period > 0.0)) throw DomainError("count_slipped_cycles: period must be positive");
  SlipCount out;
  out.converged = convergence.converged;
  out.settle_time = convergence.settle_time;
  out.provisional = !convergence.converged;
  if (traj.sigma.empty()) return out;
  const double s0 = traj.sigma.front();
  const std::size_t n = traj.sigma.size();

  // Parabola vertex through (i-1, i, i+1); falls back to the sample value.
  auto refine = [&](std::size_t i, double sign) {
    const double y1 = sign * (traj.sigma[i] - s0);
    if (i == 0 || i + 1 >= n) return y1;
    const double y0 = sign * (traj.sigma[i - 1] - s0);
    const double y2 = sign * (traj.sigma[i + 1] - s0);
    const double curv = y0 - 2.0 * y1 + y2;
    if (!(curv < 0.0)) return y1;
    const double x = 0.5 * (y0 - y2) / curv;
    return std::max(y1, y1 - 0.25 * (y0 - y2) * x);
  };
  std::size_t i_up = 0, i_down = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (traj.sigma[i] > traj.sigma[i_up]) i_up = i;
    if (traj.sigma[i] < traj.sigma[i_down]) i_down = i;
  }
  out.max_up = refine(i_up, 1.0);
  out.max_down = refine(i_down, -1.0);
  out.sup_dev = std::max({0.0, out.max_up, out.max_down});
  out.k = static_cast<int>(std::floor(out.sup_dev / period));
  return out;
}

SlipCount simulate_slips(const SystemSpec& spec, const SimulationOptions& options,
                         Trajectory* keep) {
  auto traj = integrate(spec, options);
  const auto conv =
      detect_convergence(traj, spec.nonlinearity, options.tol_rate, options.tol_residual);
  auto count = count_slipped_cycles(traj, spec.nonlinearity.period(), conv);
  if (keep) *keep = std::move(traj);
  return count;
}

std::vector<SlipCount> simulate_ensemble(const std::vector<SystemSpec>& specs,
                                         const SimulationOptions& options) {
  std::vector<SlipCount> out(specs.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(specs.size(),
                                                      std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < specs.size(); ++i) out[i] = simulate_slips(specs[i], options);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < specs.size(); i += workers)
        out[i] = simulate_slips(specs[i], options);
    }));
  }
  for (auto& job : jobs) job.get();
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const auto old = os.precision(12);
  os << "# spec: " << traj.description << "\n";
  os << "# spec_hash: " << traj.spec_hash << "\n";
  os << "# mu: ";
  if (traj.mu)
    os << *traj.mu;
  else
    os << "none";
  os << "  dt: " << traj.dt << "  horizon: " << traj.horizon
     << "  stepper: " << stepper_name(traj.stepper)
     << "  stopped_early: " << (traj.stopped_early ? "true" : "false") << "\n";
  os << "t,sigma,sigma_dot\n";
  for (std::size_t i = 0; i < traj.t.size(); ++i)
    os << traj.t[i] << "," << traj.sigma[i] << "," << traj.sigma_dot[i] << "\n";
  os.precision(old);
}

std::vector<PllSpec> pll_initial_family(const PllSpec& base) {
  base.validate();
  const auto nl = PeriodicNonlinearity::sine(base.beta);
  std::vector<PllSpec> out;
  for (double root : nl.roots()) {
    for (int i = 0; i < 10; ++i) {
      const double slope = -10.0 + 20.0 * i / 9.0;
      PllSpec p = base;
      p.history = History::linear(root, slope);
      p.initial_rate = pll_rate_for_nominal_b(p);
      out.push_back(p);
    }
  }
  return out;
}

} // namespace slipcert
