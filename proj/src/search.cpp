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

#include "slipcert/search.hpp"

#include "slipcert/bounds.hpp"
#include "slipcert/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace slipcert {

RecipeResult pll_recipe(double T, double s, double h0, double slack) {
  if (!(T > 0.0)) throw DomainError("pll_recipe: T must be positive");
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("pll_recipe: s must lie in [0, 1]");
  if (!(h0 >= 0.0)) throw DomainError("pll_recipe: h0 must be >= 0");
  if (!(slack >= 0.0 && slack < 1.0)) throw DomainError("pll_recipe: slack must lie in [0, 1)");
  RecipeResult out;
  out.gamma0 = std::max(0.5 * s * h0 * h0, 0.5 * (h0 + 1.0 - s) * (h0 + 1.0 - s));
  const double T4 = T * T * T * T;
  if (out.gamma0 * T4 >= 1.0)
    throw DomainError("pll_recipe: gamma0 T^4 >= 1, the recipe degenerates");
  if (T > 0.9) out.warnings.push_back("T > 0.9 is outside the recipe's stated regime");
  if (h0 > 1.0) out.warnings.push_back("h0 > 1 is outside the recipe's stated regime");
  const double ab = 0.5 * (1.0 - out.gamma0 * T4) * (1.0 - slack);
  out.params.theta = 1.0;
  out.params.a = 1.0;
  out.params.epsilon = ab / T;
  out.params.delta = ab * T;
  out.params.tau = out.gamma0 * T * T * T;
  out.params.k = 1;
  return out;
}

const char* strategy_name(Strategy s) {
  switch (s) {
  case Strategy::recipe:
    return "recipe";
  case Strategy::free:
    return "free";
  case Strategy::automatic:
    return "auto";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  if (name == "recipe") return Strategy::recipe;
  if (name == "free") return Strategy::free;
  if (name == "auto") return Strategy::automatic;
  throw DomainError("unknown strategy '" + name + "' (expected recipe, free or auto)");
}

CertProblem pll_problem(const PllSpec& pll) {
  CertProblem p;
  p.system = pll_to_volterra(pll);
  p.pll = pll;
  p.ic.sigma0 = pll.initial_phase();
  return p;
}

CertProblem pll_family_problem(const PllSpec& base) {
  CertProblem p;
  p.pll = base;
  p.system = pll_to_volterra(base);
  double M = p.system.envelope.M;
  double rate = std::abs(p.system.initial_rate);
  for (const auto& member : pll_initial_family(base)) {
    const auto spec = pll_to_volterra(member);
    M = std::max(M, spec.envelope.M);
    rate = std::max(rate, std::abs(member.initial_rate));
  }
  p.system.envelope.M = M;
  p.system.initial_rate = rate;
  p.system.description += " [initial-condition family envelope]";
  p.ic.attested = true;
  return p;
}

double min_eigenvalue(const Matrix3& m) {
  const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
  const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
  if (p1 == 0.0) return std::min({m[0][0], m[1][1], m[2][2]});
  const double p2 = (m[0][0] - q) * (m[0][0] - q) + (m[1][1] - q) * (m[1][1] - q) +
                    (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Matrix3 b = m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) b[i][j] = (m[i][j] - (i == j ? q : 0.0)) / p;
  }
  const double det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                     b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                     b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Minimal Nelder-Mead on R^n with a hard evaluation budget and an early stop
// once the objective drops below `target`.
struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& step, int budget,
                          double target) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : 1e300;
  };
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  while (evals < budget) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];
    if (vals[best] < target) break;
    if (std::abs(vals[worst] - vals[best]) < 1e-14 * (1.0 + std::abs(vals[best]))) break;

    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t d = 0; d < n; ++d) c[d] += pts[i][d] / static_cast<double>(n);
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d) x[d] = c[d] + t * (pts[worst][d] - c[d]);
      return x;
    };
    auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < vals[best]) {
      auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      auto xc = fr < vals[worst] ? along(-0.5) : along(0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d)
            pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  return {pts[static_cast<std::size_t>(it - vals.begin())], *it, evals};
}

struct Scores {
  double pd = -1e300;
  double fdi = -1e300;
  double combined() const { return std::min(pd, fdi); }
};

class Searcher {
public:
  Searcher(const CertProblem& problem, const SearchOptions& options)
      : problem_(problem), options_(options), nl_(problem.system.nonlinearity),
        tf_(problem.pll ? TransferFunction::pll(problem.pll->T, problem.pll->s, problem.pll->h)
                        : TransferFunction::from_system(problem.system)),
        base_integrals_(periodic_integrals(nl_, 1.0, 1.0)) {
    if ((options.theorem == Theorem::T1 || options.theorem == Theorem::T2) && !options.Q)
      throw DomainError("theorems 1 and 2 need a caller-supplied Q");
    if (options.theorem == Theorem::T3 || options.theorem == Theorem::T4) {
      if (!nl_.symmetric_slopes())
        throw DomainError("theorems 3 and 4 need |alpha1| = alpha2");
    }
    // Coarse frequency grid for the search penalty only; the final check is rigorous.
    // Relative to omega_base = sqrt(|a1| a2 delta / tau): 256 log-spaced points.
    constexpr int n = 256;
    grid_.push_back(0.0);
    for (int i = 0; i < n - 1; ++i) grid_.push_back(1e-4 * std::pow(1e6, i / (n - 2.0)));
  }

  SearchResult run() {
    SearchResult result;
    std::ostringstream diag;
    if (options_.k_cap < 1) {
      result.diagnostics = "k cap " + std::to_string(options_.k_cap) + " admits no candidate";
      return result;
    }
    const bool recipe_ok = recipe_applicable(diag);
    for (int k = 1; k <= options_.k_cap; ++k) {
      if (options_.fixed) {
        auto p = *options_.fixed;
        p.k = k;
        ++result.evaluations;
        if (auto out = check(p, "fixed")) {
          result.certificate = std::move(out);
          result.found_by = "fixed";
          break;
        }
        continue;
      }
      if (options_.strategy != Strategy::free && recipe_ok) {
        auto p = recipe_->params;
        p.k = k;
        auto out = check(p, "recipe");
        ++result.evaluations;
        if (out) {
          result.certificate = std::move(out);
          result.found_by = "recipe";
          break;
        }
      }
      if (options_.strategy != Strategy::recipe) {
        auto out = simplex(k, result);
        if (out) {
          result.certificate = std::move(out);
          result.found_by = "simplex";
          break;
        }
      }
    }
    if (!result.certificate) {
      diag << "no certificate for k <= " << options_.k_cap << " (theorem "
           << theorem_name(options_.theorem) << ", strategy " << strategy_name(options_.strategy)
           << ")";
      if (best_) {
        diag << "; best near miss: k=" << best_->k << " via " << best_->source
             << " pd_score=" << fmt(best_->pd_score) << " fdi_score=" << fmt(best_->fdi_score)
             << " theta=" << fmt(best_->params.theta) << " eps=" << fmt(best_->params.epsilon)
             << " delta=" << fmt(best_->params.delta) << " tau=" << fmt(best_->params.tau)
             << " a=" << fmt(best_->params.a);
      }
      if (!last_check_.empty()) diag << "; last check: " << last_check_;
    }
    result.near_miss = best_;
    result.diagnostics = diag.str();
    return result;
  }

private:
  bool recipe_applicable(std::ostringstream& diag) {
    if (!problem_.pll) return false;
    const auto& pll = *problem_.pll;
    recipe_ = pll_recipe(pll.T, pll.s, pll.h / pll.T, options_.recipe_slack);
    for (const auto& w : recipe_->warnings) diag << "warning: " << w << "; ";
    if (options_.theorem == Theorem::T3 &&
        std::abs(pll.b() - pll.dc_gain() * pll.beta) > 1e-12 * std::max(1.0, pll.T)) {
      diag << "recipe skipped: its explicit q assumes b = K(0) beta (b = " << fmt(pll.b())
           << "); ";
      return false;
    }
    return true;
  }

  // q for a candidate; the recipe path under Theorem 3 uses the PLL bound.
  double q_for(const CertificateParams& p, bool recipe) const {
    switch (options_.theorem) {
    case Theorem::T1:
    case Theorem::T2:
      return *options_.Q;
    case Theorem::T3:
      if (recipe) {
        const auto& pll = *problem_.pll;
        return bounds::pll_q(pll.T, pll.s, pll.beta, pll.h / pll.T);
      }
      break;
    case Theorem::T4:
      return bounds::q0(p.theta, p.epsilon, p.tau, problem_.system.envelope.M,
                        problem_.system.envelope.r, nl_.sup_abs(), std::abs(problem_.system.rho),
                        problem_.system.h);
    }
    return bounds::lemma2_q(p.theta, p.epsilon, p.tau, problem_.system.envelope.M,
                            problem_.system.envelope.r, nl_.sup_abs(),
                            std::abs(problem_.system.rho));
  }

  std::optional<SlipCertificate> check(const CertificateParams& p, const std::string& source) {
    const bool recipe = source == "recipe";
    CheckOutcome out;
    try {
      switch (options_.theorem) {
      case Theorem::T1:
        out = theorem1_check(tf_, nl_, p, q_for(p, recipe), options_.fdi);
        break;
      case Theorem::T2:
        out = theorem2_check(tf_, nl_, p, q_for(p, recipe), options_.fdi);
        break;
      case Theorem::T3:
        out = theorem3_check(tf_, nl_, p, q_for(p, recipe), problem_.ic, options_.fdi,
                             recipe && problem_.pll ? "PLL explicit bound (b = K(0) beta)"
                                                    : "envelope bound (M, r)");
        break;
      case Theorem::T4:
        out = theorem4_check(problem_.system, p, options_.mu_tilde, problem_.ic, options_.fdi);
        break;
      }
    } catch (const NumericalError& e) {
      last_check_ = std::string("numerical failure: ") + e.what();
      return std::nullopt;
    }
    last_check_ = out.diagnostics;
    if (!out.certificate) {
      note(p, source, score(p, recipe));
      return std::nullopt;
    }
    if (!revalidate(*out.certificate, options_.fdi)) {
      last_check_ += "; rejected by re-validation";
      return std::nullopt;
    }
    return out.certificate;
  }

  Scores score(const CertificateParams& p, bool recipe) const {
    Scores s;
    const double q = q_for(p, recipe);
    const auto r = r_coefficients(base_integrals_, p.theta, p.k, q);
    if (options_.theorem == Theorem::T1) {
      const auto integrals = periodic_integrals(nl_, p.epsilon, p.tau);
      const auto r1 = r_coefficients(integrals, p.theta, p.k, q).r1;
      s.pd = 1e300;
      for (double v : r1) {
        const double need = p.theta * p.theta * v * v;
        s.pd = std::min(s.pd, (4.0 * p.delta - need) / (4.0 * p.delta + need));
      }
    } else {
      s.pd = 1e300;
      for (int j = 0; j < 2; ++j) {
        const auto m = t_matrix(p, r.r[j], r.r0[j]);
        double scale = 0.0;
        for (const auto& row : m)
          for (double v : row) scale = std::max(scale, std::abs(v));
        s.pd = std::min(s.pd, min_eigenvalue(m) / scale);
      }
    }
    const double ae1 = std::abs(nl_.alpha1());
    const double ae2 = nl_.alpha2();
    const double wb = std::sqrt(ae1 * ae2 * p.delta / p.tau);
    s.fdi = 1e300;
    for (double g : grid_) {
      const double w = g * wb;
      const double absK2 = std::norm(eval_K(tf_, w));
      const double value = popov_value(tf_, p, nl_.alpha1(), nl_.alpha2(), w);
      const double scale =
          p.delta + p.theta * std::sqrt(absK2) + (p.epsilon + p.tau) * absK2 + p.tau * w * w / (ae1 * ae2);
      s.fdi = std::min(s.fdi, value / scale);
    }
    return s;
  }

  void note(const CertificateParams& p, const std::string& source, const Scores& s) {
    if (!best_ || s.combined() > std::min(best_->pd_score, best_->fdi_score)) {
      NearMiss m;
      m.k = p.k;
      m.params = p;
      m.pd_score = s.pd;
      m.fdi_score = s.fdi;
      m.source = source;
      best_ = m;
    }
  }

  static CertificateParams unpack(const std::vector<double>& x, int k) {
    CertificateParams p;
    p.theta = std::exp(x[0]);
    p.epsilon = std::exp(x[1]);
    p.delta = std::exp(x[2]);
    p.tau = std::exp(x[3]);
    p.a = std::clamp(x[4], 0.0, 1.0);
    p.k = k;
    return p;
  }

  std::optional<SlipCertificate> simplex(int k, SearchResult& result) {
    CertificateParams base;
    if (problem_.pll) {
      base = pll_recipe(problem_.pll->T, problem_.pll->s, problem_.pll->h / problem_.pll->T,
                        options_.recipe_slack)
                 .params;
    }
    const std::vector<double> x_base{std::log(base.theta), std::log(base.epsilon),
                                     std::log(base.delta), std::log(base.tau), base.a};
    std::mt19937_64 rng(options_.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(k));
    std::uniform_real_distribution<double> decade(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double ln10 = std::log(10.0);
    std::vector<std::vector<double>> starts{x_base};
    for (int i = 1; i < options_.restarts; ++i) {
      auto x = x_base;
      x[0] += 0.5 * ln10 * decade(rng);
      for (int d = 1; d < 4; ++d) x[d] += ln10 * decade(rng);
      x[4] = unit(rng);
      starts.push_back(x);
    }
    const int per = std::max(10, options_.evaluations_per_k / std::max(1, options_.restarts));
    const std::vector<double> step{0.5, 0.5, 0.5, 0.5, 0.25};
    auto objective = [this, k](const std::vector<double>& x) {
      const auto p = unpack(x, k);
      const double penalty = std::pow(std::max(0.0, x[4] - 1.0), 2) +
                             std::pow(std::max(0.0, -x[4]), 2);
      try {
        return -score(p, false).combined() + penalty;
      } catch (const DomainError&) {
        return 1e300;
      }
    };
    auto run_one = [&](std::size_t i) {
      return nelder_mead(objective, starts[i], step, per, -1e-6);
    };
    std::vector<SimplexResult> runs(starts.size());
    const unsigned hw = std::thread::hardware_concurrency();
    if (hw > 1) {
      std::vector<std::future<SimplexResult>> jobs;
      for (std::size_t i = 0; i < starts.size(); ++i)
        jobs.push_back(std::async(std::launch::async, run_one, i));
      for (std::size_t i = 0; i < starts.size(); ++i) runs[i] = jobs[i].get();
    } else {
      for (std::size_t i = 0; i < starts.size(); ++i) runs[i] = run_one(i);
    }
    // First success in restart order keeps the outcome independent of scheduling.
    for (const auto& run : runs) {
      result.evaluations += run.evaluations;
      const auto p = unpack(run.x, k);
      if (run.value < 0.0) {
        if (auto cert = check(p, "simplex")) return cert;
      } else {
        try {
          note(p, "simplex", score(p, false));
        } catch (const DomainError&) {
        }
      }
    }
    return std::nullopt;
  }

  const CertProblem& problem_;
  const SearchOptions& options_;
  const PeriodicNonlinearity& nl_;
  TransferFunction tf_;
  PeriodicIntegrals base_integrals_;
  std::vector<double> grid_;
  std::optional<RecipeResult> recipe_;
  std::optional<NearMiss> best_;
  std::string last_check_;
};

} // namespace

SearchResult min_certified_k(const CertProblem& problem, const SearchOptions& options) {
  if (options.k_cap > 4096) throw DomainError("k cap above 4096 is not supported");
  Searcher searcher(problem, options);
  return searcher.run();
}

std::vector<MuSweepRow> mu_sweep(const CertProblem& problem, const SlipCertificate& cert,
                                 const std::vector<double>& mus, const SimulationOptions& sim) {
  if (cert.theorem != Theorem::T4)
    throw DomainError("mu_sweep needs a singularly perturbed (T4) certificate");
  for (double mu : mus)
    if (!(mu > 0.0 && mu * cert.r_decay < 1.0))
      throw DomainError("mu = " + fmt(mu) + " is outside (0, 1/r) with r = " + fmt(cert.r_decay));

  std::vector<SystemSpec> members;
  if (problem.pll) {
    for (const auto& p : pll_initial_family(*problem.pll)) members.push_back(pll_to_volterra(p));
  } else {
    members.push_back(problem.system);
  }

  CertificateParams bar = cert.params;
  bar.delta = cert.delta_bar;
  std::vector<MuSweepRow> rows;
  for (double mu : mus) {
    MuSweepRow row;
    row.mu = mu;
    const auto& p = cert.params;
    row.q_mu = bounds::q_mu(p.theta, p.epsilon, p.tau, cert.M, cert.r_decay, cert.m, cert.rho_abs,
                            cert.h, mu, cert.rate0);
    row.pd_ok = matrices_positive_definite(cert.integrals, bar, row.q_mu);
    SimulationOptions o = sim;
    o.mu = mu;
    for (const auto& count : simulate_ensemble(members, o)) {
      row.sim_slips = std::max(row.sim_slips, count.k);
      row.provisional = row.provisional || count.provisional;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string mu_sweep_csv(const std::vector<MuSweepRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << "mu,q_mu,pd_ok,sim_slips\n";
  for (const auto& r : rows)
    os << r.mu << "," << r.q_mu << "," << (r.pd_ok ? "true" : "false") << "," << r.sim_slips
       << "\n";
  return os.str();
}

} // namespace slipcert
