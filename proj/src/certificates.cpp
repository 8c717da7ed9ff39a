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

#include "slipcert/certificates.hpp"

#include "slipcert/bounds.hpp"
#include "slipcert/error.hpp"
#include "slipcert/numerics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slipcert {

double phi_factor(const PeriodicNonlinearity& nl, double sigma) {
  const double d = nl.deriv(sigma);
  const double radicand = (1.0 - d / nl.alpha1()) * (1.0 - d / nl.alpha2());
  if (radicand < -1e-12)
    throw DomainError("phi_factor: slope outside [alpha1, alpha2] at sigma = " +
                      std::to_string(sigma));
  return std::sqrt(std::max(0.0, radicand));
}

double p_factor(double epsilon, double tau, double phi_factor_value) {
  return std::sqrt(epsilon + tau * phi_factor_value * phi_factor_value);
}

PeriodicIntegrals periodic_integrals(const PeriodicNonlinearity& nl, double epsilon, double tau) {
  if (!(epsilon >= 0.0 && tau >= 0.0))
    throw DomainError("periodic_integrals: epsilon and tau must be >= 0");
  std::vector<double> breaks{0.0, nl.period()};
  for (double x : nl.roots()) breaks.push_back(x);
  for (double x : nl.slope_extremizers()) breaks.push_back(x);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::erase_if(breaks, [&](double x) { return x < 0.0 || x > nl.period(); });

  PeriodicIntegrals out;
  out.epsilon = epsilon;
  out.tau = tau;
  out.int_phi = numerics::integrate([&](double s) { return nl(s); }, breaks);
  out.int_abs = numerics::integrate([&](double s) { return std::abs(nl(s)); }, breaks);
  out.int_abs_Phi =
      numerics::integrate([&](double s) { return std::abs(nl(s)) * phi_factor(nl, s); }, breaks);
  out.int_abs_P = numerics::integrate(
      [&](double s) { return std::abs(nl(s)) * p_factor(epsilon, tau, phi_factor(nl, s)); },
      breaks);
  return out;
}

RCoefficients r_coefficients(const PeriodicIntegrals& integrals, double theta, int k, double x) {
  if (!(x >= 0.0)) throw DomainError("r_coefficients: bound constant must be >= 0");
  if (k < 1) throw DomainError("r_coefficients: k must be >= 1");
  if (!(theta > 0.0)) throw DomainError("r_coefficients: theta must be positive");
  if (!(integrals.int_abs > 0.0 && integrals.int_abs_Phi > 0.0 && integrals.int_abs_P > 0.0))
    throw DomainError("r_coefficients: zero denominator (phi vanishes identically)");
  RCoefficients out;
  const double shift = x / (theta * k);
  for (int j = 0; j < 2; ++j) {
    const double num = integrals.int_phi + (j == 0 ? -shift : shift);
    out.r[j] = num / integrals.int_abs;
    out.r0[j] = num / integrals.int_abs_Phi;
    out.r1[j] = num / integrals.int_abs_P;
  }
  return out;
}

RCoefficients r_coefficients(const PeriodicNonlinearity& nl, const CertificateParams& params,
                             double x) {
  return r_coefficients(periodic_integrals(nl, params.epsilon, params.tau), params.theta, params.k,
                        x);
}

double y_function(const PeriodicNonlinearity& nl, const RCoefficients& r, double epsilon,
                  double tau, int j, double sigma) {
  const double v = nl(sigma);
  return v - r.r1.at(j - 1) * std::abs(v) * p_factor(epsilon, tau, phi_factor(nl, sigma));
}

double f_function(const PeriodicNonlinearity& nl, const RCoefficients& r, int j, double sigma) {
  const double v = nl(sigma);
  return v - r.r.at(j - 1) * std::abs(v);
}

double psi_function(const PeriodicNonlinearity& nl, const RCoefficients& r, int j, double sigma) {
  const double v = nl(sigma);
  return v - r.r0.at(j - 1) * std::abs(v) * phi_factor(nl, sigma);
}

Matrix3 t_matrix(const CertificateParams& params, double r_j, double r0_j) {
  const double off1 = params.a * params.theta * r_j / 2.0;
  const double off2 = params.a0() * params.theta * r0_j / 2.0;
  return {{{params.epsilon, off1, 0.0}, {off1, params.delta, off2}, {0.0, off2, params.tau}}};
}

bool is_positive_definite(const Matrix3& m) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (m[i][j] != m[j][i]) throw DomainError("is_positive_definite: matrix is not symmetric");
  const double d1 = m[0][0];
  const double d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                    m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                    m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return d1 > 0.0 && d2 > 0.0 && d3 > 0.0;
}

const char* theorem_name(Theorem t) {
  switch (t) {
  case Theorem::T1:
    return "T1";
  case Theorem::T2:
    return "T2";
  case Theorem::T3:
    return "T3";
  case Theorem::T4:
    return "T4";
  }
  return "?";
}

Theorem parse_theorem(const std::string& name) {
  if (name == "T1" || name == "1") return Theorem::T1;
  if (name == "T2" || name == "2") return Theorem::T2;
  if (name == "T3" || name == "3") return Theorem::T3;
  if (name == "T4" || name == "4") return Theorem::T4;
  throw DomainError("unknown theorem '" + name + "' (expected T1, T2, T3 or T4)");
}

bool matrices_positive_definite(const PeriodicIntegrals& integrals,
                                const CertificateParams& params, double q) {
  const auto r = r_coefficients(integrals, params.theta, params.k, q);
  return is_positive_definite(t_matrix(params, r.r[0], r.r0[0])) &&
         is_positive_definite(t_matrix(params, r.r[1], r.r0[1]));
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void check_attestation(const PeriodicNonlinearity& nl, const InitialConditionAttestation& ic) {
  if (!nl.symmetric_slopes())
    throw DomainError("theorem requires |alpha1| = alpha2 (got " + fmt(nl.alpha1()) + ", " +
                      fmt(nl.alpha2()) + ")");
  if (ic.sigma0) {
    if (std::abs(nl(*ic.sigma0)) > 1e-12)
      throw DomainError("initial phase is not a root of phi: |phi(sigma(0))| = " +
                        fmt(std::abs(nl(*ic.sigma0))));
  } else if (!ic.attested) {
    throw DomainError("theorem requires phi(sigma(0)) = 0; attest it or supply sigma(0)");
  }
}

SlipCertificate base_certificate(Theorem theorem, const TransferFunction& tf,
                                 const PeriodicNonlinearity& nl, const CertificateParams& params,
                                 double q, std::string q_source) {
  SlipCertificate cert;
  cert.k = params.k;
  cert.theorem = theorem;
  cert.params = params;
  cert.q_used = q;
  cert.q_source = std::move(q_source);
  cert.tf = tf;
  cert.alpha1 = nl.alpha1();
  cert.alpha2 = nl.alpha2();
  cert.integrals = periodic_integrals(nl, params.epsilon, params.tau);
  cert.r = r_coefficients(cert.integrals, params.theta, params.k, q);
  for (int j = 0; j < 2; ++j) cert.matrices[j] = t_matrix(params, cert.r.r[j], cert.r.r0[j]);
  return cert;
}

bool scalar_condition(const SlipCertificate& cert) {
  const auto& p = cert.params;
  return 4.0 * p.delta > p.theta * p.theta * cert.r.r1[0] * cert.r.r1[0] &&
         4.0 * p.delta > p.theta * p.theta * cert.r.r1[1] * cert.r.r1[1];
}

CheckOutcome finish(SlipCertificate cert, bool algebraic_ok, const FdiOptions& options) {
  CheckOutcome out;
  out.algebraic_ok = algebraic_ok;
  if (algebraic_ok) {
    cert.fdi = verify_fdi(cert.tf, cert.params, cert.alpha1, cert.alpha2, options);
    out.fdi_ok = cert.fdi.certified;
  }
  std::ostringstream diag;
  diag << theorem_name(cert.theorem) << " k=" << cert.k << ": algebraic "
       << (algebraic_ok ? "ok" : "fails");
  if (algebraic_ok)
    diag << ", frequency inequality " << (out.fdi_ok ? "ok" : "fails") << " (min "
         << fmt(cert.fdi.min_value) << " at w=" << fmt(cert.fdi.argmin) << ")";
  out.diagnostics = diag.str();
  if (algebraic_ok && out.fdi_ok) out.certificate = std::move(cert);
  return out;
}

} // namespace

CheckOutcome theorem1_check(const TransferFunction& tf, const PeriodicNonlinearity& nl,
                            const CertificateParams& params, double Q,
                            const FdiOptions& options) {
  params.validate();
  auto cert = base_certificate(Theorem::T1, tf, nl, params, Q, "caller Q");
  const bool ok = scalar_condition(cert);
  return finish(std::move(cert), ok, options);
}

CheckOutcome theorem2_check(const TransferFunction& tf, const PeriodicNonlinearity& nl,
                            const CertificateParams& params, double Q,
                            const FdiOptions& options) {
  params.validate();
  auto cert = base_certificate(Theorem::T2, tf, nl, params, Q, "caller Q");
  const bool ok = is_positive_definite(cert.matrices[0]) && is_positive_definite(cert.matrices[1]);
  return finish(std::move(cert), ok, options);
}

CheckOutcome theorem3_check(const TransferFunction& tf, const PeriodicNonlinearity& nl,
                            const CertificateParams& params, double q,
                            const InitialConditionAttestation& ic, const FdiOptions& options,
                            std::string q_source) {
  params.validate();
  check_attestation(nl, ic);
  auto cert = base_certificate(Theorem::T3, tf, nl, params, q, std::move(q_source));
  const bool ok = is_positive_definite(cert.matrices[0]) && is_positive_definite(cert.matrices[1]);
  return finish(std::move(cert), ok, options);
}

CheckOutcome theorem4_check(const SystemSpec& spec, const CertificateParams& params,
                            double mu_tilde, const InitialConditionAttestation& ic,
                            const FdiOptions& options) {
  params.validate();
  const auto& nl = spec.nonlinearity;
  check_attestation(nl, ic);
  if (!(mu_tilde > 0.0)) throw DomainError("theorem4_check: mu_tilde must be positive");

  const double M = spec.envelope.M;
  const double r = spec.envelope.r;
  const double m = nl.sup_abs();
  const double rho = std::abs(spec.rho);
  const double q0 = bounds::q0(params.theta, params.epsilon, params.tau, M, r, m, rho, spec.h);

  auto cert = base_certificate(Theorem::T4, TransferFunction::from_system(spec), nl, params, q0,
                               "q0 (mu -> 0 limit of q_mu)");
  cert.q0 = q0;
  cert.M = M;
  cert.r_decay = r;
  cert.m = m;
  cert.rho_abs = rho;
  cert.h = spec.h;
  cert.rate0 = spec.initial_rate;

  const bool pd = is_positive_definite(cert.matrices[0]) && is_positive_definite(cert.matrices[1]);
  auto out = finish(cert, pd, options);
  if (!out.certificate) return out;
  cert = *out.certificate;

  // delta_bar: midpoint between the smallest delta keeping T_j(q0) positive definite and delta.
  auto pd_with_delta = [&](double d, double q) {
    CertificateParams p = params;
    p.delta = d;
    return matrices_positive_definite(cert.integrals, p, q);
  };
  double lo = 0.0;
  double hi = params.delta;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * params.delta; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pd_with_delta(mid, q0) ? hi : lo) = mid;
  }
  cert.delta_bar = 0.5 * (hi + params.delta);
  if (!(cert.delta_bar < params.delta) || !pd_with_delta(cert.delta_bar, q0)) {
    out.certificate.reset();
    out.diagnostics += "; no room for delta_bar < delta";
    return out;
  }

  const double ae = nl.alpha2();
  cert.mu_threshold = mu_threshold(cert.tf, params, ae, cert.delta_bar, mu_tilde, options);

  // mu_hat: bisection for the largest mu keeping T_j(k, theta, q_mu) positive definite with delta_bar.
  auto pd_at_mu = [&](double mu) {
    const double q = bounds::q_mu(params.theta, params.epsilon, params.tau, M, r, m, rho, spec.h,
                                  mu, spec.initial_rate);
    return pd_with_delta(cert.delta_bar, q);
  };
  const double mu_cap = std::min(mu_tilde, (1.0 - 1e-9) / r);
  double mu_hat = 0.0;
  if (pd_at_mu(mu_cap)) {
    mu_hat = mu_cap;
  } else {
    double a = 0.0;
    double b = mu_cap;
    for (int i = 0; i < 200 && b - a > 1e-14 * mu_cap; ++i) {
      const double mid = 0.5 * (a + b);
      (pd_at_mu(mid) ? a : b) = mid;
    }
    mu_hat = a;
  }
  // Reject non-monotone cases by sampling below mu_hat.
  for (int pass = 0; pass < 8 && mu_hat > 0.0; ++pass) {
    bool ok = true;
    for (int i = 1; i <= 32 && ok; ++i) {
      const double mu = mu_hat * i / 32.0;
      if (!pd_at_mu(mu)) {
        mu_hat = mu * 0.5;
        ok = false;
      }
    }
    if (ok) break;
  }
  cert.mu_hat = mu_hat;
  cert.mu_max = std::min(cert.mu_threshold->mu_bar, mu_hat);

  std::ostringstream diag;
  diag << out.diagnostics << "; delta_bar=" << fmt(cert.delta_bar)
       << " mu_bar=" << fmt(cert.mu_threshold->mu_bar) << " mu_hat=" << fmt(mu_hat);
  if (!cert.mu_threshold->certified) diag << " (" << cert.mu_threshold->diagnostics << ")";
  out.diagnostics = diag.str();
  if (!(*cert.mu_max > 0.0)) {
    out.certificate.reset();
    return out;
  }
  out.certificate = std::move(cert);
  return out;
}

bool revalidate(const SlipCertificate& cert, const FdiOptions& options) {
  const auto& p = cert.params;
  if (p.k != cert.k) return false;
  const auto fdi = verify_fdi(cert.tf, p, cert.alpha1, cert.alpha2, options);
  if (!fdi.certified) return false;

  const auto r = r_coefficients(cert.integrals, p.theta, p.k, cert.q_used);
  if (cert.theorem == Theorem::T1) {
    SlipCertificate copy = cert;
    copy.r = r;
    if (!scalar_condition(copy)) return false;
  } else {
    for (int j = 0; j < 2; ++j)
      if (!is_positive_definite(t_matrix(p, r.r[j], r.r0[j]))) return false;
  }

  if (cert.theorem == Theorem::T4) {
    if (!cert.mu_max || !cert.mu_threshold || !cert.mu_threshold->certified) return false;
    if (!(*cert.mu_max > 0.0 && *cert.mu_max <= cert.mu_threshold->mu_bar &&
          *cert.mu_max <= cert.mu_hat))
      return false;
    CertificateParams bar = p;
    bar.delta = cert.delta_bar;
    const double q = bounds::q_mu(p.theta, p.epsilon, p.tau, cert.M, cert.r_decay, cert.m,
                                  cert.rho_abs, cert.h, cert.mu_hat, cert.rate0);
    if (!matrices_positive_definite(cert.integrals, bar, q)) return false;
    const auto again = mu_threshold(cert.tf, p, cert.alpha2, cert.delta_bar,
                                    cert.mu_threshold->mu_tilde, options);
    if (!again.certified || again.mu_bar < *cert.mu_max) return false;
  }
  return true;
}

std::string certificate_report(const SlipCertificate& cert) {
  std::ostringstream os;
  os.precision(12);
  const auto& p = cert.params;
  os << "slipped-cycle certificate (" << theorem_name(cert.theorem) << ")\n";
  os << "  bound: |sigma(t) - sigma(0)| < " << cert.k << " * Delta for all t >= 0\n";
  os << "  k = " << cert.k << "\n";
  os << "  r0 = " << cert.r0() << "\n";
  os << "  theta = " << p.theta << "  epsilon = " << p.epsilon << "  delta = " << p.delta
     << "  tau = " << p.tau << "  a = " << p.a << "\n";
  os << "  q = " << cert.q_used << "  (" << cert.q_source << ")\n";
  os << "  frequency inequality: min " << cert.fdi.min_value << " at w = " << cert.fdi.argmin
     << " over [0, " << cert.fdi.omega_cutoff << "], " << cert.fdi.evaluations
     << " evaluations\n";
  os << "  tail: " << cert.fdi.tail_justification << "\n";
  os << "  integrals: int phi = " << cert.integrals.int_phi
     << "  int |phi| = " << cert.integrals.int_abs
     << "  int Phi|phi| = " << cert.integrals.int_abs_Phi
     << "  int |phi|P = " << cert.integrals.int_abs_P << "\n";
  for (int j = 0; j < 2; ++j) {
    os << "  j=" << j + 1 << ": r = " << cert.r.r[j] << "  r0 = " << cert.r.r0[j]
       << "  r1 = " << cert.r.r1[j] << "\n";
  }
  if (cert.theorem == Theorem::T4 && cert.mu_max) {
    os << "  mu range: 0 < mu < " << *cert.mu_max << "  (mu_bar = "
       << cert.mu_threshold->mu_bar << ", mu_hat = " << cert.mu_hat
       << ", delta_bar = " << cert.delta_bar << ")\n";
    os << "  q0 = " << cert.q0 << "  M = " << cert.M << "  r = " << cert.r_decay << "\n";
  } else {
    os << "  mu range: not applicable\n";
  }
  return os.str();
}

std::string certificate_json(const SlipCertificate& cert) {
  using nlohmann::json;
  const auto& p = cert.params;
  json j;
  j["theorem"] = theorem_name(cert.theorem);
  j["k"] = cert.k;
  j["r0"] = cert.r0();
  j["params"] = {{"theta", p.theta}, {"epsilon", p.epsilon}, {"delta", p.delta},
                 {"tau", p.tau},     {"a", p.a},             {"k", p.k}};
  j["q"] = {{"value", cert.q_used}, {"source", cert.q_source}};
  j["slopes"] = {cert.alpha1, cert.alpha2};
  j["fdi"] = {{"certified", cert.fdi.certified},
              {"min_value", cert.fdi.min_value},
              {"argmin", cert.fdi.argmin},
              {"omega_base", cert.fdi.omega_base},
              {"omega_cutoff", cert.fdi.omega_cutoff},
              {"tail_margin", cert.fdi.tail_margin},
              {"evaluations", cert.fdi.evaluations}};
  j["integrals"] = {{"int_phi", cert.integrals.int_phi},
                    {"int_abs", cert.integrals.int_abs},
                    {"int_abs_Phi", cert.integrals.int_abs_Phi},
                    {"int_abs_P", cert.integrals.int_abs_P}};
  j["r"] = {{"r", cert.r.r}, {"r0", cert.r.r0}, {"r1", cert.r.r1}};
  j["matrices"] = cert.matrices;
  json tf = {{"rho", cert.tf.rho}, {"h", cert.tf.h}};
  for (const auto& term : cert.tf.kernel.terms)
    tf["kernel"].push_back({term.coefficient, term.rate, term.onset});
  j["transfer_function"] = tf;
  if (cert.mu_max) {
    j["mu"] = {{"mu_max", *cert.mu_max},
               {"mu_bar", cert.mu_threshold->mu_bar},
               {"mu_hat", cert.mu_hat},
               {"delta_bar", cert.delta_bar},
               {"delta1", cert.mu_threshold->delta1},
               {"L1", cert.mu_threshold->L1},
               {"omega_cutoff", cert.mu_threshold->omega_cutoff},
               {"q0", cert.q0},
               {"M", cert.M},
               {"r", cert.r_decay},
               {"m", cert.m},
               {"rho_abs", cert.rho_abs},
               {"h", cert.h},
               {"rate0", cert.rate0}};
  } else {
    j["mu"] = nullptr;
  }
  return j.dump(2);
}

} // namespace slipcert
