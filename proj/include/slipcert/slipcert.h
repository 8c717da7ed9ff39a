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

/*
 * C interface to the slipped-cycle certifier.
 *
 * Every entry point returns a slipcert_status. On failure the message is
 * available from slipcert_last_error() on the same thread until the next
 * call. Results are owned by the caller and released with
 * slipcert_result_free(); a result may be returned together with a
 * non-OK status (for example the diagnostics of a failed search).
 */

#ifndef SLIPCERT_SLIPCERT_H
#define SLIPCERT_SLIPCERT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SLIPCERT_API __declspec(dllexport)
#else
#define SLIPCERT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as the command-line exit codes. */
typedef enum slipcert_status {
  SLIPCERT_OK = 0,
  SLIPCERT_INPUT_ERROR = 1,
  SLIPCERT_NO_CERTIFICATE = 2,
  SLIPCERT_SIMULATION_FAILURE = 3,
  SLIPCERT_REPRODUCE_MISMATCH = 4,
  SLIPCERT_INTERNAL_ERROR = 5
} slipcert_status;

typedef struct slipcert_problem slipcert_problem;
typedef struct slipcert_result slipcert_result;

SLIPCERT_API const char* slipcert_version(void);
SLIPCERT_API const char* slipcert_last_error(void);

SLIPCERT_API slipcert_status slipcert_problem_load(const char* path, slipcert_problem** out);
SLIPCERT_API slipcert_status slipcert_problem_parse(const char* text, slipcert_problem** out);
SLIPCERT_API void slipcert_problem_free(slipcert_problem* problem);

/* Fields left at their init values defer to the configuration. */
typedef struct slipcert_certify_options {
  int theorem;   /* 0 = config, else 1..4 */
  int k_cap;     /* -1 = config */
  int strategy;  /* -1 = config, 0 recipe, 1 free, 2 auto */
  int has_seed;
  uint64_t seed;
} slipcert_certify_options;

SLIPCERT_API void slipcert_certify_options_init(slipcert_certify_options* options);
SLIPCERT_API slipcert_status slipcert_certify(const slipcert_problem* problem,
                                              const slipcert_certify_options* options,
                                              slipcert_result** out);

typedef struct slipcert_simulate_options {
  int has_mu;
  double mu;
  double dt;       /* <= 0: config or default */
  double horizon;  /* <= 0: config or default */
  int stepper;     /* -1 config, 0 auto, 1 rk4, 2 etd */
  int family;      /* PLL only: run the initial-condition family, report the worst */
} slipcert_simulate_options;

SLIPCERT_API void slipcert_simulate_options_init(slipcert_simulate_options* options);
SLIPCERT_API slipcert_status slipcert_simulate(const slipcert_problem* problem,
                                               const slipcert_simulate_options* options,
                                               slipcert_result** out);

/* Runs the built-in PLL examples; SLIPCERT_REPRODUCE_MISMATCH on any difference. */
SLIPCERT_API slipcert_status slipcert_reproduce(slipcert_result** out);

/* Certifies the singularly perturbed case, then tabulates q_mu, positive
 * definiteness and simulated slips. With n_mus = 0 the values are
 * mu_max * {0.9, 0.7, 0.5, 0.3, 0.1}. */
SLIPCERT_API slipcert_status slipcert_sweep_mu(const slipcert_problem* problem, const double* mus,
                                               size_t n_mus, slipcert_result** out);

/* (omega, Pi(omega)) on a uniform grid; omega_max <= 0 picks a default. */
SLIPCERT_API slipcert_status slipcert_scan_fdi(const slipcert_problem* problem, double omega_max,
                                               int points, slipcert_result** out);

SLIPCERT_API const char* slipcert_result_text(const slipcert_result* result);
SLIPCERT_API const char* slipcert_result_csv(const slipcert_result* result);
SLIPCERT_API const char* slipcert_result_json(const slipcert_result* result);
/* -1 when absent. */
SLIPCERT_API int slipcert_result_k(const slipcert_result* result);
SLIPCERT_API int slipcert_result_r0(const slipcert_result* result);
SLIPCERT_API int slipcert_result_slips(const slipcert_result* result);
SLIPCERT_API int slipcert_result_converged(const slipcert_result* result);
/* NaN when absent. */
SLIPCERT_API double slipcert_result_q(const slipcert_result* result);
SLIPCERT_API double slipcert_result_mu_max(const slipcert_result* result);
SLIPCERT_API double slipcert_result_sup_dev(const slipcert_result* result);
SLIPCERT_API void slipcert_result_free(slipcert_result* result);

/* T^2 (A + B h0 + C h0^2), the explicit PLL bound; NaN on invalid input. */
SLIPCERT_API double slipcert_pll_q(double T, double s, double beta, double h0);

#ifdef __cplusplus
}
#endif

#endif /* SLIPCERT_SLIPCERT_H */
