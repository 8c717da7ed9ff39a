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

/* Exercises the shared library through its C header only. */

#include "slipcert/slipcert.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static const char* kConfig =
    "[pll]\n"
    "T = 0.1\n"
    "s = 0.4\n"
    "beta = 0.9\n"
    "h0 = 1\n"
    "[certificate]\n"
    "strategy = recipe\n";

static void test_version_and_q(void) {
  EXPECT(strcmp(slipcert_version(), "1.0.0") == 0);
  EXPECT(fabs(slipcert_pll_q(0.1, 0.4, 0.9, 1.0) - 0.204384) < 1e-12);
  EXPECT(isnan(slipcert_pll_q(0.1, 0.4, 1.5, 1.0)));
}

static void test_parse_errors(void) {
  slipcert_problem* p = NULL;
  EXPECT(slipcert_problem_parse("[pll]\nbeta = 1.5\n", &p) == SLIPCERT_INPUT_ERROR);
  EXPECT(p == NULL);
  EXPECT(strstr(slipcert_last_error(), "line 2") != NULL);
  EXPECT(slipcert_problem_load("/nonexistent.ini", &p) == SLIPCERT_INPUT_ERROR);
  EXPECT(slipcert_problem_parse(NULL, &p) == SLIPCERT_INPUT_ERROR);
}

static void test_certify(void) {
  slipcert_problem* p = NULL;
  slipcert_result* r = NULL;
  slipcert_certify_options o;
  EXPECT(slipcert_problem_parse(kConfig, &p) == SLIPCERT_OK);
  slipcert_certify_options_init(&o);
  EXPECT(slipcert_certify(p, &o, &r) == SLIPCERT_OK);
  EXPECT(slipcert_result_k(r) == 2);
  EXPECT(slipcert_result_r0(r) == 1);
  EXPECT(strstr(slipcert_result_text(r), "r0 = 1") != NULL);
  EXPECT(strstr(slipcert_result_json(r), "\"k\"") != NULL);
  EXPECT(isnan(slipcert_result_mu_max(r)));
  slipcert_result_free(r);

  o.k_cap = 0;
  r = NULL;
  EXPECT(slipcert_certify(p, &o, &r) == SLIPCERT_NO_CERTIFICATE);
  slipcert_result_free(r);

  o.k_cap = -1;
  o.theorem = 9;
  r = NULL;
  EXPECT(slipcert_certify(p, &o, &r) == SLIPCERT_INPUT_ERROR);
  slipcert_result_free(r);
  slipcert_problem_free(p);
}

static void test_simulate(void) {
  slipcert_problem* p = NULL;
  slipcert_result* r = NULL;
  slipcert_simulate_options o;
  EXPECT(slipcert_problem_parse(kConfig, &p) == SLIPCERT_OK);
  slipcert_simulate_options_init(&o);
  EXPECT(slipcert_simulate(p, &o, &r) == SLIPCERT_OK);
  EXPECT(slipcert_result_slips(r) == 0);
  EXPECT(slipcert_result_converged(r) == 1);
  EXPECT(strncmp(slipcert_result_text(r), "slips=0 sup_dev=", 16) == 0);
  EXPECT(strstr(slipcert_result_csv(r), "t,sigma,sigma_dot") != NULL);
  slipcert_result_free(r);

  o.dt = 1.0;
  r = NULL;
  EXPECT(slipcert_simulate(p, &o, &r) == SLIPCERT_INPUT_ERROR);
  slipcert_result_free(r);
  slipcert_problem_free(p);
}

static void test_reproduce(void) {
  slipcert_result* a = NULL;
  slipcert_result* b = NULL;
  EXPECT(slipcert_reproduce(&a) == SLIPCERT_OK);
  EXPECT(slipcert_reproduce(&b) == SLIPCERT_OK);
  EXPECT(strcmp(slipcert_result_text(a), slipcert_result_text(b)) == 0);
  EXPECT(strstr(slipcert_result_json(a), "\"all_match\": true") != NULL);
  slipcert_result_free(a);
  slipcert_result_free(b);
}

static void test_scan(void) {
  slipcert_problem* p = NULL;
  slipcert_result* r = NULL;
  EXPECT(slipcert_problem_parse(kConfig, &p) == SLIPCERT_OK);
  EXPECT(slipcert_scan_fdi(p, 50.0, 11, &r) == SLIPCERT_OK);
  EXPECT(strncmp(slipcert_result_csv(r), "omega,pi_value\n", 15) == 0);
  slipcert_result_free(r);
  slipcert_problem_free(p);
}

static void test_null_handling(void) {
  slipcert_result* r = NULL;
  EXPECT(slipcert_certify(NULL, NULL, &r) == SLIPCERT_INPUT_ERROR);
  EXPECT(slipcert_result_k(NULL) == -1);
  EXPECT(isnan(slipcert_result_q(NULL)));
  slipcert_result_free(NULL);
  slipcert_problem_free(NULL);
}

int main(void) {
  test_version_and_q();
  test_parse_errors();
  test_certify();
  test_simulate();
  test_reproduce();
  test_scan();
  test_null_handling();
  if (failures) {
    fprintf(stderr, "%d expectation(s) failed\n", failures);
    return 1;
  }
  printf("C API: all expectations met\n");
  return 0;
}
