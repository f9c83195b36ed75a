/*
 * Copyright 2026 The wecopt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Exercises the C interface from C, linking only the shared library. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "wecopt/wecopt.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK failed: %s (last error: %s)\n",   \
              __FILE__, __LINE__, #cond, wecopt_last_error());        \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void test_model(void) {
  wecopt_model* m = NULL;
  double a[4], b[2], c[2], dt = 0.0, x[2] = {1.0, 0.0}, next[2];

  CHECK(wecopt_model_reference(4, &m) == WECOPT_OK);
  wecopt_model_coefficients(m, a, b, c, &dt);
  CHECK(a[0] == 0.9939 && a[1] == -0.0378 && a[2] == 0.00997 && a[3] == 0.9998);
  CHECK(dt == 0.01);
  CHECK(wecopt_model_step(m, x, 0.0, 0.0, next) == WECOPT_OK);
  CHECK(fabs(next[0] - 0.9939) < 1e-15 && fabs(next[1] - 0.00997) < 1e-15);
  x[0] = 0.0;
  CHECK(wecopt_model_step(m, x, 1e6, 0.0, next) == WECOPT_OK);
  CHECK(fabs(next[0] - 0.0123) < 1e-12 && fabs(next[1] - 6.1785e-5) < 1e-16);
  wecopt_model_free(m);

  m = (wecopt_model*)1;
  CHECK(wecopt_model_reference(7, &m) == WECOPT_ERROR_INVALID_ARGUMENT);
  CHECK(m == NULL);
  CHECK(strlen(wecopt_last_error()) > 0);

  {
    const double unstable[4] = {1.1, 0.0, 0.0, 0.5};
    CHECK(wecopt_model_create(unstable, b, c, 0.01, &m) ==
          WECOPT_ERROR_INVALID_ARGUMENT);
    CHECK(strstr(wecopt_last_error(), "unstable") != NULL);
  }
  CHECK(wecopt_model_create(a, b, c, 0.01, &m) == WECOPT_OK);
  wecopt_model_free(m);

  CHECK(wecopt_model_load("/no/such/fixture.txt", &m) == WECOPT_ERROR_CONFIG);
  CHECK(wecopt_model_load(WECOPT_DATA_DIR "/model_h6t5.txt", &m) == WECOPT_OK);
  wecopt_model_coefficients(m, a, b, c, &dt);
  CHECK(c[0] == 0.0142);
  wecopt_model_free(m);
  wecopt_model_free(NULL);
}

static void test_solve(void) {
  wecopt_model* m = NULL;
  wecopt_ocp_params p;
  wecopt_solver_params s;
  wecopt_wave w = {6.0, 4.0, 0.0};
  wecopt_solution* sol = NULL;
  const double x0[2] = {0.0, 0.0};
  double u[200], v[200], best = 0.0;
  size_t n;

  CHECK(fabs(wecopt_wave_elevation(&w, 1.0) - 3.0) < 1e-12);
  CHECK(wecopt_model_reference(4, &m) == WECOPT_OK);
  wecopt_ocp_params_default(&p);
  wecopt_solver_params_default(&s);
  CHECK(p.gamma == 1e6 && p.delta == 3.0 && p.eta == 1.0);
  CHECK(s.kkt_tol == 1e-6 && s.max_iter == 200 && s.multistart == 1);

  p.n_steps = 100;
  p.lambda1 = 1e-6;
  p.lambda2 = 1e-6;
  CHECK(wecopt_solve(m, &p, x0, &w, 0.0, &s, &sol) == WECOPT_OK);
  CHECK(wecopt_solution_status(sol) == WECOPT_SOLVE_OPTIMAL);
  CHECK(wecopt_solution_kkt_residual(sol) <= s.kkt_tol);
  CHECK(wecopt_solution_iterations(sol) > 0);
  CHECK(wecopt_solution_solve_seconds(sol) >= 0.0);
  CHECK(wecopt_solution_nodes(sol) == 101);
  CHECK(isfinite(wecopt_solution_objective(sol)));
  CHECK(isfinite(wecopt_solution_energy(sol)));

  n = wecopt_solution_controls(sol, u, 200);
  CHECK(n == 101);
  CHECK(wecopt_solution_velocities(sol, v, 200) == 102);
  CHECK(wecopt_solution_positions(sol, NULL, 0) == 102);
  CHECK(wecopt_solution_excess(sol, NULL, 0) == 101);
  {
    /* A short buffer gets a prefix. */
    double head[3] = {0, 0, 0};
    CHECK(wecopt_solution_controls(sol, head, 3) == 101);
    CHECK(head[0] == u[0] && head[2] == u[2]);
  }
  {
    /* Controls agree with the state trajectory through the model. */
    double pos[200], step[2], state[2];
    wecopt_solution_positions(sol, pos, 200);
    state[0] = v[10];
    state[1] = pos[10];
    wecopt_model_step(m, state, u[10], wecopt_wave_elevation(&w, 0.1), step);
    CHECK(fabs(step[0] - v[11]) < 1e-8 && fabs(step[1] - pos[11]) < 1e-8);
  }
  wecopt_solution_free(sol);

  p.n_steps = 4;
  s.multistart = 4;
  CHECK(wecopt_solve(m, &p, x0, &w, 1.0, &s, &sol) == WECOPT_OK);
  CHECK(wecopt_brute_force_best(m, &p, x0, &w, 1.0, 9, &best) == WECOPT_OK);
  CHECK(wecopt_solution_objective(sol) >= best - 1e-6);
  wecopt_solution_free(sol);
  CHECK(wecopt_brute_force_best(m, &p, x0, &w, 1.0, 40, &best) ==
        WECOPT_ERROR_INVALID_ARGUMENT);

  p.eta = 0.0;
  sol = (wecopt_solution*)1;
  CHECK(wecopt_solve(m, &p, x0, &w, 0.0, &s, &sol) ==
        WECOPT_ERROR_INVALID_ARGUMENT);
  CHECK(sol == NULL);
  CHECK(strstr(wecopt_last_error(), "eta") != NULL);
  CHECK(wecopt_solve(NULL, &p, x0, &w, 0.0, &s, &sol) ==
        WECOPT_ERROR_INVALID_ARGUMENT);
  wecopt_model_free(m);
}

static void test_average_period(void) {
  double sig[4001], out = 0.0;
  int k;
  for (k = 0; k <= 4000; ++k) sig[k] = sin(2.0 * 3.141592653589793 * k * 0.01 / 4.0);
  CHECK(wecopt_average_period(sig, 4001, 0.01, &out) == WECOPT_OK);
  CHECK(fabs(out - 4.0) <= 0.005);
  for (k = 0; k <= 4000; ++k) sig[k] = 1.0;
  CHECK(wecopt_average_period(sig, 4001, 0.01, &out) ==
        WECOPT_ERROR_INVALID_ARGUMENT);
}

static void test_commands(void) {
  wecopt_config* cfg = NULL;
  wecopt_command_result* r = NULL;
  size_t i;

  CHECK(wecopt_config_load("/no/such/config.ini", &cfg) == WECOPT_ERROR_CONFIG);
  CHECK(strstr(wecopt_last_error(), "/no/such/config.ini") != NULL);
  CHECK(wecopt_config_load(WECOPT_CLI_DIR "/unknown_key.ini", &cfg) ==
        WECOPT_ERROR_CONFIG);

  CHECK(wecopt_config_load(WECOPT_CLI_DIR "/costfit.ini", &cfg) == WECOPT_OK);
  CHECK(wecopt_cmd_costfit(cfg, WECOPT_SCRATCH_DIR "/capi_costfit", &r) ==
        WECOPT_OK);
  CHECK(wecopt_command_partial(r) == 0);
  CHECK(strstr(wecopt_command_summary(r), "\"winner\": \"hyperbolic\"") != NULL);
  CHECK(wecopt_command_file_count(r) == 1);
  for (i = 0; i < wecopt_command_file_count(r); ++i) {
    FILE* f = fopen(wecopt_command_file(r, i), "r");
    CHECK(f != NULL);
    if (f) fclose(f);
  }
  CHECK(wecopt_command_file(r, 5) == NULL);
  wecopt_command_result_free(r);
  wecopt_config_free(cfg);
}

int main(void) {
  CHECK(wecopt_version() != NULL && strlen(wecopt_version()) > 0);
  test_model();
  test_solve();
  test_average_period();
  test_commands();
  if (failures > 0) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
