// Copyright 2026 The wecopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the wecopt library. Objects are opaque handles owned by the
 * caller and released with the matching *_free function. Every call that can
 * fail returns a wecopt_status; the message of the most recent failure on the
 * calling thread is available from wecopt_last_error(). */

#ifndef WECOPT_WECOPT_H_
#define WECOPT_WECOPT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(WECOPT_BUILDING_LIBRARY)
#define WECOPT_API __attribute__((visibility("default")))
#else
#define WECOPT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wecopt_status {
  WECOPT_OK = 0,
  WECOPT_ERROR_INVALID_ARGUMENT = 1,
  WECOPT_ERROR_CONFIG = 2,
  WECOPT_ERROR_IO = 3,
  WECOPT_ERROR_SINGULAR = 4,
  WECOPT_ERROR_DIVERGED = 5,
  WECOPT_ERROR_SOLVER = 6,
  WECOPT_ERROR_INTERNAL = 7
} wecopt_status;

typedef enum wecopt_solve_status {
  WECOPT_SOLVE_OPTIMAL = 0,
  WECOPT_SOLVE_ITER_LIMIT = 1,
  WECOPT_SOLVE_INFEASIBLE = 2,
  WECOPT_SOLVE_NUMERICAL_FAILURE = 3
} wecopt_solve_status;

typedef struct wecopt_model wecopt_model;
typedef struct wecopt_solution wecopt_solution;
typedef struct wecopt_config wecopt_config;
typedef struct wecopt_command_result wecopt_command_result;

typedef struct wecopt_wave {
  double height; /* m, crest to trough */
  double period; /* s */
  double phase;  /* rad */
} wecopt_wave;

typedef struct wecopt_ocp_params {
  double gamma;
  double delta;
  double eta;
  double rho;
  double lambda1;
  double lambda2;
  int n_steps;
  double dt;
  int pin_u0; /* nonzero: u_0 is fixed to u0 */
  double u0;
} wecopt_ocp_params;

typedef struct wecopt_solver_params {
  double kkt_tol;
  int max_iter;
  double barrier_init;
  double barrier_shrink;
  double regularization_floor;
  int multistart;
  uint64_t seed;
  int polish;
} wecopt_solver_params;

WECOPT_API const char* wecopt_version(void);
WECOPT_API const char* wecopt_last_error(void);

WECOPT_API void wecopt_ocp_params_default(wecopt_ocp_params* params);
WECOPT_API void wecopt_solver_params_default(wecopt_solver_params* params);

WECOPT_API double wecopt_wave_elevation(const wecopt_wave* wave, double t);

/* period_seconds is 4, 5 or 6 (the H = 6 m reference models). */
WECOPT_API wecopt_status wecopt_model_reference(int period_seconds,
                                                wecopt_model** out);
WECOPT_API wecopt_status wecopt_model_load(const char* path, wecopt_model** out);
WECOPT_API wecopt_status wecopt_model_create(const double a[4], const double b[2],
                                             const double c[2], double dt,
                                             wecopt_model** out);
WECOPT_API void wecopt_model_free(wecopt_model* model);
/* a is row-major. */
WECOPT_API void wecopt_model_coefficients(const wecopt_model* model, double a[4],
                                          double b[2], double c[2], double* dt);
/* x = {velocity, position}. */
WECOPT_API wecopt_status wecopt_model_step(const wecopt_model* model,
                                           const double x[2], double u, double w,
                                           double out[2]);

WECOPT_API wecopt_status wecopt_solve(const wecopt_model* model,
                                      const wecopt_ocp_params* params,
                                      const double x0[2], const wecopt_wave* wave,
                                      double t0,
                                      const wecopt_solver_params* settings,
                                      wecopt_solution** out);
WECOPT_API void wecopt_solution_free(wecopt_solution* solution);
WECOPT_API wecopt_solve_status wecopt_solution_status(const wecopt_solution* s);
WECOPT_API double wecopt_solution_objective(const wecopt_solution* s);
WECOPT_API double wecopt_solution_energy(const wecopt_solution* s);
WECOPT_API int wecopt_solution_iterations(const wecopt_solution* s);
WECOPT_API double wecopt_solution_kkt_residual(const wecopt_solution* s);
WECOPT_API double wecopt_solution_solve_seconds(const wecopt_solution* s);
/* Node count N + 1 of the control and excess trajectories; the state
 * trajectories have one more entry. */
WECOPT_API size_t wecopt_solution_nodes(const wecopt_solution* s);
/* Each copies min(len, available) values and returns the available count. */
WECOPT_API size_t wecopt_solution_controls(const wecopt_solution* s, double* buf,
                                           size_t len);
WECOPT_API size_t wecopt_solution_velocities(const wecopt_solution* s,
                                             double* buf, size_t len);
WECOPT_API size_t wecopt_solution_positions(const wecopt_solution* s,
                                            double* buf, size_t len);
WECOPT_API size_t wecopt_solution_excess(const wecopt_solution* s, double* buf,
                                         size_t len);

WECOPT_API wecopt_status wecopt_brute_force_best(
    const wecopt_model* model, const wecopt_ocp_params* params,
    const double x0[2], const wecopt_wave* wave, double t0, int levels,
    double* out);

WECOPT_API wecopt_status wecopt_average_period(const double* signal, size_t n,
                                               double dt, double* out);

WECOPT_API wecopt_status wecopt_config_load(const char* path, wecopt_config** out);
WECOPT_API void wecopt_config_free(wecopt_config* config);

/* Commands write their files under out_dir. A command that ran to the end
 * returns WECOPT_OK even if some rows or periods did not solve to optimality;
 * wecopt_command_partial() reports that case. */
WECOPT_API wecopt_status wecopt_cmd_estimate(const wecopt_config* config,
                                             const char* out_dir,
                                             wecopt_command_result** out);
WECOPT_API wecopt_status wecopt_cmd_sweep(const wecopt_config* config,
                                          const char* out_dir,
                                          wecopt_command_result** out);
WECOPT_API wecopt_status wecopt_cmd_mpc(const wecopt_config* config,
                                        const char* out_dir,
                                        wecopt_command_result** out);
WECOPT_API wecopt_status wecopt_cmd_costfit(const wecopt_config* config,
                                            const char* out_dir,
                                            wecopt_command_result** out);
/* Output directory from the config's run.output, or NULL. */
WECOPT_API const char* wecopt_config_output(const wecopt_config* config);

WECOPT_API int wecopt_command_partial(const wecopt_command_result* r);
WECOPT_API const char* wecopt_command_summary(const wecopt_command_result* r);
WECOPT_API size_t wecopt_command_file_count(const wecopt_command_result* r);
WECOPT_API const char* wecopt_command_file(const wecopt_command_result* r,
                                           size_t index);
WECOPT_API void wecopt_command_result_free(wecopt_command_result* r);

#ifdef __cplusplus
}
#endif

#endif /* WECOPT_WECOPT_H_ */
