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


#include "wecopt/wecopt.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "wecopt/commands.hpp"
#include "wecopt/config.hpp"
#include "wecopt/error.hpp"
#include "wecopt/io.hpp"
#include "wecopt/mpc.hpp"
#include "wecopt/ocp.hpp"
#include "wecopt/qp_solver.hpp"

struct wecopt_model {
  wecopt::DiscreteModel model;
};

struct wecopt_solution {
  wecopt::qp::SolveReport report;
  double energy = 0.0;
  std::vector<double> u, zdot, z, alpha;
};

struct wecopt_config {
  wecopt::RunConfig config;
  std::string output;
};

struct wecopt_command_result {
  bool partial = false;
  std::string summary;
  std::vector<std::string> files;
};

namespace {

thread_local std::string g_last_error;

wecopt_status ToStatus(wecopt::ErrorCode code) {
  switch (code) {
    case wecopt::ErrorCode::kInvalidArgument: return WECOPT_ERROR_INVALID_ARGUMENT;
    case wecopt::ErrorCode::kConfig: return WECOPT_ERROR_CONFIG;
    case wecopt::ErrorCode::kIo: return WECOPT_ERROR_IO;
    case wecopt::ErrorCode::kSingular: return WECOPT_ERROR_SINGULAR;
    case wecopt::ErrorCode::kDiverged: return WECOPT_ERROR_DIVERGED;
    case wecopt::ErrorCode::kSolver: return WECOPT_ERROR_SOLVER;
    case wecopt::ErrorCode::kInternal: return WECOPT_ERROR_INTERNAL;
  }
  return WECOPT_ERROR_INTERNAL;
}

template <typename F>
wecopt_status Guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return WECOPT_OK;
  } catch (const wecopt::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WECOPT_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WECOPT_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return WECOPT_ERROR_INTERNAL;
  }
}

void NotNull(const void* p, const char* what) {
  if (p == nullptr) {
    wecopt::Fail(wecopt::ErrorCode::kInvalidArgument,
                 std::string(what) + " must not be null");
  }
}

wecopt::ocp::OcpConfig ToOcp(const wecopt_ocp_params* p) {
  NotNull(p, "params");
  wecopt::ocp::OcpConfig c;
  c.gamma = p->gamma;
  c.delta = p->delta;
  c.eta = p->eta;
  c.rho = p->rho;
  c.lambda1 = p->lambda1;
  c.lambda2 = p->lambda2;
  c.n_steps = p->n_steps;
  c.dt = p->dt;
  if (p->pin_u0) c.u_init = p->u0;
  return c;
}

wecopt::WaveSpec ToWave(const wecopt_wave* w) {
  NotNull(w, "wave");
  return {w->height, w->period, w->phase};
}

size_t CopyOut(const std::vector<double>& v, double* buf, size_t len) {
  if (buf != nullptr) {
    for (size_t i = 0; i < len && i < v.size(); ++i) buf[i] = v[i];
  }
  return v.size();
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

wecopt_status RunCommand(
    const wecopt_config* config, const char* out_dir, wecopt_command_result** out,
    wecopt::commands::CommandReport (*cmd)(const wecopt::RunConfig&,
                                           const std::filesystem::path&)) {
  return Guard([&] {
    NotNull(config, "config");
    NotNull(out_dir, "out_dir");
    NotNull(out, "out");
    *out = nullptr;
    const auto rep = cmd(config->config, out_dir);
    auto r = std::make_unique<wecopt_command_result>();
    r->partial = rep.outcome == wecopt::commands::Outcome::kPartial;
    r->summary = rep.summary;
    for (const auto& f : rep.files) r->files.push_back(f.string());
    *out = r.release();
  });
}

}  // namespace

extern "C" {

const char* wecopt_version(void) { return "0.1.0"; }

const char* wecopt_last_error(void) { return g_last_error.c_str(); }

void wecopt_ocp_params_default(wecopt_ocp_params* params) {
  if (params == nullptr) return;
  const wecopt::ocp::OcpConfig c;
  *params = {c.gamma, c.delta, c.eta, c.rho, c.lambda1, c.lambda2,
             c.n_steps, c.dt, 0, 0.0};
}

void wecopt_solver_params_default(wecopt_solver_params* params) {
  if (params == nullptr) return;
  const wecopt::qp::SolveSettings s;
  *params = {s.kkt_tol, s.max_iter, s.barrier_init, s.barrier_shrink,
             s.regularization_floor, s.multistart, s.seed, s.polish ? 1 : 0};
}

double wecopt_wave_elevation(const wecopt_wave* wave, double t) {
  if (wave == nullptr) return 0.0;
  return wecopt::WaveElevation(ToWave(wave), t);
}

wecopt_status wecopt_model_reference(int period_seconds, wecopt_model** out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = nullptr;
    auto m = std::make_unique<wecopt_model>();
    switch (period_seconds) {
      case 4: m->model = wecopt::ReferenceModelH6T4(); break;
      case 5: m->model = wecopt::ReferenceModelH6T5(); break;
      case 6: m->model = wecopt::ReferenceModelH6T6(); break;
      default:
        wecopt::Fail(wecopt::ErrorCode::kInvalidArgument,
                     "reference models exist for periods 4, 5 and 6 s");
    }
    *out = m.release();
  });
}

wecopt_status wecopt_model_load(const char* path, wecopt_model** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = nullptr;
    auto m = std::make_unique<wecopt_model>();
    m->model = wecopt::LoadModelFixture(path);
    *out = m.release();
  });
}

wecopt_status wecopt_model_create(const double a[4], const double b[2],
                                  const double c[2], double dt,
                                  wecopt_model** out) {
  return Guard([&] {
    NotNull(a, "a");
    NotNull(b, "b");
    NotNull(c, "c");
    NotNull(out, "out");
    *out = nullptr;
    auto m = std::make_unique<wecopt_model>();
    m->model.a << a[0], a[1], a[2], a[3];
    m->model.b << b[0], b[1];
    m->model.c << c[0], c[1];
    m->model.dt = dt;
    m->model.Validate();
    *out = m.release();
  });
}

void wecopt_model_free(wecopt_model* model) { delete model; }

void wecopt_model_coefficients(const wecopt_model* model, double a[4],
                               double b[2], double c[2], double* dt) {
  if (model == nullptr) return;
  const auto& m = model->model;
  if (a != nullptr) {
    a[0] = m.a(0, 0);
    a[1] = m.a(0, 1);
    a[2] = m.a(1, 0);
    a[3] = m.a(1, 1);
  }
  if (b != nullptr) {
    b[0] = m.b(0);
    b[1] = m.b(1);
  }
  if (c != nullptr) {
    c[0] = m.c(0);
    c[1] = m.c(1);
  }
  if (dt != nullptr) *dt = m.dt;
}

wecopt_status wecopt_model_step(const wecopt_model* model, const double x[2],
                                double u, double w, double out[2]) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(x, "x");
    NotNull(out, "out");
    const auto next = wecopt::DiscreteStep(model->model, {x[0], x[1]}, u, w);
    out[0] = next.velocity;
    out[1] = next.position;
  });
}

wecopt_status wecopt_solve(const wecopt_model* model,
                           const wecopt_ocp_params* params, const double x0[2],
                           const wecopt_wave* wave, double t0,
                           const wecopt_solver_params* settings,
                           wecopt_solution** out) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(x0, "x0");
    NotNull(settings, "settings");
    NotNull(out, "out");
    *out = nullptr;
    const auto inst = wecopt::ocp::Build(ToOcp(params), model->model,
                                         {x0[0], x0[1]}, ToWave(wave), t0);
    wecopt::qp::SolveSettings st;
    st.kkt_tol = settings->kkt_tol;
    st.max_iter = settings->max_iter;
    st.barrier_init = settings->barrier_init;
    st.barrier_shrink = settings->barrier_shrink;
    st.regularization_floor = settings->regularization_floor;
    st.multistart = settings->multistart;
    st.seed = settings->seed;
    st.polish = settings->polish != 0;
    const auto res = wecopt::qp::Solve(inst, st);
    auto s = std::make_unique<wecopt_solution>();
    s->report = res.report;
    s->energy = wecopt::ocp::Breakdown(inst, res.point).energy;
    s->u = ToStd(inst.layout.Controls(res.point));
    s->zdot = ToStd(inst.layout.Velocities(res.point));
    s->z = ToStd(inst.layout.Positions(res.point));
    s->alpha = ToStd(inst.layout.Excess(res.point));
    *out = s.release();
  });
}

void wecopt_solution_free(wecopt_solution* solution) { delete solution; }

wecopt_solve_status wecopt_solution_status(const wecopt_solution* s) {
  if (s == nullptr) return WECOPT_SOLVE_NUMERICAL_FAILURE;
  switch (s->report.status) {
    case wecopt::qp::SolveStatus::kOptimal: return WECOPT_SOLVE_OPTIMAL;
    case wecopt::qp::SolveStatus::kIterLimit: return WECOPT_SOLVE_ITER_LIMIT;
    case wecopt::qp::SolveStatus::kInfeasible: return WECOPT_SOLVE_INFEASIBLE;
    case wecopt::qp::SolveStatus::kNumericalFailure:
      return WECOPT_SOLVE_NUMERICAL_FAILURE;
  }
  return WECOPT_SOLVE_NUMERICAL_FAILURE;
}

double wecopt_solution_objective(const wecopt_solution* s) {
  return s ? s->report.objective : 0.0;
}

double wecopt_solution_energy(const wecopt_solution* s) {
  return s ? s->energy : 0.0;
}

int wecopt_solution_iterations(const wecopt_solution* s) {
  return s ? s->report.iterations : 0;
}

double wecopt_solution_kkt_residual(const wecopt_solution* s) {
  return s ? s->report.kkt_residual : 0.0;
}

double wecopt_solution_solve_seconds(const wecopt_solution* s) {
  return s ? s->report.solve_seconds : 0.0;
}

size_t wecopt_solution_nodes(const wecopt_solution* s) {
  return s ? s->u.size() : 0;
}

size_t wecopt_solution_controls(const wecopt_solution* s, double* buf,
                                size_t len) {
  return s ? CopyOut(s->u, buf, len) : 0;
}

size_t wecopt_solution_velocities(const wecopt_solution* s, double* buf,
                                  size_t len) {
  return s ? CopyOut(s->zdot, buf, len) : 0;
}

size_t wecopt_solution_positions(const wecopt_solution* s, double* buf,
                                 size_t len) {
  return s ? CopyOut(s->z, buf, len) : 0;
}

size_t wecopt_solution_excess(const wecopt_solution* s, double* buf,
                              size_t len) {
  return s ? CopyOut(s->alpha, buf, len) : 0;
}

wecopt_status wecopt_brute_force_best(const wecopt_model* model,
                                      const wecopt_ocp_params* params,
                                      const double x0[2], const wecopt_wave* wave,
                                      double t0, int levels, double* out) {
  return Guard([&] {
    NotNull(model, "model");
    NotNull(x0, "x0");
    NotNull(out, "out");
    const auto inst = wecopt::ocp::Build(ToOcp(params), model->model,
                                         {x0[0], x0[1]}, ToWave(wave), t0);
    *out = wecopt::qp::BruteForceBest(inst, levels);
  });
}

wecopt_status wecopt_average_period(const double* signal, size_t n, double dt,
                                    double* out) {
  return Guard([&] {
    NotNull(signal, "signal");
    NotNull(out, "out");
    *out = wecopt::mpc::AveragePeriod({signal, n}, dt);
  });
}

wecopt_status wecopt_config_load(const char* path, wecopt_config** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    *out = nullptr;
    auto c = std::make_unique<wecopt_config>();
    c->config = wecopt::LoadRunConfig(path);
    if (c->config.output) c->output = c->config.output->string();
    *out = c.release();
  });
}

void wecopt_config_free(wecopt_config* config) { delete config; }

const char* wecopt_config_output(const wecopt_config* config) {
  if (config == nullptr || config->output.empty()) return nullptr;
  return config->output.c_str();
}

wecopt_status wecopt_cmd_estimate(const wecopt_config* config,
                                  const char* out_dir,
                                  wecopt_command_result** out) {
  return RunCommand(config, out_dir, out, &wecopt::commands::Estimate);
}

wecopt_status wecopt_cmd_sweep(const wecopt_config* config, const char* out_dir,
                               wecopt_command_result** out) {
  return RunCommand(config, out_dir, out, &wecopt::commands::Sweep);
}

wecopt_status wecopt_cmd_mpc(const wecopt_config* config, const char* out_dir,
                             wecopt_command_result** out) {
  return RunCommand(config, out_dir, out, &wecopt::commands::Mpc);
}

wecopt_status wecopt_cmd_costfit(const wecopt_config* config,
                                 const char* out_dir,
                                 wecopt_command_result** out) {
  return RunCommand(config, out_dir, out, &wecopt::commands::Costfit);
}

int wecopt_command_partial(const wecopt_command_result* r) {
  return r != nullptr && r->partial ? 1 : 0;
}

const char* wecopt_command_summary(const wecopt_command_result* r) {
  return r ? r->summary.c_str() : "";
}

size_t wecopt_command_file_count(const wecopt_command_result* r) {
  return r ? r->files.size() : 0;
}

const char* wecopt_command_file(const wecopt_command_result* r, size_t index) {
  if (r == nullptr || index >= r->files.size()) return nullptr;
  return r->files[index].c_str();
}

void wecopt_command_result_free(wecopt_command_result* r) { delete r; }

}  // extern "C"
