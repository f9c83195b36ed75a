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

#include "wecopt/qp_solver.hpp"

#include <time.h>

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/SparseCore>

#include "wecopt/banded_ldlt.hpp"
#include "wecopt/error.hpp"

namespace wecopt::qp {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using RowMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Eigen::VectorXd;

constexpr double kKappaEps = 10.0;
constexpr double kKappaSigma = 1e10;
constexpr double kSlackFloor = 1e-2;
constexpr double kDeltaC = 1e-10;
constexpr double kMaxRegularization = 1e8;
constexpr double kArmijo = 1e-4;
constexpr double kPivotTol = 1e-15;
constexpr double kPresolveTol = 1e-9;

double ThreadCpuSeconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

double InfNorm(const VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

// Scaled units: x = d .* x~, objective / f, constraint rows times r.
struct Scaling {
  VectorXd d;
  double f = 1.0;
  VectorXd r_eq;
  VectorXd r_in;
};

VectorXd RowScale(const SpMat& m, const VectorXd& d) {
  VectorXd mx = VectorXd::Zero(m.rows());
  for (int col = 0; col < m.outerSize(); ++col) {
    for (SpMat::InnerIterator it(m, col); it; ++it) {
      mx(it.row()) = std::max(mx(it.row()), std::abs(it.value() * d(col)));
    }
  }
  for (int r = 0; r < mx.size(); ++r) mx(r) = mx(r) > 0.0 ? 1.0 / mx(r) : 1.0;
  return mx;
}

Scaling MakeScaling(const ocp::OcpInstance& inst) {
  Scaling s;
  s.d = inst.variable_scale;
  s.f = inst.config.gamma * inst.config.dt;
  s.r_eq = RowScale(inst.eq, s.d);
  s.r_in = RowScale(inst.ineq, s.d);
  return s;
}

// Stage and position-within-stage of a full variable index.
struct Tag {
  int stage;
  int slot;
};

Tag VariableTag(const ocp::VariableLayout& L, int j) {
  if (j < L.zdot(0)) return {j, 1};
  if (j < L.z(0)) return {j - L.zdot(0), 3};
  if (j < L.alpha(0)) return {j - L.z(0), 5};
  return {j - L.alpha(0), 0};
}

// Problem after fixing single-variable equalities, in scaled units and
// minimization sense: minimize 0.5 x'Px + c'x, E x = e, G x <= h.
struct Reduced {
  int n = 0;
  std::vector<int> var;   // reduced -> full
  std::vector<int> pos;   // full -> reduced, -1 if fixed
  VectorXd fixed;         // full size, values of fixed variables
  std::vector<int> fixing_row;  // full size, -1 if free
  VectorXd d;
  SpMat p;
  VectorXd c;
  SpMat e;
  VectorXd e_rhs;
  std::vector<int> eq_row;
  RowMat g;
  VectorXd h;
  std::vector<int> in_row;
  bool infeasible = false;
};

Reduced Presolve(const ocp::OcpInstance& inst, const Scaling& sc) {
  const int nf = inst.num_variables();
  Reduced red;
  red.pos.assign(nf, 0);
  red.fixing_row.assign(nf, -1);
  red.fixed = VectorXd::Zero(nf);

  const RowMat eq = inst.eq;
  std::vector<char> is_fixing(eq.rows(), 0);
  for (int r = 0; r < eq.rows(); ++r) {
    int count = 0, col = -1;
    double coef = 0.0;
    for (RowMat::InnerIterator it(eq, r); it; ++it) {
      if (it.value() != 0.0) {
        ++count;
        col = it.col();
        coef = it.value();
      }
    }
    if (count != 1) continue;
    const double value = inst.eq_rhs(r) / coef;
    is_fixing[r] = 1;
    if (red.fixing_row[col] >= 0) {
      if (std::abs(red.fixed(col) - value) >
          kPresolveTol * std::max(1.0, sc.d(col))) {
        red.infeasible = true;
      }
      continue;
    }
    red.fixing_row[col] = r;
    red.fixed(col) = value;
  }
  for (int j = 0; j < nf; ++j) {
    if (red.fixing_row[j] >= 0) {
      red.pos[j] = -1;
    } else {
      red.pos[j] = red.n++;
      red.var.push_back(j);
    }
  }
  red.d.resize(red.n);
  for (int k = 0; k < red.n; ++k) red.d(k) = sc.d(red.var[k]);

  // Objective: minimize -(0.5 x'Hx + q'x).
  const VectorXd c_full = -(inst.hessian * red.fixed) - inst.linear;
  std::vector<Eigen::Triplet<double>> t;
  for (int col = 0; col < inst.hessian.outerSize(); ++col) {
    for (SpMat::InnerIterator it(inst.hessian, col); it; ++it) {
      const int a = red.pos[it.row()], b = red.pos[col];
      if (a < 0 || b < 0) continue;
      t.emplace_back(a, b, -it.value() * red.d(a) * red.d(b) / sc.f);
    }
  }
  red.p.resize(red.n, red.n);
  red.p.setFromTriplets(t.begin(), t.end());
  red.c.resize(red.n);
  for (int k = 0; k < red.n; ++k) {
    red.c(k) = c_full(red.var[k]) * red.d(k) / sc.f;
  }

  // Equalities that do not fix a variable.
  t.clear();
  std::vector<double> rhs;
  for (int r = 0; r < eq.rows(); ++r) {
    if (is_fixing[r]) continue;
    double b = inst.eq_rhs(r);
    bool any = false;
    const int row = static_cast<int>(rhs.size());
    for (RowMat::InnerIterator it(eq, r); it; ++it) {
      const int k = red.pos[it.col()];
      if (k < 0) {
        b -= it.value() * red.fixed(it.col());
      } else if (it.value() != 0.0) {
        t.emplace_back(row, k, it.value() * sc.r_eq(r) * red.d(k));
        any = true;
      }
    }
    if (!any) {
      if (std::abs(b * sc.r_eq(r)) > kPresolveTol) red.infeasible = true;
      continue;
    }
    rhs.push_back(b * sc.r_eq(r));
    red.eq_row.push_back(r);
  }
  red.e.resize(static_cast<int>(rhs.size()), red.n);
  red.e.setFromTriplets(t.begin(), t.end());
  red.e_rhs = Eigen::Map<VectorXd>(rhs.data(), rhs.size());

  // Inequalities; rows left with no free variable are checked and dropped.
  const RowMat in = inst.ineq;
  t.clear();
  rhs.clear();
  for (int r = 0; r < in.rows(); ++r) {
    double b = inst.ineq_rhs(r);
    bool any = false;
    const int row = static_cast<int>(rhs.size());
    for (RowMat::InnerIterator it(in, r); it; ++it) {
      const int k = red.pos[it.col()];
      if (k < 0) {
        b -= it.value() * red.fixed(it.col());
      } else if (it.value() != 0.0) {
        t.emplace_back(row, k, it.value() * sc.r_in(r) * red.d(k));
        any = true;
      }
    }
    if (!any) {
      if (b * sc.r_in(r) < -kPresolveTol) red.infeasible = true;
      continue;
    }
    rhs.push_back(b * sc.r_in(r));
    red.in_row.push_back(r);
  }
  red.g.resize(static_cast<int>(rhs.size()), red.n);
  red.g.setFromTriplets(t.begin(), t.end());
  red.h = Eigen::Map<VectorXd>(rhs.data(), rhs.size());
  return red;
}

// Band ordering of the KKT unknowns: stages in reverse time, and inside a
// stage alpha, u, their active rows, then each state next to the dynamics
// row that defines it.
struct KktOrder {
  std::vector<int> var_pos;
  std::vector<int> eq_pos;
  std::vector<int> act_pos;
  int size = 0;
  int bandwidth = 0;
};

KktOrder MakeOrder(const ocp::OcpInstance& inst, const Reduced& red,
                   const std::vector<int>& active) {
  const auto& L = inst.layout;
  const int max_stage = L.n_steps + 1;
  struct Item {
    long key;
    int kind;  // 0 var, 1 eq, 2 active
    int index;
  };
  std::vector<Item> items;
  auto key = [&](int stage, int slot) {
    return static_cast<long>(max_stage - stage) * 16 + slot;
  };
  for (int k = 0; k < red.n; ++k) {
    const Tag tag = VariableTag(L, red.var[k]);
    items.push_back({key(tag.stage, tag.slot), 0, k});
  }
  for (int r = 0; r < static_cast<int>(red.eq_row.size()); ++r) {
    const int full = red.eq_row[r];
    const int stage = inst.eq_stage[full];
    int slot = 7;
    if (inst.eq_kind[full] == ocp::EqualityKind::kDynamics) {
      slot = inst.eq.coeff(full, L.zdot(stage)) != 0.0 ? 4 : 6;
    }
    items.push_back({key(stage, slot), 1, r});
  }
  for (int a = 0; a < static_cast<int>(active.size()); ++a) {
    const int full = red.in_row[active[a]];
    const auto kind = inst.ineq_kind[full];
    const bool disp = kind == ocp::InequalityKind::kDisplacementUpper ||
                      kind == ocp::InequalityKind::kDisplacementLower;
    items.push_back({key(inst.ineq_stage[full], disp ? 7 : 2), 2, a});
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& x, const Item& y) { return x.key < y.key; });
  KktOrder o;
  o.var_pos.resize(red.n);
  o.eq_pos.resize(red.eq_row.size());
  o.act_pos.resize(active.size());
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    const auto& it = items[i];
    (it.kind == 0 ? o.var_pos : it.kind == 1 ? o.eq_pos : o.act_pos)[it.index] = i;
  }
  o.size = static_cast<int>(items.size());

  int bw = 0;
  auto touch = [&](int a, int b) { bw = std::max(bw, std::abs(a - b)); };
  for (int col = 0; col < red.p.outerSize(); ++col) {
    for (SpMat::InnerIterator it(red.p, col); it; ++it) {
      touch(o.var_pos[it.row()], o.var_pos[col]);
    }
  }
  for (int col = 0; col < red.e.outerSize(); ++col) {
    for (SpMat::InnerIterator it(red.e, col); it; ++it) {
      touch(o.eq_pos[it.row()], o.var_pos[col]);
    }
  }
  // Inequalities enter either as G' S G (all rows) or as rows (active).
  for (int r = 0; r < red.g.rows(); ++r) {
    for (RowMat::InnerIterator a(red.g, r); a; ++a) {
      for (RowMat::InnerIterator b(red.g, r); b; ++b) {
        touch(o.var_pos[a.col()], o.var_pos[b.col()]);
      }
    }
  }
  for (int a = 0; a < static_cast<int>(active.size()); ++a) {
    for (RowMat::InnerIterator it(red.g, active[a]); it; ++it) {
      touch(o.act_pos[a], o.var_pos[it.col()]);
    }
  }
  o.bandwidth = bw;
  return o;
}

bool InertiaIs(const BandedLdlt& f, int positive, int negative) {
  return f.inertia().positive == positive && f.inertia().negative == negative &&
         f.inertia().zero == 0;
}

VectorXd RefinedSolve(const BandedLdlt& f, const VectorXd& rhs,
                      const std::function<VectorXd(const VectorXd&)>& op,
                      int max_refine) {
  VectorXd x = rhs;
  f.Solve(x);
  VectorXd r = rhs - op(x);
  double rn = InfNorm(r);
  const double stop = 1e-15 * std::max(1.0, InfNorm(rhs));
  for (int k = 0; k < max_refine && rn > stop; ++k) {
    VectorXd dx = r;
    f.Solve(dx);
    VectorXd xn = x + dx;
    VectorXd rn_vec = rhs - op(xn);
    const double rn2 = InfNorm(rn_vec);
    if (!(rn2 < rn)) break;
    x = std::move(xn);
    r = std::move(rn_vec);
    rn = rn2;
  }
  return x;
}

struct Outcome {
  SolveStatus status = SolveStatus::kNumericalFailure;
  int iterations = 0;
  VectorXd x, s, y, z;
  double max_reg = 0.0;
  bool polished = false;
};

class InteriorPoint {
 public:
  InteriorPoint(const ocp::OcpInstance& inst, const Reduced& red,
                const SolveSettings& st)
      : inst_(inst), red_(red), st_(st), order_(MakeOrder(inst, red, {})) {
    gt_ = red_.g.transpose();
  }

  Outcome Run(const VectorXd& x_start);

 private:
  double Objective(const VectorXd& x) const {
    return 0.5 * x.dot(red_.p * x) + red_.c.dot(x);
  }
  void Assemble(BandedLdlt& k, const VectorXd& sigma, double delta_w) const;
  bool Polish(Outcome& out) const;

  const ocp::OcpInstance& inst_;
  const Reduced& red_;
  const SolveSettings& st_;
  KktOrder order_;
  SpMat gt_;
};

void InteriorPoint::Assemble(BandedLdlt& k, const VectorXd& sigma,
                             double delta_w) const {
  k.SetZero();
  const auto& vp = order_.var_pos;
  for (int col = 0; col < red_.p.outerSize(); ++col) {
    for (SpMat::InnerIterator it(red_.p, col); it; ++it) {
      if (it.row() >= col) k.Add(vp[it.row()], vp[col], it.value());
    }
  }
  for (int j = 0; j < red_.n; ++j) k.Add(vp[j], vp[j], delta_w);
  for (int r = 0; r < red_.g.rows(); ++r) {
    for (RowMat::InnerIterator a(red_.g, r); a; ++a) {
      for (RowMat::InnerIterator b(red_.g, r); b; ++b) {
        if (b.col() > a.col()) continue;
        k.Add(vp[a.col()], vp[b.col()], sigma(r) * a.value() * b.value());
      }
    }
  }
  for (int col = 0; col < red_.e.outerSize(); ++col) {
    for (SpMat::InnerIterator it(red_.e, col); it; ++it) {
      k.Add(order_.eq_pos[it.row()], vp[col], it.value());
    }
  }
  for (int r = 0; r < red_.e.rows(); ++r) {
    k.Add(order_.eq_pos[r], order_.eq_pos[r], -kDeltaC);
  }
}

Outcome InteriorPoint::Run(const VectorXd& x_start) {
  const int n = red_.n;
  const int m = static_cast<int>(red_.e.rows());
  const int p = static_cast<int>(red_.g.rows());
  const double tol = st_.kkt_tol;
  const double mu_min = tol / 100.0;

  Outcome out;
  VectorXd x = x_start;
  VectorXd s = (red_.h - red_.g * x).cwiseMax(kSlackFloor);
  double mu = st_.barrier_init;
  VectorXd z = (mu * s.cwiseInverse());
  VectorXd y = VectorXd::Zero(m);
  double nu = 1.0;
  double delta_last = 0.0;

  BandedLdlt kkt(order_.size, order_.bandwidth);
  VectorXd sol(order_.size);

  for (int iter = 0; iter <= st_.max_iter; ++iter) {
    const VectorXd r_d = red_.p * x + red_.c + red_.e.transpose() * y + gt_ * z;
    const VectorXd r_e = red_.e * x - red_.e_rhs;
    const VectorXd r_g = red_.g * x + s - red_.h;
    const VectorXd sz = s.cwiseProduct(z);
    const double feas = std::max(InfNorm(r_e), InfNorm(r_g));
    const double err0 =
        std::max({InfNorm(r_d), feas, p > 0 ? sz.maxCoeff() : 0.0});
    out.iterations = iter;
    if (err0 <= tol && mu <= 10.0 * mu_min) {
      out.status = SolveStatus::kOptimal;
      break;
    }
    if (iter == st_.max_iter) {
      out.status = SolveStatus::kIterLimit;
      break;
    }
    // Monotone barrier update.
    while (mu > mu_min) {
      const double err_mu =
          std::max({InfNorm(r_d), feas,
                    InfNorm((sz.array() - mu).matrix())});
      if (err_mu > kKappaEps * mu) break;
      mu = std::max(mu_min, std::min(st_.barrier_shrink * mu,
                                     std::pow(mu, 1.5)));
    }
    const double tau = std::max(0.99, 1.0 - mu);
    const VectorXd sigma = z.cwiseQuotient(s);
    const VectorXd r_c = (sz.array() - mu).matrix();

    // Right-hand side in band order.
    const VectorXd rx =
        -r_d + gt_ * (r_c - z.cwiseProduct(r_g)).cwiseQuotient(s);
    VectorXd rhs(order_.size);
    for (int j = 0; j < n; ++j) rhs(order_.var_pos[j]) = rx(j);
    for (int r = 0; r < m; ++r) rhs(order_.eq_pos[r]) = -r_e(r);

    // Inertia correction.
    double delta = 0.0;
    bool accepted = false;
    VectorXd dx(n), dy(m), ds(p), dz(p);
    double alpha = 0.0, alpha_d = 0.0;
    while (true) {
      Assemble(kkt, sigma, delta);
      const bool ok = kkt.Factorize(kPivotTol) && InertiaIs(kkt, n, m);
      if (ok) {
        auto op = [&](const VectorXd& v) {
          VectorXd w = kkt.Multiply(v);
          for (int r = 0; r < m; ++r) {
            w(order_.eq_pos[r]) += kDeltaC * v(order_.eq_pos[r]);
          }
          return w;
        };
        sol = RefinedSolve(kkt, rhs, op, 3);
        for (int j = 0; j < n; ++j) dx(j) = sol(order_.var_pos[j]);
        for (int r = 0; r < m; ++r) dy(r) = sol(order_.eq_pos[r]);
        ds = -r_g - red_.g * dx;
        dz = (-r_c - z.cwiseProduct(ds)).cwiseQuotient(s);

        // Fraction to the boundary.
        alpha = 1.0;
        alpha_d = 1.0;
        for (int i = 0; i < p; ++i) {
          if (ds(i) < 0) alpha = std::min(alpha, -tau * s(i) / ds(i));
          if (dz(i) < 0) alpha_d = std::min(alpha_d, -tau * z(i) / dz(i));
        }

        // l1 merit line search.
        const VectorXd grad = red_.p * x + red_.c;
        const double viol = r_e.lpNorm<1>() + r_g.lpNorm<1>();
        const double gd = grad.dot(dx) - mu * ds.cwiseQuotient(s).sum();
        if (viol > 0.0) {
          const VectorXd wdx = red_.p * dx + delta * dx +
                               gt_ * sigma.cwiseProduct(red_.g * dx);
          const double curv = std::max(0.0, dx.dot(wdx));
          const double need = (gd + 0.5 * curv) / (0.9 * viol);
          if (nu < need) nu = need + 1.0;
        }
        const double slope = std::min(gd - nu * viol, -1e-300);
        auto merit = [&](const VectorXd& xx, const VectorXd& ss) {
          return Objective(xx) - mu * ss.array().log().sum() +
                 nu * ((red_.e * xx - red_.e_rhs).lpNorm<1>() +
                       (red_.g * xx + ss - red_.h).lpNorm<1>());
        };
        const double phi0 = merit(x, s);
        while (alpha > 1e-12) {
          const double phi = merit(x + alpha * dx, s + alpha * ds);
          if (phi <= phi0 + kArmijo * alpha * slope ||
              std::abs(phi - phi0) <= 1e-15 * std::max(1.0, std::abs(phi0))) {
            accepted = true;
            break;
          }
          alpha *= 0.5;
        }
        if (accepted) break;
      }
      // Wrong inertia, breakdown, or no acceptable step: regularize more.
      if (delta == 0.0) {
        delta = std::max(st_.regularization_floor, delta_last / 4.0);
      } else {
        delta *= 2.0;
      }
      if (delta > kMaxRegularization) break;
    }
    if (!accepted) {
      out.status = SolveStatus::kNumericalFailure;
      break;
    }
    delta_last = delta;
    out.max_reg = std::max(out.max_reg, delta);
    if (st_.verbose) {
      std::fprintf(stderr,
                   "iter %4d  f %+.10e  err %.2e  mu %.2e  alpha %.2e/%.2e"
                   "  delta %.1e\n",
                   iter, Objective(x), err0, mu, alpha, alpha_d, delta);
    }

    x += alpha * dx;
    s += alpha * ds;
    y += alpha * dy;
    z += alpha_d * dz;
    for (int i = 0; i < p; ++i) {
      z(i) = std::clamp(z(i), mu / (kKappaSigma * s(i)),
                        kKappaSigma * mu / s(i));
    }
  }
  out.x = x;
  out.s = s;
  out.y = y;
  out.z = z;
  if (out.status == SolveStatus::kOptimal && st_.polish) {
    out.polished = Polish(out);
  }
  return out;
}

// Equality-constrained re-solve on the active set guessed from s < z, via
// proximal iterations on the regularized KKT system. The guess is corrected
// a few times: rows with negative multipliers leave, violated rows join.
bool InteriorPoint::Polish(Outcome& out) const {
  const int n = red_.n;
  const int m = static_cast<int>(red_.e.rows());
  const int p = static_cast<int>(red_.g.rows());
  std::vector<char> in_set(p, 0);
  for (int i = 0; i < p; ++i) in_set[i] = out.s(i) < out.z(i);
  double scale = 1.0;
  for (int col = 0; col < red_.p.outerSize(); ++col) {
    for (SpMat::InnerIterator it(red_.p, col); it; ++it) {
      scale = std::max(scale, std::abs(it.value()));
    }
  }
  const double dp = 1e-9 * scale;
  const double dc = std::min(dp, kDeltaC);

  for (int round = 0; round < 8; ++round) {
    std::vector<int> active;
    for (int i = 0; i < p; ++i) {
      if (in_set[i]) active.push_back(i);
    }
    const int na = static_cast<int>(active.size());
    const KktOrder o = MakeOrder(inst_, red_, active);
    BandedLdlt k(o.size, o.bandwidth);
    for (int col = 0; col < red_.p.outerSize(); ++col) {
      for (SpMat::InnerIterator it(red_.p, col); it; ++it) {
        if (it.row() >= col) k.Add(o.var_pos[it.row()], o.var_pos[col], it.value());
      }
    }
    for (int j = 0; j < n; ++j) k.Add(o.var_pos[j], o.var_pos[j], dp);
    for (int col = 0; col < red_.e.outerSize(); ++col) {
      for (SpMat::InnerIterator it(red_.e, col); it; ++it) {
        k.Add(o.eq_pos[it.row()], o.var_pos[col], it.value());
      }
    }
    for (int r = 0; r < m; ++r) k.Add(o.eq_pos[r], o.eq_pos[r], -dc);
    for (int a = 0; a < na; ++a) {
      for (RowMat::InnerIterator it(red_.g, active[a]); it; ++it) {
        k.Add(o.act_pos[a], o.var_pos[it.col()], it.value());
      }
      k.Add(o.act_pos[a], o.act_pos[a], -dp);
    }
    if (!k.Factorize(kPivotTol) || !InertiaIs(k, n, m + na)) return false;

    VectorXd x = out.x, y = out.y, za(na);
    for (int a = 0; a < na; ++a) za(a) = out.z(active[a]);
    auto op = [&](const VectorXd& v) { return k.Multiply(v); };
    VectorXd rhs(o.size), sol;
    for (int it = 0; it < 50; ++it) {
      const VectorXd rx = -red_.c + dp * x;
      for (int j = 0; j < n; ++j) rhs(o.var_pos[j]) = rx(j);
      for (int r = 0; r < m; ++r) rhs(o.eq_pos[r]) = red_.e_rhs(r) - dc * y(r);
      for (int a = 0; a < na; ++a) {
        rhs(o.act_pos[a]) = red_.h(active[a]) - dp * za(a);
      }
      sol = RefinedSolve(k, rhs, op, 2);
      VectorXd xn(n);
      for (int j = 0; j < n; ++j) xn(j) = sol(o.var_pos[j]);
      for (int r = 0; r < m; ++r) y(r) = sol(o.eq_pos[r]);
      for (int a = 0; a < na; ++a) za(a) = sol(o.act_pos[a]);
      const double change = InfNorm(xn - x);
      x = std::move(xn);
      if (change <= 1e-15 * std::max(1.0, InfNorm(x))) break;
    }

    const VectorXd slack = red_.h - red_.g * x;
    bool changed = false;
    for (int a = 0; a < na; ++a) {
      if (za(a) < -1e-9) {
        in_set[active[a]] = 0;
        changed = true;
      }
    }
    for (int i = 0; i < p; ++i) {
      if (!in_set[i] && slack(i) < -1e-9) {
        in_set[i] = 1;
        changed = true;
      }
    }
    if (changed) continue;

    VectorXd z = VectorXd::Zero(p);
    for (int a = 0; a < na; ++a) z(active[a]) = std::max(0.0, za(a));
    if (InfNorm(red_.e * x - red_.e_rhs) > 1e-9) return false;
    const double f_new = Objective(x), f_old = Objective(out.x);
    if (f_new > f_old + 1e-9 * std::max(1.0, std::abs(f_old))) return false;
    const VectorXd s = slack.cwiseMax(0.0);
    const VectorXd r_d = red_.p * x + red_.c + red_.e.transpose() * y + gt_ * z;
    const double comp = p > 0 ? s.cwiseProduct(z).cwiseAbs().maxCoeff() : 0.0;
    if (std::max(InfNorm(r_d), comp) > st_.kkt_tol) return false;
    out.x = x;
    out.y = y;
    out.z = z;
    out.s = s;
    return true;
  }
  return false;
}

struct Candidate {
  VectorXd point;
  Multipliers mult;
  double residual = 0.0;
};

// Physical-unit multipliers; rows that fixed a variable get the value that
// zeroes its stationarity component.
Multipliers ExpandMultipliers(const ocp::OcpInstance& inst, const Reduced& red,
                              const Scaling& sc, const Outcome& out,
                              const VectorXd& point) {
  Multipliers m;
  m.eq = VectorXd::Zero(inst.eq.rows());
  m.ineq = VectorXd::Zero(inst.ineq.rows());
  for (int r = 0; r < static_cast<int>(red.eq_row.size()); ++r) {
    const int full = red.eq_row[r];
    m.eq(full) = sc.f * sc.r_eq(full) * out.y(r);
  }
  for (int r = 0; r < static_cast<int>(red.in_row.size()); ++r) {
    const int full = red.in_row[r];
    m.ineq(full) = sc.f * sc.r_in(full) * out.z(r);
  }
  const VectorXd g = -(inst.hessian * point) - inst.linear +
                     inst.eq.transpose() * m.eq +
                     inst.ineq.transpose() * m.ineq;
  for (int j = 0; j < inst.num_variables(); ++j) {
    const int r = red.fixing_row[j];
    if (r < 0) continue;
    m.eq(r) = -g(j) / inst.eq.coeff(r, j);
  }
  return m;
}

VectorXd ExpandPoint(const Reduced& red, const VectorXd& x) {
  VectorXd full = red.fixed;
  for (int k = 0; k < red.n; ++k) full(red.var[k]) = red.d(k) * x(k);
  return full;
}

VectorXd PinnedControls(const ocp::OcpInstance& inst, const VectorXd& point) {
  VectorXd u = inst.layout.Controls(point);
  if (inst.config.u_init) u(0) = *inst.config.u_init;
  return u;
}

}  // namespace

void SolveSettings::Validate() const {
  std::vector<std::string> bad;
  if (!(kkt_tol > 0.0)) bad.push_back("kkt_tol");
  if (max_iter <= 0) bad.push_back("max_iter");
  if (!(barrier_init > 0.0)) bad.push_back("barrier_init");
  if (!(barrier_shrink > 0.0 && barrier_shrink < 1.0)) {
    bad.push_back("barrier_shrink");
  }
  if (!(regularization_floor > 0.0)) bad.push_back("regularization_floor");
  if (multistart <= 0) bad.push_back("multistart");
  if (!bad.empty()) {
    std::string msg = "invalid solver settings:";
    for (const auto& f : bad) msg += " " + f;
    Fail(ErrorCode::kInvalidArgument, msg);
  }
}

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kIterLimit: return "iter_limit";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

double KktResidual(const ocp::OcpInstance& inst, const VectorXd& point,
                   const Multipliers& mult) {
  Require(point.size() == inst.num_variables(),
          "kkt residual: point dimension mismatch");
  Require(mult.eq.size() == inst.eq.rows() &&
              mult.ineq.size() == inst.ineq.rows(),
          "kkt residual: multiplier dimension mismatch");
  const Scaling sc = MakeScaling(inst);
  const VectorXd r = -(inst.hessian * point) - inst.linear +
                     inst.eq.transpose() * mult.eq +
                     inst.ineq.transpose() * mult.ineq;
  double res = InfNorm(sc.d.cwiseProduct(r) / sc.f);
  res = std::max(res, InfNorm(sc.r_eq.cwiseProduct(inst.eq * point - inst.eq_rhs)));
  const VectorXd slack = sc.r_in.cwiseProduct(inst.ineq_rhs - inst.ineq * point);
  const VectorXd zs = mult.ineq.cwiseQuotient(sc.r_in) / sc.f;
  for (int i = 0; i < slack.size(); ++i) {
    res = std::max({res, -slack(i), std::abs(zs(i) * slack(i)), -zs(i)});
  }
  return res;
}

SolveResult Solve(const ocp::OcpInstance& inst, const SolveSettings& settings,
                  const VectorXd* warm_start) {
  settings.Validate();
  const double t_begin = ThreadCpuSeconds();
  const Scaling sc = MakeScaling(inst);
  const Reduced red = Presolve(inst, sc);
  const double gamma = inst.config.gamma;

  SolveResult best;
  best.report.starts = settings.multistart;
  if (red.infeasible) {
    best.point = inst.InitialPoint();
    best.multipliers.eq = VectorXd::Zero(inst.eq.rows());
    best.multipliers.ineq = VectorXd::Zero(inst.ineq.rows());
    best.report.status = SolveStatus::kInfeasible;
    best.report.kkt_residual = KktResidual(inst, best.point, best.multipliers);
    best.report.objective = inst.Objective(best.point);
    best.report.solve_seconds = ThreadCpuSeconds() - t_begin;
    return best;
  }

  VectorXd base_u;
  if (warm_start) {
    Require(warm_start->size() == inst.num_variables(),
            "warm start dimension mismatch");
    base_u = PinnedControls(inst, *warm_start);
  } else {
    base_u = PinnedControls(inst, inst.InitialPoint());
  }

  InteriorPoint ipm(inst, red, settings);
  bool have_best = false;
  double obj_max = -std::numeric_limits<double>::infinity();
  double obj_min = std::numeric_limits<double>::infinity();
  for (int start = 0; start < settings.multistart; ++start) {
    VectorXd u = base_u;
    if (start > 0) {
      std::mt19937_64 rng(settings.seed +
                          0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(start));
      std::uniform_real_distribution<double> noise(-gamma / 10.0, gamma / 10.0);
      for (int k = 0; k < u.size(); ++k) {
        const double e = noise(rng);
        if (k == 0 && inst.config.u_init) continue;
        u(k) = std::clamp(u(k) + e, -gamma, gamma);
      }
    }
    const VectorXd start_point = inst.PointFromControls(
        {u.data(), static_cast<std::size_t>(u.size())});
    VectorXd x0(red.n);
    for (int k = 0; k < red.n; ++k) x0(k) = start_point(red.var[k]) / red.d(k);

    const Outcome out = ipm.Run(x0);

    // Canonical point: states re-rolled from the controls, minimal excess.
    const VectorXd raw = ExpandPoint(red, out.x);
    const VectorXd uu = PinnedControls(inst, raw);
    Candidate cand;
    cand.point = inst.PointFromControls({uu.data(), static_cast<std::size_t>(uu.size())});
    cand.mult = ExpandMultipliers(inst, red, sc, out, cand.point);
    cand.residual = KktResidual(inst, cand.point, cand.mult);
    if (cand.residual > settings.kkt_tol) {
      Candidate alt;
      alt.point = raw;
      alt.mult = ExpandMultipliers(inst, red, sc, out, raw);
      alt.residual = KktResidual(inst, raw, alt.mult);
      if (alt.residual < cand.residual) cand = std::move(alt);
    }
    SolveStatus status = out.status;
    if (status == SolveStatus::kOptimal && cand.residual > settings.kkt_tol) {
      status = SolveStatus::kIterLimit;
    }
    const double objective = inst.Objective(cand.point);
    if (status == SolveStatus::kOptimal) {
      obj_max = std::max(obj_max, objective);
      obj_min = std::min(obj_min, objective);
    }
    const bool better =
        !have_best ||
        (status == SolveStatus::kOptimal &&
         (best.report.status != SolveStatus::kOptimal ||
          objective > best.report.objective));
    if (better) {
      have_best = true;
      best.point = std::move(cand.point);
      best.multipliers = std::move(cand.mult);
      best.report.status = status;
      best.report.iterations = out.iterations;
      best.report.kkt_residual = cand.residual;
      best.report.objective = objective;
      best.report.best_start = start;
      best.report.polished = out.polished;
      best.report.max_regularization = out.max_reg;
    }
  }
  best.report.multistart_spread = obj_max >= obj_min ? obj_max - obj_min : 0.0;
  best.report.solve_seconds = ThreadCpuSeconds() - t_begin;
  return best;
}

}  // namespace wecopt::qp
