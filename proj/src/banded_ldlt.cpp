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

#include "wecopt/banded_ldlt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wecopt/error.hpp"

namespace wecopt::qp {

namespace {

// Bunch-Kaufman threshold (1 + sqrt(17)) / 8.
constexpr double kAlpha = 0.6403882032022076;

}  // namespace

BandedLdlt::BandedLdlt(int n, int bandwidth) : n_(n), p_(bandwidth) {
  Require(n >= 0 && bandwidth >= 0, "banded LDLT: bad dimensions");
  a_.assign(static_cast<std::size_t>(n) * (p_ + 1), 0.0);
  f_.assign(static_cast<std::size_t>(n) * (p_ + 2), 0.0);
  block_.assign(n, 1);
}

void BandedLdlt::SetZero() { std::fill(a_.begin(), a_.end(), 0.0); }

void BandedLdlt::Add(int i, int j, double v) {
  if (i < j) std::swap(i, j);
  Require(j >= 0 && i < n_ && i - j <= p_, "banded LDLT: entry outside band");
  A(i, j) += v;
}

double BandedLdlt::Get(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (i - j > p_) return 0.0;
  return A(i, j);
}

bool BandedLdlt::Factorize(double pivot_tol) {
  inertia_ = {};
  two_by_two_ = 0;
  std::fill(f_.begin(), f_.end(), 0.0);
  // Pivots are judged against the size of their own row, since barrier
  // terms can make a few rows many orders larger than the rest.
  std::vector<double> row_scale(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    for (int j = std::max(0, i - p_); j <= i; ++j) {
      F(i, j) = A(i, j);
      row_scale[i] = std::max(row_scale[i], std::abs(A(i, j)));
      row_scale[j] = std::max(row_scale[j], std::abs(A(i, j)));
    }
  }
  for (double& r : row_scale) {
    if (r == 0.0) r = 1.0;
  }

  std::vector<double> v0(p_ + 2), v1(p_ + 2);
  int i = 0;
  while (i < n_) {
    const int last1 = std::min(n_ - 1, i + p_);
    const double d11 = F(i, i);
    const double tiny = pivot_tol * row_scale[i];
    double lambda = 0.0;
    for (int j = i + 1; j <= last1; ++j) lambda = std::max(lambda, std::abs(F(j, i)));

    bool use2 = false;
    double det = 0.0;
    if (std::abs(d11) < kAlpha * lambda && i + 1 < n_) {
      const double d21 = F(i + 1, i), d22 = F(i + 1, i + 1);
      det = d11 * d22 - d21 * d21;
      const double bscale =
          std::max({std::abs(d11), std::abs(d21), std::abs(d22)});
      const double tiny2 = pivot_tol * std::max(row_scale[i], row_scale[i + 1]);
      if (std::abs(det) > tiny2 * bscale) {
        // Compare element growth of the two candidate pivots.
        const int last2 = std::min(n_ - 1, i + 1 + p_);
        double off = 0.0;
        for (int j = i + 2; j <= last2; ++j) {
          off = std::max({off, std::abs(F(j, i)), std::abs(F(j, i + 1))});
        }
        const double inv_max = bscale / std::abs(det);
        const double growth2 = inv_max * std::max(off, std::abs(d21));
        const double growth1 =
            std::abs(d11) > tiny ? lambda / std::abs(d11)
                                 : std::numeric_limits<double>::infinity();
        use2 = growth2 < growth1;
      }
    }

    if (!use2) {
      if (!(std::abs(d11) > tiny)) return false;
      block_[i] = 1;
      (d11 > 0 ? inertia_.positive : inertia_.negative)++;
      const int cnt = last1 - i;
      for (int t = 0; t < cnt; ++t) v0[t] = F(i + 1 + t, i);
      for (int t = 0; t < cnt; ++t) {
        const int j = i + 1 + t;
        const double l = v0[t] / d11;
        if (l != 0.0) {
          for (int s = 0; s <= t; ++s) F(j, i + 1 + s) -= l * v0[s];
        }
        F(j, i) = l;
      }
      i += 1;
      continue;
    }

    // 2x2 pivot on (i, i+1).
    const double d21 = F(i + 1, i), d22 = F(i + 1, i + 1);
    block_[i] = 2;
    block_[i + 1] = 0;
    ++two_by_two_;
    if (det < 0) {
      inertia_.positive++;
      inertia_.negative++;
    } else if (d11 + d22 > 0) {
      inertia_.positive += 2;
    } else {
      inertia_.negative += 2;
    }
    const double i11 = d22 / det, i12 = -d21 / det, i22 = d11 / det;
    const int last2 = std::min(n_ - 1, i + 1 + p_);
    const int cnt = last2 - (i + 1);
    for (int t = 0; t < cnt; ++t) {
      const int j = i + 2 + t;
      v0[t] = F(j, i);
      v1[t] = F(j, i + 1);
    }
    for (int t = 0; t < cnt; ++t) {
      const int j = i + 2 + t;
      const double l0 = v0[t] * i11 + v1[t] * i12;
      const double l1 = v0[t] * i12 + v1[t] * i22;
      if (l0 != 0.0 || l1 != 0.0) {
        for (int s = 0; s <= t; ++s) {
          F(j, i + 2 + s) -= l0 * v0[s] + l1 * v1[s];
        }
      }
      F(j, i) = l0;
      F(j, i + 1) = l1;
    }
    i += 2;
  }
  return true;
}

void BandedLdlt::Solve(Eigen::VectorXd& b) const {
  Require(b.size() == n_, "banded LDLT: rhs size mismatch");
  // Forward with unit L.
  for (int i = 0; i < n_;) {
    if (block_[i] == 2) {
      const int last = std::min(n_ - 1, i + 1 + p_);
      const double b0 = b(i), b1 = b(i + 1);
      for (int j = i + 2; j <= last; ++j) b(j) -= F(j, i) * b0 + F(j, i + 1) * b1;
      i += 2;
    } else {
      const int last = std::min(n_ - 1, i + p_);
      const double b0 = b(i);
      for (int j = i + 1; j <= last; ++j) b(j) -= F(j, i) * b0;
      i += 1;
    }
  }
  // Block diagonal.
  for (int i = 0; i < n_;) {
    if (block_[i] == 2) {
      const double d11 = F(i, i), d21 = F(i + 1, i), d22 = F(i + 1, i + 1);
      const double det = d11 * d22 - d21 * d21;
      const double b0 = b(i), b1 = b(i + 1);
      b(i) = (d22 * b0 - d21 * b1) / det;
      b(i + 1) = (d11 * b1 - d21 * b0) / det;
      i += 2;
    } else {
      b(i) /= F(i, i);
      i += 1;
    }
  }
  // Backward with L'.
  for (int i = n_ - 1; i >= 0; --i) {
    if (block_[i] == 0) {
      // Second row of a 2x2 block; handled with its first row.
      const int s = i - 1;
      const int last = std::min(n_ - 1, s + 1 + p_);
      double acc0 = 0.0, acc1 = 0.0;
      for (int j = s + 2; j <= last; ++j) {
        acc0 += F(j, s) * b(j);
        acc1 += F(j, s + 1) * b(j);
      }
      b(s) -= acc0;
      b(s + 1) -= acc1;
      i = s;
    } else if (block_[i] == 1) {
      const int last = std::min(n_ - 1, i + p_);
      double acc = 0.0;
      for (int j = i + 1; j <= last; ++j) acc += F(j, i) * b(j);
      b(i) -= acc;
    }
  }
}

Eigen::VectorXd BandedLdlt::Multiply(const Eigen::VectorXd& x) const {
  Require(x.size() == n_, "banded LDLT: vector size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    y(i) += A(i, i) * x(i);
    for (int j = std::max(0, i - p_); j < i; ++j) {
      const double v = A(i, j);
      y(i) += v * x(j);
      y(j) += v * x(i);
    }
  }
  return y;
}

}  // namespace wecopt::qp
