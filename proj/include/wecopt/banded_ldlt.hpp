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

#ifndef WECOPT_BANDED_LDLT_HPP_
#define WECOPT_BANDED_LDLT_HPP_

#include <vector>

#include <Eigen/Core>

namespace wecopt::qp {

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

// Symmetric indefinite band matrix factored as L D L' in its given order.
// D has 1x1 and 2x2 blocks; a 2x2 block always pairs neighbours i, i+1,
// so no rows are interchanged and the band is preserved (L gets one extra
// sub-diagonal).
class BandedLdlt {
 public:
  BandedLdlt() = default;
  BandedLdlt(int n, int bandwidth);

  int size() const { return n_; }
  int bandwidth() const { return p_; }

  void SetZero();
  // Adds v at (i, j) and, implicitly, at (j, i). |i - j| <= bandwidth.
  void Add(int i, int j, double v);
  double Get(int i, int j) const;

  // Returns false on a pivot below pivot_tol times the size of its row.
  bool Factorize(double pivot_tol = 1e-14);
  const Inertia& inertia() const { return inertia_; }
  int num_two_by_two() const { return two_by_two_; }

  void Solve(Eigen::VectorXd& rhs) const;
  // Product with the matrix as assembled (before factorization).
  Eigen::VectorXd Multiply(const Eigen::VectorXd& x) const;

 private:
  double& A(int i, int j) { return a_[i * (p_ + 1) + (i - j)]; }
  double A(int i, int j) const { return a_[i * (p_ + 1) + (i - j)]; }
  double& F(int i, int j) { return f_[i * (p_ + 2) + (i - j)]; }
  double F(int i, int j) const { return f_[i * (p_ + 2) + (i - j)]; }

  int n_ = 0;
  int p_ = 0;
  std::vector<double> a_;
  std::vector<double> f_;
  std::vector<char> block_;  // 1 or 2 at a block start, 0 at its second row
  Inertia inertia_;
  int two_by_two_ = 0;
};

}  // namespace wecopt::qp

#endif  // WECOPT_BANDED_LDLT_HPP_
