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


#include "wecopt/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "wecopt/error.hpp"
#include "wecopt/io.hpp"

namespace wecopt::costmodel {
namespace {

// Least-squares line y = slope x + intercept.
struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line FitLine(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) Fail(ErrorCode::kSingular, "cost fit: regressor is constant");
  Line l;
  l.slope = sxy / sxx;
  l.intercept = my - l.slope * mx;
  return l;
}

double RSquared(const FitResult& fit, const std::vector<DampingSample>& s) {
  double mean = 0.0;
  for (const auto& p : s) mean += p.mean_sq_velocity;
  mean /= static_cast<double>(s.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& p : s) {
    const double pred = fit.Predict(p.damping);
    if (!std::isfinite(pred)) return -std::numeric_limits<double>::infinity();
    ss_res += (p.mean_sq_velocity - pred) * (p.mean_sq_velocity - pred);
    ss_tot += (p.mean_sq_velocity - mean) * (p.mean_sq_velocity - mean);
  }
  if (!(ss_tot > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "cost fit: response is constant");
  }
  return 1.0 - ss_res / ss_tot;
}

void CheckSamples(const std::vector<DampingSample>& s) {
  if (s.size() < 3) {
    Fail(ErrorCode::kInvalidArgument, "cost fit: need at least 3 samples");
  }
  std::set<double> seen;
  for (const auto& p : s) {
    if (!(std::isfinite(p.damping) && p.damping > 0.0) ||
        !(std::isfinite(p.mean_sq_velocity) && p.mean_sq_velocity > 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "cost fit: damping and mean squared velocity must be > 0");
    }
    if (!seen.insert(p.damping).second) {
      Fail(ErrorCode::kInvalidArgument, "cost fit: repeated damping value");
    }
  }
}

}  // namespace

const char* ToString(Family family) {
  switch (family) {
    case Family::kHyperbolic: return "hyperbolic";
    case Family::kExponential: return "exponential";
    case Family::kLogarithmic: return "logarithmic";
    case Family::kPolynomial: return "polynomial";
  }
  return "?";
}

double FitResult::Predict(double b) const {
  const auto& p = parameters;
  switch (family) {
    case Family::kHyperbolic: return p[0] / (b + p[1]);
    case Family::kExponential: return p[0] * std::exp(-p[1] * b);
    case Family::kLogarithmic: return p[0] - p[1] * std::log(b);
    case Family::kPolynomial: return p[0] + b * (p[1] + b * p[2]);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

FitResult FitFamily(Family family, const std::vector<DampingSample>& s) {
  CheckSamples(s);
  std::vector<double> b(s.size()), y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) b[i] = s[i].damping;

  FitResult fit;
  fit.family = family;
  switch (family) {
    case Family::kHyperbolic: {
      // 1/v2 = b/a + c/a
      for (std::size_t i = 0; i < s.size(); ++i) y[i] = 1.0 / s[i].mean_sq_velocity;
      const Line l = FitLine(b, y);
      fit.parameters = {1.0 / l.slope, l.intercept / l.slope};
      break;
    }
    case Family::kExponential: {
      for (std::size_t i = 0; i < s.size(); ++i) y[i] = std::log(s[i].mean_sq_velocity);
      const Line l = FitLine(b, y);
      fit.parameters = {std::exp(l.intercept), -l.slope};
      break;
    }
    case Family::kLogarithmic: {
      std::vector<double> lb(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) {
        lb[i] = std::log(b[i]);
        y[i] = s[i].mean_sq_velocity;
      }
      const Line l = FitLine(lb, y);
      fit.parameters = {l.intercept, -l.slope};
      break;
    }
    case Family::kPolynomial: {
      const double scale = *std::max_element(b.begin(), b.end());
      Eigen::MatrixXd x(s.size(), 3);
      Eigen::VectorXd v(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double t = b[i] / scale;
        x.row(static_cast<Eigen::Index>(i)) << 1.0, t, t * t;
        v(static_cast<Eigen::Index>(i)) = s[i].mean_sq_velocity;
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
      if (qr.rank() < 3) Fail(ErrorCode::kSingular, "cost fit: quadratic is rank deficient");
      const Eigen::Vector3d c = qr.solve(v);
      fit.parameters = {c(0), c(1) / scale, c(2) / (scale * scale)};
      break;
    }
  }
  fit.r_squared = RSquared(fit, s);
  return fit;
}

std::vector<FitResult> FitFamilies(const std::vector<DampingSample>& samples) {
  std::vector<FitResult> out;
  for (Family f : {Family::kHyperbolic, Family::kExponential,
                   Family::kLogarithmic, Family::kPolynomial}) {
    out.push_back(FitFamily(f, samples));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FitResult& a, const FitResult& b) {
                     return a.r_squared > b.r_squared;
                   });
  return out;
}

double PowerForceExponent(const FitResult& fit, double b_lo, double b_hi,
                          int points) {
  Require(fit.family == Family::kHyperbolic,
          "power/force exponent needs a hyperbolic fit");
  if (!(std::isfinite(b_lo) && std::isfinite(b_hi) && b_lo > 0.0 && b_hi > b_lo)) {
    Fail(ErrorCode::kInvalidArgument,
         "power/force exponent: damping range must satisfy 0 < b_lo < b_hi");
  }
  Require(points >= 2, "power/force exponent: need at least 2 grid points");
  std::vector<double> log_f(points), log_p(points);
  const double l0 = std::log(b_lo), l1 = std::log(b_hi);
  for (int i = 0; i < points; ++i) {
    const double lb = l0 + (l1 - l0) * i / (points - 1);
    const double b = std::exp(lb);
    const double v2 = fit.Predict(b);
    if (!(v2 > 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "power/force exponent: fitted velocity is not positive on the range");
    }
    log_p[i] = lb;
    log_f[i] = lb + 0.5 * std::log(v2);
  }
  return FitLine(log_f, log_p).slope;
}

std::vector<DampingSample> ParseSamplesCsv(const std::string& text,
                                           const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = false;
  std::vector<DampingSample> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = SplitCsvLine(line);
    const std::string where = origin + ":" + std::to_string(line_no);
    if (!header) {
      if (fields.size() != 2 || fields[0] != "damping" ||
          fields[1] != "mean_sq_velocity") {
        Fail(ErrorCode::kIo,
             where + ": expected header damping,mean_sq_velocity");
      }
      header = true;
      continue;
    }
    if (fields.size() != 2) {
      Fail(ErrorCode::kIo, where + ": expected 2 fields");
    }
    out.push_back({ParseDouble(fields[0], where), ParseDouble(fields[1], where)});
  }
  if (out.empty()) Fail(ErrorCode::kIo, origin + ": no samples");
  return out;
}

std::vector<DampingSample> LoadSamplesCsv(const std::filesystem::path& path) {
  return ParseSamplesCsv(ReadFile(path), path.string());
}

}  // namespace wecopt::costmodel
