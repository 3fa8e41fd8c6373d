// Copyright 2026 The entnet Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "entnet/thresholds.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "entnet/errors.hpp"
#include "entnet/types.hpp"

namespace entnet {

double threshold_residual(double x, int n) {
  return n * std::pow(x, 2 * n) - std::pow((1.0 + x) / 2.0, n) - std::pow((1.0 - x) / 2.0, n);
}

ThresholdResult solve_threshold(int n) {
  if (n < 2) {
    throw std::domain_error("solve_threshold: n must be at least 2, got " + std::to_string(n));
  }
  constexpr int kGrid = 1000;
  int changes = 0;
  double lo = 0.0, hi = 0.0;
  double prev = threshold_residual(0.0, n);
  for (int i = 1; i <= kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double cur = threshold_residual(x, n);
    if ((prev < 0.0) != (cur < 0.0)) {
      ++changes;
      lo = static_cast<double>(i - 1) / kGrid;
      hi = x;
    }
    prev = cur;
  }
  if (changes != 1) {
    std::ostringstream msg;
    msg << "solve_threshold(" << n << "): grid scan on [0, 1] found " << changes << " sign changes, expected 1";
    throw SolverError(msg.str());
  }

  double f_lo = threshold_residual(lo, n);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = threshold_residual(mid, n);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double r_lo = threshold_residual(lo, n);
  const double r_hi = threshold_residual(hi, n);
  const double x = std::abs(r_lo) <= std::abs(r_hi) ? lo : hi;

  ThresholdResult out;
  out.n = n;
  out.x_thres = x;
  out.f_thres = fidelity_from_werner_param(x);
  out.residual = threshold_residual(x, n);
  return out;
}

ThresholdTrend threshold_trend(int n_min, int n_max) {
  if (n_min < 2 || n_max < n_min) {
    throw std::domain_error("threshold_trend: need 2 <= n_min <= n_max");
  }
  ThresholdTrend trend;
  for (int n = n_min; n <= n_max; ++n) {
    trend.values.push_back(solve_threshold(n));
    const std::size_t i = trend.values.size() - 1;
    if (n >= 4 && i >= 1 && trend.values[i].f_thres <= trend.values[i - 1].f_thres) {
      trend.non_increasing_at.push_back(n);
    }
  }
  return trend;
}

}  // namespace entnet
