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

#pragma once

// Fidelity below which an n-sensor GHZ probe built from Werner links is worse
// than n local probes.

#include <vector>

namespace entnet {

struct ThresholdResult {
  int n = 0;
  double x_thres = 0.0;
  double f_thres = 0.0;
  /// Residual of n x^{2n} - ((1+x)/2)^n - ((1-x)/2)^n at the returned root.
  double residual = 0.0;
};

/// n x^{2n} - ((1+x)/2)^n - ((1-x)/2)^n, i.e. the threshold equation divided by 2^n.
/// Negative below the threshold, positive above it.
[[nodiscard]] double threshold_residual(double x, int n);

/// Root on (0, 1) by a 0.001 grid scan followed by bisection down to adjacent doubles.
/// Throws SolverError unless the scan sees exactly one sign change.
[[nodiscard]] ThresholdResult solve_threshold(int n);

struct ThresholdTrend {
  std::vector<ThresholdResult> values;
  /// Sizes n (>= 3) where F_thres(n) <= F_thres(n-1).
  std::vector<int> non_increasing_at;
  [[nodiscard]] bool increasing() const noexcept { return non_increasing_at.empty(); }
};

/// Solves n_min..n_max and reports where F_thres fails to increase from n = 3 on.
[[nodiscard]] ThresholdTrend threshold_trend(int n_min, int n_max);

}  // namespace entnet
