// Copyright 2026 The kfp-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "kfp/config.hpp"
#include "kfp/csv.hpp"
#include "kfp/experiments.hpp"
#include "kfp/stats.hpp"

namespace kfp::detail {

/// Splits [from, to] into the fewest equal steps no longer than h.
struct Segment {
  std::size_t steps = 0;
  double dt = 0;
};

inline Segment segment(double from, double to, double h) {
  const double span = to - from;
  if (!(span > 0)) return {};
  const auto n = static_cast<std::size_t>(std::ceil(span / h - 1e-9));
  return {n, span / static_cast<double>(n)};
}


inline Table make_table(ExperimentKind kind) { return Table(experiment_columns(kind)); }

}  // namespace kfp::detail
