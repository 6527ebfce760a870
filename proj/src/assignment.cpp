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

#include "kfp/assignment.hpp"

namespace kfp {

Assignment solve_assignment(const RowMajorMatrix& cost) {
  if (cost.rows() != cost.cols()) throw SizeMismatchError("assignment cost matrix must be square");
  const double* data = cost.data();
  const auto n = static_cast<int>(cost.rows());
  return solve_assignment(n, [data, n](int i, int j) { return data[static_cast<std::ptrdiff_t>(i) * n + j]; });
}

}  // namespace kfp
