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

// Dense linear assignment: shortest augmenting paths with the Jonker-Volgenant
// initialisation (column reduction, reduction transfer, augmenting row
// reduction). Ties are resolved towards the lower index so the result is
// deterministic.

#include <Eigen/Dense>
#include <cstddef>
#include <limits>
#include <vector>

#include "kfp/errors.hpp"

namespace kfp {

struct Assignment {
  std::vector<int> row_to_col;
  double total = 0;  ///< Σ_i cost(i, row_to_col[i]), recomputed from the costs
};

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Minimum-cost perfect matching; `cost(i, j)` must be callable for
/// 0 ≤ i, j < n and return a finite value.
template <typename CostFn>
Assignment solve_assignment(int n, CostFn&& cost) {
  if (n < 0) throw ParameterError("assignment size must be non-negative");
  Assignment out;
  out.row_to_col.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return out;
  if (n == 1) {
    out.row_to_col[0] = 0;
    out.total = cost(0, 0);
    return out;
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<int>& rowsol = out.row_to_col;
  std::vector<int> colsol(n, -1), free_rows(n), collist(n), matches(n, 0), pred(n);
  std::vector<double> v(n), d(n);

  // Column reduction, scanning columns from the back as in the original.
  for (int j = n - 1; j >= 0; --j) {
    double min = cost(0, j);
    int imin = 0;
    for (int i = 1; i < n; ++i) {
      const double c = cost(i, j);
      if (c < min) {
        min = c;
        imin = i;
      }
    }
    v[j] = min;
    if (++matches[imin] == 1) {
      rowsol[imin] = j;
      colsol[j] = imin;
    } else {
      colsol[j] = -1;
    }
  }

  // Reduction transfer.
  int num_free = 0;
  for (int i = 0; i < n; ++i) {
    if (matches[i] == 0) {
      free_rows[num_free++] = i;
    } else if (matches[i] == 1) {
      const int j1 = rowsol[i];
      double min = kInf;
      for (int j = 0; j < n; ++j)
        if (j != j1 && cost(i, j) - v[j] < min) min = cost(i, j) - v[j];
      v[j1] -= min;
    }
  }

  // Augmenting row reduction, two passes. The per-pass work is capped: with
  // floating-point ties the reduction can cycle, and rows left over are
  // handled by the augmentation phase anyway.
  for (int pass = 0; pass < 2 && num_free > 0; ++pass) {
    int k = 0;
    const int prev_free = num_free;
    num_free = 0;
    long budget = 64L * n + 1024;
    while (k < prev_free) {
      if (--budget < 0) {
        while (k < prev_free) free_rows[num_free++] = free_rows[k++];
        break;
      }
      const int i = free_rows[k++];
      double umin = cost(i, 0) - v[0];
      int j1 = 0;
      int j2 = -1;
      double usubmin = kInf;
      for (int j = 1; j < n; ++j) {
        const double h = cost(i, j) - v[j];
        if (h < usubmin) {
          if (h >= umin) {
            usubmin = h;
            j2 = j;
          } else {
            usubmin = umin;
            umin = h;
            j2 = j1;
            j1 = j;
          }
        }
      }
      int i0 = colsol[j1];
      if (umin < usubmin) {
        v[j1] -= usubmin - umin;
      } else if (i0 >= 0 && j2 >= 0) {
        j1 = j2;
        i0 = colsol[j2];
      }
      if (i0 >= 0) rowsol[i0] = -1;
      rowsol[i] = j1;
      colsol[j1] = i;
      if (i0 >= 0) {
        if (umin < usubmin)
          free_rows[--k] = i0;
        else
          free_rows[num_free++] = i0;
      }
    }
  }

  // Augmentation: Dijkstra-like shortest path from each remaining free row.
  for (int f = 0; f < num_free; ++f) {
    const int free_row = free_rows[f];
    for (int j = 0; j < n; ++j) {
      d[j] = cost(free_row, j) - v[j];
      pred[j] = free_row;
      collist[j] = j;
    }
    int low = 0;
    int up = 0;
    int last = 0;
    int end_of_path = -1;
    double min = 0;
    bool found = false;
    do {
      if (up == low) {
        last = low - 1;
        min = d[collist[up++]];
        for (int k = up; k < n; ++k) {
          const int j = collist[k];
          const double h = d[j];
          if (h <= min) {
            if (h < min) {
              up = low;
              min = h;
            }
            collist[k] = collist[up];
            collist[up++] = j;
          }
        }
        for (int k = low; k < up; ++k) {
          if (colsol[collist[k]] < 0) {
            end_of_path = collist[k];
            found = true;
            break;
          }
        }
      }
      if (!found) {
        const int j1 = collist[low++];
        const int i = colsol[j1];
        const double h = cost(i, j1) - v[j1] - min;
        for (int k = up; k < n; ++k) {
          const int j = collist[k];
          const double v2 = cost(i, j) - v[j] - h;
          if (v2 < d[j]) {
            pred[j] = i;
            if (v2 == min) {
              if (colsol[j] < 0) {
                end_of_path = j;
                found = true;
                break;
              }
              collist[k] = collist[up];
              collist[up++] = j;
            }
            d[j] = v2;
          }
        }
      }
    } while (!found);

    for (int k = 0; k <= last; ++k) {
      const int j1 = collist[k];
      v[j1] += d[j1] - min;
    }
    int i;
    do {
      i = pred[end_of_path];
      colsol[end_of_path] = i;
      const int j1 = end_of_path;
      end_of_path = rowsol[i];
      rowsol[i] = j1;
    } while (i != free_row);
  }

  out.total = 0;
  for (int i = 0; i < n; ++i) out.total += cost(i, rowsol[i]);
  return out;
}

Assignment solve_assignment(const RowMajorMatrix& cost);

}  // namespace kfp
