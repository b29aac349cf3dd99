// Copyright 2026 The argraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "argraph/poly.hpp"

namespace argraph {
struct WeightSet;
}

namespace argraph::detail {

// Free-coordinate layout of a dual variable Z.  The matrix representation
// stores the symmetric (Z_0)_{jh} slot twice, which makes matrix-space
// inner products unsuitable as the gradient geometry; the solvers instead
// work on this vectorization, where each free coordinate appears once and
// the group projections are exact Euclidean projections.
//
// Group order: (j, h) with 0 <= h <= j < m, h fastest.  Within a diagonal
// group: (Z_0)_{jj} .. (Z_n)_{jj}.  Within an off-diagonal group:
// (Z_0)_{jh}, then (Z_k)_{jh} for k = 1..n, then (Z_k)_{hj} for k = 1..n.
struct ZLayout {
  int m = 0;
  int n = 0;
  int total = 0;
  std::vector<int> offsets;  // per group, indexed by group_index

  static int group_index(int j, int h) { return j * (j + 1) / 2 + h; }
  int group_size(int j, int h) const { return j == h ? n + 1 : 2 * n + 1; }
  int groups() const { return m * (m + 1) / 2; }
};

inline ZLayout make_zlayout(int m, int n) {
  ZLayout out;
  out.m = m;
  out.n = n;
  out.offsets.resize(static_cast<std::size_t>(out.groups()));
  int at = 0;
  for (int j = 0; j < m; ++j) {
    for (int h = 0; h <= j; ++h) {
      out.offsets[static_cast<std::size_t>(ZLayout::group_index(j, h))] = at;
      at += out.group_size(j, h);
    }
  }
  out.total = at;
  return out;
}

inline Vector z_to_vec(const MatrixPoly& z, const ZLayout& lay) {
  Vector out(lay.total);
  for (int j = 0; j < lay.m; ++j) {
    for (int h = 0; h <= j; ++h) {
      const int at = lay.offsets[static_cast<std::size_t>(
          ZLayout::group_index(j, h))];
      if (j == h) {
        for (int k = 0; k <= lay.n; ++k) out(at + k) = z.block(k)(j, j);
      } else {
        out(at) = z.block(0)(j, h);
        for (int k = 1; k <= lay.n; ++k) {
          out(at + k) = z.block(k)(j, h);
          out(at + lay.n + k) = z.block(k)(h, j);
        }
      }
    }
  }
  return out;
}

inline MatrixPoly z_from_vec(const Vector& v, const ZLayout& lay) {
  MatrixPoly z(lay.m, lay.n);
  for (int j = 0; j < lay.m; ++j) {
    for (int h = 0; h <= j; ++h) {
      const int at = lay.offsets[static_cast<std::size_t>(
          ZLayout::group_index(j, h))];
      if (j == h) {
        for (int k = 0; k <= lay.n; ++k) z.block(k)(j, j) = v(at + k);
      } else {
        z.block(0)(j, h) = v(at);
        z.block(0)(h, j) = v(at);
        for (int k = 1; k <= lay.n; ++k) {
          z.block(k)(j, h) = v(at + k);
          z.block(k)(h, j) = v(at + lay.n + k);
        }
      }
    }
  }
  return z;
}

// Groupwise Euclidean projection onto the weighted-l1 balls, acting on the
// free-coordinate vector.  Defined with the solver that owns the weights.
Vector project_zvec(const Vector& v, const WeightSet& weights,
                    const ZLayout& lay);

// Converts the matrix-space gradient G (the one satisfying
// dF = <G, dZ> in the poly_dot pairing) into the free-coordinate gradient.
// The shared (Z_0)_{jh} coordinate appears in two matrix slots, so its
// partial derivative is the sum of both, i.e. twice the symmetric entry.
inline Vector grad_to_vec(const MatrixPoly& g, const ZLayout& lay) {
  Vector out(lay.total);
  for (int j = 0; j < lay.m; ++j) {
    for (int h = 0; h <= j; ++h) {
      const int at = lay.offsets[static_cast<std::size_t>(
          ZLayout::group_index(j, h))];
      if (j == h) {
        for (int k = 0; k <= lay.n; ++k) out(at + k) = g.block(k)(j, j);
      } else {
        out(at) = g.block(0)(j, h) + g.block(0)(h, j);
        for (int k = 1; k <= lay.n; ++k) {
          out(at + k) = g.block(k)(j, h);
          out(at + lay.n + k) = g.block(k)(h, j);
        }
      }
    }
  }
  return out;
}

}  // namespace argraph::detail
