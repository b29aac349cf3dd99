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

#include <iosfwd>
#include <string>

#include "argraph/poly.hpp"

namespace argraph {

// N observations of an m-variate series, one sample per row.
struct TimeSeries {
  Matrix samples;  // N x m

  int length() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
};

struct CsvOptions {
  char delimiter = ',';
  // -1: auto-detect (header assumed when the first row has any non-numeric
  // field), 0: no header, 1: single header row.
  int has_header = -1;
};

// Parses numeric CSV.  Ragged rows, unparsable fields, and non-finite values
// raise std::runtime_error naming the offending 1-based row.
TimeSeries load_timeseries(std::istream& in, const CsvOptions& opts = {});
TimeSeries load_timeseries_file(const std::string& path,
                                const CsvOptions& opts = {});

// Emits 17-significant-digit decimals so a write/read round trip is exact.
void write_timeseries(std::ostream& out, const TimeSeries& y);
void write_timeseries_file(const std::string& path, const TimeSeries& y);

// Windowed covariance lags
//   R_k = (1 / (N - n)) sum_{t=1}^{N-k} y(t + k) y(t)^T,  k = 0..n,
// with the same 1/(N - n) normalization for every lag, so the block Toeplitz
// lift of the result matches the scaled quadratic form used by the solvers.
// Sums are accumulated pairwise to keep long-series round-off at bay.
// Requires N > n.
MatrixPoly covariance_lags(const TimeSeries& y, int n);

// Smallest eigenvalue of toeplitz(lags); the solvers require it positive.
double check_toeplitz_pd(const MatrixPoly& lags);

// Subtracts the per-channel sample mean.
TimeSeries demean(const TimeSeries& y);

}  // namespace argraph
