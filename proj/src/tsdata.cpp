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

#include "argraph/tsdata.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace argraph {

namespace {

std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, delim)) fields.push_back(field);
  if (!line.empty() && line.back() == delim) fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin)))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1])))
    --end;
  if (begin == end) return false;
  const auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end;
}

[[noreturn]] void row_error(const char* what, std::size_t row) {
  throw std::runtime_error("load_timeseries: " + std::string(what) +
                           " at row " + std::to_string(row));
}

// Pairwise-accumulated lagged product: sum over t in [lo, hi) of
// y(t + k) y(t)^T.  Ranges at or below the leaf size use a direct block
// product; larger ranges split in half so round-off grows like log N.
Matrix lagged_sum(const Matrix& y, int k, int lo, int hi) {
  constexpr int kLeaf = 64;
  if (hi - lo <= kLeaf)
    return y.middleRows(lo + k, hi - lo).transpose() * y.middleRows(lo, hi - lo);
  const int mid = lo + (hi - lo) / 2;
  return lagged_sum(y, k, lo, mid) + lagged_sum(y, k, mid, hi);
}

}  // namespace

TimeSeries load_timeseries(std::istream& in, const CsvOptions& opts) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row_index = 0;
  std::size_t width = 0;
  bool first_data_row = true;
  while (std::getline(in, line)) {
    ++row_index;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_row(line, opts.delimiter);
    if (first_data_row) {
      bool header = opts.has_header == 1;
      if (opts.has_header == -1) {
        for (const auto& field : fields) {
          double ignored;
          if (!parse_double(field, ignored)) {
            header = true;
            break;
          }
        }
      }
      if (header) {
        first_data_row = false;
        width = fields.size();
        continue;
      }
    }
    if (width == 0) width = fields.size();
    if (fields.size() != width) row_error("ragged row", row_index);
    std::vector<double> values(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (!parse_double(fields[c], values[c]))
        row_error("unparsable field", row_index);
      if (!std::isfinite(values[c])) row_error("non-finite value", row_index);
    }
    rows.push_back(std::move(values));
    first_data_row = false;
  }
  if (rows.empty()) throw std::runtime_error("load_timeseries: no data rows");
  TimeSeries out;
  out.samples.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c)
      out.samples(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
  return out;
}

TimeSeries load_timeseries_file(const std::string& path,
                                const CsvOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_timeseries: cannot open " + path);
  return load_timeseries(in, opts);
}

void write_timeseries(std::ostream& out, const TimeSeries& y) {
  char buf[64];
  for (Eigen::Index r = 0; r < y.samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < y.samples.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", y.samples(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_timeseries_file(const std::string& path, const TimeSeries& y) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_timeseries: cannot open " + path);
  write_timeseries(out, y);
}

MatrixPoly covariance_lags(const TimeSeries& y, int n) {
  const int len = y.length();
  const int m = y.dim();
  if (n < 0) throw std::invalid_argument("covariance_lags: n must be >= 0");
  if (len <= n)
    throw std::invalid_argument("covariance_lags: series shorter than n + 1");
  MatrixPoly out(m, n);
  const double scale = 1.0 / static_cast<double>(len - n);
  for (int k = 0; k <= n; ++k)
    out.block(k) = scale * lagged_sum(y.samples, k, 0, len - k);
  out.block(0) = ((out.block(0) + out.block(0).transpose()) * 0.5).eval();
  return out;
}

double check_toeplitz_pd(const MatrixPoly& lags) {
  const BlockToeplitz t = toeplitz(lags);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(t.mat, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

TimeSeries demean(const TimeSeries& y) {
  TimeSeries out = y;
  const Eigen::RowVectorXd mean = y.samples.colwise().mean();
  out.samples.rowwise() -= mean;
  return out;
}

}  // namespace argraph
