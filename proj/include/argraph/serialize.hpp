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

#include "json.hpp"

#include "argraph/armodel.hpp"
#include "argraph/baseline.hpp"
#include "argraph/ebayes.hpp"
#include "argraph/metrics.hpp"

namespace argraph {

using Json = nlohmann::json;

// Matrices serialize as {"rows", "cols", "data"} with row-major data;
// coefficient lists as {"m", "n", "blocks"} with one row-major array per
// block.  All indices in serialized support lists are 0-based.

Json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const Json& j);

Json poly_to_json(const MatrixPoly& p);
MatrixPoly poly_from_json(const Json& j);

Json model_to_json(const GroundTruth& truth);
GroundTruth model_from_json(const Json& j);

Json estimate_to_json(const EstimateResult& result);
EstimateResult estimate_from_json(const Json& j);

Json metrics_to_json(const MetricReport& report);

// Missing keys keep the default-constructed value, so partial configuration
// files are valid.
SolverOptions solver_options_from_json(const Json& j);
Json solver_options_to_json(const SolverOptions& opts);
EBConfig eb_config_from_json(const Json& j);
Json eb_config_to_json(const EBConfig& cfg);
MetricOptions metric_options_from_json(const Json& j);
Json metric_options_to_json(const MetricOptions& opts);

// One JSON object per line, one line per outer iteration.
void write_trace_jsonl(const std::vector<EBTracePoint>& trace,
                       std::ostream& out);

// Score table of a grid run: header
//   gamma,gamma_l,bic,support_size,rank,e
// with empty cells for absent optionals.
void write_scores_csv(const BaselineSelection& selection, std::ostream& out);

// Round-trip exact formatting for doubles in CSV cells.
std::string format_double(double value);

Json load_json_file(const std::string& path);
void save_json_file(const Json& j, const std::string& path);

}  // namespace argraph
