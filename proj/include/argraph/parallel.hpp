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

#include <functional>

namespace argraph {

// Worker count resolution: the ARGRAPH_WORKERS environment variable wins,
// then a positive request, then the hardware concurrency (at least 1).
int resolve_workers(int requested);

// Runs fn(0..count-1) on up to `workers` threads pulling indices from a
// shared counter; sequential when workers <= 1.  The first exception thrown
// by any worker is rethrown after all threads join.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace argraph
