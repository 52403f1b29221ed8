// Copyright 2026 The cohframe Authors
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

#include <filesystem>

#include <json.hpp>

#include "cohframe/channels.hpp"
#include "cohframe/states.hpp"

namespace cohframe {

using json = nlohmann::json;

/// {"re": [[...]], "im": [[...]]}, row-major nested arrays.
json matrix_to_json(const CMat& m);
CMat matrix_from_json(const json& doc, Eigen::Index rows, Eigen::Index cols);

/// Density-state document {"dim", "re", "im"}; entry (i,j) = re[i][j] + i im[i][j].
json state_to_json(const DensityState& rho);
DensityState state_from_json(const json& doc, double tol = kStateTol);

/// Observables share the density-state document layout.
json observable_to_json(const Observable& h);
Observable observable_from_json(const json& doc);

/// {"in_dim", "out_dim", "kraus": [{"re", "im"}, ...]}.
json channel_to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const json& doc);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

}  // namespace cohframe
