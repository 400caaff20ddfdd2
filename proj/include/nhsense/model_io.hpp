// Copyright 2026 The nhsense Authors
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

#include <string>

#include <json.hpp>

#include "nhsense/model.hpp"

namespace nhsense {

/// Model from its JSON form. Complex entries are numbers or [re, im] pairs;
/// matrices are arrays of rows. With "units": "kappa" (the default) rates
/// are given in units of kappa and couplings Y, Z, beta in units of √kappa.
/// Throws InvalidModel or ShapeMismatch on malformed input.
SensorModel model_from_json(const nlohmann::json& j);

/// Absolute-unit JSON form of a model; model_from_json inverts it.
nlohmann::json model_to_json(const SensorModel& model);

/// File wrappers; I/O failures throw Io, content errors as above.
SensorModel load_model(const std::string& path);
void save_model(const SensorModel& model, const std::string& path);

}  // namespace nhsense
