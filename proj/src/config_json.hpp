// Copyright 2026 the coopdet authors
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

// Internal JSON bridging shared by the config file and dataset manifest
// writers; not part of the installed API.

#ifndef COOPDET_SRC_CONFIG_JSON_HPP_
#define COOPDET_SRC_CONFIG_JSON_HPP_

#include <json.hpp>

#include "coopdet/experiment/config.hpp"

namespace coopdet {

nlohmann::json bundle_to_json(const ScenarioBundle& bundle);
ScenarioBundle bundle_from_json(const nlohmann::json& j);

}  // namespace coopdet

#endif  // COOPDET_SRC_CONFIG_JSON_HPP_
