// Copyright 2026 The IntentGrasp Authors. All Rights Reserved.
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

// JSON wire formats. Decoders throw Error(kSchema) naming the offending field.

#pragma once

#include <string>

#include <json.hpp>

#include "intentgrasp/world.hpp"

namespace intentgrasp {

using json = nlohmann::json;

json box_to_json(const RegionBox& box);
RegionBox box_from_json(const json& j, const std::string& field);

json scene_to_json(const Scene& scene);
Scene scene_from_json(const json& j);

json descriptor_to_json(const Descriptor& d);
Descriptor descriptor_from_json(const json& j, const std::string& field);

json record_to_json(const DatasetRecord& record);
DatasetRecord record_from_json(const json& j, const std::string& field);

namespace detail {

/// Looks up a required member, throwing a schema error on absence.
const json& require(const json& j, const std::string& key,
                    const std::string& context);

}  // namespace detail

}  // namespace intentgrasp
