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

#pragma once

#include <string>
#include <vector>

#include "intentgrasp/world.hpp"

namespace intentgrasp::testing {

inline ObjectSpec make_object(const std::string& id, const std::string& category,
                              const std::string& color, const std::string& size,
                              const RegionBox& box) {
  const CategoryEntry* c = Lexicon::standard().find_category(category);
  ObjectSpec o;
  o.id = id;
  o.category = category;
  o.attributes = {{kColor, color}, {kSize, size}};
  o.affordances = c ? c->affordances : std::vector<std::string>{"drinkable"};
  o.box = box;
  o.height_m = c ? c->height_m : 0.05;
  return o;
}

inline Scene make_scene(std::vector<ObjectSpec> objects, const std::string& target_id,
                        const std::string& id = "test") {
  Scene s;
  s.id = id;
  s.objects = std::move(objects);
  s.target_id = target_id;
  return s;
}

// Coke on the left, water bottle on the right.
inline Scene two_drinks(const std::string& target = "coke") {
  return make_scene({make_object("coke", "can of coke", "red", "medium", {100, 100, 200, 200}),
                     make_object("water", "water bottle", "blue", "medium", {400, 100, 500, 200}),
                     make_object("pen", "pen", "black", "small", {250, 300, 320, 370})},
                    target);
}

}  // namespace intentgrasp::testing
