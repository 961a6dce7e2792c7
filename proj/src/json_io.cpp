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

#include "intentgrasp/json_io.hpp"

#include <fstream>

#include "intentgrasp/errors.hpp"

namespace intentgrasp {
namespace detail {

const json& require(const json& j, const std::string& key,
                    const std::string& context) {
  if (!j.is_object())
    throw Error(ErrorKind::kSchema, context + ": expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw Error(ErrorKind::kSchema, context + "." + key + ": missing field");
  return *it;
}

}  // namespace detail

namespace {

using detail::require;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::kSchema, field + ": " + what);
}

std::string get_string(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_string()) bad(ctx + "." + key, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number()) bad(ctx + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_number_integer()) bad(ctx + "." + key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = require(j, key, ctx);
  if (!v.is_boolean()) bad(ctx + "." + key, "expected a boolean");
  return v.get<bool>();
}

Attributes attributes_from_json(const json& j, const std::string& field) {
  if (!j.is_object()) bad(field, "expected an object of strings");
  Attributes out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) bad(field + "." + it.key(), "expected a string");
    out.emplace(it.key(), it.value().get<std::string>());
  }
  return out;
}

}  // namespace

json box_to_json(const RegionBox& box) {
  return json::array({box.x1, box.y1, box.x2, box.y2});
}

RegionBox box_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) bad(field, "expected [x1,y1,x2,y2]");
  for (std::size_t i = 0; i < 4; ++i)
    if (!j[i].is_number()) bad(field + "[" + std::to_string(i) + "]", "expected a number");
  RegionBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!b.valid()) bad(field, "box must satisfy x2 > x1 and y2 > y1");
  return b;
}

json scene_to_json(const Scene& scene) {
  json objects = json::array();
  for (const auto& o : scene.objects) {
    objects.push_back({{"id", o.id},
                       {"category", o.category},
                       {"attributes", o.attributes},
                       {"affordances", o.affordances},
                       {"box", box_to_json(o.box)},
                       {"height_m", o.height_m}});
  }
  return {{"id", scene.id},
          {"width", scene.width},
          {"height", scene.height},
          {"objects", std::move(objects)},
          {"target_id", scene.target_id},
          {"table_z", scene.table_z},
          {"clutter_mode", scene.clutter_mode}};
}

Scene scene_from_json(const json& j) {
  const std::string ctx = "scene";
  Scene s;
  s.id = get_string(j, "id", ctx);
  s.width = get_int(j, "width", ctx);
  s.height = get_int(j, "height", ctx);
  s.target_id = get_string(j, "target_id", ctx);
  s.table_z = get_number(j, "table_z", ctx);
  s.clutter_mode = get_bool(j, "clutter_mode", ctx);
  const json& objs = require(j, "objects", ctx);
  if (!objs.is_array()) bad("scene.objects", "expected an array");
  for (std::size_t i = 0; i < objs.size(); ++i) {
    const std::string octx = "scene.objects[" + std::to_string(i) + "]";
    const json& o = objs[i];
    ObjectSpec spec;
    spec.id = get_string(o, "id", octx);
    spec.category = get_string(o, "category", octx);
    spec.attributes = attributes_from_json(require(o, "attributes", octx), octx + ".attributes");
    const json& aff = require(o, "affordances", octx);
    if (!aff.is_array()) bad(octx + ".affordances", "expected an array of strings");
    for (const auto& a : aff) {
      if (!a.is_string()) bad(octx + ".affordances", "expected an array of strings");
      spec.affordances.push_back(a.get<std::string>());
    }
    spec.box = box_from_json(require(o, "box", octx), octx + ".box");
    spec.height_m = get_number(o, "height_m", octx);
    s.objects.push_back(std::move(spec));
  }
  s.validate();
  return s;
}

json descriptor_to_json(const Descriptor& d) {
  return {{"category", d.category}, {"attributes", d.attributes}};
}

Descriptor descriptor_from_json(const json& j, const std::string& field) {
  Descriptor d;
  d.category = get_string(j, "category", field);
  if (auto it = j.find("attributes"); it != j.end())
    d.attributes = attributes_from_json(*it, field + ".attributes");
  return d;
}

json record_to_json(const DatasetRecord& r) {
  json qa = json::array();
  for (const auto& [q, a] : r.qa_pairs) qa.push_back(json::array({q, a}));
  json labels = json::array();
  for (const auto& set : r.region_labels) {
    json boxes = json::array();
    for (const auto& b : set) boxes.push_back(box_to_json(b));
    labels.push_back(std::move(boxes));
  }
  return {{"scene", scene_to_json(r.scene)},
          {"utterance", r.utterance},
          {"qa_pairs", std::move(qa)},
          {"region_labels", std::move(labels)},
          {"target_box", box_to_json(r.target_box)}};
}

DatasetRecord record_from_json(const json& j, const std::string& ctx) {
  DatasetRecord r;
  try {
    r.scene = scene_from_json(require(j, "scene", ctx));
  } catch (const Error& e) {
    throw Error(ErrorKind::kSchema, ctx + "." + e.what());
  }
  r.utterance = get_string(j, "utterance", ctx);
  const json& qa = require(j, "qa_pairs", ctx);
  if (!qa.is_array()) bad(ctx + ".qa_pairs", "expected an array of [question, answer]");
  for (std::size_t i = 0; i < qa.size(); ++i) {
    const json& p = qa[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      bad(ctx + ".qa_pairs[" + std::to_string(i) + "]", "expected [question, answer] strings");
    r.qa_pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  const json& labels = require(j, "region_labels", ctx);
  if (!labels.is_array()) bad(ctx + ".region_labels", "expected an array of box lists");
  for (std::size_t n = 0; n < labels.size(); ++n) {
    const std::string lctx = ctx + ".region_labels[" + std::to_string(n) + "]";
    if (!labels[n].is_array()) bad(lctx, "expected an array of boxes");
    std::vector<RegionBox> set;
    for (std::size_t k = 0; k < labels[n].size(); ++k)
      set.push_back(box_from_json(labels[n][k], lctx + "[" + std::to_string(k) + "]"));
    r.region_labels.push_back(std::move(set));
  }
  r.target_box = box_from_json(require(j, "target_box", ctx), ctx + ".target_box");
  try {
    r.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kSchema, ctx + ": " + e.what());
  }
  return r;
}

void save_dataset(const std::vector<DatasetRecord>& records,
                  const std::filesystem::path& path) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(record_to_json(r));
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  out << arr.dump(1) << '\n';
  if (!out) throw Error(ErrorKind::kInvalidArgument, "write failed for " + path.string());
}

std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot read " + path.string());
  json arr;
  try {
    arr = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kSchema, path.string() + ": " + e.what());
  }
  if (!arr.is_array()) throw Error(ErrorKind::kSchema, "dataset: expected a top-level array");
  std::vector<DatasetRecord> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(record_from_json(arr[i], "records[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace intentgrasp
