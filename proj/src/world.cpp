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

#include "intentgrasp/world.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <random>
#include <tuple>

#include "intentgrasp/errors.hpp"
#include "intentgrasp/random.hpp"

namespace intentgrasp {

bool ObjectSpec::affords(const std::string& tag) const {
  return std::find(affordances.begin(), affordances.end(), tag) !=
         affordances.end();
}

std::string ObjectSpec::attribute(const std::string& name) const {
  auto it = attributes.find(name);
  return it == attributes.end() ? std::string() : it->second;
}

const ObjectSpec& Scene::target() const {
  const ObjectSpec* t = find(target_id);
  if (!t) throw Error(ErrorKind::kSchema, "scene '" + id + "': target_id does not reference an object");
  return *t;
}

const ObjectSpec* Scene::find(const std::string& object_id) const {
  for (const auto& o : objects)
    if (o.id == object_id) return &o;
  return nullptr;
}

std::optional<std::size_t> Scene::index_of(const std::string& object_id) const {
  for (std::size_t i = 0; i < objects.size(); ++i)
    if (objects[i].id == object_id) return i;
  return std::nullopt;
}

void Scene::validate(const Lexicon* lexicon) const {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::kSchema, "scene '" + id + "': " + what);
  };
  if (width <= 0 || height <= 0) fail("width/height must be positive");
  std::set<std::string> ids;
  for (const auto& o : objects) {
    if (!ids.insert(o.id).second) fail("duplicate object id '" + o.id + "'");
    if (!o.box.valid()) fail("objects[" + o.id + "].box is degenerate");
    if (!o.box.within(width, height)) fail("objects[" + o.id + "].box exceeds image bounds");
    if (o.affordances.empty()) fail("objects[" + o.id + "].affordances is empty");
    if (!(o.height_m > 0.0)) fail("objects[" + o.id + "].height_m must be positive");
    if (lexicon && !lexicon->find_category(o.category))
      fail("objects[" + o.id + "].category '" + o.category + "' not in lexicon");
  }
  if (!find(target_id)) fail("target_id '" + target_id + "' does not reference an object");
  if (!clutter_mode) {
    for (std::size_t i = 0; i < objects.size(); ++i)
      for (std::size_t j = i + 1; j < objects.size(); ++j)
        if (iou(objects[i].box, objects[j].box) > 0.05)
          fail("boxes of '" + objects[i].id + "' and '" + objects[j].id +
               "' overlap beyond IoU 0.05 outside clutter mode");
  }
}

const ObjectSpec* resolve_object(const Scene& scene, const RegionBox& region,
                                 double min_iou) {
  const ObjectSpec* best = nullptr;
  double best_iou = min_iou;
  for (const auto& o : scene.objects) {
    const double v = iou(region, o.box);
    if (v > best_iou) {
      best_iou = v;
      best = &o;
    }
  }
  return best;
}

bool Descriptor::matches(const ObjectSpec& object) const {
  if (object.category != category) return false;
  for (const auto& [name, value] : attributes)
    if (object.attribute(name) != value) return false;
  return true;
}

std::string Descriptor::text() const {
  std::string out;
  auto append = [&](const std::string& s) {
    if (s.empty()) return;
    if (!out.empty()) out += ' ';
    out += s;
  };
  if (auto it = attributes.find(kSize); it != attributes.end()) append(it->second);
  if (auto it = attributes.find(kColor); it != attributes.end()) append(it->second);
  for (const auto& [name, value] : attributes)
    if (name != kSize && name != kColor) append(value);
  append(category);
  return out;
}

Descriptor minimal_descriptor(const ObjectSpec& object,
                              const std::vector<ObjectSpec>& others) {
  const std::vector<std::vector<std::string>> orders = {
      {}, {kColor}, {kSize}, {kColor, kSize}};
  Descriptor fallback{object.category, object.attributes};
  for (const auto& names : orders) {
    Descriptor d{object.category, {}};
    bool usable = true;
    for (const auto& n : names) {
      auto it = object.attributes.find(n);
      if (it == object.attributes.end()) {
        usable = false;
        break;
      }
      d.attributes.emplace(n, it->second);
    }
    if (!usable) continue;
    const bool unique = std::none_of(others.begin(), others.end(), [&](const ObjectSpec& o) {
      return o.id != object.id && d.matches(o);
    });
    if (unique) return d;
  }
  return fallback;
}

Descriptor scene_descriptor(const Scene& scene, const ObjectSpec& object) {
  return minimal_descriptor(object, scene.objects);
}

// ---------------------------------------------------------------------------

const char* to_string(Split split) {
  switch (split) {
    case Split::kSeen: return "seen";
    case Split::kUnseen: return "unseen";
    case Split::kCluttered: return "cluttered";
    case Split::kCustom: return "custom";
  }
  return "custom";
}

Split split_from_string(const std::string& name) {
  if (name == "seen") return Split::kSeen;
  if (name == "unseen") return Split::kUnseen;
  if (name == "cluttered") return Split::kCluttered;
  if (name == "custom") return Split::kCustom;
  throw Error(ErrorKind::kInvalidArgument, "unknown split '" + name + "'");
}

GeneratorConfig GeneratorConfig::for_split(Split split) {
  GeneratorConfig c;
  c.id_prefix = to_string(split);
  switch (split) {
    case Split::kSeen:
    case Split::kCustom:
      c.holdout = novel_categories();
      break;
    case Split::kUnseen:
      c.target_categories = novel_categories();
      break;
    case Split::kCluttered:
      c.holdout = novel_categories();
      c.clutter_mode = true;
      c.max_pairwise_iou = 0.5;
      c.min_objects = 5;
      c.max_objects = 9;
      break;
  }
  return c;
}

namespace {

struct SizeClass {
  const char* name;
  double min_px;
  double max_px;
};

constexpr SizeClass kSizes[] = {
    {"small", 60.0, 85.0}, {"medium", 85.0, 115.0}, {"large", 115.0, 150.0}};

struct Draft {
  std::string category;
  std::string color;
  int size = 0;
};

bool same_look(const Draft& a, const Draft& b) {
  return a.category == b.category && a.color == b.color && a.size == b.size;
}

}  // namespace

Task generate_task(const GeneratorConfig& config, std::uint64_t seed) {
  const Lexicon& lex = *config.lexicon;
  if (lex.categories.empty() || lex.intents.entries.empty())
    throw Error(ErrorKind::kGeneration, "lexicon is empty");
  if (config.min_objects < 1 || config.max_objects < config.min_objects)
    throw Error(ErrorKind::kInvalidArgument, "invalid object count range");
  const int min_consistent = config.ambiguous ? std::max(2, config.min_consistent)
                                              : std::max(1, config.min_consistent);
  if (min_consistent > config.max_objects)
    throw Error(ErrorKind::kInvalidArgument, "object count range too small for ambiguity");

  Rng rng(mix_seed(seed, 0x5CE4E));

  std::vector<const CategoryEntry*> available;
  for (const auto& c : lex.categories)
    if (!config.holdout.count(c.name)) available.push_back(&c);
  if (available.empty()) throw Error(ErrorKind::kGeneration, "lexicon is empty after holdout");

  auto affords = [](const CategoryEntry* c, const std::string& a) {
    return std::find(c->affordances.begin(), c->affordances.end(), a) != c->affordances.end();
  };

  // Intents that can host the requested number of distinct satisfying looks.
  std::vector<const IntentEntry*> intents;
  for (const auto& intent : lex.intents.entries) {
    std::size_t looks = 0;
    bool has_target_category = config.target_categories.empty();
    for (const auto* c : available) {
      if (!affords(c, intent.affordance)) continue;
      looks += c->colors.size() * std::size(kSizes);
      if (config.target_categories.count(c->name)) has_target_category = true;
    }
    if (looks >= std::size_t(min_consistent) && has_target_category) intents.push_back(&intent);
  }
  if (intents.empty())
    throw Error(ErrorKind::kGeneration, "no intent can be satisfied by the available categories");

  const IntentEntry& intent = *intents[uniform_index(rng, intents.size())];
  std::vector<const CategoryEntry*> satisfying, filler;
  for (const auto* c : available)
    (affords(c, intent.affordance) ? satisfying : filler).push_back(c);

  const int n_objects = uniform_int(rng, std::max(config.min_objects, min_consistent),
                                    config.max_objects);
  int max_consistent = std::min(config.max_consistent, n_objects);
  if (filler.empty()) max_consistent = n_objects;
  max_consistent = std::max(max_consistent, min_consistent);
  const int n_consistent = uniform_int(rng, min_consistent, max_consistent);

  std::vector<Draft> drafts;
  auto draw_look = [&](const std::vector<const CategoryEntry*>& pool) -> std::optional<Draft> {
    for (int attempt = 0; attempt < 200; ++attempt) {
      const CategoryEntry* c = pool[uniform_index(rng, pool.size())];
      Draft d{c->name, c->colors[uniform_index(rng, c->colors.size())],
              int(uniform_index(rng, std::size(kSizes)))};
      if (std::none_of(drafts.begin(), drafts.end(),
                       [&](const Draft& e) { return same_look(d, e); }))
        return d;
    }
    return std::nullopt;
  };

  // The first consistent draft is the target.
  if (!config.target_categories.empty()) {
    std::vector<const CategoryEntry*> pool;
    for (const auto* c : satisfying)
      if (config.target_categories.count(c->name)) pool.push_back(c);
    drafts.push_back(*draw_look(pool));
  }
  while (int(drafts.size()) < n_consistent) {
    auto d = draw_look(satisfying);
    if (!d) throw Error(ErrorKind::kGeneration, "cannot draw distinct satisfying objects");
    drafts.push_back(*d);
  }
  std::size_t target_draft = 0;
  if (config.target_categories.empty()) target_draft = uniform_index(rng, drafts.size());
  while (int(drafts.size()) < n_objects && !filler.empty()) {
    auto d = draw_look(filler);
    if (!d) break;
    drafts.push_back(*d);
  }

  // Placement order is shuffled so satisfying objects are not listed first.
  std::vector<std::size_t> order(drafts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(rng, order);

  Task task;
  Scene& scene = task.scene;
  scene.id = config.id_prefix + "-" + std::to_string(seed);
  scene.width = config.width;
  scene.height = config.height;
  scene.table_z = config.table_z;
  scene.clutter_mode = config.clutter_mode;

  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    const Draft& d = drafts[order[slot]];
    const CategoryEntry& cat = *lex.find_category(d.category);
    const SizeClass& sz = kSizes[d.size];
    ObjectSpec obj;
    obj.id = "o" + std::to_string(slot);
    obj.category = d.category;
    obj.attributes = {{kColor, d.color}, {kSize, sz.name}};
    obj.affordances = cat.affordances;
    obj.height_m = cat.height_m;

    bool placed = false;
    for (int attempt = 0; attempt < 4000 && !placed; ++attempt) {
      const double w = uniform_real(rng, sz.min_px, sz.max_px);
      const double h = uniform_real(rng, sz.min_px, sz.max_px);
      if (w + 2 >= config.width || h + 2 >= config.height) break;
      const double x1 = uniform_real(rng, 1.0, config.width - w - 1.0);
      const double y1 = uniform_real(rng, 1.0, config.height - h - 1.0);
      const RegionBox box{x1, y1, x1 + w, y1 + h};
      const bool ok = std::all_of(scene.objects.begin(), scene.objects.end(), [&](const ObjectSpec& o) {
        if (iou(box, o.box) > config.max_pairwise_iou) return false;
        if (!config.clutter_mode) return true;
        // keep every object at least partly visible
        const double iw = std::min(box.x2, o.box.x2) - std::max(box.x1, o.box.x1);
        const double ih = std::min(box.y2, o.box.y2) - std::max(box.y1, o.box.y1);
        if (iw <= 0 || ih <= 0) return true;
        return iw * ih <= 0.6 * std::min(box.area(), o.box.area());
      });
      if (ok) {
        obj.box = box;
        placed = true;
      }
    }
    if (!placed)
      throw Error(ErrorKind::kGeneration,
                  "cannot place " + std::to_string(drafts.size()) +
                      " objects within the overlap limit");
    if (order[slot] == target_draft) scene.target_id = obj.id;
    scene.objects.push_back(std::move(obj));
  }

  task.intent = intent.tag;
  task.utterance = intent.templates[uniform_index(rng, intent.templates.size())];
  scene.validate(&lex);
  return task;
}

Scene generate_scene(const GeneratorConfig& config, std::uint64_t seed) {
  return generate_task(config, seed).scene;
}

// ---------------------------------------------------------------------------

Eigen::Vector3d object_centroid(const Scene& scene, const ObjectSpec& object,
                                double metres_per_px) {
  return {object.box.center_x() * metres_per_px,
          object.box.center_y() * metres_per_px,
          scene.table_z + 0.5 * object.height_m};
}

PointCloud render_point_cloud(const Scene& scene, double noise_sigma,
                              const RenderOptions& options) {
  if (noise_sigma < 0.0) throw Error(ErrorKind::kInvalidArgument, "noise_sigma must be >= 0");
  if (options.stride_px < 1 || options.object_levels < 1)
    throw Error(ErrorKind::kInvalidArgument, "stride and object_levels must be >= 1");
  if (options.base_clearance_m < 0.0)
    throw Error(ErrorKind::kInvalidArgument, "base_clearance_m must be >= 0");

  Rng rng(mix_seed(options.seed, 0xC10D));
  std::normal_distribution<double> noise(0.0, noise_sigma);
  auto jitter = [&]() { return noise_sigma > 0.0 ? noise(rng) : 0.0; };

  std::vector<Eigen::Vector3d> pts;
  std::vector<Eigen::Vector2i> pix;
  std::vector<int> labels;
  const int s = options.stride_px;
  const int levels = options.object_levels;

  for (int v = 0; v < scene.height; v += s) {
    for (int u = 0; u < scene.width; u += s) {
      // The tallest box covering the pixel owns it.
      int owner = -1;
      for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        if (!scene.objects[i].box.contains_pixel(u, v)) continue;
        if (owner < 0 || scene.objects[i].height_m > scene.objects[owner].height_m)
          owner = int(i);
      }
      const Eigen::Vector2d xy = pixel_to_metric(u, v, options.metres_per_px);
      double z = scene.table_z;
      if (owner >= 0) {
        // Hashed so that no tilted plane collects a whole level.
        const std::uint64_t cell = (std::uint64_t(u) << 32) | std::uint64_t(v);
        const int level = 1 + int(mix_seed(cell, 0x1E7) % std::uint64_t(levels));
        const double h = scene.objects[owner].height_m;
        const double base = std::min(options.base_clearance_m, 0.5 * h);
        z += base + (h - base) * double(level) / double(levels);
      }
      pts.emplace_back(xy.x() + jitter(), xy.y() + jitter(), z + jitter());
      pix.emplace_back(u, v);
      labels.push_back(owner);
    }
  }

  PointCloud cloud;
  cloud.points.resize(3, Eigen::Index(pts.size()));
  cloud.pixel_map.resize(2, Eigen::Index(pix.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cloud.points.col(Eigen::Index(i)) = pts[i];
    cloud.pixel_map.col(Eigen::Index(i)) = pix[i];
  }
  cloud.labels = std::move(labels);
  return cloud;
}

namespace {
constexpr char kCloudMagic[4] = {'I', 'G', 'P', 'C'};
constexpr std::uint32_t kCloudVersion = 1;
}  // namespace

void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  const std::uint64_t n = std::uint64_t(cloud.size());
  out.write(kCloudMagic, 4);
  out.write(reinterpret_cast<const char*>(&kCloudVersion), sizeof kCloudVersion);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const double rec[5] = {cloud.points(0, i), cloud.points(1, i), cloud.points(2, i),
                           double(cloud.pixel_map(0, i)), double(cloud.pixel_map(1, i))};
    out.write(reinterpret_cast<const char*>(rec), sizeof rec);
  }
  if (!out) throw Error(ErrorKind::kInvalidArgument, "write failed for " + path.string());
}

PointCloud load_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot read " + path.string());
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t n = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || std::memcmp(magic, kCloudMagic, 4) != 0 || version != kCloudVersion)
    throw Error(ErrorKind::kSchema, "not a point cloud file: " + path.string());
  PointCloud cloud;
  cloud.points.resize(3, Eigen::Index(n));
  cloud.pixel_map.resize(2, Eigen::Index(n));
  cloud.labels.assign(n, -1);
  for (std::uint64_t i = 0; i < n; ++i) {
    double rec[5];
    in.read(reinterpret_cast<char*>(rec), sizeof rec);
    if (!in) throw Error(ErrorKind::kSchema, "truncated point cloud: " + path.string());
    cloud.points.col(Eigen::Index(i)) << rec[0], rec[1], rec[2];
    cloud.pixel_map.col(Eigen::Index(i)) << int(rec[3]), int(rec[4]);
  }
  return cloud;
}

// ---------------------------------------------------------------------------

void DatasetRecord::validate() const {
  scene.validate();
  if (utterance.empty()) throw Error(ErrorKind::kSchema, "utterance is empty");
  if (region_labels.size() != qa_pairs.size() + 1)
    throw Error(ErrorKind::kSchema,
                "region_labels has " + std::to_string(region_labels.size()) +
                    " sets but qa_pairs has " + std::to_string(qa_pairs.size()) +
                    " entries (expected N+1)");
  if (!target_box.valid()) throw Error(ErrorKind::kSchema, "target_box is degenerate");
  const auto& last = region_labels.back();
  if (std::find(last.begin(), last.end(), target_box) == last.end())
    throw Error(ErrorKind::kSchema, "target_box is not in the last region_labels set");
}

}  // namespace intentgrasp
