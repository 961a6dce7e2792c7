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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "intentgrasp/box.hpp"

namespace intentgrasp {

using Attributes = std::map<std::string, std::string>;

inline constexpr const char* kColor = "color";
inline constexpr const char* kSize = "size";

struct ObjectSpec {
  std::string id;
  std::string category;
  Attributes attributes;
  std::vector<std::string> affordances;
  RegionBox box;
  double height_m = 0.0;

  bool affords(const std::string& tag) const;
  std::string attribute(const std::string& name) const;

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct CategoryEntry {
  std::string name;
  std::vector<std::string> affordances;
  std::vector<std::string> colors;
  double height_m = 0.05;
};

struct IntentEntry {
  std::string tag;
  std::vector<std::string> templates;
  /// An object satisfies the intent when it carries this affordance.
  std::string affordance;

  bool satisfied_by(const ObjectSpec& object) const {
    return object.affords(affordance);
  }
};

struct IntentLexicon {
  std::vector<IntentEntry> entries;

  const IntentEntry* find(const std::string& tag) const;
  /// Case- and whitespace-insensitive template lookup.
  const IntentEntry* match_utterance(const std::string& utterance) const;
};

struct Lexicon {
  std::vector<CategoryEntry> categories;
  IntentLexicon intents;

  const CategoryEntry* find_category(const std::string& name) const;
  /// Throws when an affordance has no intent entry or a template is empty.
  void validate() const;

  /// Thirty everyday categories over nine intents.
  static const Lexicon& standard();
};

struct Scene {
  std::string id;
  int width = 640;
  int height = 480;
  std::vector<ObjectSpec> objects;
  std::string target_id;
  double table_z = 0.0;
  bool clutter_mode = false;

  const ObjectSpec& target() const;
  const ObjectSpec* find(const std::string& object_id) const;
  std::optional<std::size_t> index_of(const std::string& object_id) const;

  /// Throws ErrorKind::kSchema describing the first violated invariant.
  void validate(const Lexicon* lexicon = nullptr) const;

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Best-overlapping object for a region, if its IoU exceeds `min_iou`.
const ObjectSpec* resolve_object(const Scene& scene, const RegionBox& region,
                                 double min_iou = 0.1);

/// Structured referring expression: a category plus the attribute values
/// needed to single out one object.
struct Descriptor {
  std::string category;
  Attributes attributes;

  bool matches(const ObjectSpec& object) const;
  /// "pink candle", "small red mug", "banana".
  std::string text() const;

  friend bool operator==(const Descriptor&, const Descriptor&) = default;
  friend auto operator<=>(const Descriptor&, const Descriptor&) = default;
};

/// Shortest descriptor of `object` that no other object in `others` matches.
/// Attributes are tried in the order {}, {color}, {size}, {color, size}.
Descriptor minimal_descriptor(const ObjectSpec& object,
                              const std::vector<ObjectSpec>& others);

/// Minimal descriptor relative to the whole scene.
Descriptor scene_descriptor(const Scene& scene, const ObjectSpec& object);

// ---------------------------------------------------------------------------
// Seeded generation

enum class Split { kSeen, kUnseen, kCluttered, kCustom };

const char* to_string(Split split);
Split split_from_string(const std::string& name);

struct GeneratorConfig {
  int width = 640;
  int height = 480;
  int min_objects = 3;
  int max_objects = 6;
  /// Number of intent-satisfying objects; ambiguous mode needs at least 2.
  int min_consistent = 2;
  int max_consistent = 4;
  bool ambiguous = true;
  bool clutter_mode = false;
  /// Pairwise IoU ceiling between object boxes (0.05 off, 0.5 cluttered).
  double max_pairwise_iou = 0.05;
  /// Categories that never appear.
  std::set<std::string> holdout;
  /// When nonempty the target is drawn from these categories.
  std::set<std::string> target_categories;
  double table_z = 0.0;
  std::string id_prefix = "scene";
  const Lexicon* lexicon = &Lexicon::standard();

  static GeneratorConfig for_split(Split split);
};

/// Categories reserved for the unseen split.
const std::set<std::string>& novel_categories();

/// A generated scene together with the intention utterance it was built for.
struct Task {
  Scene scene;
  std::string intent;
  std::string utterance;
};

Task generate_task(const GeneratorConfig& config, std::uint64_t seed);
Scene generate_scene(const GeneratorConfig& config, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Point clouds

template <typename Scalar>
struct PointCloudT {
  using Points = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;
  using Pixels = Eigen::Matrix<int, 2, Eigen::Dynamic>;

  Points points;
  Pixels pixel_map;
  /// Ground-truth source per point: -1 for the table, otherwise the index of
  /// the object in the scene.
  std::vector<int> labels;

  Eigen::Index size() const { return points.cols(); }
};

using PointCloud = PointCloudT<double>;

struct RenderOptions {
  /// Pixel spacing of the sampling grid.
  int stride_px = 2;
  double metres_per_px = 0.001;
  /// Distinct heights sampled inside each object column.
  int object_levels = 16;
  std::uint64_t seed = 0;
  /// Object columns start this far above the table (capped at half the
  /// object height); the contact rim is hidden from a top-down camera.
  double base_clearance_m = 0.01;
};

/// Orthographic top-down metric position of a pixel center.
inline Eigen::Vector2d pixel_to_metric(double u, double v,
                                       double metres_per_px) {
  return {(u + 0.5) * metres_per_px, (v + 0.5) * metres_per_px};
}

/// Physical centroid of an object under the orthographic camera.
Eigen::Vector3d object_centroid(const Scene& scene, const ObjectSpec& object,
                                double metres_per_px = 0.001);

/// Table grid at table_z outside every box plus a column of points per object
/// pixel with heights in [table_z + clearance, table_z + height_m]; Gaussian jitter of
/// `noise_sigma` on every coordinate.
PointCloud render_point_cloud(const Scene& scene, double noise_sigma,
                              const RenderOptions& options = {});

/// Writes little-endian float64 records [x, y, z, u, v] after a 16-byte header
/// ("IGPC", version u32, count u64).
void save_point_cloud(const PointCloud& cloud,
                      const std::filesystem::path& path);
PointCloud load_point_cloud(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Dataset records

struct DatasetRecord {
  Scene scene;
  std::string utterance;
  std::vector<std::pair<std::string, std::string>> qa_pairs;
  std::vector<std::vector<RegionBox>> region_labels;
  RegionBox target_box;

  void validate() const;

  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

void save_dataset(const std::vector<DatasetRecord>& records,
                  const std::filesystem::path& path);
std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path);

}  // namespace intentgrasp
