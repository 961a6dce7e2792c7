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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "intentgrasp/dialogue.hpp"
#include "intentgrasp/grasp.hpp"
#include "intentgrasp/json_io.hpp"

namespace intentgrasp {

// ---------------------------------------------------------------------------
// Metrics

/// Fraction of episodes whose final estimate has IoU > tau with its target.
/// Episodes without an estimate count as misses.
double accuracy_at(const std::vector<EpisodeResult>& results,
                   const std::vector<RegionBox>& targets, double tau);

/// Mean rounds used by early-stopped episodes sharing one T.
double communicative_efficiency(const std::vector<EpisodeResult>& results);

/// Fraction of episodes whose candidate set holds a region with IoU > tau.
double oracle_upper_bound(const std::vector<EpisodeResult>& results,
                          const std::vector<RegionBox>& targets, double tau);

// ---------------------------------------------------------------------------
// Benchmark

struct BenchmarkConfig {
  std::uint64_t seed = 2024;
  int num_scenes = 200;
  std::vector<Split> splits = {Split::kSeen, Split::kUnseen, Split::kCluttered};
  std::vector<Policy> policies = {Policy::kSilent, Policy::kLiteral,
                                  Policy::kAnswerOnly, Policy::kPragmatic,
                                  Policy::kRandom};
  std::vector<double> lambdas = {0.9};
  std::vector<int> rounds = {3};
  AgentParams agent;
  double early_stop = 0.5;
  std::vector<double> thresholds = {0.1, 0.5, 0.9};
  double dedup_iou = 0.9;
  QuestionSampling sampling = QuestionSampling::kProportional;
  // grasp proxy
  bool evaluate_grasp = true;
  double cloud_noise = 0.001;
  int cloud_stride_px = 4;
  double grasp_success_radius = 0.02;
  RansacParams ransac;
  /// 0 uses the hardware concurrency.
  int threads = 0;

  void validate() const;
};

BenchmarkConfig benchmark_config_from_json(const json& j);
json benchmark_config_to_json(const BenchmarkConfig& config);

AgentParams agent_params_from_json(const json& j);
json agent_params_to_json(const AgentParams& params);

struct CellKey {
  Split split = Split::kSeen;
  Policy policy = Policy::kPragmatic;
  /// Unset for policies where lambda has no role (silent, random).
  std::optional<double> lambda;
  /// 0 for the silent policy.
  int rounds = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

struct ReportRow {
  CellKey key;
  std::map<double, double> accuracy;
  std::map<double, double> upper_bound;
  /// Unset for the silent policy, which never interacts.
  std::optional<double> avg_interactions;
  double grasp_success = 0.0;
  int n = 0;
  int failures = 0;
};

struct ReportTable {
  std::vector<double> thresholds;
  std::map<CellKey, ReportRow> rows;

  const ReportRow& at(Split split, Policy policy, std::optional<double> lambda,
                      int rounds) const;
  std::string to_csv() const;
  json to_json() const;
};

struct EpisodeEntry {
  CellKey key;
  /// "accuracy" (all rounds) or "efficiency" (early stop).
  std::string protocol;
  int scene_index = 0;
  EpisodeResult result;
  RegionBox target;
  std::optional<bool> grasp_success;
};

struct BenchmarkResult {
  ReportTable table;
  std::vector<EpisodeEntry> episodes;
};

/// Cells of the grid: every lambda x T for prograsp, every T for the other
/// question-asking policies, and a single cell for silent.
std::vector<CellKey> benchmark_cells(const BenchmarkConfig& config);

/// Seed of the scene generator and of the episode for one scene slot; shared
/// by every cell so policies are compared on paired randomness.
std::uint64_t scene_seed(const BenchmarkConfig& config, Split split, int index);
std::uint64_t episode_seed(const BenchmarkConfig& config, Split split, int index);

BenchmarkResult run_benchmark(const BenchmarkConfig& config);

json episode_to_json(const EpisodeResult& result);
EpisodeResult episode_from_json(const json& j);
std::string episodes_to_jsonl(const std::vector<EpisodeEntry>& episodes);

// ---------------------------------------------------------------------------
// Grounding from a scripted dialogue history

/// Scripted dialogue over a generated task: a questioner asks about the
/// other intent-satisfying objects (then the target) and a simulated human
/// answers. region_labels hold the true boxes of the objects still
/// consistent after each prefix; draws that would exclude the target are
/// resampled.
DatasetRecord make_scripted_record(const Task& task, const AgentParams& answerer,
                                   int max_qa, Rng& rng);

std::vector<DatasetRecord> generate_records(const GeneratorConfig& generator, int count,
                                            std::uint64_t seed, const AgentParams& answerer,
                                            int max_qa = 3);

/// Structured dialogue recovered from a record's text.
DialogueState dialogue_from_record(const DatasetRecord& record);

struct GroundingAccuracy {
  std::map<double, double> accuracy;
  int n = 0;
};

/// One-shot grounding over the full scripted dialogue; argmax P_V.
GroundingAccuracy run_gdh(const std::vector<DatasetRecord>& records,
                          const AgentParams& grounder,
                          const std::vector<double>& thresholds, std::uint64_t seed);

/// The same grounder given only the utterance.
GroundingAccuracy run_utterance_only(const std::vector<DatasetRecord>& records,
                                     const AgentParams& grounder,
                                     const std::vector<double>& thresholds,
                                     std::uint64_t seed);

}  // namespace intentgrasp
