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

#include <gtest/gtest.h>

#include "intentgrasp/eval.hpp"
#include "test_util.hpp"

namespace intentgrasp {
namespace {

EpisodeResult with_estimate(const RegionBox& box, int rounds = 3, int used = 3) {
  EpisodeResult r;
  r.rounds = rounds;
  r.rounds_used = used;
  r.final_estimate = box;
  r.candidates = {box};
  return r;
}

TEST(Metrics, Accuracy) {
  const RegionBox t{0, 0, 100, 100};
  std::vector<EpisodeResult> results;
  std::vector<RegionBox> targets;
  for (int i = 0; i < 10; ++i) {
    // 7 exact hits, 3 with IoU 0.25
    results.push_back(with_estimate(i < 7 ? t : RegionBox{0, 0, 50, 50}));
    targets.push_back(t);
  }
  EXPECT_DOUBLE_EQ(accuracy_at(results, targets, 0.5), 0.7);
  EXPECT_DOUBLE_EQ(accuracy_at(results, targets, 0.1), 1.0);
  EXPECT_DOUBLE_EQ(accuracy_at({with_estimate(t)}, {t}, 0.9), 1.0);
  EXPECT_DOUBLE_EQ(accuracy_at({with_estimate({200, 200, 300, 300})}, {t}, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(accuracy_at({EpisodeResult{}}, {t}, 0.1), 0.0);
  EXPECT_THROW(accuracy_at({}, {}, 0.5), Error);
}

TEST(Metrics, CommunicativeEfficiency) {
  const RegionBox b{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(communicative_efficiency({with_estimate(b, 3, 1), with_estimate(b, 3, 3), with_estimate(b, 3, 2)}), 2.0);
  EXPECT_DOUBLE_EQ(communicative_efficiency({with_estimate(b, 3, 1), with_estimate(b, 3, 1)}), 1.0);
  EXPECT_DOUBLE_EQ(communicative_efficiency({with_estimate(b, 3, 3)}), 3.0);
  EXPECT_THROW(communicative_efficiency({with_estimate(b, 3, 1), with_estimate(b, 2, 1)}), Error);
}

TEST(Metrics, UpperBound) {
  const RegionBox t{0, 0, 100, 100};
  auto r = with_estimate({300, 300, 400, 400});
  r.candidates.push_back(t);
  EXPECT_DOUBLE_EQ(oracle_upper_bound({r}, {t}, 0.9), 1.0);
  EXPECT_DOUBLE_EQ(accuracy_at({r}, {t}, 0.9), 0.0);
  r.candidates.clear();
  EXPECT_DOUBLE_EQ(oracle_upper_bound({r}, {t}, 0.1), 0.0);
}

TEST(Benchmark, GridProduct) {
  BenchmarkConfig c;
  c.lambdas = {0.0, 0.5, 0.9, 1.0};
  c.rounds = {1, 2, 3};
  int prograsp = 0;
  for (const auto& k : benchmark_cells(c))
    if (k.split == Split::kSeen && k.policy == Policy::kPragmatic) ++prograsp;
  EXPECT_EQ(prograsp, 12);
}

BenchmarkConfig small_config() {
  BenchmarkConfig c;
  c.num_scenes = 12;
  c.policies = {Policy::kSilent, Policy::kLiteral, Policy::kPragmatic};
  c.cloud_stride_px = 6;
  return c;
}

TEST(Benchmark, ShapeAndInvariants) {
  auto c = small_config();
  c.threads = 1;
  const auto result = run_benchmark(c);
  EXPECT_EQ(result.table.rows.size(), 9u);
  for (const auto& [key, row] : result.table.rows) {
    EXPECT_EQ(row.n, 12);
    EXPECT_GE(row.accuracy.at(0.1), row.accuracy.at(0.5));
    EXPECT_GE(row.accuracy.at(0.5), row.accuracy.at(0.9));
    for (const auto& [tau, acc] : row.accuracy) {
      EXPECT_GE(acc, 0.0);
      EXPECT_LE(acc, 1.0);
      EXPECT_GE(row.upper_bound.at(tau), acc);
    }
    if (key.policy == Policy::kSilent) {
      EXPECT_FALSE(row.avg_interactions);
    } else {
      ASSERT_TRUE(row.avg_interactions);
      EXPECT_GE(*row.avg_interactions, 1.0);
      EXPECT_LE(*row.avg_interactions, double(key.rounds));
    }
  }
  // accuracy episodes for every cell, efficiency episodes for question-asking cells
  EXPECT_EQ(result.episodes.size(), std::size_t(3 * (12 * 3 + 12 * 2)));
}

TEST(Benchmark, DeterministicAcrossThreadCounts) {
  auto c = small_config();
  c.threads = 1;
  const auto a = run_benchmark(c);
  c.threads = 4;
  const auto b = run_benchmark(c);
  EXPECT_EQ(a.table.to_csv(), b.table.to_csv());
  EXPECT_EQ(episodes_to_jsonl(a.episodes), episodes_to_jsonl(b.episodes));
}

TEST(Benchmark, CsvHeader) {
  ReportTable t;
  t.thresholds = {0.1, 0.5, 0.9};
  EXPECT_EQ(t.to_csv(), "split,policy,lambda,T,acc_0.1,acc_0.5,acc_0.9,avg_interactions,upper_bound,grasp_success,n\n");
}

TEST(Benchmark, ConfigJsonRoundTrip) {
  BenchmarkConfig c;
  c.seed = 5;
  c.lambdas = {0.0, 1.0};
  c.policies = {Policy::kRandom};
  c.agent.epsilon_answer = 0.2;
  const auto j = benchmark_config_to_json(c);
  for (const char* key : {"epsilon_answer", "p_corrective", "grounder_jitter_px", "distractor_rate", "p_floor"})
    EXPECT_TRUE(j.at("agent").contains(key)) << key;
  EXPECT_EQ(benchmark_config_to_json(benchmark_config_from_json(j)).dump(), j.dump());

  EXPECT_THROW(benchmark_config_from_json(json{{"T", json::array()}}), Error);
  EXPECT_THROW(benchmark_config_from_json(json{{"iou_thresholds", {0.0}}}), Error);
  EXPECT_THROW(benchmark_config_from_json(json{{"agent", {{"epsilon_answer", 0.7}}}}), Error);
}

TEST(Episodes, JsonRoundTrip) {
  const Task t = generate_task(GeneratorConfig{}, 3);
  Hyperparams h;
  const auto r = run_episode(t.scene, t.utterance, Policy::kPragmatic, h, simulated_oracle(h.agent), std::nullopt, 3);
  const auto j = episode_to_json(r);
  for (const char* key : {"scene_id", "policy", "lambda", "T", "rounds_used", "per_round_estimates", "final_iou", "transcript"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(episode_to_json(episode_from_json(j)).dump(), j.dump());
}

TEST(Gdh, RecordsAreValidAndKeepTarget) {
  const auto records = generate_records(GeneratorConfig{}, 50, 4, AgentParams{});
  for (const auto& r : records) {
    EXPECT_NO_THROW(r.validate());
    EXPECT_FALSE(r.qa_pairs.empty());
    EXPECT_NO_THROW(dialogue_from_record(r));
  }
}

TEST(Gdh, RejectsRecordsWithoutDialogue) {
  auto records = generate_records(GeneratorConfig{}, 2, 4, AgentParams{});
  records[1].qa_pairs.clear();
  records[1].region_labels.resize(1);
  EXPECT_THROW(run_gdh(records, AgentParams::noiseless(), {0.9}, 1), Error);
}

TEST(Gdh, UniqueDialogueGroundsExactly) {
  const auto s = testing::two_drinks("water");
  DatasetRecord r;
  r.scene = s;
  r.utterance = "I am thirsty";
  r.qa_pairs = {{"Should I get the can of coke?", "No, I want the water bottle."}};
  r.region_labels = {{s.objects[0].box, s.objects[1].box}, {s.objects[1].box}};
  r.target_box = s.objects[1].box;
  const auto acc = run_gdh({r}, AgentParams::noiseless(), {0.9}, 1);
  EXPECT_DOUBLE_EQ(acc.accuracy.at(0.9), 1.0);
}

TEST(Gdh, HistoryHelps) {
  const auto records = generate_records(GeneratorConfig{}, 80, 6, AgentParams{});
  const AgentParams grounder;
  const auto gdh = run_gdh(records, grounder, {0.5}, 1);
  const auto silent = run_utterance_only(records, grounder, {0.5}, 1);
  EXPECT_GE(gdh.accuracy.at(0.5), silent.accuracy.at(0.5));
}

}  // namespace
}  // namespace intentgrasp
