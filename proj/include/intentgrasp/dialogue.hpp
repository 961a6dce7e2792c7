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

// Interactive grounding loop. Each round the grounder's regions are merged
// into an accumulated candidate set, one candidate is asked about, and after
// the answer every candidate is rescored by
//
//   lambda * log P_A(answer | r, question) + (1 - lambda) * log P_V(r | dialogue)
//
// with P_V normalized over the accumulated set.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "intentgrasp/agents.hpp"

namespace intentgrasp {

enum class Policy { kPragmatic, kLiteral, kAnswerOnly, kSilent, kRandom };

/// Wire names: prograsp, literal, aint_only, silent, random.
const char* to_string(Policy policy);
Policy policy_from_string(const std::string& name);
bool asks_questions(Policy policy);

enum class QuestionSampling { kProportional, kUniform };

struct Hyperparams {
  int rounds = 3;
  double lambda = 0.9;
  double dedup_iou = 0.9;
  QuestionSampling sampling = QuestionSampling::kProportional;
  AgentParams agent;

  void validate() const;
};

/// Accumulated region candidates in insertion order. A region whose IoU with
/// a stored one reaches dedup_iou is merged into the earlier entry.
class CandidateSet {
 public:
  struct Entry {
    RegionBox box;
    int round = 0;
  };

  explicit CandidateSet(double dedup_iou = 0.9) : dedup_iou_(dedup_iou) {}

  /// Returns true when the region was stored as a new entry.
  bool add(const RegionBox& box, int round);

  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<RegionBox> boxes() const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double dedup_iou() const { return dedup_iou_; }

 private:
  std::vector<Entry> entries_;
  double dedup_iou_;
};

struct CandidateScore {
  double p_vision = 0.0;
  double p_answer = 0.0;
  double score = 0.0;
};

/// Weighted log-sum per candidate. At lambda = 0 the answer factor is dropped
/// and at lambda = 1 the vision factor is dropped, so zero probabilities on
/// the unused side never poison the score.
std::vector<CandidateScore> score_candidates(const std::vector<RegionBox>& candidates,
                                             const Scene& scene,
                                             const DialogueState& dialogue,
                                             const QaPair& last_qa, double lambda,
                                             const AgentParams& params);

/// Argmax of the weighted log-sum over precomputed factors. Ties go to the
/// higher P_V, then to the earliest candidate.
std::size_t select_pragmatic(const std::vector<double>& p_vision,
                             const std::vector<double>& p_answer, double lambda);

/// Argmax of P_V alone; ties go to the earliest candidate.
std::size_t select_literal(const std::vector<double>& p_vision);

/// Argmax of P_A alone; ties go to the higher P_V, then the earliest.
std::size_t select_answer_only(const std::vector<double>& p_vision,
                               const std::vector<double>& p_answer);

RegionBox pragmatic_select(const CandidateSet& candidates, const Scene& scene,
                           const DialogueState& dialogue, const QaPair& last_qa,
                           double lambda, const AgentParams& params);

struct Session {
  Scene scene;
  DialogueState dialogue;
  CandidateSet candidates;
  Hyperparams hyper;
  Policy policy = Policy::kPragmatic;
  int round = 0;
  std::optional<RegionBox> estimate;
  std::vector<RegionBox> per_round_estimates;
  std::optional<Question> pending;
  /// Objects already asked about; their regions are skipped when sampling.
  std::set<std::string> asked_objects;
  Rng rng;

  bool finished() const;
};

Session begin_session(const Scene& scene, const std::string& utterance,
                      const Hyperparams& hyper, Policy policy, std::uint64_t seed);

Question next_question(Session& session);

RegionBox receive_answer(Session& session, const Answer& answer);

struct EpisodeResult {
  std::string scene_id;
  Policy policy = Policy::kPragmatic;
  double lambda = 0.0;
  int rounds = 0;
  int rounds_used = 0;
  std::vector<RegionBox> per_round_estimates;
  std::optional<RegionBox> final_estimate;
  double final_iou = 0.0;
  std::vector<std::pair<std::string, std::string>> transcript;
  /// Accumulated candidates at the end of the episode.
  std::vector<RegionBox> candidates;
  std::string error;

  bool failed() const { return !error.empty(); }
};

using AnswerOracle =
    std::function<Answer(const Scene&, const Question&, Rng&)>;

/// Simulated human answering about the scene's ground-truth target.
AnswerOracle simulated_oracle(const AgentParams& params);

/// Replays `answers` in order; throws kInvalidState when they run out.
AnswerOracle scripted_oracle(std::vector<Answer> answers);

/// Runs up to `hyper.rounds` question/answer rounds. With `early_stop`, the
/// episode ends after the first round whose estimate has IoU above the
/// threshold with the target. Engine errors are captured in `error` with a
/// final IoU of 0. The oracle draws from its own stream derived from `seed`.
EpisodeResult run_episode(const Scene& scene, const std::string& utterance,
                          Policy policy, const Hyperparams& hyper,
                          const AnswerOracle& oracle,
                          std::optional<double> early_stop, std::uint64_t seed);

/// Episode summary for a session in its current state.
EpisodeResult episode_from_session(const Session& session);

}  // namespace intentgrasp
