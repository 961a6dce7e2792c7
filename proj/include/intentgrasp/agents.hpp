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

// Tabular stand-ins for the three probabilistic agents of the grounding loop:
//
//   grounder          P_V(r | I, D)      ground(), region_likelihood()
//   question asker    P_Q(q | I, D, r)   generate_question()
//   answer model      P_A(a | I, r, q)   answer_likelihood(), simulate_answer()
//
// Every distribution is explicit and normalizable, so pragmatic rescoring can
// be evaluated exactly.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "intentgrasp/random.hpp"
#include "intentgrasp/world.hpp"

namespace intentgrasp {

struct Question {
  std::string text;
  RegionBox referent_box;
  Descriptor descriptor;

  friend bool operator==(const Question&, const Question&) = default;
};

enum class Polarity { kYes, kNo };

struct Answer {
  std::string text;
  Polarity polarity = Polarity::kYes;
  /// Only present on "no" answers.
  std::optional<Descriptor> correction;

  static Answer yes();
  static Answer no();
  static Answer corrective(Descriptor correction);

  friend bool operator==(const Answer&, const Answer&) = default;
};

struct QaPair {
  Question question;
  Answer answer;

  friend bool operator==(const QaPair&, const QaPair&) = default;
};

struct DialogueState {
  std::string utterance;
  std::vector<QaPair> qa_pairs;

  /// Prefix holding the first `rounds` QA pairs.
  DialogueState prefix(std::size_t rounds) const;
};

struct ScoredRegion {
  RegionBox box;
  double log_prob = 0.0;
};

struct AgentParams {
  /// Probability that the answerer flips yes/no.
  double epsilon_answer = 0.1;
  /// Probability that a "no" carries a correction.
  double p_corrective = 0.5;
  /// Standard deviation of box-edge localization noise, in pixels.
  double grounder_jitter_px = 2.0;
  /// Expected spurious detections per grounding call (Poisson).
  double distractor_rate = 0.3;
  /// Mass assigned to each inconsistent region relative to the consistent set.
  double p_floor = 0.01;
  /// Jitter grows by (1 + gain * largest fraction of the box covered by a
  /// neighbouring object).
  double occlusion_jitter_gain = 3.0;
  /// Consistency score of a region is beta * IoU(region, its object).
  double localization_beta = 5.0;

  void validate() const;

  static AgentParams noiseless();
};

/// Intent entry for an utterance; throws kUngroundableUtterance.
const IntentEntry& intent_of(const std::string& utterance,
                             const Lexicon& lexicon = Lexicon::standard());

/// True when `object` satisfies the intent and no QA pair rules it out: a
/// "no" excludes objects matching the questioned descriptor and a correction
/// keeps only objects matching the corrected descriptor.
bool object_consistent(const ObjectSpec& object, const IntentEntry& intent,
                       const DialogueState& dialogue);

/// Consistency score of a region, or nullopt when the region is inconsistent
/// (no object, wrong affordance, or excluded by the dialogue).
std::optional<double> consistency_score(const Scene& scene,
                                        const IntentEntry& intent,
                                        const DialogueState& dialogue,
                                        const RegionBox& region,
                                        const AgentParams& params);

/// P_V over `pool`: consistent regions split the main mass by softmax of
/// their consistency scores, each inconsistent region weighs
/// p_floor / (1 - p_floor); the result is normalized. A pool with no
/// consistent region is uniform.
std::vector<double> region_distribution(const Scene& scene,
                                        const DialogueState& dialogue,
                                        const std::vector<RegionBox>& pool,
                                        const AgentParams& params,
                                        const Lexicon& lexicon = Lexicon::standard());

double region_likelihood(const Scene& scene, const DialogueState& dialogue,
                         const RegionBox& region,
                         const std::vector<RegionBox>& pool,
                         const AgentParams& params,
                         const Lexicon& lexicon = Lexicon::standard());

/// One jittered region per consistent object plus Poisson distractors, scored
/// by region_distribution over the returned set.
std::vector<ScoredRegion> ground(const Scene& scene,
                                 const DialogueState& dialogue,
                                 const AgentParams& params, Rng& rng,
                                 const Lexicon& lexicon = Lexicon::standard());

/// "Should I get the {descriptor}?" with the minimal descriptor separating
/// the referent's object from the other intent-satisfying objects.
Question generate_question(const Scene& scene, const DialogueState& dialogue,
                           const RegionBox& referent,
                           const Lexicon& lexicon = Lexicon::standard());

/// Descriptors a corrective answer may name: the minimal descriptor of every
/// object in the scene, in object order.
std::vector<Descriptor> correction_descriptors(const Scene& scene);

/// The finite set of answer renderings for a scene.
std::vector<Answer> answer_renderings(const Scene& scene);

/// P_A(answer | region, question). Reads no dialogue history.
double answer_likelihood(const Scene& scene, const RegionBox& region,
                         const Question& question, const Answer& answer,
                         const AgentParams& params);

/// Draws from answer_likelihood with region = target_box.
Answer simulate_answer(const Scene& scene, const RegionBox& target_box,
                       const Question& question, const AgentParams& params,
                       Rng& rng);

/// Closed-form text parsers. They match against enumerated renderings of the
/// scene's descriptors and return nullopt for anything else.
std::optional<Answer> parse_answer(const Scene& scene, const std::string& text);
std::optional<Question> parse_question(const Scene& scene,
                                       const std::string& text);

}  // namespace intentgrasp
