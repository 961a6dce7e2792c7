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

#include "intentgrasp/dialogue.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "intentgrasp/errors.hpp"

namespace intentgrasp {

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::kPragmatic: return "prograsp";
    case Policy::kLiteral: return "literal";
    case Policy::kAnswerOnly: return "aint_only";
    case Policy::kSilent: return "silent";
    case Policy::kRandom: return "random";
  }
  return "prograsp";
}

Policy policy_from_string(const std::string& name) {
  if (name == "prograsp") return Policy::kPragmatic;
  if (name == "literal") return Policy::kLiteral;
  if (name == "aint_only") return Policy::kAnswerOnly;
  if (name == "silent") return Policy::kSilent;
  if (name == "random") return Policy::kRandom;
  throw Error(ErrorKind::kInvalidArgument, "unknown policy '" + name + "'");
}

bool asks_questions(Policy policy) { return policy != Policy::kSilent; }

void Hyperparams::validate() const {
  if (rounds < 1) throw Error(ErrorKind::kInvalidArgument, "T (rounds) must be >= 1");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error(ErrorKind::kInvalidArgument, "lambda must be in [0, 1]");
  if (!(dedup_iou > 0.0 && dedup_iou <= 1.0))
    throw Error(ErrorKind::kInvalidArgument, "dedup_iou must be in (0, 1]");
  agent.validate();
}

bool CandidateSet::add(const RegionBox& box, int round) {
  for (const auto& e : entries_)
    if (iou(e.box, box) >= dedup_iou_) return false;
  entries_.push_back({box, round});
  return true;
}

std::vector<RegionBox> CandidateSet::boxes() const {
  std::vector<RegionBox> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.box);
  return out;
}

namespace {

bool same_score(double a, double b) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool same_prob(double a, double b) {
  return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

double weighted_log_sum(double p_vision, double p_answer, double lambda) {
  if (lambda <= 0.0) return std::log(p_vision);
  if (lambda >= 1.0) return std::log(p_answer);
  return lambda * std::log(p_answer) + (1.0 - lambda) * std::log(p_vision);
}

}  // namespace

std::size_t select_pragmatic(const std::vector<double>& p_vision,
                             const std::vector<double>& p_answer, double lambda) {
  if (p_vision.empty() || p_vision.size() != p_answer.size())
    throw Error(ErrorKind::kNoCandidates, "pragmatic selection over an empty candidate set");
  std::size_t best = 0;
  double best_score = weighted_log_sum(p_vision[0], p_answer[0], lambda);
  for (std::size_t i = 1; i < p_vision.size(); ++i) {
    const double s = weighted_log_sum(p_vision[i], p_answer[i], lambda);
    if (same_score(s, best_score)) {
      if (p_vision[i] > p_vision[best] && !same_prob(p_vision[i], p_vision[best])) {
        best = i;
        best_score = s;
      }
    } else if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

std::size_t select_literal(const std::vector<double>& p_vision) {
  if (p_vision.empty()) throw Error(ErrorKind::kNoCandidates, "empty candidate set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < p_vision.size(); ++i)
    if (p_vision[i] > p_vision[best] && !same_prob(p_vision[i], p_vision[best])) best = i;
  return best;
}

std::size_t select_answer_only(const std::vector<double>& p_vision,
                               const std::vector<double>& p_answer) {
  if (p_answer.empty() || p_vision.size() != p_answer.size())
    throw Error(ErrorKind::kNoCandidates, "empty candidate set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < p_answer.size(); ++i) {
    const double a = std::log(p_answer[i]);
    const double b = std::log(p_answer[best]);
    if (same_score(a, b)) {
      if (p_vision[i] > p_vision[best] && !same_prob(p_vision[i], p_vision[best])) best = i;
    } else if (a > b) {
      best = i;
    }
  }
  return best;
}

std::vector<CandidateScore> score_candidates(const std::vector<RegionBox>& candidates,
                                             const Scene& scene,
                                             const DialogueState& dialogue,
                                             const QaPair& last_qa, double lambda,
                                             const AgentParams& params) {
  const auto pv = region_distribution(scene, dialogue, candidates, params);
  std::vector<CandidateScore> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[i].p_vision = pv[i];
    out[i].p_answer =
        answer_likelihood(scene, candidates[i], last_qa.question, last_qa.answer, params);
    out[i].score = weighted_log_sum(out[i].p_vision, out[i].p_answer, lambda);
  }
  return out;
}

RegionBox pragmatic_select(const CandidateSet& candidates, const Scene& scene,
                           const DialogueState& dialogue, const QaPair& last_qa,
                           double lambda, const AgentParams& params) {
  if (candidates.empty())
    throw Error(ErrorKind::kNoCandidates, "pragmatic selection over an empty candidate set");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error(ErrorKind::kInvalidArgument, "lambda must be in [0, 1]");
  const auto boxes = candidates.boxes();
  const auto scores = score_candidates(boxes, scene, dialogue, last_qa, lambda, params);
  std::vector<double> pv, pa;
  for (const auto& s : scores) {
    pv.push_back(s.p_vision);
    pa.push_back(s.p_answer);
  }
  return boxes[select_pragmatic(pv, pa, lambda)];
}

bool Session::finished() const {
  if (!asks_questions(policy)) return true;
  return round >= hyper.rounds;
}

Session begin_session(const Scene& scene, const std::string& utterance,
                      const Hyperparams& hyper, Policy policy, std::uint64_t seed) {
  hyper.validate();
  intent_of(utterance);
  Session s{scene, DialogueState{utterance, {}}, CandidateSet(hyper.dedup_iou), hyper, policy,
            0,     std::nullopt,                 {},                            std::nullopt,
            {},    Rng(seed)};
  if (policy == Policy::kSilent) {
    const auto grounded = ground(s.scene, s.dialogue, hyper.agent, s.rng);
    for (const auto& r : grounded) s.candidates.add(r.box, 0);
    if (s.candidates.empty())
      throw Error(ErrorKind::kNoCandidates, "no candidates: the grounder returned no regions");
    const auto boxes = s.candidates.boxes();
    const auto pv = region_distribution(s.scene, s.dialogue, boxes, hyper.agent);
    s.estimate = boxes[select_literal(pv)];
  }
  return s;
}

Question next_question(Session& s) {
  if (!asks_questions(s.policy))
    throw Error(ErrorKind::kInvalidState, "the silent policy does not ask questions");
  if (s.pending) throw Error(ErrorKind::kInvalidState, "a question is already pending");
  if (s.round >= s.hyper.rounds)
    throw Error(ErrorKind::kInvalidState, "all rounds have been used");

  for (const auto& r : ground(s.scene, s.dialogue, s.hyper.agent, s.rng))
    s.candidates.add(r.box, s.round);
  if (s.candidates.empty())
    throw Error(ErrorKind::kNoCandidates, "no candidates after grounding");

  const auto boxes = s.candidates.boxes();
  const auto pv = region_distribution(s.scene, s.dialogue, boxes, s.hyper.agent);

  // Only regions that resolve to an object can be asked about.
  std::vector<const ObjectSpec*> objects(boxes.size());
  bool any_resolvable = false, any_fresh = false;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    objects[i] = resolve_object(s.scene, boxes[i]);
    if (!objects[i]) continue;
    any_resolvable = true;
    if (!s.asked_objects.count(objects[i]->id)) any_fresh = true;
  }
  if (!any_resolvable)
    throw Error(ErrorKind::kNoCandidates, "no candidates overlap an object");

  std::vector<double> weights(boxes.size(), 0.0);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!objects[i]) continue;
    if (any_fresh && s.asked_objects.count(objects[i]->id)) continue;
    weights[i] = s.hyper.sampling == QuestionSampling::kProportional ? pv[i] : 1.0;
  }
  const std::size_t pick = sample_weighted(s.rng, weights);
  Question q = generate_question(s.scene, s.dialogue, boxes[pick]);
  s.asked_objects.insert(objects[pick]->id);
  s.pending = q;
  return q;
}

RegionBox receive_answer(Session& s, const Answer& answer) {
  if (!s.pending)
    throw Error(ErrorKind::kInvalidState, "answer received with no pending question");
  if (answer.correction && answer.polarity != Polarity::kNo)
    throw Error(ErrorKind::kInvalidArgument, "corrections are only valid on 'no' answers");

  QaPair qa{*s.pending, answer};
  s.dialogue.qa_pairs.push_back(qa);
  s.pending.reset();
  ++s.round;

  const auto boxes = s.candidates.boxes();
  std::size_t pick = 0;
  if (s.policy == Policy::kRandom) {
    pick = uniform_index(s.rng, boxes.size());
  } else {
    const double lambda = s.policy == Policy::kPragmatic ? s.hyper.lambda : 0.0;
    const auto scores =
        score_candidates(boxes, s.scene, s.dialogue, qa, lambda, s.hyper.agent);
    std::vector<double> pv, pa;
    for (const auto& c : scores) {
      pv.push_back(c.p_vision);
      pa.push_back(c.p_answer);
    }
    switch (s.policy) {
      case Policy::kPragmatic: pick = select_pragmatic(pv, pa, s.hyper.lambda); break;
      case Policy::kLiteral: pick = select_literal(pv); break;
      case Policy::kAnswerOnly: pick = select_answer_only(pv, pa); break;
      default: break;
    }
  }
  s.estimate = boxes[pick];
  s.per_round_estimates.push_back(boxes[pick]);
  return boxes[pick];
}

AnswerOracle simulated_oracle(const AgentParams& params) {
  return [params](const Scene& scene, const Question& q, Rng& rng) {
    return simulate_answer(scene, scene.target().box, q, params, rng);
  };
}

AnswerOracle scripted_oracle(std::vector<Answer> answers) {
  auto next = std::make_shared<std::size_t>(0);
  return [answers = std::move(answers), next](const Scene&, const Question&, Rng&) {
    if (*next >= answers.size())
      throw Error(ErrorKind::kInvalidState, "scripted answers exhausted");
    return answers[(*next)++];
  };
}

EpisodeResult episode_from_session(const Session& s) {
  EpisodeResult r;
  r.scene_id = s.scene.id;
  r.policy = s.policy;
  r.lambda = s.policy == Policy::kPragmatic  ? s.hyper.lambda
             : s.policy == Policy::kAnswerOnly ? 1.0
                                               : 0.0;
  r.rounds = asks_questions(s.policy) ? s.hyper.rounds : 0;
  r.rounds_used = s.round;
  r.per_round_estimates = s.per_round_estimates;
  r.final_estimate = s.estimate;
  if (s.estimate) r.final_iou = iou(*s.estimate, s.scene.target().box);
  for (const auto& qa : s.dialogue.qa_pairs)
    r.transcript.emplace_back(qa.question.text, qa.answer.text);
  r.candidates = s.candidates.boxes();
  return r;
}

EpisodeResult run_episode(const Scene& scene, const std::string& utterance, Policy policy,
                          const Hyperparams& hyper, const AnswerOracle& oracle,
                          std::optional<double> early_stop, std::uint64_t seed) {
  Rng answer_rng(mix_seed(seed, 0xA5));
  std::optional<Session> session;
  try {
    session = begin_session(scene, utterance, hyper, policy, seed);
    const RegionBox target = scene.target().box;
    while (!session->finished()) {
      const Question q = next_question(*session);
      const Answer a = oracle(scene, q, answer_rng);
      const RegionBox est = receive_answer(*session, a);
      if (early_stop && iou(est, target) > *early_stop) break;
    }
    return episode_from_session(*session);
  } catch (const Error& e) {
    EpisodeResult r;
    if (session) r = episode_from_session(*session);
    r.scene_id = scene.id;
    r.policy = policy;
    r.rounds = asks_questions(policy) ? hyper.rounds : 0;
    r.final_iou = 0.0;
    r.error = e.what();
    return r;
  }
}

}  // namespace intentgrasp
