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

#include "intentgrasp/agents.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "intentgrasp/errors.hpp"

namespace intentgrasp {

Answer Answer::yes() { return {"Yes.", Polarity::kYes, std::nullopt}; }

Answer Answer::no() { return {"No.", Polarity::kNo, std::nullopt}; }

Answer Answer::corrective(Descriptor correction) {
  Answer a{"No, I want the " + correction.text() + ".", Polarity::kNo, std::nullopt};
  a.correction = std::move(correction);
  return a;
}

DialogueState DialogueState::prefix(std::size_t rounds) const {
  DialogueState d{utterance, {}};
  d.qa_pairs.assign(qa_pairs.begin(),
                    qa_pairs.begin() + std::ptrdiff_t(std::min(rounds, qa_pairs.size())));
  return d;
}

void AgentParams::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kInvalidArgument, what);
  };
  check(epsilon_answer >= 0.0 && epsilon_answer < 0.5, "epsilon_answer must be in [0, 0.5)");
  check(p_corrective >= 0.0 && p_corrective <= 1.0, "p_corrective must be in [0, 1]");
  check(grounder_jitter_px >= 0.0, "grounder_jitter_px must be >= 0");
  check(distractor_rate >= 0.0, "distractor_rate must be >= 0");
  check(p_floor > 0.0 && p_floor < 1.0, "p_floor must be in (0, 1)");
  check(occlusion_jitter_gain >= 0.0, "occlusion_jitter_gain must be >= 0");
  check(localization_beta >= 0.0, "localization_beta must be >= 0");
}

AgentParams AgentParams::noiseless() {
  AgentParams p;
  p.epsilon_answer = 0.0;
  p.grounder_jitter_px = 0.0;
  p.distractor_rate = 0.0;
  return p;
}

const IntentEntry& intent_of(const std::string& utterance, const Lexicon& lexicon) {
  const IntentEntry* e = lexicon.intents.match_utterance(utterance);
  if (!e)
    throw Error(ErrorKind::kUngroundableUtterance,
                "ungroundable utterance: '" + utterance + "'");
  return *e;
}

bool object_consistent(const ObjectSpec& object, const IntentEntry& intent,
                       const DialogueState& dialogue) {
  if (!intent.satisfied_by(object)) return false;
  for (const auto& [q, a] : dialogue.qa_pairs) {
    if (a.polarity != Polarity::kNo) continue;
    if (q.descriptor.matches(object)) return false;
    if (a.correction && !a.correction->matches(object)) return false;
  }
  return true;
}

std::optional<double> consistency_score(const Scene& scene, const IntentEntry& intent,
                                        const DialogueState& dialogue,
                                        const RegionBox& region,
                                        const AgentParams& params) {
  const ObjectSpec* o = resolve_object(scene, region);
  if (!o || !object_consistent(*o, intent, dialogue)) return std::nullopt;
  return params.localization_beta * iou(region, o->box);
}

std::vector<double> region_distribution(const Scene& scene, const DialogueState& dialogue,
                                        const std::vector<RegionBox>& pool,
                                        const AgentParams& params, const Lexicon& lexicon) {
  if (pool.empty()) throw Error(ErrorKind::kNoCandidates, "empty candidate pool");
  const IntentEntry& intent = intent_of(dialogue.utterance, lexicon);

  std::vector<std::optional<double>> scores;
  scores.reserve(pool.size());
  double max_score = -INFINITY;
  for (const auto& r : pool) {
    scores.push_back(consistency_score(scene, intent, dialogue, r, params));
    if (scores.back()) max_score = std::max(max_score, *scores.back());
  }
  std::vector<double> probs(pool.size(), 0.0);
  if (!std::isfinite(max_score)) {
    std::fill(probs.begin(), probs.end(), 1.0 / double(pool.size()));
    return probs;
  }
  double consistent_total = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (scores[i]) consistent_total += std::exp(*scores[i] - max_score);
  const double floor_weight = params.p_floor / (1.0 - params.p_floor);
  double total = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    probs[i] = scores[i] ? std::exp(*scores[i] - max_score) / consistent_total : floor_weight;
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

double region_likelihood(const Scene& scene, const DialogueState& dialogue,
                         const RegionBox& region, const std::vector<RegionBox>& pool,
                         const AgentParams& params, const Lexicon& lexicon) {
  auto it = std::find(pool.begin(), pool.end(), region);
  if (pool.empty()) throw Error(ErrorKind::kNoCandidates, "empty candidate pool");
  if (it == pool.end())
    throw Error(ErrorKind::kInvalidArgument, "region is not a member of the candidate pool");
  return region_distribution(scene, dialogue, pool, params, lexicon)[std::size_t(it - pool.begin())];
}

namespace {

RegionBox perturb(const RegionBox& box, double sigma, const Scene& scene, Rng& rng) {
  if (sigma <= 0.0) return box;
  std::normal_distribution<double> n(0.0, sigma);
  double x1 = box.x1 + n(rng), y1 = box.y1 + n(rng);
  double x2 = box.x2 + n(rng), y2 = box.y2 + n(rng);
  if (x2 < x1) std::swap(x1, x2);
  if (y2 < y1) std::swap(y1, y2);
  x1 = std::clamp(x1, 0.0, double(scene.width) - 2.0);
  y1 = std::clamp(y1, 0.0, double(scene.height) - 2.0);
  x2 = std::clamp(std::max(x2, x1 + 2.0), 0.0, double(scene.width));
  y2 = std::clamp(std::max(y2, y1 + 2.0), 0.0, double(scene.height));
  return {x1, y1, x2, y2};
}

// Largest fraction of the object's box covered by a single neighbour.
double max_neighbour_cover(const Scene& scene, const ObjectSpec& object) {
  double m = 0.0;
  for (const auto& o : scene.objects) {
    if (o.id == object.id) continue;
    const double iw = std::min(o.box.x2, object.box.x2) - std::max(o.box.x1, object.box.x1);
    const double ih = std::min(o.box.y2, object.box.y2) - std::max(o.box.y1, object.box.y1);
    if (iw > 0.0 && ih > 0.0) m = std::max(m, iw * ih / object.box.area());
  }
  return m;
}

}  // namespace

std::vector<ScoredRegion> ground(const Scene& scene, const DialogueState& dialogue,
                                 const AgentParams& params, Rng& rng,
                                 const Lexicon& lexicon) {
  const IntentEntry& intent = intent_of(dialogue.utterance, lexicon);
  std::vector<RegionBox> boxes;
  for (const auto& o : scene.objects) {
    if (!object_consistent(o, intent, dialogue)) continue;
    const double sigma =
        params.grounder_jitter_px * (1.0 + params.occlusion_jitter_gain * max_neighbour_cover(scene, o));
    boxes.push_back(perturb(o.box, sigma, scene, rng));
  }
  if (params.distractor_rate > 0.0) {
    const int n = std::poisson_distribution<int>(params.distractor_rate)(rng);
    for (int k = 0; k < n; ++k) {
      const double w = uniform_real(rng, 40.0, 140.0);
      const double h = uniform_real(rng, 40.0, 140.0);
      const double x1 = uniform_real(rng, 0.0, std::max(1.0, scene.width - w));
      const double y1 = uniform_real(rng, 0.0, std::max(1.0, scene.height - h));
      boxes.push_back({x1, y1, std::min(x1 + w, double(scene.width)),
                       std::min(y1 + h, double(scene.height))});
    }
  }
  std::vector<ScoredRegion> out;
  if (boxes.empty()) return out;
  const auto probs = region_distribution(scene, dialogue, boxes, params, lexicon);
  out.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) out.push_back({boxes[i], std::log(probs[i])});
  return out;
}

Question generate_question(const Scene& scene, const DialogueState& dialogue,
                           const RegionBox& referent, const Lexicon& lexicon) {
  const ObjectSpec* o = resolve_object(scene, referent);
  if (!o)
    throw Error(ErrorKind::kUnresolvableReferent,
                "unresolvable referent: region overlaps no object");
  std::vector<ObjectSpec> rivals;
  if (const IntentEntry* intent = lexicon.intents.match_utterance(dialogue.utterance)) {
    for (const auto& other : scene.objects)
      if (other.id == o->id || intent->satisfied_by(other)) rivals.push_back(other);
  } else {
    rivals = scene.objects;
  }
  Descriptor d = minimal_descriptor(*o, rivals);
  return {"Should I get the " + d.text() + "?", referent, std::move(d)};
}

std::vector<Descriptor> correction_descriptors(const Scene& scene) {
  std::vector<Descriptor> out;
  for (const auto& o : scene.objects) {
    Descriptor d = scene_descriptor(scene, o);
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
  }
  return out;
}

std::vector<Answer> answer_renderings(const Scene& scene) {
  std::vector<Answer> out = {Answer::yes(), Answer::no()};
  for (auto& d : correction_descriptors(scene)) out.push_back(Answer::corrective(std::move(d)));
  return out;
}

namespace {

/// Correction weights over the rendering set for a hypothesized object.
std::vector<double> correction_weights(const std::vector<Descriptor>& set,
                                       const ObjectSpec* object, double eps) {
  std::vector<double> w(set.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    w[i] = (object && set[i].matches(*object)) ? 1.0 : eps;
    total += w[i];
  }
  if (total <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / double(set.size()));
  } else {
    for (double& x : w) x /= total;
  }
  return w;
}

}  // namespace

double answer_likelihood(const Scene& scene, const RegionBox& region,
                         const Question& question, const Answer& answer,
                         const AgentParams& params) {
  const double eps = params.epsilon_answer;
  const ObjectSpec* o = resolve_object(scene, region);
  const bool match = o && question.descriptor.matches(*o);
  const double p_yes = match ? 1.0 - eps : eps;
  if (answer.polarity == Polarity::kYes) return p_yes;
  const double p_no = 1.0 - p_yes;
  if (!answer.correction) return p_no * (1.0 - params.p_corrective);

  const auto set = correction_descriptors(scene);
  const auto w = correction_weights(set, o, eps);
  auto it = std::find(set.begin(), set.end(), *answer.correction);
  double share = 0.0;
  if (it != set.end()) {
    share = w[std::size_t(it - set.begin())];
  } else {
    // Corrections outside the rendering set are scored by the same rule with
    // the set's normalizer.
    double total = 0.0;
    for (const auto& d : set) total += (o && d.matches(*o)) ? 1.0 : eps;
    const double raw = (o && answer.correction->matches(*o)) ? 1.0 : eps;
    share = total > 0.0 ? raw / total : 0.0;
  }
  return p_no * params.p_corrective * share;
}

Answer simulate_answer(const Scene& scene, const RegionBox& target_box,
                       const Question& question, const AgentParams& params, Rng& rng) {
  const double eps = params.epsilon_answer;
  const ObjectSpec* o = resolve_object(scene, target_box);
  const bool match = o && question.descriptor.matches(*o);
  const double p_yes = match ? 1.0 - eps : eps;
  if (bernoulli(rng, p_yes)) return Answer::yes();
  if (!bernoulli(rng, params.p_corrective)) return Answer::no();
  const auto set = correction_descriptors(scene);
  const auto w = correction_weights(set, o, eps);
  return Answer::corrective(set[sample_weighted(rng, w)]);
}

namespace {

std::string canonical(const std::string& text) {
  std::string out;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(static_cast<char>(std::tolower(uc)));
    }
  }
  while (!out.empty() && (out.back() == ' ' || out.back() == '.' || out.back() == '!' ||
                          out.back() == '?'))
    out.pop_back();
  return out;
}

bool strip_prefix(std::string& s, const std::string& prefix) {
  if (s.rfind(prefix, 0) != 0) return false;
  s.erase(0, prefix.size());
  return true;
}

bool strip_suffix(std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size() || s.compare(s.size() - suffix.size(), suffix.size(), suffix) != 0)
    return false;
  s.erase(s.size() - suffix.size());
  return true;
}

/// Every rendering of every object's descriptor variants, keyed by text.
std::map<std::string, Descriptor> descriptor_vocabulary(const Scene& scene) {
  std::map<std::string, Descriptor> vocab;
  for (const auto& o : scene.objects) {
    const std::vector<std::vector<std::string>> variants = {
        {}, {kColor}, {kSize}, {kColor, kSize}};
    for (const auto& names : variants) {
      Descriptor d{o.category, {}};
      for (const auto& n : names)
        if (auto it = o.attributes.find(n); it != o.attributes.end()) d.attributes.emplace(n, it->second);
      vocab.emplace(canonical(d.text()), d);
    }
  }
  return vocab;
}

std::optional<Descriptor> lookup(const std::map<std::string, Descriptor>& vocab,
                                 std::string phrase) {
  strip_prefix(phrase, "the ") || strip_prefix(phrase, "a ") || strip_prefix(phrase, "an ");
  auto it = vocab.find(phrase);
  if (it == vocab.end()) return std::nullopt;
  return it->second;
}

}  // namespace

std::optional<Answer> parse_answer(const Scene& scene, const std::string& text) {
  std::string s = canonical(text);
  static const char* kYes[] = {"yes", "yeah", "yep", "yes please", "sure", "correct"};
  static const char* kNo[] = {"no", "nope", "no thanks", "no thank you"};
  for (const char* y : kYes)
    if (s == y) return Answer::yes();
  for (const char* n : kNo)
    if (s == n) return Answer::no();
  if (!strip_prefix(s, "no, ") && !strip_prefix(s, "no "))
    return std::nullopt;
  const auto vocab = descriptor_vocabulary(scene);
  std::string phrase = s;
  const bool lead = strip_prefix(phrase, "i want ") || strip_prefix(phrase, "i need ") ||
                    strip_prefix(phrase, "get ");
  if (!lead) {
    strip_suffix(phrase, " seems better for me") || strip_suffix(phrase, " is better") ||
        strip_suffix(phrase, " please");
  }
  auto d = lookup(vocab, phrase);
  if (!d) return std::nullopt;
  return Answer::corrective(*d);
}

std::optional<Question> parse_question(const Scene& scene, const std::string& text) {
  std::string s = canonical(text);
  if (!strip_prefix(s, "should i get ")) return std::nullopt;
  const auto vocab = descriptor_vocabulary(scene);
  auto d = lookup(vocab, s);
  if (!d) return std::nullopt;
  for (const auto& o : scene.objects)
    if (d->matches(o)) return Question{text, o.box, *d};
  return std::nullopt;
}

}  // namespace intentgrasp
