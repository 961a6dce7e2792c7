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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "intentgrasp/agents.hpp"
#include "intentgrasp/errors.hpp"
#include "test_util.hpp"

namespace intentgrasp {
namespace {

using testing::make_object;
using testing::make_scene;

Question ask(const Scene& s, const std::string& object_id, const DialogueState& d = {"I am thirsty", {}}) {
  return generate_question(s, d, s.find(object_id)->box);
}

double total_mass(const std::vector<ScoredRegion>& regions) {
  double t = 0.0;
  for (const auto& r : regions) t += std::exp(r.log_prob);
  return t;
}

TEST(Intent, UtteranceLookup) {
  EXPECT_EQ(intent_of("I am thirsty").tag, "drinkable");
  EXPECT_EQ(intent_of("  i AM   thirsty!").tag, "drinkable");
  EXPECT_EQ(intent_of("I am hungry").tag, "edible");
  try {
    intent_of("Do a barrel roll");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUngroundableUtterance);
  }
}

TEST(Ground, BothDrinksForThirst) {
  const auto s = testing::two_drinks();
  Rng rng(1);
  const auto regions = ground(s, {"I am thirsty", {}}, AgentParams::noiseless(), rng);
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_EQ(regions[0].box, s.objects[0].box);
  EXPECT_EQ(regions[1].box, s.objects[1].box);
  EXPECT_NEAR(total_mass(regions), 1.0, 1e-9);
}

TEST(Ground, NoAnswerExcludesQuestionedObject) {
  const auto s = testing::two_drinks();
  DialogueState d{"I am thirsty", {}};
  const Question q = ask(s, "coke");
  EXPECT_EQ(q.text, "Should I get the can of coke?");
  d.qa_pairs.push_back({q, Answer::no()});
  Rng rng(1);
  const auto regions = ground(s, d, AgentParams::noiseless(), rng);
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_EQ(regions[0].box, s.objects[1].box);
}

TEST(Ground, CorrectionRestrictsToCorrectedObject) {
  const auto s = testing::two_drinks();
  DialogueState d{"I am thirsty", {}};
  d.qa_pairs.push_back({ask(s, "coke"), Answer::corrective(scene_descriptor(s, s.objects[1]))});
  Rng rng(1);
  const auto regions = ground(s, d, AgentParams::noiseless(), rng);
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_EQ(regions[0].box, s.objects[1].box);
}

TEST(Ground, NoiselessSingletonHasProbabilityOne) {
  const auto s = make_scene({make_object("m", "mug", "red", "medium", {10, 10, 100, 100}),
                             make_object("p", "pen", "blue", "small", {300, 300, 360, 360})},
                            "m");
  Rng rng(3);
  const auto regions = ground(s, {"I want something to drink", {}}, AgentParams::noiseless(), rng);
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_EQ(regions[0].box, s.objects[0].box);
  EXPECT_DOUBLE_EQ(std::exp(regions[0].log_prob), 1.0);
}

TEST(Ground, NoisyRegionsAreFiniteAndNormalized) {
  const auto s = testing::two_drinks();
  AgentParams p;
  p.distractor_rate = 3.0;
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const auto regions = ground(s, {"I am thirsty", {}}, p, rng);
    for (const auto& r : regions) {
      EXPECT_TRUE(std::isfinite(r.log_prob));
      EXPECT_TRUE(r.box.valid());
      EXPECT_TRUE(r.box.within(s.width, s.height));
    }
    if (!regions.empty()) EXPECT_NEAR(total_mass(regions), 1.0, 1e-9);
  }
}

TEST(RegionLikelihood, Examples) {
  const auto s = testing::two_drinks();
  const DialogueState d{"I am thirsty", {}};
  const AgentParams p;
  const RegionBox coke = s.objects[0].box, water = s.objects[1].box, pen = s.objects[2].box;

  EXPECT_DOUBLE_EQ(region_likelihood(s, d, coke, {coke}, p), 1.0);
  EXPECT_NEAR(region_likelihood(s, d, coke, {coke, water}, p), 0.5, 1e-12);
  EXPECT_NEAR(region_likelihood(s, d, water, {coke, water}, p), 0.5, 1e-12);

  // the pen does not afford drinking
  const auto pv = region_distribution(s, d, {coke, pen}, p);
  EXPECT_NEAR(pv[0], 0.99, 1e-12);
  EXPECT_NEAR(pv[1], 0.01, 1e-12);

  EXPECT_THROW(region_distribution(s, d, {}, p), Error);
}

TEST(RegionLikelihood, SumsToOneOverRandomPools) {
  const auto s = testing::two_drinks();
  const DialogueState d{"I am thirsty", {}};
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    std::vector<RegionBox> pool;
    const int n = uniform_int(rng, 1, 8);
    for (int k = 0; k < n; ++k) {
      const double x = uniform_real(rng, 0, 500), y = uniform_real(rng, 0, 350);
      pool.push_back({x, y, x + uniform_real(rng, 20, 140), y + uniform_real(rng, 20, 130)});
    }
    const auto pv = region_distribution(s, d, pool, AgentParams{});
    EXPECT_NEAR(std::accumulate(pv.begin(), pv.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(Question, OnlyBanana) {
  const auto s = make_scene({make_object("b", "banana", "yellow", "medium", {50, 50, 150, 150}),
                             make_object("c", "bag of chips", "red", "medium", {300, 50, 400, 150})},
                            "b");
  const Question q = generate_question(s, {"I am hungry", {}}, s.objects[0].box);
  EXPECT_EQ(q.text, "Should I get the banana?");
  EXPECT_EQ(q.referent_box, s.objects[0].box);
}

TEST(Question, CandlesDifferingInColor) {
  const auto s = make_scene({make_object("w", "candle", "white", "medium", {50, 50, 150, 150}),
                             make_object("p", "candle", "pink", "medium", {300, 50, 400, 150})},
                            "p");
  const Question q = generate_question(s, {"It is too dark in here", {}}, {302, 51, 399, 148});
  EXPECT_EQ(q.text, "Should I get the pink candle?");
  EXPECT_TRUE(q.descriptor.matches(s.objects[1]));
  EXPECT_FALSE(q.descriptor.matches(s.objects[0]));
}

TEST(Question, EmptyTableIsUnresolvable) {
  const auto s = testing::two_drinks();
  try {
    generate_question(s, {"I am thirsty", {}}, {560, 400, 620, 460});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnresolvableReferent);
  }
}

TEST(AnswerModel, Examples) {
  const auto s = testing::two_drinks();
  const Question q = ask(s, "coke");
  AgentParams p;
  p.epsilon_answer = 0.1;
  EXPECT_NEAR(answer_likelihood(s, s.objects[0].box, q, Answer::yes(), p), 0.9, 1e-12);
  p.epsilon_answer = 0.0;
  EXPECT_EQ(answer_likelihood(s, s.objects[1].box, q, Answer::yes(), p), 0.0);
}

TEST(AnswerModel, KiwiCorrection) {
  const auto s = make_scene({make_object("k", "kiwi", "brown", "small", {50, 50, 120, 120}),
                             make_object("s", "strawberry", "red", "small", {300, 50, 370, 120})},
                            "k");
  const Question q = generate_question(s, {"I am hungry", {}}, s.objects[1].box);
  EXPECT_EQ(q.text, "Should I get the strawberry?");
  const auto a = parse_answer(s, "No, the kiwi seems better for me");
  ASSERT_TRUE(a);
  ASSERT_TRUE(a->correction);
  EXPECT_EQ(a->correction->category, "kiwi");

  AgentParams p;
  p.epsilon_answer = 0.0;
  p.p_corrective = 1.0;
  EXPECT_DOUBLE_EQ(answer_likelihood(s, s.objects[0].box, q, *a, p), 1.0);

  // with a mixed no-branch, the kiwi still takes all corrective mass
  p.p_corrective = 0.5;
  double corrective = 0.0;
  for (const auto& r : answer_renderings(s))
    if (r.correction) corrective += answer_likelihood(s, s.objects[0].box, q, r, p);
  EXPECT_DOUBLE_EQ(answer_likelihood(s, s.objects[0].box, q, *a, p) / corrective, 1.0);
}

TEST(AnswerModel, SumsToOneOverRenderings) {
  Rng rng(8);
  for (int i = 0; i < 300; ++i) {
    const Task t = generate_task(GeneratorConfig{}, std::uint64_t(i));
    const auto& objs = t.scene.objects;
    const auto& referent = objs[uniform_index(rng, objs.size())];
    RegionBox region = objs[uniform_index(rng, objs.size())].box;
    if (bernoulli(rng, 0.2)) region = {0, 0, 10, 10};
    const Question q = generate_question(t.scene, {t.utterance, {}}, referent.box);
    AgentParams p;
    p.epsilon_answer = uniform_real(rng, 0.0, 0.49);
    p.p_corrective = uniform_real(rng, 0.0, 1.0);
    double total = 0.0;
    for (const auto& a : answer_renderings(t.scene)) total += answer_likelihood(t.scene, region, q, a, p);
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(SimulateAnswer, NoiselessCases) {
  const auto s = testing::two_drinks("water");
  AgentParams p = AgentParams::noiseless();
  Rng rng(2);
  EXPECT_EQ(simulate_answer(s, s.target().box, ask(s, "water"), p, rng).polarity, Polarity::kYes);
  p.p_corrective = 1.0;
  const Answer a = simulate_answer(s, s.target().box, ask(s, "coke"), p, rng);
  EXPECT_EQ(a.polarity, Polarity::kNo);
  ASSERT_TRUE(a.correction);
  EXPECT_EQ(a.text, "No, I want the " + scene_descriptor(s, s.target()).text() + ".");
}

TEST(SimulateAnswer, YesRateMatchesEpsilon) {
  const auto s = testing::two_drinks();
  AgentParams p;
  p.epsilon_answer = 0.2;
  Rng rng(17);
  const Question q = ask(s, "coke");
  int yes = 0;
  for (int i = 0; i < 10000; ++i) yes += simulate_answer(s, s.target().box, q, p, rng).polarity == Polarity::kYes;
  EXPECT_NEAR(yes / 10000.0, 0.8, 0.02);
}

TEST(Parse, RenderingsRoundTrip) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Task t = generate_task(GeneratorConfig::for_split(Split::kCluttered), seed);
    for (const auto& a : answer_renderings(t.scene)) {
      const auto back = parse_answer(t.scene, a.text);
      ASSERT_TRUE(back) << a.text;
      EXPECT_EQ(*back, a);
    }
    for (const auto& o : t.scene.objects) {
      const Question q = generate_question(t.scene, {t.utterance, {}}, o.box);
      const auto back = parse_question(t.scene, q.text);
      ASSERT_TRUE(back) << q.text;
      EXPECT_EQ(back->descriptor, q.descriptor);
    }
  }
  const auto s = testing::two_drinks();
  EXPECT_FALSE(parse_answer(s, "maybe later"));
  EXPECT_FALSE(parse_answer(s, "No, I want the unicorn."));
  EXPECT_FALSE(parse_question(s, "Where is the can of coke?"));
}

}  // namespace
}  // namespace intentgrasp
