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

#include <algorithm>
#include <cctype>
#include <set>

#include "intentgrasp/errors.hpp"
#include "intentgrasp/world.hpp"

namespace intentgrasp {
namespace {

std::string normalize(const std::string& text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (c == '.' || c == '!' || c == '?') continue;
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

Lexicon build_standard() {
  Lexicon lex;
  auto add = [&](std::string name, std::vector<std::string> affordances,
                 std::vector<std::string> colors, double height) {
    lex.categories.push_back(
        {std::move(name), std::move(affordances), std::move(colors), height});
  };
  // drinkable
  add("can of coke", {"drinkable"}, {"red", "silver"}, 0.12);
  add("water bottle", {"drinkable"}, {"blue", "clear", "green"}, 0.15);
  add("milk carton", {"drinkable"}, {"white", "blue"}, 0.14);
  add("juice box", {"drinkable"}, {"orange", "yellow", "green"}, 0.10);
  add("mug", {"drinkable"}, {"white", "red", "black", "blue"}, 0.09);
  // edible
  add("banana", {"edible"}, {"yellow", "green"}, 0.04);
  add("apple", {"edible"}, {"red", "green"}, 0.07);
  add("kiwi", {"edible"}, {"brown", "green"}, 0.05);
  add("strawberry", {"edible"}, {"red"}, 0.03);
  add("bag of chips", {"edible"}, {"yellow", "red", "blue"}, 0.06);
  add("chocolate bar", {"edible"}, {"brown", "purple"}, 0.03);
  add("orange", {"edible"}, {"orange"}, 0.07);
  // lighting
  add("candle", {"lighting"}, {"pink", "white", "red", "purple"}, 0.11);
  add("flashlight", {"lighting"}, {"black", "silver", "yellow"}, 0.05);
  add("lamp", {"lighting"}, {"white", "black"}, 0.15);
  // writing
  add("pen", {"writing"}, {"blue", "black", "red"}, 0.03);
  add("pencil", {"writing"}, {"yellow", "green"}, 0.03);
  add("marker", {"writing"}, {"black", "red", "green", "blue"}, 0.03);
  // cleaning
  add("sponge", {"cleaning"}, {"yellow", "green", "pink"}, 0.04);
  add("towel", {"cleaning"}, {"white", "blue", "pink"}, 0.05);
  add("tissue box", {"cleaning"}, {"white", "blue", "green"}, 0.10);
  // cutting
  add("scissors", {"cutting"}, {"red", "black", "blue"}, 0.03);
  add("knife", {"cutting"}, {"silver", "black"}, 0.03);
  // fastening
  add("stapler", {"fastening"}, {"black", "red", "blue"}, 0.06);
  add("tape", {"fastening"}, {"clear", "brown"}, 0.05);
  add("glue stick", {"fastening"}, {"white", "purple"}, 0.08);
  // grooming
  add("comb", {"grooming"}, {"black", "pink", "brown"}, 0.03);
  add("hairbrush", {"grooming"}, {"black", "pink", "purple"}, 0.05);
  // playing
  add("ball", {"playing"}, {"red", "blue", "yellow", "green"}, 0.08);
  add("toy car", {"playing"}, {"red", "blue", "yellow"}, 0.05);

  lex.intents.entries = {
      {"drinkable", {"I am thirsty", "I want something to drink"}, "drinkable"},
      {"edible", {"I am hungry", "I want a snack"}, "edible"},
      {"lighting", {"It is too dark in here", "I need some light"}, "lighting"},
      {"writing", {"I need to write something down", "I want to take notes"},
       "writing"},
      {"cleaning", {"I spilled something on the table", "I need to clean up"},
       "cleaning"},
      {"cutting", {"I need to cut this paper", "I want to open this package"},
       "cutting"},
      {"fastening", {"I need to hold these papers together",
                     "I want to fix this torn page"},
       "fastening"},
      {"grooming", {"My hair is messy", "I want to fix my hair"}, "grooming"},
      {"playing", {"I am bored", "I want to play"}, "playing"},
  };
  lex.validate();
  return lex;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kSchema: return "schema violation";
    case ErrorKind::kUngroundableUtterance: return "ungroundable utterance";
    case ErrorKind::kUnresolvableReferent: return "unresolvable referent";
    case ErrorKind::kNoCandidates: return "no candidates";
    case ErrorKind::kInvalidState: return "invalid state";
    case ErrorKind::kDegenerateGeometry: return "degenerate geometry";
    case ErrorKind::kEmptyRegion: return "empty region";
    case ErrorKind::kObjectNotFound: return "object not found above plane";
    case ErrorKind::kGeneration: return "generation failure";
  }
  return "unknown";
}

const IntentEntry* IntentLexicon::find(const std::string& tag) const {
  for (const auto& e : entries)
    if (e.tag == tag) return &e;
  return nullptr;
}

const IntentEntry* IntentLexicon::match_utterance(
    const std::string& utterance) const {
  const std::string key = normalize(utterance);
  if (key.empty()) return nullptr;
  for (const auto& e : entries)
    for (const auto& t : e.templates)
      if (normalize(t) == key) return &e;
  return nullptr;
}

const CategoryEntry* Lexicon::find_category(const std::string& name) const {
  for (const auto& c : categories)
    if (c.name == name) return &c;
  return nullptr;
}

void Lexicon::validate() const {
  if (categories.empty())
    throw Error(ErrorKind::kGeneration, "lexicon has no categories");
  std::set<std::string> affordances;
  for (const auto& intent : intents.entries) affordances.insert(intent.affordance);
  for (const auto& intent : intents.entries) {
    if (intent.templates.empty())
      throw Error(ErrorKind::kSchema, "intent '" + intent.tag + "' has no templates");
    for (const auto& t : intent.templates)
      if (t.empty())
        throw Error(ErrorKind::kSchema, "intent '" + intent.tag + "' has an empty template");
  }
  for (const auto& c : categories) {
    if (c.affordances.empty())
      throw Error(ErrorKind::kSchema, "category '" + c.name + "' has no affordances");
    if (c.colors.empty())
      throw Error(ErrorKind::kSchema, "category '" + c.name + "' has no colors");
    for (const auto& a : c.affordances)
      if (!affordances.count(a))
        throw Error(ErrorKind::kSchema,
                    "affordance '" + a + "' of '" + c.name + "' has no intent entry");
  }
}

const Lexicon& Lexicon::standard() {
  static const Lexicon lexicon = build_standard();
  return lexicon;
}

const std::set<std::string>& novel_categories() {
  static const std::set<std::string> novel = {
      "kiwi",   "juice box", "flashlight", "marker",
      "towel",  "knife",     "glue stick", "hairbrush", "toy car"};
  return novel;
}

}  // namespace intentgrasp
