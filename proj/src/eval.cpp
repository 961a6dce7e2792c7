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

#include "intentgrasp/eval.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

#include "intentgrasp/errors.hpp"

namespace intentgrasp {

double accuracy_at(const std::vector<EpisodeResult>& results,
                   const std::vector<RegionBox>& targets, double tau) {
  if (results.empty()) throw Error(ErrorKind::kInvalidArgument, "accuracy over no episodes");
  if (results.size() != targets.size())
    throw Error(ErrorKind::kInvalidArgument, "episode and target counts differ");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < results.size(); ++i)
    if (results[i].final_estimate && iou(*results[i].final_estimate, targets[i]) > tau) ++hits;
  return double(hits) / double(results.size());
}

double communicative_efficiency(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw Error(ErrorKind::kInvalidArgument, "efficiency over no episodes");
  const int t = results.front().rounds;
  double total = 0.0;
  for (const auto& r : results) {
    if (r.rounds != t)
      throw Error(ErrorKind::kInvalidArgument, "episodes mix different T values");
    total += r.rounds_used;
  }
  return total / double(results.size());
}

double oracle_upper_bound(const std::vector<EpisodeResult>& results,
                          const std::vector<RegionBox>& targets, double tau) {
  if (results.empty()) throw Error(ErrorKind::kInvalidArgument, "upper bound over no episodes");
  if (results.size() != targets.size())
    throw Error(ErrorKind::kInvalidArgument, "episode and target counts differ");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& c = results[i].candidates;
    if (std::any_of(c.begin(), c.end(), [&](const RegionBox& b) { return iou(b, targets[i]) > tau; }))
      ++hits;
  }
  return double(hits) / double(results.size());
}

// ---------------------------------------------------------------------------

void BenchmarkConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::kInvalidArgument, what);
  };
  check(num_scenes >= 1, "num_scenes must be >= 1");
  check(!splits.empty(), "splits must be nonempty");
  check(!policies.empty(), "policies must be nonempty");
  check(!lambdas.empty(), "lambda grid must be nonempty");
  check(!rounds.empty(), "T grid must be nonempty");
  check(!thresholds.empty(), "thresholds must be nonempty");
  for (double l : lambdas) check(l >= 0.0 && l <= 1.0, "lambda values must be in [0, 1]");
  for (int t : rounds) check(t >= 1, "T values must be >= 1");
  for (double t : thresholds) check(t > 0.0 && t <= 1.0, "thresholds must be in (0, 1]");
  check(early_stop > 0.0 && early_stop <= 1.0, "early_stop must be in (0, 1]");
  check(cloud_stride_px >= 1, "cloud_stride_px must be >= 1");
  agent.validate();
  ransac.validate();
}

namespace {

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::kSchema, std::string("config.") + key + ": wrong type");
  }
}

}  // namespace

AgentParams agent_params_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kSchema, "agent: expected an object");
  AgentParams p;
  p.epsilon_answer = value_or(j, "epsilon_answer", p.epsilon_answer);
  p.p_corrective = value_or(j, "p_corrective", p.p_corrective);
  p.grounder_jitter_px = value_or(j, "grounder_jitter_px", p.grounder_jitter_px);
  p.distractor_rate = value_or(j, "distractor_rate", p.distractor_rate);
  p.p_floor = value_or(j, "p_floor", p.p_floor);
  p.occlusion_jitter_gain = value_or(j, "occlusion_jitter_gain", p.occlusion_jitter_gain);
  p.localization_beta = value_or(j, "localization_beta", p.localization_beta);
  p.validate();
  return p;
}

json agent_params_to_json(const AgentParams& p) {
  return {{"epsilon_answer", p.epsilon_answer},
          {"p_corrective", p.p_corrective},
          {"grounder_jitter_px", p.grounder_jitter_px},
          {"distractor_rate", p.distractor_rate},
          {"p_floor", p.p_floor},
          {"occlusion_jitter_gain", p.occlusion_jitter_gain},
          {"localization_beta", p.localization_beta}};
}

BenchmarkConfig benchmark_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kSchema, "config: expected an object");
  BenchmarkConfig c;
  c.seed = value_or<std::uint64_t>(j, "seed", c.seed);
  c.num_scenes = value_or(j, "num_scenes", c.num_scenes);
  if (j.contains("splits")) {
    c.splits.clear();
    for (const auto& s : value_or<std::vector<std::string>>(j, "splits", {}))
      c.splits.push_back(split_from_string(s));
  }
  if (j.contains("policies")) {
    c.policies.clear();
    for (const auto& s : value_or<std::vector<std::string>>(j, "policies", {}))
      c.policies.push_back(policy_from_string(s));
  }
  c.lambdas = value_or(j, "lambda", c.lambdas);
  c.rounds = value_or(j, "T", c.rounds);
  if (auto it = j.find("agent"); it != j.end()) c.agent = agent_params_from_json(*it);
  c.early_stop = value_or(j, "early_stop", c.early_stop);
  c.thresholds = value_or(j, "iou_thresholds", c.thresholds);
  c.dedup_iou = value_or(j, "dedup_iou", c.dedup_iou);
  if (j.contains("question_sampling")) {
    const auto s = value_or<std::string>(j, "question_sampling", "proportional");
    if (s == "proportional") c.sampling = QuestionSampling::kProportional;
    else if (s == "uniform") c.sampling = QuestionSampling::kUniform;
    else throw Error(ErrorKind::kSchema, "config.question_sampling: expected proportional|uniform");
  }
  c.evaluate_grasp = value_or(j, "evaluate_grasp", c.evaluate_grasp);
  c.cloud_noise = value_or(j, "cloud_noise", c.cloud_noise);
  c.cloud_stride_px = value_or(j, "cloud_stride_px", c.cloud_stride_px);
  c.grasp_success_radius = value_or(j, "grasp_success_radius", c.grasp_success_radius);
  c.threads = value_or(j, "threads", c.threads);
  if (auto it = j.find("ransac"); it != j.end()) {
    c.ransac.iterations = value_or(*it, "iterations", c.ransac.iterations);
    c.ransac.inlier_tol = value_or(*it, "inlier_tol", c.ransac.inlier_tol);
    c.ransac.min_remaining = value_or<Eigen::Index>(*it, "min_remaining", c.ransac.min_remaining);
    c.ransac.seed = value_or<std::uint64_t>(*it, "seed", c.ransac.seed);
  }
  c.validate();
  return c;
}

json benchmark_config_to_json(const BenchmarkConfig& c) {
  json splits = json::array(), policies = json::array();
  for (auto s : c.splits) splits.push_back(to_string(s));
  for (auto p : c.policies) policies.push_back(to_string(p));
  return {{"seed", c.seed},
          {"num_scenes", c.num_scenes},
          {"splits", splits},
          {"policies", policies},
          {"lambda", c.lambdas},
          {"T", c.rounds},
          {"agent", agent_params_to_json(c.agent)},
          {"early_stop", c.early_stop},
          {"iou_thresholds", c.thresholds},
          {"dedup_iou", c.dedup_iou},
          {"question_sampling",
           c.sampling == QuestionSampling::kProportional ? "proportional" : "uniform"},
          {"evaluate_grasp", c.evaluate_grasp},
          {"cloud_noise", c.cloud_noise},
          {"cloud_stride_px", c.cloud_stride_px},
          {"grasp_success_radius", c.grasp_success_radius},
          {"ransac",
           {{"iterations", c.ransac.iterations},
            {"inlier_tol", c.ransac.inlier_tol},
            {"min_remaining", c.ransac.min_remaining},
            {"seed", c.ransac.seed}}},
          {"threads", c.threads}};
}

std::vector<CellKey> benchmark_cells(const BenchmarkConfig& config) {
  std::vector<CellKey> cells;
  for (Split split : config.splits) {
    for (Policy policy : config.policies) {
      switch (policy) {
        case Policy::kSilent:
          cells.push_back({split, policy, std::nullopt, 0});
          break;
        case Policy::kPragmatic:
          for (double l : config.lambdas)
            for (int t : config.rounds) cells.push_back({split, policy, l, t});
          break;
        case Policy::kLiteral:
          for (int t : config.rounds) cells.push_back({split, policy, 0.0, t});
          break;
        case Policy::kAnswerOnly:
          for (int t : config.rounds) cells.push_back({split, policy, 1.0, t});
          break;
        case Policy::kRandom:
          for (int t : config.rounds) cells.push_back({split, policy, std::nullopt, t});
          break;
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

std::uint64_t scene_seed(const BenchmarkConfig& config, Split split, int index) {
  return mix_seed(config.seed ^ hash_name(to_string(split)), std::uint64_t(index)) % 1000000007ULL;
}

std::uint64_t episode_seed(const BenchmarkConfig& config, Split split, int index) {
  return mix_seed(scene_seed(config, split, index), 0xE915);
}

const ReportRow& ReportTable::at(Split split, Policy policy, std::optional<double> lambda,
                                 int rounds) const {
  auto it = rows.find(CellKey{split, policy, lambda, rounds});
  if (it == rows.end()) throw Error(ErrorKind::kInvalidArgument, "no such report row");
  return it->second;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string threshold_label(double t) { return "acc_" + num(t); }

}  // namespace

std::string ReportTable::to_csv() const {
  std::ostringstream os;
  os << "split,policy,lambda,T";
  for (double t : thresholds) os << ',' << threshold_label(t);
  os << ",avg_interactions,upper_bound,grasp_success,n\n";
  const double strict = *std::max_element(thresholds.begin(), thresholds.end());
  for (const auto& [key, row] : rows) {
    os << to_string(key.split) << ',' << to_string(key.policy) << ','
       << (key.lambda ? num(*key.lambda) : std::string()) << ',' << key.rounds;
    for (double t : thresholds) os << ',' << num(row.accuracy.at(t));
    os << ',' << (row.avg_interactions ? num(*row.avg_interactions) : std::string()) << ','
       << num(row.upper_bound.at(strict)) << ',' << num(row.grasp_success) << ',' << row.n
       << '\n';
  }
  return os.str();
}

json ReportTable::to_json() const {
  json rows_json = json::array();
  for (const auto& [key, row] : rows) {
    json acc = json::object(), ub = json::object();
    for (const auto& [t, v] : row.accuracy) acc[num(t)] = v;
    for (const auto& [t, v] : row.upper_bound) ub[num(t)] = v;
    rows_json.push_back({{"split", to_string(key.split)},
                         {"policy", to_string(key.policy)},
                         {"lambda", key.lambda ? json(*key.lambda) : json(nullptr)},
                         {"T", key.rounds},
                         {"accuracy", acc},
                         {"upper_bound", ub},
                         {"avg_interactions",
                          row.avg_interactions ? json(*row.avg_interactions) : json(nullptr)},
                         {"grasp_success", row.grasp_success},
                         {"n", row.n},
                         {"failures", row.failures}});
  }
  return {{"thresholds", thresholds}, {"rows", rows_json}};
}

json episode_to_json(const EpisodeResult& r) {
  json estimates = json::array(), transcript = json::array(), candidates = json::array();
  for (const auto& b : r.per_round_estimates) estimates.push_back(box_to_json(b));
  for (const auto& [q, a] : r.transcript) transcript.push_back(json::array({q, a}));
  for (const auto& b : r.candidates) candidates.push_back(box_to_json(b));
  json j = {{"scene_id", r.scene_id},
            {"policy", to_string(r.policy)},
            {"lambda", r.lambda},
            {"T", r.rounds},
            {"rounds_used", r.rounds_used},
            {"per_round_estimates", estimates},
            {"final_estimate", r.final_estimate ? box_to_json(*r.final_estimate) : json(nullptr)},
            {"final_iou", r.final_iou},
            {"transcript", transcript},
            {"candidates", candidates}};
  if (r.failed()) j["error"] = r.error;
  return j;
}

EpisodeResult episode_from_json(const json& j) {
  using detail::require;
  const std::string ctx = "episode";
  EpisodeResult r;
  try {
    r.scene_id = require(j, "scene_id", ctx).get<std::string>();
    r.policy = policy_from_string(require(j, "policy", ctx).get<std::string>());
    r.lambda = require(j, "lambda", ctx).get<double>();
    r.rounds = require(j, "T", ctx).get<int>();
    r.rounds_used = require(j, "rounds_used", ctx).get<int>();
    r.final_iou = require(j, "final_iou", ctx).get<double>();
    for (const auto& b : require(j, "per_round_estimates", ctx))
      r.per_round_estimates.push_back(box_from_json(b, ctx + ".per_round_estimates"));
    for (const auto& p : require(j, "transcript", ctx))
      r.transcript.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    if (auto it = j.find("final_estimate"); it != j.end() && !it->is_null())
      r.final_estimate = box_from_json(*it, ctx + ".final_estimate");
    if (auto it = j.find("candidates"); it != j.end())
      for (const auto& b : *it) r.candidates.push_back(box_from_json(b, ctx + ".candidates"));
    if (auto it = j.find("error"); it != j.end()) r.error = it->get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchema, ctx + ": " + e.what());
  }
  return r;
}

std::string episodes_to_jsonl(const std::vector<EpisodeEntry>& episodes) {
  std::ostringstream os;
  for (const auto& e : episodes) {
    json j = episode_to_json(e.result);
    j["split"] = to_string(e.key.split);
    j["cell_lambda"] = e.key.lambda ? json(*e.key.lambda) : json(nullptr);
    j["protocol"] = e.protocol;
    j["scene_index"] = e.scene_index;
    j["target_box"] = box_to_json(e.target);
    j["grasp_success"] = e.grasp_success ? json(*e.grasp_success) : json(nullptr);
    os << j.dump() << '\n';
  }
  return os.str();
}

namespace {

struct SceneOutcome {
  // Indexed like the split's cell list.
  std::vector<EpisodeResult> accuracy;
  std::vector<EpisodeResult> efficiency;
  std::vector<std::optional<bool>> grasp;
  RegionBox target;
};

bool grasp_succeeds(const PointCloud& cloud, const Scene& scene, const RegionBox& estimate,
                    const BenchmarkConfig& config, double metres_per_px) {
  try {
    const GraspTarget g = grasp_target(cloud, estimate, config.ransac);
    const Eigen::Vector3d truth = object_centroid(scene, scene.target(), metres_per_px);
    return (g.position - truth).norm() <= config.grasp_success_radius &&
           g.position.z() > scene.table_z;
  } catch (const Error&) {
    return false;
  }
}

SceneOutcome run_scene(const BenchmarkConfig& config, Split split, int index,
                       const std::vector<CellKey>& cells) {
  const Task task = generate_task(GeneratorConfig::for_split(split), scene_seed(config, split, index));
  const std::uint64_t seed = episode_seed(config, split, index);
  const AnswerOracle oracle = simulated_oracle(config.agent);

  SceneOutcome out;
  out.target = task.scene.target().box;

  std::optional<PointCloud> cloud;
  RenderOptions render;
  render.stride_px = config.cloud_stride_px;
  render.seed = seed;
  if (config.evaluate_grasp) cloud = render_point_cloud(task.scene, config.cloud_noise, render);
  std::vector<std::pair<RegionBox, bool>> grasp_cache;

  for (const CellKey& key : cells) {
    Hyperparams hp;
    hp.rounds = std::max(1, key.rounds);
    hp.lambda = key.policy == Policy::kPragmatic ? *key.lambda : 0.0;
    hp.dedup_iou = config.dedup_iou;
    hp.sampling = config.sampling;
    hp.agent = config.agent;

    EpisodeResult acc = run_episode(task.scene, task.utterance, key.policy, hp, oracle,
                                    std::nullopt, seed);
    EpisodeResult eff = asks_questions(key.policy)
                            ? run_episode(task.scene, task.utterance, key.policy, hp, oracle,
                                          config.early_stop, seed)
                            : acc;
    std::optional<bool> grasp;
    if (cloud) {
      if (!acc.final_estimate) {
        grasp = false;
      } else {
        auto hit = std::find_if(grasp_cache.begin(), grasp_cache.end(),
                                [&](const auto& e) { return e.first == *acc.final_estimate; });
        if (hit != grasp_cache.end()) {
          grasp = hit->second;
        } else {
          grasp = grasp_succeeds(*cloud, task.scene, *acc.final_estimate, config,
                                 render.metres_per_px);
          grasp_cache.emplace_back(*acc.final_estimate, *grasp);
        }
      }
    }
    out.accuracy.push_back(std::move(acc));
    out.efficiency.push_back(std::move(eff));
    out.grasp.push_back(grasp);
  }
  return out;
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
  config.validate();
  const auto all_cells = benchmark_cells(config);

  BenchmarkResult result;
  result.table.thresholds = config.thresholds;
  std::sort(result.table.thresholds.begin(), result.table.thresholds.end());

  for (Split split : config.splits) {
    std::vector<CellKey> cells;
    for (const auto& c : all_cells)
      if (c.split == split) cells.push_back(c);

    std::vector<SceneOutcome> outcomes(std::size_t(config.num_scenes));
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int i = next++; i < config.num_scenes; i = next++)
        outcomes[std::size_t(i)] = run_scene(config, split, i, cells);
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int n_threads =
        std::min(config.num_scenes, config.threads > 0 ? config.threads : int(hw));
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::vector<EpisodeResult> acc, eff;
      std::vector<RegionBox> targets;
      ReportRow row;
      row.key = cells[c];
      int grasp_hits = 0;
      for (std::size_t s = 0; s < outcomes.size(); ++s) {
        const auto& o = outcomes[s];
        acc.push_back(o.accuracy[c]);
        eff.push_back(o.efficiency[c]);
        targets.push_back(o.target);
        if (o.accuracy[c].failed()) ++row.failures;
        if (o.grasp[c].value_or(false)) ++grasp_hits;
        result.episodes.push_back({cells[c], "accuracy", int(s), o.accuracy[c], o.target, o.grasp[c]});
        if (asks_questions(cells[c].policy))
          result.episodes.push_back({cells[c], "efficiency", int(s), o.efficiency[c], o.target, std::nullopt});
      }
      for (double t : result.table.thresholds) {
        row.accuracy[t] = accuracy_at(acc, targets, t);
        row.upper_bound[t] = oracle_upper_bound(acc, targets, t);
      }
      if (asks_questions(cells[c].policy)) row.avg_interactions = communicative_efficiency(eff);
      row.grasp_success = config.evaluate_grasp ? double(grasp_hits) / double(acc.size()) : 0.0;
      row.n = int(acc.size());
      result.table.rows[row.key] = std::move(row);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

DatasetRecord make_scripted_record(const Task& task, const AgentParams& answerer, int max_qa,
                                   Rng& rng) {
  if (max_qa < 1) throw Error(ErrorKind::kInvalidArgument, "max_qa must be >= 1");
  const Scene& scene = task.scene;
  const IntentEntry& intent = intent_of(task.utterance);
  const ObjectSpec& target = scene.target();

  std::vector<const ObjectSpec*> others;
  for (const auto& o : scene.objects)
    if (o.id != target.id && intent.satisfied_by(o)) others.push_back(&o);
  shuffle(rng, others);

  const int n_pairs = uniform_int(rng, 1, max_qa);
  for (int attempt = 0; attempt < 64; ++attempt) {
    DialogueState dialogue{task.utterance, {}};
    DatasetRecord record;
    record.scene = scene;
    record.utterance = task.utterance;
    record.target_box = target.box;

    auto labels = [&]() {
      std::vector<RegionBox> set;
      for (const auto& o : scene.objects)
        if (object_consistent(o, intent, dialogue)) set.push_back(o.box);
      return set;
    };
    record.region_labels.push_back(labels());

    std::size_t cursor = 0;
    for (int n = 0; n < n_pairs; ++n) {
      const ObjectSpec& asked = cursor < others.size() ? *others[cursor++] : target;
      const Question q = generate_question(scene, dialogue, asked.box);
      const Answer a = simulate_answer(scene, target.box, q, answerer, rng);
      dialogue.qa_pairs.push_back({q, a});
      record.qa_pairs.emplace_back(q.text, a.text);
      record.region_labels.push_back(labels());
      if (&asked == &target) break;
    }
    const auto& last = record.region_labels.back();
    if (std::find(last.begin(), last.end(), target.box) != last.end()) return record;
  }
  throw Error(ErrorKind::kGeneration, "could not script a dialogue that keeps the target");
}

std::vector<DatasetRecord> generate_records(const GeneratorConfig& generator, int count,
                                            std::uint64_t seed, const AgentParams& answerer,
                                            int max_qa) {
  std::vector<DatasetRecord> out;
  out.reserve(std::size_t(std::max(0, count)));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = mix_seed(seed, std::uint64_t(i)) % 1000000007ULL;
    const Task task = generate_task(generator, s);
    Rng rng(mix_seed(s, 0xD1A));
    out.push_back(make_scripted_record(task, answerer, max_qa, rng));
  }
  return out;
}

DialogueState dialogue_from_record(const DatasetRecord& record) {
  DialogueState d{record.utterance, {}};
  for (std::size_t i = 0; i < record.qa_pairs.size(); ++i) {
    const auto& [qt, at] = record.qa_pairs[i];
    auto q = parse_question(record.scene, qt);
    if (!q)
      throw Error(ErrorKind::kSchema, "qa_pairs[" + std::to_string(i) + "][0]: unparseable question '" + qt + "'");
    auto a = parse_answer(record.scene, at);
    if (!a)
      throw Error(ErrorKind::kSchema, "qa_pairs[" + std::to_string(i) + "][1]: unparseable answer '" + at + "'");
    d.qa_pairs.push_back({*q, *a});
  }
  return d;
}

namespace {

GroundingAccuracy ground_records(const std::vector<DatasetRecord>& records,
                                 const AgentParams& grounder,
                                 const std::vector<double>& thresholds, std::uint64_t seed,
                                 bool with_history) {
  if (records.empty()) throw Error(ErrorKind::kInvalidArgument, "no records");
  GroundingAccuracy out;
  std::map<double, int> hits;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (with_history && rec.qa_pairs.empty())
      throw Error(ErrorKind::kInvalidArgument,
                  "records[" + std::to_string(i) + "] has no qa_pairs");
    const DialogueState dialogue =
        with_history ? dialogue_from_record(rec) : DialogueState{rec.utterance, {}};
    Rng rng(mix_seed(seed, std::uint64_t(i)));
    const auto regions = ground(rec.scene, dialogue, grounder, rng);
    std::optional<RegionBox> estimate;
    if (!regions.empty()) {
      std::vector<double> pv;
      for (const auto& r : regions) pv.push_back(std::exp(r.log_prob));
      estimate = regions[select_literal(pv)].box;
    }
    for (double t : thresholds)
      if (estimate && iou(*estimate, rec.target_box) > t) ++hits[t];
  }
  out.n = int(records.size());
  for (double t : thresholds) out.accuracy[t] = double(hits[t]) / double(out.n);
  return out;
}

}  // namespace

GroundingAccuracy run_gdh(const std::vector<DatasetRecord>& records, const AgentParams& grounder,
                          const std::vector<double>& thresholds, std::uint64_t seed) {
  return ground_records(records, grounder, thresholds, seed, true);
}

GroundingAccuracy run_utterance_only(const std::vector<DatasetRecord>& records,
                                     const AgentParams& grounder,
                                     const std::vector<double>& thresholds, std::uint64_t seed) {
  return ground_records(records, grounder, thresholds, seed, false);
}

}  // namespace intentgrasp
