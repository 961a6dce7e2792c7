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

// intentgrasp command line: gen-data, bench, sweep, replay, serve.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "intentgrasp/eval.hpp"
#include "intentgrasp/http.hpp"
#include "intentgrasp/service.hpp"

namespace ig = intentgrasp;

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v;
    if (!(is >> v) || !is.eof()) throw ig::Error(ig::ErrorKind::kInvalidArgument, "bad list item '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ig::Error(ig::ErrorKind::kInvalidArgument, "empty list '" + text + "'");
  return out;
}

ig::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ig::Error(ig::ErrorKind::kInvalidArgument, "cannot read " + path);
  try {
    return ig::json::parse(in);
  } catch (const ig::json::parse_error& e) {
    throw ig::Error(ig::ErrorKind::kSchema, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ig::Error(ig::ErrorKind::kInvalidArgument, "cannot write " + path);
  out << content;
  if (!out) throw ig::Error(ig::ErrorKind::kInvalidArgument, "write failed: " + path);
}

struct GridFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string lambdas;
  std::string rounds;
  std::string policies;
  std::string splits;
  std::optional<int> scenes;
  std::optional<int> threads;

  ig::BenchmarkConfig resolve() const {
    ig::BenchmarkConfig c =
        config.empty() ? ig::BenchmarkConfig{} : ig::benchmark_config_from_json(read_json_file(config));
    if (seed) c.seed = *seed;
    if (!lambdas.empty()) c.lambdas = parse_list<double>(lambdas);
    if (!rounds.empty()) c.rounds = parse_list<int>(rounds);
    if (!policies.empty()) {
      c.policies.clear();
      for (const auto& p : parse_list<std::string>(policies)) c.policies.push_back(ig::policy_from_string(p));
    }
    if (!splits.empty()) {
      c.splits.clear();
      for (const auto& s : parse_list<std::string>(splits)) c.splits.push_back(ig::split_from_string(s));
    }
    if (scenes) c.num_scenes = *scenes;
    if (threads) c.threads = *threads;
    c.validate();
    return c;
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config, "benchmark config JSON");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--lambda", lambdas, "comma-separated lambda grid");
    cmd->add_option("--rounds", rounds, "comma-separated T grid");
    cmd->add_option("--policy", policies, "comma-separated policies");
    cmd->add_option("--split", splits, "comma-separated splits");
    cmd->add_option("--scenes", scenes, "scenes per split");
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  }
};

std::string box_text(const ig::RegionBox& b) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << '[' << b.x1 << ", " << b.y1 << ", " << b.x2 << ", "
     << b.y2 << ']';
  return os.str();
}

std::string transcript_text(const ig::EpisodeResult& r) {
  std::ostringstream os;
  os << "scene " << r.scene_id << "  policy " << ig::to_string(r.policy) << "  lambda " << r.lambda
     << "  T " << r.rounds << '\n';
  for (std::size_t i = 0; i < r.transcript.size(); ++i) {
    os << "Q" << i + 1 << ": " << r.transcript[i].first << '\n';
    os << "A" << i + 1 << ": " << r.transcript[i].second << '\n';
    if (i < r.per_round_estimates.size())
      os << "   estimate " << box_text(r.per_round_estimates[i]) << '\n';
  }
  os << "final " << (r.final_estimate ? box_text(*r.final_estimate) : std::string("none"))
     << "  IoU " << std::fixed << std::setprecision(4) << r.final_iou << "  rounds used "
     << r.rounds_used << '\n';
  if (r.failed()) os << "error: " << r.error << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive intent grounding benchmark and session service"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "write scripted dialogue records");
  std::string gen_out = "dataset.json", gen_split = "seen";
  std::uint64_t gen_seed = 2024;
  int gen_count = 200, gen_max_qa = 3;
  std::string gen_config;
  gen->add_option("--out", gen_out, "output dataset JSON");
  gen->add_option("--seed", gen_seed, "seed");
  gen->add_option("--count", gen_count, "number of records");
  gen->add_option("--split", gen_split, "seen | unseen | cluttered");
  gen->add_option("--max-qa", gen_max_qa, "maximum QA pairs per record");
  gen->add_option("--config", gen_config, "JSON with an 'agent' block for the simulated answerer");

  // bench
  auto* bench = app.add_subcommand("bench", "run the benchmark grid");
  GridFlags bench_flags;
  bench_flags.add_to(bench);
  std::string bench_out = "report.csv", bench_json, bench_episodes;
  bench->add_option("--out", bench_out, "report CSV");
  bench->add_option("--json", bench_json, "report JSON");
  bench->add_option("--episodes", bench_episodes, "raw episodes JSON-lines");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "lambda x T grid for prograsp");
  GridFlags sweep_flags;
  sweep_flags.add_to(sweep);
  std::string sweep_out = "sweep.json";
  sweep->add_option("--out", sweep_out, "sweep JSON");

  // replay
  auto* replay = app.add_subcommand("replay", "print an episode transcript or record one");
  std::string replay_episode, replay_out, replay_split = "seen", replay_policy = "prograsp";
  std::uint64_t replay_seed = 0;
  double replay_lambda = 0.9;
  int replay_rounds = 3, replay_index = 0;
  replay->add_option("--episode", replay_episode, "episode JSON (or JSON-lines) to print");
  replay->add_option("--index", replay_index, "line of a JSON-lines episode file");
  replay->add_option("--out", replay_out, "write the episode JSON here");
  replay->add_option("--split", replay_split, "split for a fresh episode");
  replay->add_option("--seed", replay_seed, "scene and episode seed for a fresh episode");
  replay->add_option("--policy", replay_policy, "policy for a fresh episode");
  replay->add_option("--lambda", replay_lambda, "lambda for a fresh episode");
  replay->add_option("--rounds", replay_rounds, "T for a fresh episode");

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP session service");
  std::string serve_host = "127.0.0.1", serve_log, serve_config;
  int serve_port = 8080;
  serve->add_option("--port", serve_port, "port");
  serve->add_option("--host", serve_host, "bind address");
  serve->add_option("--log", serve_log, "session JSON-lines log (replayed on start)");
  serve->add_option("--config", serve_config, "JSON with an 'agent' block");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      ig::AgentParams answerer;
      if (!gen_config.empty()) {
        const auto j = read_json_file(gen_config);
        if (j.contains("agent")) answerer = ig::agent_params_from_json(j.at("agent"));
      }
      const auto records = ig::generate_records(
          ig::GeneratorConfig::for_split(ig::split_from_string(gen_split)), gen_count, gen_seed,
          answerer, gen_max_qa);
      ig::save_dataset(records, gen_out);
      std::cout << "wrote " << records.size() << " records to " << gen_out << '\n';
    } else if (*bench) {
      const auto config = bench_flags.resolve();
      const auto result = ig::run_benchmark(config);
      write_file(bench_out, result.table.to_csv());
      if (!bench_json.empty()) {
        ig::json j = result.table.to_json();
        j["config"] = ig::benchmark_config_to_json(config);
        write_file(bench_json, j.dump(2) + "\n");
      }
      if (!bench_episodes.empty()) write_file(bench_episodes, ig::episodes_to_jsonl(result.episodes));
      std::cout << result.table.to_csv();
    } else if (*sweep) {
      auto config = sweep_flags.resolve();
      if (sweep_flags.policies.empty()) config.policies = {ig::Policy::kPragmatic};
      if (sweep_flags.splits.empty()) config.splits = {ig::Split::kSeen};
      const auto result = ig::run_benchmark(config);
      ig::json cells = ig::json::array();
      for (const auto& [key, row] : result.table.rows) {
        if (key.policy != ig::Policy::kPragmatic) continue;
        ig::json acc = ig::json::object();
        for (const auto& [t, v] : row.accuracy) {
          std::ostringstream k;
          k << t;
          acc[k.str()] = v;
        }
        cells.push_back({{"split", ig::to_string(key.split)},
                         {"lambda", *key.lambda},
                         {"T", key.rounds},
                         {"accuracy", acc},
                         {"avg_interactions", *row.avg_interactions},
                         {"n", row.n}});
      }
      ig::json out = {{"config", ig::benchmark_config_to_json(config)}, {"cells", cells}};
      write_file(sweep_out, out.dump(2) + "\n");
      std::cout << "wrote " << cells.size() << " cells to " << sweep_out << '\n';
    } else if (*replay) {
      ig::EpisodeResult episode;
      if (!replay_episode.empty()) {
        std::ifstream in(replay_episode);
        if (!in) throw ig::Error(ig::ErrorKind::kInvalidArgument, "cannot read " + replay_episode);
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        ig::json j;
        try {
          j = ig::json::parse(text);
        } catch (const ig::json::parse_error&) {
          std::istringstream lines(text);
          std::string line;
          for (int i = 0; std::getline(lines, line); ++i)
            if (i == replay_index) j = ig::json::parse(line);
          if (j.is_null()) throw ig::Error(ig::ErrorKind::kInvalidArgument, "no episode at index " + std::to_string(replay_index));
        }
        episode = ig::episode_from_json(j);
      } else {
        const auto task = ig::generate_task(
            ig::GeneratorConfig::for_split(ig::split_from_string(replay_split)), replay_seed);
        ig::Hyperparams hp;
        hp.lambda = replay_lambda;
        hp.rounds = replay_rounds;
        episode = ig::run_episode(task.scene, task.utterance, ig::policy_from_string(replay_policy),
                                  hp, ig::simulated_oracle(hp.agent), std::nullopt, replay_seed);
      }
      if (!replay_out.empty()) write_file(replay_out, ig::episode_to_json(episode).dump(2) + "\n");
      std::cout << transcript_text(episode);
    } else if (*serve) {
      ig::ServiceOptions options;
      options.log_path = serve_log;
      if (!serve_config.empty()) {
        const auto j = read_json_file(serve_config);
        if (j.contains("agent")) options.agent = ig::agent_params_from_json(j.at("agent"));
      }
      ig::SessionStore store(options);
      std::cout << "listening on " << serve_host << ':' << serve_port << std::endl;
      if (!ig::serve(store, serve_host, serve_port))
        throw ig::Error(ig::ErrorKind::kInvalidArgument, "cannot listen on port " + std::to_string(serve_port));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
