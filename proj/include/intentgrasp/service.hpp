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

// Session service behind the HTTP interface. All logic lives in
// SessionStore so it can be driven in-process; http.hpp only maps routes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "intentgrasp/eval.hpp"

namespace intentgrasp {

enum class ApiCode { kNotFound, kInvalidState, kBadRequest, kEngineError };

/// not_found, invalid_state, bad_request, engine_error.
const char* to_string(ApiCode code);
int http_status(ApiCode code);

class ApiError : public std::runtime_error {
 public:
  ApiError(ApiCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ApiCode code() const { return code_; }
  json to_json() const { return {{"code", to_string(code_)}, {"message", what()}}; }

 private:
  ApiCode code_;
};

/// Maps an engine error onto the API error it surfaces as.
ApiError to_api_error(const Error& error);

struct ServiceOptions {
  /// JSON-lines append log; empty disables persistence.
  std::filesystem::path log_path;
  AgentParams agent;
  double cloud_noise = 0.001;
  int cloud_stride_px = 2;
  RansacParams ransac;
};

/// SVG of the scene: one rect of class "box" per object plus its label.
std::string render_scene_svg(const Scene& scene);

json question_to_json(const Question& question);

class SessionStore {
 public:
  /// Replays the log at options.log_path when it exists.
  explicit SessionStore(ServiceOptions options = {});
  ~SessionStore();

  SessionStore(const SessionStore&) = delete;
  SessionStore& operator=(const SessionStore&) = delete;

  /// Body: one of scene_id | scene | generator{split, seed}; utterance
  /// (defaults to the generated one); policy, lambda, T, seed (optional).
  json create_session(const json& body);
  json get_session(const std::string& id) const;
  /// Body: {polarity: "yes"|"no", correction?: descriptor} or {text}.
  json post_answer(const std::string& id, const json& body);
  /// Grasp on the current estimate; closes the session.
  json finalize(const std::string& id);

  /// Summary in the same shape run_episode produces.
  EpisodeResult episode(const std::string& id) const;

  void put_scene(const Scene& scene);
  void remove_scene(const std::string& id);
  json get_scene(const std::string& id) const;
  /// {svg, scene}
  json render_scene(const std::string& id) const;

  std::vector<std::string> session_ids() const;
  std::size_t scene_count() const;

 private:
  struct Entry {
    mutable std::mutex mutex;
    std::string id;
    Session session;
    std::uint64_t seed = 0;
    std::string error;
    bool closed = false;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  json session_view(const Entry& entry) const;
  json step_view(const Entry& entry) const;

  std::string open_session(const std::string& id, const Scene& scene,
                           const std::string& utterance, Policy policy,
                           const Hyperparams& hyper, std::uint64_t seed, bool replaying);
  void apply_answer(Entry& entry, const Answer& answer);
  void replay();
  void append(const json& record);

  ServiceOptions options_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::map<std::string, Scene> scenes_;
  std::uint64_t next_id_ = 1;
  std::mutex log_mutex_;
  std::ofstream log_;
};

}  // namespace intentgrasp
