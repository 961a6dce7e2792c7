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

#include "intentgrasp/service.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace intentgrasp {

const char* to_string(ApiCode code) {
  switch (code) {
    case ApiCode::kNotFound: return "not_found";
    case ApiCode::kInvalidState: return "invalid_state";
    case ApiCode::kBadRequest: return "bad_request";
    case ApiCode::kEngineError: return "engine_error";
  }
  return "engine_error";
}

int http_status(ApiCode code) {
  switch (code) {
    case ApiCode::kNotFound: return 404;
    case ApiCode::kInvalidState: return 409;
    case ApiCode::kBadRequest: return 400;
    case ApiCode::kEngineError: return 500;
  }
  return 500;
}

ApiError to_api_error(const Error& error) {
  switch (error.kind()) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kSchema:
      return {ApiCode::kBadRequest, error.what()};
    case ErrorKind::kInvalidState:
      return {ApiCode::kInvalidState, error.what()};
    default:
      return {ApiCode::kEngineError, error.what()};
  }
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string css_color(const std::string& name) {
  static const std::map<std::string, std::string> kColors = {
      {"black", "#222222"}, {"blue", "#2f6fd6"},  {"brown", "#8b5a2b"},
      {"clear", "#a9d8e8"}, {"green", "#3a9d4a"}, {"orange", "#f08c1a"},
      {"pink", "#f29bc1"},  {"purple", "#8e5cc7"}, {"red", "#d63b3b"},
      {"silver", "#b8b8b8"}, {"white", "#f2f2f2"}, {"yellow", "#e8cf2e"}};
  auto it = kColors.find(name);
  return it == kColors.end() ? "#888888" : it->second;
}

std::string fixed2(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

ApiError bad_request(const std::string& message) { return {ApiCode::kBadRequest, message}; }

template <typename T>
T field_or(const json& body, const char* key, T fallback) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw bad_request(std::string(key) + ": wrong type");
  }
}

}  // namespace

std::string render_scene_svg(const Scene& scene) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << scene.width << "\" height=\""
     << scene.height << "\" viewBox=\"0 0 " << scene.width << ' ' << scene.height << "\">\n";
  os << "<rect class=\"table\" x=\"0\" y=\"0\" width=\"" << scene.width << "\" height=\""
     << scene.height << "\" fill=\"#efe9dc\"/>\n";
  for (const auto& o : scene.objects) {
    const std::string color = css_color(o.attribute(kColor));
    os << "<g class=\"object\" data-id=\"" << xml_escape(o.id) << "\" data-category=\""
       << xml_escape(o.category) << "\">"
       << "<rect class=\"box\" x=\"" << fixed2(o.box.x1) << "\" y=\"" << fixed2(o.box.y1)
       << "\" width=\"" << fixed2(o.box.width()) << "\" height=\"" << fixed2(o.box.height())
       << "\" fill=\"" << color << "\" fill-opacity=\"0.35\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>"
       << "<text x=\"" << fixed2(o.box.x1 + 3) << "\" y=\"" << fixed2(o.box.y1 + 14)
       << "\" font-size=\"12\">" << xml_escape(scene_descriptor(scene, o).text())
       << "</text></g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

json question_to_json(const Question& q) {
  return {{"text", q.text},
          {"referent_box", box_to_json(q.referent_box)},
          {"descriptor", descriptor_to_json(q.descriptor)}};
}

// ---------------------------------------------------------------------------

SessionStore::SessionStore(ServiceOptions options) : options_(std::move(options)) {
  options_.agent.validate();
  options_.ransac.validate();
  if (options_.log_path.empty()) return;
  replay();
  log_.open(options_.log_path, std::ios::app);
  if (!log_) throw Error(ErrorKind::kInvalidArgument, "cannot open session log " + options_.log_path.string());
}

SessionStore::~SessionStore() = default;

void SessionStore::append(const json& record) {
  if (options_.log_path.empty()) return;
  std::lock_guard lock(log_mutex_);
  log_ << record.dump() << '\n';
  log_.flush();
  if (!log_) throw ApiError(ApiCode::kEngineError, "session log write failed");
}

void SessionStore::replay() {
  std::ifstream in(options_.log_path);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error&) {
      if (in.peek() == std::char_traits<char>::eof()) break;  // torn final record
      throw Error(ErrorKind::kSchema, "session log line " + std::to_string(line_no) + ": malformed");
    }
    const std::string op = rec.at("op").get<std::string>();
    if (op == "scene") {
      Scene s = scene_from_json(rec.at("scene"));
      scenes_[s.id] = std::move(s);
    } else if (op == "remove_scene") {
      scenes_.erase(rec.at("id").get<std::string>());
    } else if (op == "create") {
      Hyperparams hp;
      hp.rounds = rec.at("T").get<int>();
      hp.lambda = rec.at("lambda").get<double>();
      hp.dedup_iou = rec.at("dedup_iou").get<double>();
      hp.agent = agent_params_from_json(rec.at("agent"));
      open_session(rec.at("id").get<std::string>(), scene_from_json(rec.at("scene")),
                   rec.at("utterance").get<std::string>(),
                   policy_from_string(rec.at("policy").get<std::string>()), hp,
                   rec.at("seed").get<std::uint64_t>(), true);
    } else if (op == "answer") {
      auto entry = find(rec.at("id").get<std::string>());
      const json& a = rec.at("answer");
      Answer ans = a.at("polarity") == "yes" ? Answer::yes() : Answer::no();
      if (a.contains("correction")) ans = Answer::corrective(descriptor_from_json(a.at("correction"), "correction"));
      apply_answer(*entry, ans);
    } else if (op == "finalize") {
      sessions_.erase(rec.at("id").get<std::string>());
    } else {
      throw Error(ErrorKind::kSchema, "session log line " + std::to_string(line_no) + ": unknown op '" + op + "'");
    }
  }
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError(ApiCode::kNotFound, "no session '" + id + "'");
  return it->second;
}

std::string SessionStore::open_session(const std::string& id, const Scene& scene,
                                       const std::string& utterance, Policy policy,
                                       const Hyperparams& hyper, std::uint64_t seed,
                                       bool replaying) {
  auto entry = std::make_shared<Entry>();
  entry->session = begin_session(scene, utterance, hyper, policy, seed);
  entry->seed = seed;
  if (asks_questions(policy)) {
    try {
      next_question(entry->session);
    } catch (const Error& e) {
      entry->error = e.what();
    }
  }

  std::unique_lock lock(mutex_);
  std::string sid = id;
  if (sid.empty()) sid = "s" + std::to_string(next_id_);
  if (sessions_.count(sid)) throw ApiError(ApiCode::kBadRequest, "session id '" + sid + "' in use");
  if (sid.size() > 1 && sid[0] == 's') {
    try {
      next_id_ = std::max<std::uint64_t>(next_id_, std::stoull(sid.substr(1)) + 1);
    } catch (const std::exception&) {
    }
  }
  entry->id = sid;
  if (!replaying) {
    append({{"op", "create"},
            {"id", sid},
            {"scene", scene_to_json(scene)},
            {"utterance", utterance},
            {"policy", to_string(policy)},
            {"lambda", hyper.lambda},
            {"T", hyper.rounds},
            {"dedup_iou", hyper.dedup_iou},
            {"agent", agent_params_to_json(hyper.agent)},
            {"seed", seed}});
  }
  sessions_[sid] = std::move(entry);
  return sid;
}

json SessionStore::create_session(const json& body) {
  if (!body.is_object()) throw bad_request("request body must be a JSON object");
  try {
    Scene scene;
    std::string utterance = field_or<std::string>(body, "utterance", "");
    if (body.contains("scene_id")) {
      const auto sid = field_or<std::string>(body, "scene_id", "");
      std::shared_lock lock(mutex_);
      auto it = scenes_.find(sid);
      if (it == scenes_.end()) throw ApiError(ApiCode::kNotFound, "no scene '" + sid + "'");
      scene = it->second;
    } else if (body.contains("scene")) {
      scene = scene_from_json(body.at("scene"));
      scene.validate(&Lexicon::standard());
      put_scene(scene);
    } else if (body.contains("generator")) {
      const json& g = body.at("generator");
      if (!g.is_object()) throw bad_request("generator: expected an object");
      const Split split = split_from_string(field_or<std::string>(g, "split", "seen"));
      const Task task = generate_task(GeneratorConfig::for_split(split),
                                      field_or<std::uint64_t>(g, "seed", 0));
      scene = task.scene;
      if (utterance.empty()) utterance = task.utterance;
      put_scene(scene);
    } else {
      throw bad_request("one of scene_id, scene or generator is required");
    }
    if (utterance.empty()) throw bad_request("utterance is required");

    const Policy policy = policy_from_string(field_or<std::string>(body, "policy", "prograsp"));
    Hyperparams hp;
    hp.agent = options_.agent;
    hp.lambda = field_or(body, "lambda", hp.lambda);
    hp.rounds = field_or(body, "T", hp.rounds);
    std::uint64_t seed;
    {
      std::shared_lock lock(mutex_);
      seed = mix_seed(0x5E55, next_id_);
    }
    seed = field_or(body, "seed", seed);

    const std::string id = open_session("", scene, utterance, policy, hp, seed, false);
    auto entry = find(id);
    std::lock_guard lock(entry->mutex);
    return step_view(*entry);
  } catch (const Error& e) {
    throw to_api_error(e);
  }
}

void SessionStore::apply_answer(Entry& entry, const Answer& answer) {
  Session& s = entry.session;
  receive_answer(s, answer);
  if (!s.finished()) {
    try {
      next_question(s);
    } catch (const Error& e) {
      entry.error = e.what();
    }
  }
}

json SessionStore::post_answer(const std::string& id, const json& body) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  if (entry->closed) throw ApiError(ApiCode::kNotFound, "session '" + id + "' is closed");
  Session& s = entry->session;
  if (!s.pending) throw ApiError(ApiCode::kInvalidState, "no question is pending");
  if (!body.is_object()) throw bad_request("request body must be a JSON object");

  Answer answer;
  try {
    if (body.contains("text")) {
      const auto text = field_or<std::string>(body, "text", "");
      auto parsed = parse_answer(s.scene, text);
      if (!parsed) throw bad_request("unparseable answer '" + text + "'");
      answer = *parsed;
    } else if (body.contains("polarity")) {
      const auto pol = field_or<std::string>(body, "polarity", "");
      if (pol == "yes") {
        if (body.contains("correction") && !body.at("correction").is_null())
          throw bad_request("a correction requires polarity 'no'");
        answer = Answer::yes();
      } else if (pol == "no") {
        answer = Answer::no();
        if (auto it = body.find("correction"); it != body.end() && !it->is_null()) {
          const Descriptor d = descriptor_from_json(*it, "correction");
          if (std::none_of(s.scene.objects.begin(), s.scene.objects.end(),
                           [&](const ObjectSpec& o) { return d.matches(o); }))
            throw bad_request("correction matches no object in the scene");
          answer = Answer::corrective(d);
        }
      } else {
        throw bad_request("polarity must be 'yes' or 'no'");
      }
    } else {
      throw bad_request("answer needs 'text' or 'polarity'");
    }

    apply_answer(*entry, answer);
  } catch (const Error& e) {
    throw to_api_error(e);
  }

  json rec_answer = {{"polarity", answer.polarity == Polarity::kYes ? "yes" : "no"}};
  if (answer.correction) rec_answer["correction"] = descriptor_to_json(*answer.correction);
  append({{"op", "answer"}, {"id", id}, {"answer", rec_answer}});
  return step_view(*entry);
}

json SessionStore::finalize(const std::string& id) {
  auto entry = find(id);
  json out;
  {
    std::lock_guard lock(entry->mutex);
    if (entry->closed) throw ApiError(ApiCode::kNotFound, "session '" + id + "' is closed");
    const Session& s = entry->session;
    if (!s.estimate) throw ApiError(ApiCode::kInvalidState, "the session has no estimate yet");

    RenderOptions render;
    render.stride_px = options_.cloud_stride_px;
    render.seed = entry->seed;
    GraspTarget g;
    try {
      const PointCloud cloud = render_point_cloud(s.scene, options_.cloud_noise, render);
      g = grasp_target(cloud, *s.estimate, options_.ransac);
    } catch (const Error& e) {
      throw ApiError(ApiCode::kEngineError, e.what());
    }
    out = {{"session_id", id},
           {"estimate", box_to_json(*s.estimate)},
           {"grasp",
            {{"x", g.position.x()},
             {"y", g.position.y()},
             {"z", g.position.z()},
             {"points_used", g.points_used}}},
           {"episode", episode_to_json(episode_from_session(s))}};
    append({{"op", "finalize"}, {"id", id}});
    entry->closed = true;
  }
  std::unique_lock lock(mutex_);
  sessions_.erase(id);
  return out;
}

EpisodeResult SessionStore::episode(const std::string& id) const {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  EpisodeResult r = episode_from_session(entry->session);
  if (!entry->error.empty()) {
    r.final_iou = 0.0;
    r.error = entry->error;
  }
  return r;
}

json SessionStore::step_view(const Entry& e) const {
  const Session& s = e.session;
  json j = {{"session_id", e.id},
            {"round", s.round},
            {"T", asks_questions(s.policy) ? s.hyper.rounds : 0},
            {"done", s.finished() || !e.error.empty()},
            {"question", s.pending ? question_to_json(*s.pending) : json(nullptr)},
            {"estimate", s.estimate ? box_to_json(*s.estimate) : json(nullptr)}};
  if (!e.error.empty()) j["error"] = e.error;
  return j;
}

json SessionStore::session_view(const Entry& e) const {
  const Session& s = e.session;
  json j = step_view(e);
  j["scene_id"] = s.scene.id;
  j["utterance"] = s.dialogue.utterance;
  j["policy"] = to_string(s.policy);
  j["lambda"] = s.hyper.lambda;
  j["seed"] = e.seed;
  json estimates = json::array(), transcript = json::array(), candidates = json::array();
  for (const auto& b : s.per_round_estimates) estimates.push_back(box_to_json(b));
  for (const auto& qa : s.dialogue.qa_pairs)
    transcript.push_back(json::array({qa.question.text, qa.answer.text}));
  const auto boxes = s.candidates.boxes();
  if (!boxes.empty()) {
    const auto pv = region_distribution(s.scene, s.dialogue, boxes, s.hyper.agent);
    for (std::size_t i = 0; i < boxes.size(); ++i)
      candidates.push_back({{"box", box_to_json(boxes[i])}, {"p_vision", pv[i]}});
  }
  j["per_round_estimates"] = estimates;
  j["transcript"] = transcript;
  j["candidates"] = candidates;
  return j;
}

json SessionStore::get_session(const std::string& id) const {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  if (entry->closed) throw ApiError(ApiCode::kNotFound, "session '" + id + "' is closed");
  try {
    return session_view(*entry);
  } catch (const Error& e) {
    throw to_api_error(e);
  }
}

void SessionStore::put_scene(const Scene& scene) {
  try {
    scene.validate(&Lexicon::standard());
  } catch (const Error& e) {
    throw to_api_error(e);
  }
  std::unique_lock lock(mutex_);
  append({{"op", "scene"}, {"scene", scene_to_json(scene)}});
  scenes_[scene.id] = scene;
}

void SessionStore::remove_scene(const std::string& id) {
  std::unique_lock lock(mutex_);
  if (!scenes_.count(id)) throw ApiError(ApiCode::kNotFound, "no scene '" + id + "'");
  append({{"op", "remove_scene"}, {"id", id}});
  scenes_.erase(id);
}

json SessionStore::get_scene(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = scenes_.find(id);
  if (it == scenes_.end()) throw ApiError(ApiCode::kNotFound, "no scene '" + id + "'");
  return scene_to_json(it->second);
}

json SessionStore::render_scene(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = scenes_.find(id);
  if (it == scenes_.end()) throw ApiError(ApiCode::kNotFound, "no scene '" + id + "'");
  return {{"svg", render_scene_svg(it->second)}, {"scene", scene_to_json(it->second)}};
}

std::vector<std::string> SessionStore::session_ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, e] : sessions_) ids.push_back(id);
  return ids;
}

std::size_t SessionStore::scene_count() const {
  std::shared_lock lock(mutex_);
  return scenes_.size();
}

}  // namespace intentgrasp
