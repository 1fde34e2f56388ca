/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "blockdsa/catalog.hpp"
#include "blockdsa/cli.hpp"
#include "blockdsa/interpreter.hpp"
#include "blockdsa/project.hpp"
#include "json.hpp"

namespace blockdsa {

enum class SessionState { Running, WaitingForInput, Finished };

inline std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::Running: return "RUNNING";
    case SessionState::WaitingForInput: return "WAITING_FOR_INPUT";
    case SessionState::Finished: return "FINISHED";
  }
  return "RUNNING";
}

/// HTTP-agnostic response: status code, JSON body, extra headers.
struct Response {
  int status = 200;
  std::string body;
  std::map<std::string, std::string> headers;
};

/// Request handling behind the run service endpoints. Transport-free so it
/// can be driven directly from tests; service_http.hpp binds it to routes.
///
/// Each interactive session owns an Interpreter that is resumed under the
/// session's own mutex. A request that finds the session busy gets 409.
class RunService {
 public:
  using Clock = std::chrono::steady_clock;

  struct Config {
    std::chrono::seconds session_ttl{15 * 60};
    std::function<Clock::time_point()> now = [] { return Clock::now(); };
  };

  RunService() : RunService(Config{}) {}
  explicit RunService(Config cfg) : cfg_(std::move(cfg)), rng_(std::random_device{}()) {
    catalog_body_ = catalog_document();
    etag_ = "\"" + fnv1a_hex(catalog_body_) + "\"";
  }

  Response get_catalog(std::string_view if_none_match = {}) const {
    if (if_none_match == etag_) return {304, {}, {{"ETag", etag_}}};
    return {200, catalog_body_, {{"ETag", etag_}}};
  }

  Response post_validate(std::string_view body) const {
    auto doc = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
    if (doc.is_discarded()) return error(400, "request body is not valid JSON");
    auto parsed = parse_project(body);
    Diagnostics ds = std::holds_alternative<Diagnostics>(parsed) ? std::get<Diagnostics>(parsed)
                                                                 : validate_project(std::get<Project>(parsed));
    return {200, dump_json(to_json(ds)), {}};
  }

  /// One-shot run; the body is {project, inputs?, seed?, step_budget?} and
  /// the response is the same SessionResult document the CLI prints.
  Response post_run(std::string_view body) const {
    RunRequest req;
    if (auto bad = parse_run_request(body, req, true)) return *bad;
    const auto result = run(req.project, req.inputs, req.seed, req.step_budget);
    return {200, serialize_result(result), {}};
  }

  Response post_session(std::string_view body) {
    RunRequest req;
    if (auto bad = parse_run_request(body, req, false)) return *bad;
    auto session = std::make_shared<Session>();
    session->interp = std::make_unique<Interpreter>(req.project, RunOptions{req.seed, req.step_budget});
    std::lock_guard session_lock(session->mu);
    std::string id;
    {
      std::lock_guard lock(mu_);
      sweep_locked();
      id = new_id_locked();
      session->last_access = cfg_.now();
      sessions_.emplace(id, session);
    }
    advance(*session);
    return {201, dump_json(handle_json(id, *session)), {{"Location", "/sessions/" + id}}};
  }

  Response get_events(const std::string& id, std::string_view since) {
    std::uint64_t from = 0;
    if (!since.empty()) {
      auto [ptr, ec] = std::from_chars(since.data(), since.data() + since.size(), from);
      if (ec != std::errc() || ptr != since.data() + since.size()) return error(400, "since must be a cursor number");
    }
    auto session = find(id);
    if (!session) return error(404, "no such session");
    std::lock_guard lock(session->mu);
    const auto& events = session->interp->transcript();
    auto events_json = nlohmann::ordered_json::array();
    for (std::size_t i = static_cast<std::size_t>(std::min<std::uint64_t>(from, events.size())); i < events.size(); ++i) {
      events_json.push_back(to_json(events[i]));
    }
    session->cursor = std::max<std::uint64_t>(session->cursor, events.size());
    auto j = handle_json(id, *session);
    j["events"] = std::move(events_json);
    j["variables"] = variables_json(session->interp->variables());
    j["registry_snapshot"] = to_json(session->interp->registry().snapshot());
    j["steps_used"] = session->interp->steps_used();
    if (session->state == SessionState::Finished) j["status"] = to_string(session->interp->status());
    return {200, dump_json(j), {}};
  }

  Response post_answer(const std::string& id, std::string_view body) {
    auto doc = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("answer") || !doc["answer"].is_string()) {
      return error(400, "body must be {\"answer\": text}");
    }
    auto session = find(id);
    if (!session) return error(404, "no such session");
    std::unique_lock lock(session->mu, std::try_to_lock);
    if (!lock.owns_lock()) return error(409, "session is running");
    if (session->state != SessionState::WaitingForInput) {
      return error(409, std::string("session is not waiting for input (") + std::string(to_string(session->state)) + ")");
    }
    session->interp->provide_answer(doc["answer"].get<std::string>());
    advance(*session);
    return {200, dump_json(handle_json(id, *session)), {}};
  }

  Response delete_session(const std::string& id) {
    std::lock_guard lock(mu_);
    sweep_locked();
    if (sessions_.erase(id) == 0) return error(404, "no such session");
    return {200, dump_json({{"session_id", id}, {"deleted", true}}), {}};
  }

  std::size_t session_count() {
    std::lock_guard lock(mu_);
    sweep_locked();
    return sessions_.size();
  }

  const std::string& catalog_etag() const { return etag_; }

 private:
  struct Session {
    std::mutex mu;
    std::unique_ptr<Interpreter> interp;
    SessionState state = SessionState::Running;
    std::uint64_t cursor = 0;
    Clock::time_point last_access;
  };

  struct RunRequest {
    Project project;
    std::vector<std::string> inputs;
    std::uint64_t seed = 0;
    std::uint64_t step_budget = kDefaultStepBudget;
  };

  static Response error(int status, std::string message) {
    return {status, dump_json({{"error", std::move(message)}}), {}};
  }

  static std::string fnv1a_hex(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    return out;
  }

  // Fills `req` or returns the error response.
  static std::optional<Response> parse_run_request(std::string_view body, RunRequest& req, bool with_inputs) {
    auto doc = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return error(400, "request body must be a JSON object");
    if (!doc.contains("project") || !doc["project"].is_object()) return error(400, "missing project object");
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) return error(400, "seed must be a non-negative integer");
      req.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("step_budget")) {
      if (!doc["step_budget"].is_number_unsigned() || doc["step_budget"].get<std::uint64_t>() == 0) {
        return error(400, "step_budget must be a positive integer");
      }
      req.step_budget = doc["step_budget"].get<std::uint64_t>();
    }
    if (with_inputs && doc.contains("inputs")) {
      if (!doc["inputs"].is_array()) return error(400, "inputs must be an array of text");
      for (const auto& v : doc["inputs"]) {
        if (!v.is_string()) return error(400, "inputs must be an array of text");
        req.inputs.push_back(v.get<std::string>());
      }
    }
    auto parsed = parse_project(doc["project"].dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
    Diagnostics ds = std::holds_alternative<Diagnostics>(parsed) ? std::get<Diagnostics>(parsed)
                                                                 : validate_project(std::get<Project>(parsed));
    if (std::holds_alternative<Diagnostics>(parsed) || blocks_execution(ds)) {
      return Response{422, dump_json({{"diagnostics", to_json(ds)}}), {}};
    }
    req.project = std::get<Project>(std::move(parsed));
    return std::nullopt;
  }

  static void advance(Session& s) {
    s.state = SessionState::Running;
    switch (s.interp->resume()) {
      case Interpreter::State::WaitingForInput: s.state = SessionState::WaitingForInput; break;
      case Interpreter::State::Finished: s.state = SessionState::Finished; break;
      case Interpreter::State::Running: break;
    }
  }

  static nlohmann::ordered_json handle_json(const std::string& id, const Session& s) {
    nlohmann::ordered_json j;
    j["session_id"] = id;
    j["state"] = to_string(s.state);
    j["cursor"] = s.cursor;
    return j;
  }

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lock(mu_);
    sweep_locked();
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    it->second->last_access = cfg_.now();
    return it->second;
  }

  void sweep_locked() {
    const auto now = cfg_.now();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (now - it->second->last_access >= cfg_.session_ttl) it = sessions_.erase(it);
      else ++it;
    }
  }

  std::string new_id_locked() {
    static constexpr char kHex[] = "0123456789abcdef";
    for (;;) {
      auto r = rng_();
      std::string id = "s-";
      for (int i = 0; i < 16; ++i, r >>= 4) id += kHex[r & 0xf];
      if (!sessions_.contains(id)) return id;
    }
  }

  Config cfg_;
  std::string catalog_body_;
  std::string etag_;
  std::mutex mu_;
  std::mt19937_64 rng_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace blockdsa
