#pragma once

/// \file service.hpp
/// Request handling for the explorer API, independent of any HTTP library.
/// Handlers return a status, content type and body; http.hpp binds them to
/// routes.
///
/// Corpus and graph are immutable while serving. Profiles are per user: each
/// user's events apply under that user's lock and are flushed to disk before
/// the response is built; different users never contend.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "vidgraph/error.hpp"
#include "vidgraph/explore.hpp"
#include "vidgraph/pipeline.hpp"
#include "vidgraph/profile.hpp"
#include "vidgraph/store.hpp"

namespace vidgraph {

struct ServerConfig {
  fs::path workdir = ".";       // corpus and matrix documents
  fs::path keyframe_root = ".";
  std::optional<fs::path> profiles_dir;  // defaults to <workdir>/profiles
  std::string host = "127.0.0.1";
  int port = 8080;
  // Pipeline parameters; the explore block overrides what graph.json recorded
  // only when set.
  double theta = 0.6;
  double theta_edge = 0.6;
  double theta_axon = 0.3;
  std::size_t top_k = 2000;
  double tau = 0.5;
  std::optional<double> theta_act;
  std::optional<double> decay;
  std::optional<double> lambda;
  std::optional<std::size_t> budget;

  void validate() const {
    auto unit = [](double v, const char* name) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0,1]");
    };
    unit(theta, "theta");
    unit(theta_edge, "theta_edge");
    unit(theta_axon, "theta_axon");
    unit(tau, "tau");
    if (theta_act) unit(*theta_act, "theta_act");
    if (lambda) unit(*lambda, "lambda");
    if (decay && !(*decay > 0.0 && *decay <= 1.0)) throw DomainError("decay must lie in (0,1]");
    if (budget && *budget < 1) throw DomainError("budget must be at least 1");
    if (port < 0 || port > 65535) throw DomainError("port out of range");
  }

  ExploreParams apply(ExploreParams p) const {
    if (theta_act) p.theta_act = *theta_act;
    if (decay) p.decay = *decay;
    if (lambda) p.lambda = *lambda;
    if (budget) p.budget = *budget;
    p.validate();
    return p;
  }
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

inline HttpResponse json_response(int status, const Json& j) { return {status, "application/json", j.dump()}; }

inline HttpResponse error_response(int status, std::string_view message) {
  return json_response(status, Json{{"error", std::string(message)}, {"status", status}});
}

inline std::string keyframe_media_type(const fs::path& p) {
  auto ext = p.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".png") return "image/png";
  if (ext == ".gif") return "image/gif";
  if (ext == ".bmp") return "image/bmp";
  if (ext == ".webp") return "image/webp";
  return "application/octet-stream";
}

/// Per-user profiles with optional on-disk persistence (one JSON document per
/// user, named by the hex-encoded user id).
class ProfileStore {
 public:
  explicit ProfileStore(std::optional<fs::path> dir = std::nullopt) : dir_(std::move(dir)) {}

  UserProfile snapshot(const std::string& user) {
    auto e = entry(user);
    std::lock_guard lock(e->mutex);
    return e->profile;
  }

  std::optional<ViewState> last_view(const std::string& user) {
    auto e = entry(user);
    std::lock_guard lock(e->mutex);
    return e->last_view;
  }

  /// Runs `fn(profile, last_view)` under the user's lock, then flushes.
  template <class Fn>
  auto update(const std::string& user, Fn&& fn) {
    auto e = entry(user);
    std::lock_guard lock(e->mutex);
    auto result = fn(e->profile, e->last_view);
    flush(e->profile);
    return result;
  }

  void remember_view(const std::string& user, const ViewState& view) {
    auto e = entry(user);
    std::lock_guard lock(e->mutex);
    e->last_view = view;
  }

  std::optional<fs::path> path_for(const std::string& user) const {
    if (!dir_) return std::nullopt;
    static constexpr char hex[] = "0123456789abcdef";
    std::string name;
    for (unsigned char c : user) {
      name += hex[c >> 4];
      name += hex[c & 0xf];
    }
    return *dir_ / (name + ".json");
  }

 private:
  struct Entry {
    std::mutex mutex;
    UserProfile profile;
    std::optional<ViewState> last_view;
  };

  std::shared_ptr<Entry> entry(const std::string& user) {
    std::lock_guard lock(mutex_);
    auto& slot = entries_[user];
    if (!slot) {
      slot = std::make_shared<Entry>();
      slot->profile.user_id = user;
      if (auto path = path_for(user); path && fs::exists(*path)) {
        slot->profile = profile_from_json(detail::parse_json(read_file(*path)));
        if (slot->profile.user_id != user) throw SchemaError(path->string(), "profile belongs to another user");
      }
    }
    return slot;
  }

  void flush(const UserProfile& p) const {
    if (auto path = path_for(p.user_id)) write_file(*path, dump(profile_to_json(p)));
  }

  std::optional<fs::path> dir_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

class ExplorerService {
 public:
  explicit ExplorerService(ServerConfig config) : config_(std::move(config)) {
    config_.validate();
    profiles_ = std::make_unique<ProfileStore>(config_.profiles_dir);
  }

  /// Installs the immutable serving state. Until then every API call answers 503.
  void load(ServingState state) {
    auto s = std::make_shared<Loaded>();
    s->params = config_.apply(state.graph.params.explore);
    if (s->params.budget < state.graph.graph.class_count())
      throw DomainError("budget below class count");
    s->state = std::move(state);
    std::unique_lock lock(state_mutex_);
    loaded_ = std::move(s);
  }

  void load_from_workdir() { load(load_serving_state(config_.workdir)); }

  bool loaded() const {
    std::shared_lock lock(state_mutex_);
    return loaded_ != nullptr;
  }

  const ServerConfig& config() const noexcept { return config_; }

  HttpResponse get_overview(const std::string& user) {
    auto s = current();
    if (!s) return unavailable();
    if (user.empty()) return error_response(400, "missing 'user' parameter");
    const auto profile = profiles_->snapshot(user);
    auto view = overview(s->state.graph.graph, profile, s->params);
    profiles_->remember_view(user, view);
    return json_response(200, view_to_json(view));
  }

  HttpResponse post_event(std::string_view body, Timestamp now = wall_clock()) {
    auto s = current();
    if (!s) return unavailable();
    Json j;
    try {
      j = Json::parse(body);
    } catch (const Json::parse_error& e) {
      return error_response(400, std::string("malformed JSON: ") + e.what());
    }
    InteractionEvent event;
    try {
      event = event_from_json(j, now);
    } catch (const Error& e) {
      return error_response(400, e.what());
    }
    const auto& graph = s->state.graph.graph;
    if (!graph.contains(event.shot_id)) return error_response(404, "unknown shot '" + event.shot_id + "'");

    auto view = profiles_->update(event.user_id, [&](UserProfile& profile, std::optional<ViewState>& last) {
      profile = record_event(std::move(profile), event, graph);
      if (event.kind == EventKind::click) {
        last = focus_view(graph, event.shot_id, profile, s->params);
      } else if (!last) {
        last = overview(graph, profile, s->params);
      }
      return *last;
    });
    return json_response(200, Json{{"ack", true}, {"event", event_to_json(event)}, {"view", view_to_json(view)}});
  }

  HttpResponse get_graph() {
    auto s = current();
    if (!s) return unavailable();
    return {200, "application/json", s->state.graph_document};
  }

  HttpResponse get_profile(const std::string& user) {
    auto s = current();
    if (!s) return unavailable();
    if (user.empty()) return error_response(400, "missing 'user' parameter");
    return json_response(200, profile_to_json(profiles_->snapshot(user)));
  }

  HttpResponse get_keyframe(std::string_view shot) {
    if (shot.empty() || shot.find("..") != std::string_view::npos || shot.find('/') != std::string_view::npos ||
        shot.find('\\') != std::string_view::npos)
      return error_response(403, "forbidden shot id");
    auto s = current();
    if (!s) return unavailable();
    const auto* rec = s->state.corpus.find(shot);
    if (!rec) return error_response(404, "unknown shot '" + std::string(shot) + "'");

    std::error_code ec;
    const auto root = fs::weakly_canonical(config_.keyframe_root, ec);
    const auto file = fs::weakly_canonical(config_.keyframe_root / rec->keyframe_path, ec);
    if (ec) return error_response(404, "keyframe not found");
    auto [r, f] = std::mismatch(root.begin(), root.end(), file.begin(), file.end());
    if (r != root.end()) return error_response(403, "keyframe path escapes the keyframe root");
    if (!fs::is_regular_file(file)) return error_response(404, "keyframe not found");
    try {
      return {200, keyframe_media_type(file), read_file(file)};
    } catch (const Error&) {
      return error_response(404, "keyframe not readable");
    }
  }

  static Timestamp wall_clock() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
  }

 private:
  struct Loaded {
    ServingState state;
    ExploreParams params;
  };

  std::shared_ptr<const Loaded> current() const {
    std::shared_lock lock(state_mutex_);
    return loaded_;
  }

  static HttpResponse unavailable() { return error_response(503, "graph not loaded"); }

  ServerConfig config_;
  std::unique_ptr<ProfileStore> profiles_;
  mutable std::shared_mutex state_mutex_;
  std::shared_ptr<const Loaded> loaded_;
};

}  // namespace vidgraph
