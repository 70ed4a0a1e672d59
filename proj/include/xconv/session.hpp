#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "xconv/conversation.hpp"
#include "xconv/document.hpp"

namespace httplib {
class Server;
}

namespace xconv {

struct SessionConfig {
  SearchBounds bounds = SearchBounds::from_env();
  std::size_t max_rounds = 32;
  /// When set, every transcript change is written to <dir>/<id>.json.
  std::optional<std::filesystem::path> persist_dir;
  /// Model document used when a create request has no "model".
  std::optional<json> default_model;
};

/// In-memory conversations keyed by opaque ids. Operations on one session
/// are serialized; different sessions proceed independently.
class SessionStore {
 public:
  explicit SessionStore(SessionConfig config = {});
  ~SessionStore();

  /// Body: {"model"?: ModelDocument, "world": W, "claim": S, "max_rounds"?: N}.
  /// Returns the first snapshot, which carries the new id.
  json create(const json& request);
  json snapshot(const std::string& id) const;
  /// Body: {"round": N, "bits": BitTree}. Throws StaleRound when N is not the
  /// round of the pending explanation, MalformedFeedback for bad shapes.
  json post_feedback(const std::string& id, const json& request);
  json transcript(const std::string& id) const;

  std::size_t size() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  void persist(const std::string& id, const Session& s) const;
  std::string fresh_id();

  SessionConfig config_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

json session_snapshot(const std::string& id, const Conversation& conv);

/// HTTP status for a domain error raised while serving a request.
int http_status_for(ErrorCode code);

/// Error body; MalformedFeedback problems are split into {path, message}.
json error_body(const Error& e);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  /// Value for Access-Control-Allow-Origin; empty disables CORS headers.
  std::string cors_origin;
};

/// Routes the session endpoints onto an httplib server.
class SessionServer {
 public:
  SessionServer(SessionStore& store, ServerOptions opts);
  ~SessionServer();

  /// Blocks until stop(). Returns false if the socket could not be bound.
  bool listen();
  /// Binds an ephemeral port on host; returns it, or -1.
  int bind_any_port();
  /// Serves on a socket from bind_any_port(); blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  SessionStore& store_;
  ServerOptions opts_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace xconv
