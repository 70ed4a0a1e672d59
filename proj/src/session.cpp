#include "xconv/session.hpp"

#include <openssl/rand.h>

#include <cstdio>
#include <fstream>

#include "httplib.h"
#include "xconv/text.hpp"

namespace xconv {

struct SessionStore::Session {
  explicit Session(Conversation c) : conv(std::move(c)) {}
  mutable std::mutex mutex;
  Conversation conv;
};

SessionStore::SessionStore(SessionConfig config) : config_(std::move(config)) {
  validate_bounds(config_.bounds);
  if (config_.persist_dir) std::filesystem::create_directories(*config_.persist_dir);
}

SessionStore::~SessionStore() = default;

std::string SessionStore::fresh_id() {
  unsigned char raw[16];
  if (RAND_bytes(raw, sizeof raw) != 1) throw Error(ErrorCode::Internal, "random source unavailable");
  std::string id;
  char buf[3];
  for (unsigned char c : raw) {
    std::snprintf(buf, sizeof buf, "%02x", c);
    id += buf;
  }
  return id;
}

json session_snapshot(const std::string& id, const Conversation& conv) {
  const auto& t = conv.transcript();
  json history = json::array();
  for (const auto& r : t.history.rounds)
    history.push_back({{"explanation", explanation_to_json(r.explanation)},
                       {"explanation_text", print(r.explanation)},
                       {"feedback", bits_to_json(r.feedback.bits)},
                       {"feedback_text", print(r.feedback.bits)}});
  json snap = {{"id", id},
               {"status", std::string(to_string(conv.status()))},
               {"round", conv.round()},
               {"world", conv.actual()},
               {"claim", print(t.history.question)},
               {"history", std::move(history)},
               {"pending", nullptr},
               {"pending_text", nullptr},
               {"final_term", t.final_term ? json(print(*t.final_term)) : json(nullptr)}};
  if (conv.pending()) {
    snap["pending"] = explanation_to_json(*conv.pending());
    snap["pending_text"] = print(*conv.pending());
  }
  return snap;
}

json SessionStore::create(const json& request) {
  if (!request.is_object()) throw Error(ErrorCode::Parse, "request body must be a JSON object");
  if (!request.contains("world") || !request.contains("claim"))
    throw Error(ErrorCode::Parse, "request needs 'world' and 'claim'");
  if (!request.contains("model") && !config_.default_model)
    throw Error(ErrorCode::Parse, "request needs 'model' (no default model configured)");
  Model m = load_model(request.contains("model") ? request.at("model") : *config_.default_model);
  const auto world = request.at("world").get<std::string>();
  const auto claim = parse_prop(request.at("claim").get<std::string>());
  const std::size_t max_rounds = request.value("max_rounds", config_.max_rounds);

  auto session = std::make_shared<Session>(Conversation(std::move(m), world, claim, config_.bounds, max_rounds));
  session->conv.select_next();

  std::unique_lock lock(mutex_);
  std::string id;
  do {
    id = fresh_id();
  } while (sessions_.contains(id));
  sessions_.emplace(id, session);
  lock.unlock();

  if (config_.persist_dir) {
    std::ofstream(*config_.persist_dir / (id + ".model.json")) << model_to_json(session->conv.base_model()).dump(2);
    persist(id, *session);
  }
  return session_snapshot(id, session->conv);
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::UnknownSession, "no session '" + id + "'");
  return it->second;
}

json SessionStore::snapshot(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return session_snapshot(id, s->conv);
}

json SessionStore::post_feedback(const std::string& id, const json& request) {
  auto s = find(id);
  if (!request.is_object() || !request.contains("round") || !request.contains("bits"))
    throw Error(ErrorCode::Parse, "request needs 'round' and 'bits'");
  const auto round = request.at("round").get<std::size_t>();
  const BitTree bits = bits_from_json(request.at("bits"));

  std::lock_guard lock(s->mutex);
  if (!s->conv.pending() || round != s->conv.round())
    throw Error(ErrorCode::StaleRound, "feedback for round " + std::to_string(round) + " but the session is at round " +
                                           std::to_string(s->conv.round()) +
                                           (s->conv.pending() ? "" : " and finished"));
  s->conv.submit_feedback(bits);
  persist(id, *s);
  return session_snapshot(id, s->conv);
}

json SessionStore::transcript(const std::string& id) const {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return transcript_to_json(s->conv.transcript());
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

void SessionStore::persist(const std::string& id, const Session& s) const {
  if (!config_.persist_dir) return;
  const auto path = *config_.persist_dir / (id + ".json");
  const auto tmp = *config_.persist_dir / (id + ".json.tmp");
  {
    std::ofstream out(tmp);
    out << transcript_to_json(s.conv.transcript()).dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::StaleRound: return 409;
    case ErrorCode::MalformedFeedback: return 422;
    case ErrorCode::Internal: return 500;
    default: return 400;
  }
}

json error_body(const Error& e) {
  json body = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* load = dynamic_cast<const ModelLoadError*>(&e)) body["diagnostics"] = load->diagnostics();
  return body;
}

namespace {

json feedback_error_body(const std::string& message, const std::vector<std::string>& problems) {
  json list = json::array();
  for (const auto& p : problems) {
    const auto colon = p.find(": ");
    list.push_back({{"path", p.substr(0, colon)}, {"message", colon == std::string::npos ? p : p.substr(colon + 2)}});
  }
  return {{"error", "MalformedFeedback"}, {"message", message}, {"problems", std::move(list)}};
}

}  // namespace

SessionServer::SessionServer(SessionStore& store, ServerOptions opts)
    : store_(store), opts_(std::move(opts)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

SessionServer::~SessionServer() = default;

void SessionServer::install_routes() {
  auto& srv = *server_;
  if (!opts_.cors_origin.empty()) {
    srv.set_default_headers({{"Access-Control-Allow-Origin", opts_.cors_origin},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"},
                             {"Vary", "Origin"}});
    srv.Options(R"(/sessions.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }

  auto guarded = [](auto body) {
    return [body](const httplib::Request& req, httplib::Response& res) {
      auto reply = [&res](int status, const json& j) {
        res.status = status;
        res.set_content(j.dump(), "application/json");
      };
      try {
        reply(200, body(req));
      } catch (const json::exception& e) {
        reply(400, {{"error", "Parse"}, {"message", e.what()}});
      } catch (const Error& e) {
        reply(http_status_for(e.code()), error_body(e));
      } catch (const std::exception& e) {
        reply(500, {{"error", "Internal"}, {"message", e.what()}});
      }
    };
  };

  srv.Post("/sessions", guarded([this](const httplib::Request& req) { return store_.create(json::parse(req.body)); }));
  srv.Get(R"(/sessions/([0-9a-f]+))",
          guarded([this](const httplib::Request& req) { return store_.snapshot(req.matches[1]); }));
  srv.Get(R"(/sessions/([0-9a-f]+)/transcript)",
          guarded([this](const httplib::Request& req) { return store_.transcript(req.matches[1]); }));
  srv.Post(R"(/sessions/([0-9a-f]+)/feedback)", [this](const httplib::Request& req, httplib::Response& res) {
    // Shape problems get the node-path body; everything else shares the
    // generic mapping.
    try {
      const json body = json::parse(req.body);
      res.set_content(store_.post_feedback(req.matches[1], body).dump(), "application/json");
      res.status = 200;
      return;
    } catch (const Error& e) {
      res.status = http_status_for(e.code());
      if (e.code() == ErrorCode::MalformedFeedback) {
        json body = json::parse(req.body, nullptr, false);
        std::vector<std::string> problems;
        try {
          const json snap = store_.snapshot(req.matches[1]);
          if (!snap["pending"].is_null() && body.is_object() && body.contains("bits"))
            problems = feedback_problems({explanation_from_json(snap["pending"]), bits_from_json(body["bits"])});
        } catch (const std::exception&) {
        }
        res.set_content(feedback_error_body(e.what(), problems).dump(), "application/json");
      } else {
        res.set_content(error_body(e).dump(), "application/json");
      }
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(json{{"error", "Parse"}, {"message", e.what()}}.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(json{{"error", "Internal"}, {"message", e.what()}}.dump(), "application/json");
    }
  });
}

bool SessionServer::listen() { return server_->listen(opts_.host, opts_.port); }

int SessionServer::bind_any_port() { return server_->bind_to_any_port(opts_.host); }

bool SessionServer::listen_after_bind() { return server_->listen_after_bind(); }

void SessionServer::stop() { server_->stop(); }

void SessionServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace xconv
