#include "lexitransfer/http_service.hpp"

#include <httplib.h>

#include "lexitransfer/error.hpp"
#include "lexitransfer/json_io.hpp"

namespace lexitransfer {

namespace {

using json = nlohmann::json;
using Req = httplib::Request;
using Res = httplib::Response;

void send_json(Res& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(Res& res, ErrorCode code, const std::string& message) {
  send_json(res, {{"code", std::string(error_code_name(code))}, {"message", message}},
            error_http_status(code));
}

std::string actor_of(const Req& req) {
  auto actor = req.get_header_value("X-Actor");
  if (actor.empty()) throw Error(ErrorCode::MissingActor, "X-Actor header is required");
  return actor;
}

json body_of(const Req& req) {
  if (req.body.empty()) return json::object();
  auto j = json_io::parse(req.body);
  if (!j.is_object()) throw Error(ErrorCode::BadRequest, "body must be a JSON object");
  return j;
}

std::uint64_t id_param(const Req& req, std::size_t i = 1) {
  try {
    return std::stoull(req.matches[i].str());
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadRequest, "bad id");
  }
}

Language lang_param(const Req& req, const char* key = "lang") {
  if (!req.has_param(key)) throw Error(ErrorCode::BadRequest, std::string("missing ") + key);
  auto lang = parse_language(req.get_param_value(key));
  if (!lang) throw Error(ErrorCode::BadRequest, "unknown language");
  return *lang;
}

// Wraps a handler so library errors and malformed JSON become error bodies.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const Req& req, Res& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::BadRequest, e.what());
    } catch (const std::invalid_argument& e) {
      send_error(res, ErrorCode::BadRequest, e.what());
    } catch (const std::out_of_range& e) {
      send_error(res, ErrorCode::BadRequest, e.what());
    }
  };
}

}  // namespace

HttpService::HttpService(Workspace& workspace)
    : ws_(workspace), server_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpService::~HttpService() { stop(); }

bool HttpService::listen(const std::string& host, int port) {
  return server_->listen(host, port);
}

int HttpService::bind_any(const std::string& host) {
  return server_->bind_to_any_port(host);
}

bool HttpService::serve() { return server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_) server_->stop();
}

void HttpService::wait_until_ready() const { server_->wait_until_ready(); }

void HttpService::routes() {
  auto& s = *server_;

  s.Post("/lexemes", guarded([this](const Req& req, Res& res) {
    auto actor = actor_of(req);
    send_json(res, ws_.create_lexeme(body_of(req), actor), 201);
  }));
  s.Get("/lexemes", guarded([this](const Req& req, Res& res) {
    std::optional<PosName> pos;
    if (req.has_param("pos")) {
      pos = parse_pos_name(req.get_param_value("pos"));
      if (!pos) throw Error(ErrorCode::BadRequest, "unknown pos");
    }
    send_json(res, ws_.list_lexemes(lang_param(req), pos, req.get_param_value("q")));
  }));
  s.Get(R"(/lexemes/(\d+))", guarded([this](const Req& req, Res& res) {
    send_json(res, ws_.get_lexeme(id_param(req)));
  }));
  s.Delete(R"(/lexemes/(\d+))", guarded([this](const Req& req, Res& res) {
    auto actor = actor_of(req);
    send_json(res, ws_.delete_lexeme(id_param(req), actor));
  }));
  s.Get(R"(/lexemes/(\d+)/paradigm)", guarded([this](const Req& req, Res& res) {
    send_json(res, ws_.lexeme_paradigm(id_param(req)));
  }));
  s.Get(R"(/lexemes/(\d+)/senses)", guarded([this](const Req& req, Res& res) {
    std::optional<std::string> domain;
    if (req.has_param("domain")) domain = req.get_param_value("domain");
    send_json(res, ws_.senses(id_param(req), domain));
  }));
  s.Post("/paradigm/preview", guarded([this](const Req& req, Res& res) {
    send_json(res, ws_.preview_paradigm(body_of(req)));
  }));

  s.Post("/links", guarded([this](const Req& req, Res& res) {
    auto actor = actor_of(req);
    send_json(res, ws_.create_link(body_of(req), actor), 201);
  }));
  s.Delete("/links", guarded([this](const Req& req, Res& res) {
    auto actor = actor_of(req);
    json body = body_of(req);
    if (req.has_param("source")) body["source"] = std::stoull(req.get_param_value("source"));
    if (req.has_param("target")) body["target"] = std::stoull(req.get_param_value("target"));
    send_json(res, ws_.delete_link(body, actor));
  }));

  s.Post("/phrases", guarded([this](const Req& req, Res& res) {
    auto actor = actor_of(req);
    send_json(res, ws_.create_phrase(body_of(req), actor), 201);
  }));
  s.Get("/phrases", guarded([this](const Req&, Res& res) {
    send_json(res, ws_.list_phrases());
  }));
  s.Delete(R"(/phrases/(\d+))", guarded([this](const Req& req, Res& res) {
    auto actor = actor_of(req);
    const auto id = id_param(req);
    ws_.lexicon().delete_phrase(id, actor);
    send_json(res, {{"deleted", id}});
  }));

  s.Post("/translate", guarded([this](const Req& req, Res& res) {
    send_json(res, ws_.translate(body_of(req)));
  }));
  s.Post("/translate/retune", guarded([this](const Req& req, Res& res) {
    send_json(res, ws_.retune(body_of(req)));
  }));

  s.Post("/corpus/ingest", guarded([this](const Req& req, Res& res) {
    actor_of(req);
    send_json(res, ws_.ingest(body_of(req)));
  }));
  s.Get("/corpus/count", guarded([this](const Req& req, Res& res) {
    send_json(res, ws_.corpus_count(lang_param(req), req.get_param_value("q")));
  }));

  s.Post("/oov/scan", guarded([this](const Req& req, Res& res) {
    actor_of(req);
    send_json(res, ws_.oov_scan(body_of(req)));
  }));
  s.Get("/oov/queue", guarded([this](const Req& req, Res& res) {
    std::optional<QueueStatus> status;
    if (req.has_param("status")) {
      const auto v = req.get_param_value("status");
      if (v == "pending") status = QueueStatus::Pending;
      else if (v == "entered") status = QueueStatus::Entered;
      else if (v == "rejected") status = QueueStatus::Rejected;
      else throw Error(ErrorCode::BadRequest, "unknown status");
    }
    send_json(res, ws_.oov_queue(status));
  }));
  s.Post(R"(/oov/queue/(\d+)/status)", guarded([this](const Req& req, Res& res) {
    auto actor = actor_of(req);
    auto body = body_of(req);
    send_json(res, ws_.oov_set_status(id_param(req), body.at("status").get<std::string>(),
                                      actor));
  }));

  s.Get("/audit", guarded([this](const Req& req, Res& res) {
    std::uint64_t since = 0;
    if (req.has_param("since")) since = std::stoull(req.get_param_value("since"));
    send_json(res, ws_.audit(since));
  }));
  s.Get("/metrics", guarded([this](const Req&, Res& res) {
    res.set_content(ws_.metrics(), "text/plain");
  }));
  s.Get("/meta/pos", guarded([this](const Req& req, Res& res) {
    send_json(res, ws_.pos_panels(lang_param(req)));
  }));
  s.Get("/rules/validate", guarded([this](const Req&, Res& res) {
    send_json(res, ws_.validate_rules());
  }));

  s.Get("/exchange", guarded([this](const Req&, Res& res) {
    res.set_content(ws_.export_exchange(), "application/x-ndjson");
  }));
  s.Post("/exchange", guarded([this](const Req& req, Res& res) {
    auto actor = actor_of(req);
    send_json(res, ws_.import_exchange(req.body, actor));
  }));
}

}  // namespace lexitransfer
