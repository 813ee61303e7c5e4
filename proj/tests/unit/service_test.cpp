#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "lexitransfer/http_service.hpp"
#include "support.hpp"

using namespace lexitransfer;
using namespace testsupport;
using json = nlohmann::json;

namespace {

Workspace::Options options(std::optional<fs::path> dir = std::nullopt) {
  Workspace::Options o;
  o.data_dir = std::move(dir);
  o.seed_starter = true;
  o.today = [] { return std::string("2026-10-17"); };
  return o;
}

// Service on an ephemeral port, torn down with the fixture.
class Running {
 public:
  explicit Running(Workspace& ws) : service_(ws) {
    port_ = service_.bind_any("127.0.0.1");
    thread_ = std::thread([this] { service_.serve(); });
    service_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  ~Running() {
    service_.stop();
    thread_.join();
  }
  httplib::Client& client() { return *client_; }

 private:
  HttpService service_;
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

const httplib::Headers kActor{{"X-Actor", "lex1"}};

}  // namespace

TEST(Service, ReadEndpointsMatchDirectCalls) {
  Workspace ws(options());
  Running srv(ws);
  auto& c = srv.client();

  auto r = c.Get("/lexemes?lang=lt&pos=noun");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->body, ws.list_lexemes(Language::LT, PosName::Noun, "").dump());

  r = c.Get("/lexemes/24/paradigm");
  EXPECT_EQ(r->body, ws.lexeme_paradigm(24).dump());
  r = c.Get("/lexemes/1/senses?domain=law");
  EXPECT_EQ(r->body, ws.senses(1, std::string("law")).dump());
  r = c.Get("/meta/pos?lang=en");
  EXPECT_EQ(r->body, ws.pos_panels(Language::EN).dump());
  r = c.Get("/audit?since=0");
  EXPECT_EQ(r->body, ws.audit(0).dump());
  r = c.Get("/exchange");
  EXPECT_EQ(r->body, ws.export_exchange());

  const json preview{{"lemma", "stalas"}, {"paradigm", "lt-noun-as-m"}};
  r = c.Post("/paradigm/preview", preview.dump(), "application/json");
  EXPECT_EQ(r->body, ws.preview_paradigm(preview).dump());
  EXPECT_EQ(json::parse(r->body)["forms"].size(), 14u);
}

TEST(Service, TranslateMatchesDirectCall) {
  Workspace direct(options());
  Workspace served(options());
  Running srv(served);
  const json body{{"text", "pen is on the table"}, {"from", "en"}, {"to", "lt"},
                  {"use_wsd", true}};
  auto r = srv.client().Post("/translate", body.dump(), "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->body, direct.translate(body).dump());
  auto doc = json::parse(r->body);
  EXPECT_EQ(doc["variants"][0]["rendered"], "Rašiklis yra ant stalo");
  EXPECT_EQ(doc["variants"][0]["score"], 301);

  const json retune{{"text", "pen is on the table"}, {"overrides", {{"0", 1}}}};
  r = srv.client().Post("/translate/retune", retune.dump(), "application/json");
  EXPECT_EQ(r->body, direct.retune(retune).dump());
}

TEST(Service, MutationsRequireActorAndAreAudited) {
  Workspace ws(options());
  Running srv(ws);
  auto& c = srv.client();
  const json lexeme{{"lemma", "namas"}, {"language", "lt"}, {"pos", "noun"},
                    {"paradigm", "lt-noun-as-m"}};
  auto r = c.Post("/lexemes", lexeme.dump(), "application/json");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(json::parse(r->body)["code"], "missing_actor");

  const auto before = ws.lexicon().audit_log().size();
  r = c.Post("/lexemes", kActor, lexeme.dump(), "application/json");
  EXPECT_EQ(r->status, 201);
  auto log = ws.lexicon().audit_log();
  ASSERT_EQ(log.size(), before + 1);
  EXPECT_EQ(log.back().actor, "lex1");

  r = c.Post("/lexemes", kActor, lexeme.dump(), "application/json");
  EXPECT_EQ(r->status, 409);
  EXPECT_EQ(json::parse(r->body)["code"], "duplicate_lexeme");

  const auto id = ws.lexicon().find_id(Language::LT, "namas", PosName::Noun).value();
  const json link{{"source", 1}, {"target", id}, {"priority", 4}};
  r = c.Post("/links", kActor, link.dump(), "application/json");
  EXPECT_EQ(r->status, 201);
  r = c.Post("/links", kActor, json{{"source", 1}, {"target", 24}, {"priority", 4}}.dump(),
             "application/json");
  EXPECT_EQ(json::parse(r->body)["code"], "priority_collision");

  r = c.Delete("/links?source=1&target=21", kActor);
  EXPECT_EQ(r->status, 200);
  r = c.Delete("/lexemes/" + std::to_string(id));
  EXPECT_EQ(r->status, 400);
  r = c.Delete("/lexemes/" + std::to_string(id), kActor);
  EXPECT_EQ(r->status, 200);
  r = c.Get("/lexemes/" + std::to_string(id));
  EXPECT_EQ(r->status, 404);
  EXPECT_EQ(json::parse(r->body)["code"], "not_found");
}

TEST(Service, ErrorBodies) {
  Workspace ws(options());
  Running srv(ws);
  auto& c = srv.client();
  auto r = c.Post("/translate", "{not json", "application/json");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(json::parse(r->body)["code"], "parse_error");
  r = c.Post("/translate", json{{"text", "   "}}.dump(), "application/json");
  EXPECT_EQ(r->status, 422);
  EXPECT_EQ(json::parse(r->body)["code"], "empty_input");
  r = c.Get("/lexemes?lang=xx");
  EXPECT_EQ(r->status, 400);
  r = c.Post("/paradigm/preview", json{{"lemma", "gulbė"}, {"paradigm", "lt-noun-as-m"}}.dump(),
             "application/json");
  EXPECT_EQ(json::parse(r->body)["code"], "stem_mismatch");
}

TEST(Service, MetricsArePlainText) {
  Workspace ws(options());
  Running srv(ws);
  auto r = srv.client().Get("/metrics");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->get_header_value("Content-Type"), "text/plain");
  EXPECT_NE(r->body.find("cache.per_entry_limit_bytes 1048576"), std::string::npos);
}

TEST(Service, CorpusAndQueueEndpoints) {
  Workspace ws(options());
  Running srv(ws);
  auto& c = srv.client();
  auto r = c.Post("/corpus/ingest", kActor,
                  json{{"language", "lt"}, {"texts", {"Namas yra ant stalo."}}}.dump(),
                  "application/json");
  EXPECT_EQ(r->status, 200);
  r = c.Get("/corpus/count?lang=lt&q=yra%20ant%20stalo");
  EXPECT_EQ(json::parse(r->body)["count"], 1);
  r = c.Post("/oov/scan", kActor,
             json{{"language", "lt"}, {"texts", {"Namas yra ant stalo."}}}.dump(),
             "application/json");
  EXPECT_EQ(json::parse(r->body)["entries"][0]["surface"], "namas");
  r = c.Get("/oov/queue?status=pending");
  auto q = json::parse(r->body);
  ASSERT_EQ(q.size(), 1u);
  const auto path = "/oov/queue/" + std::to_string(q[0]["id"].get<int>()) + "/status";
  r = c.Post(path, kActor, json{{"status", "rejected"}}.dump(), "application/json");
  EXPECT_EQ(r->status, 200);
  r = c.Post(path, kActor, json{{"status", "entered"}}.dump(), "application/json");
  EXPECT_EQ(r->status, 409);
  EXPECT_EQ(json::parse(r->body)["code"], "invalid_transition");
}

TEST(Service, RestartLosesNoCommittedData) {
  TempDir dir;
  std::string exported;
  {
    Workspace ws(options(dir.path));
    Running srv(ws);
    auto r = srv.client().Post(
        "/lexemes", kActor,
        json{{"lemma", "namas"}, {"language", "lt"}, {"pos", "noun"}, {"paradigm", "lt-noun-as-m"}}
            .dump(),
        "application/json");
    ASSERT_EQ(r->status, 201);
    exported = ws.export_exchange();
  }
  Workspace again(options(dir.path));
  EXPECT_EQ(again.export_exchange(), exported);
  EXPECT_EQ(again.lexicon().audit_log().back().actor, "lex1");
}
