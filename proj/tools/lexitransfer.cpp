// Command line front end. Every subcommand goes through the same Workspace
// methods the HTTP service uses, so outputs match the service bodies.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lexitransfer/error.hpp"
#include "lexitransfer/http_service.hpp"
#include "lexitransfer/json_io.hpp"
#include "lexitransfer/workspace.hpp"

using namespace lexitransfer;
using json = nlohmann::json;

namespace {

Language language_arg(const std::string& code) {
  auto lang = parse_language(code);
  if (!lang) throw Error(ErrorCode::BadRequest, "unknown language '" + code + "'");
  return *lang;
}

std::string slurp(const std::string& file) {
  if (file == "-") {
    std::stringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + file);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilingual lexicon and transfer translation toolkit"};
  app.require_subcommand(1);

  std::string data_dir = "lexitransfer-data";
  std::string config_file;
  std::string actor = "cli";
  bool seed = false;
  app.add_option("--data-dir", data_dir, "Workspace state directory");
  app.add_option("--config", config_file, "Settings file (key = value)");
  app.add_option("--actor", actor, "Name recorded in the audit log");
  app.add_flag("--seed", seed, "Import the starter lexicon into an empty store");

  auto make_ws = [&] {
    Workspace::Options opt;
    opt.data_dir = data_dir;
    opt.config = config_file.empty() ? Config{} : Config::load(config_file);
    opt.seed_starter = seed;
    return std::make_unique<Workspace>(std::move(opt));
  };
  std::function<void()> action;

  // init
  auto* init = app.add_subcommand("init", "Create the workspace (seeded with the starter lexicon)");
  init->callback([&] {
    seed = true;
    action = [&] {
      auto ws = make_ws();
      std::cout << "lexemes " << ws->lexicon().lexeme_count() << '\n';
    };
  });

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string host = "127.0.0.1";
  int port = 8080;
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->callback([&] {
    action = [&] {
      auto ws = make_ws();
      HttpService service(*ws);
      std::cerr << "listening on " << host << ':' << port << '\n';
      if (!service.listen(host, port)) throw Error(ErrorCode::BadRequest, "cannot bind");
    };
  });

  // lexeme
  auto* lexeme = app.add_subcommand("lexeme", "Lexeme entry");
  lexeme->require_subcommand(1);
  std::string lang_code = "lt", pos_arg, lemma, paradigm_id, query;
  std::vector<std::string> domains;
  std::uint64_t id = 0;
  auto* lx_add = lexeme->add_subcommand("add", "Add a lexeme");
  lx_add->add_option("--lang", lang_code)->required();
  lx_add->add_option("--pos", pos_arg)->required();
  lx_add->add_option("--paradigm", paradigm_id)->required();
  lx_add->add_option("--domain", domains);
  lx_add->add_option("lemma", lemma)->required();
  lx_add->callback([&] {
    action = [&] {
      json body{{"language", lang_code}, {"pos", pos_arg}, {"lemma", lemma},
                {"paradigm", paradigm_id}, {"domains", domains}};
      print(make_ws()->create_lexeme(body, actor));
    };
  });
  auto* lx_list = lexeme->add_subcommand("list", "List lexemes");
  lx_list->add_option("--lang", lang_code);
  lx_list->add_option("--pos", pos_arg);
  lx_list->add_option("--query", query);
  lx_list->callback([&] {
    action = [&] {
      std::optional<PosName> pos;
      if (!pos_arg.empty()) pos = parse_pos_name(pos_arg);
      for (const auto& j : make_ws()->list_lexemes(language_arg(lang_code), pos, query))
        std::cout << j.dump() << '\n';
    };
  });
  for (const char* name : {"get", "delete", "paradigm"}) {
    auto* sub = lexeme->add_subcommand(name);
    sub->add_option("id", id)->required();
    std::string which = name;
    sub->callback([&, which] {
      action = [&, which] {
        auto ws = make_ws();
        if (which == "get") print(ws->get_lexeme(id));
        else if (which == "delete") print(ws->delete_lexeme(id, actor));
        else {
          const auto table = ws->lexeme_paradigm(id);
          for (const auto& f : table["forms"])
            std::cout << f["features"].get<std::string>() << '\t'
                      << f["surface"].get<std::string>() << '\n';
        }
      };
    });
  }

  // paradigm preview
  auto* paradigm = app.add_subcommand("paradigm", "Paradigm tools");
  paradigm->require_subcommand(1);
  auto* preview = paradigm->add_subcommand("preview", "Show generated forms without storing");
  preview->add_option("paradigm", paradigm_id)->required();
  preview->add_option("lemma", lemma)->required();
  preview->callback([&] {
    action = [&] {
      auto out = make_ws()->preview_paradigm({{"lemma", lemma}, {"paradigm", paradigm_id}});
      for (const auto& f : out["forms"])
        std::cout << f["features"].get<std::string>() << '\t'
                  << f["surface"].get<std::string>() << '\n';
    };
  });

  // link
  auto* link = app.add_subcommand("link", "Sense links");
  link->require_subcommand(1);
  std::uint64_t source = 0, target = 0;
  int priority = 1;
  std::string domain;
  auto* link_add = link->add_subcommand("add");
  link_add->add_option("source", source)->required();
  link_add->add_option("target", target)->required();
  link_add->add_option("--priority", priority)->required();
  link_add->add_option("--domain", domain);
  link_add->callback([&] {
    action = [&] {
      json body{{"source", source}, {"target", target}, {"priority", priority}};
      if (!domain.empty()) body["domain"] = domain;
      print(make_ws()->create_link(body, actor));
    };
  });
  auto* link_del = link->add_subcommand("delete");
  link_del->add_option("source", source)->required();
  link_del->add_option("target", target)->required();
  link_del->callback([&] {
    action = [&] {
      print(make_ws()->delete_link({{"source", source}, {"target", target}}, actor));
    };
  });

  auto* senses = app.add_subcommand("senses", "Resolved senses of a lexeme");
  senses->add_option("id", id)->required();
  senses->add_option("--domain", domain);
  senses->callback([&] {
    action = [&] {
      std::optional<std::string> d;
      if (!domain.empty()) d = domain;
      for (const auto& s : make_ws()->senses(id, d)) std::cout << s.dump() << '\n';
    };
  });

  // translate
  auto* translate = app.add_subcommand("translate", "Translate one sentence");
  std::string from = "en", to = "lt", text;
  bool wsd = false, as_json = false;
  std::size_t max_variants = 64;
  translate->add_option("--from", from);
  translate->add_option("--to", to);
  translate->add_flag("--wsd", wsd, "Rank variants by corpus counts");
  translate->add_option("--max-variants", max_variants);
  translate->add_option("--domain", domain);
  translate->add_flag("--json", as_json);
  translate->add_option("text", text)->required();
  translate->callback([&] {
    action = [&] {
      json body{{"from", from}, {"to", to}, {"text", text}, {"use_wsd", wsd},
                {"max_variants", max_variants}};
      if (!domain.empty()) body["domain"] = domain;
      auto out = make_ws()->translate(body);
      if (as_json) return print(out);
      for (const auto& v : out["variants"])
        std::cout << v["rank"] << '\t'
                  << (v["score"].is_null() ? std::string("-") : v["score"].dump())
                  << '\t' << v["rendered"].get<std::string>() << '\n';
      if (out["fallback"].get<bool>())
        std::cerr << "fallback: " << out["fallback_reason"].get<std::string>() << '\n';
    };
  });

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Monolingual corpus index");
  corpus->require_subcommand(1);
  std::vector<std::string> files;
  std::size_t top = 0;
  auto* ingest = corpus->add_subcommand("ingest");
  ingest->add_option("--lang", lang_code)->required();
  ingest->add_option("files", files)->required();
  ingest->callback([&] {
    action = [&] {
      print(make_ws()->ingest({{"language", lang_code}, {"paths", files}}));
    };
  });
  auto* count = corpus->add_subcommand("count");
  count->add_option("--lang", lang_code)->required();
  count->add_option("phrase", text)->required();
  count->callback([&] {
    action = [&] {
      auto out = make_ws()->corpus_count(language_arg(lang_code), text);
      std::cout << out["count"] << (out["degraded"].get<bool>() ? "\tdegraded" : "") << '\n';
    };
  });
  auto* oov = corpus->add_subcommand("oov", "Words missing from the lexicon, one JSON object per line");
  oov->add_option("--lang", lang_code)->required();
  oov->add_option("--top", top);
  oov->add_option("files", files)->required();
  oov->callback([&] {
    action = [&] {
      auto ws = make_ws();
      std::vector<std::filesystem::path> paths(files.begin(), files.end());
      auto report = extract_oov_files(paths, language_arg(lang_code), ws->lexicon());
      if (top && report.entries.size() > top) report.entries.resize(top);
      for (const auto& e : Workspace::oov_report(report)["entries"])
        std::cout << e.dump() << '\n';
    };
  });

  // oov queue
  auto* queue = app.add_subcommand("oov", "Data-entry queue");
  queue->require_subcommand(1);
  auto* q_add = queue->add_subcommand("enqueue", "Queue OOV lines (from `corpus oov`)");
  std::string input = "-";
  q_add->add_option("--lang", lang_code)->required();
  q_add->add_option("input", input);
  q_add->callback([&] {
    action = [&] {
      json entries = json::array();
      std::istringstream in(slurp(input));
      for (std::string line; std::getline(in, line);)
        if (!line.empty()) entries.push_back(json_io::parse(line));
      print(make_ws()->oov_scan({{"language", lang_code}, {"entries", entries}}));
    };
  });
  auto* q_list = queue->add_subcommand("queue");
  q_list->callback([&] {
    action = [&] {
      for (const auto& q : make_ws()->oov_queue(std::nullopt)) std::cout << q.dump() << '\n';
    };
  });
  auto* q_status = queue->add_subcommand("status");
  std::string status;
  q_status->add_option("id", id)->required();
  q_status->add_option("status", status)->required();
  q_status->callback([&] {
    action = [&] { print(make_ws()->oov_set_status(id, status, actor)); };
  });

  // misc
  std::uint64_t since = 0;
  auto* audit = app.add_subcommand("audit", "Change log");
  audit->add_option("--since", since);
  audit->callback([&] {
    action = [&] {
      for (const auto& r : make_ws()->audit(since)) std::cout << r.dump() << '\n';
    };
  });
  app.add_subcommand("metrics", "Cache, budget and store counters")->callback([&] {
    action = [&] { std::cout << make_ws()->metrics(); };
  });
  auto* exp = app.add_subcommand("export", "Write the lexicon as exchange JSONL");
  exp->callback([&] { action = [&] { std::cout << make_ws()->export_exchange(); }; });
  auto* imp = app.add_subcommand("import", "Read exchange JSONL");
  imp->add_option("input", input);
  imp->callback([&] {
    action = [&] { print(make_ws()->import_exchange(slurp(input), actor)); };
  });
  auto* rules = app.add_subcommand("rules", "Rule packs");
  rules->require_subcommand(1);
  rules->add_subcommand("validate")->callback([&] {
    action = [&] {
      auto out = make_ws()->validate_rules();
      for (const auto& d : out["diagnostics"]) std::cout << d.dump() << '\n';
      if (!out["diagnostics"].empty()) throw Error(ErrorCode::ParseError, "rule pack has problems");
    };
  });

  CLI11_PARSE(app, argc, argv);
  try {
    if (action) action();
  } catch (const Error& e) {
    std::cerr << error_code_name(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
