#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "lexitransfer/error.hpp"
#include "lexitransfer/lexicon.hpp"
#include "support.hpp"

using namespace lexitransfer;
using namespace testsupport;

namespace {

NewLexeme lt_noun(std::string lemma, std::string paradigm = "lt-noun-as-m") {
  NewLexeme n;
  n.lemma = std::move(lemma);
  n.language = Language::LT;
  n.pos = PosName::Noun;
  n.paradigm_id = std::move(paradigm);
  return n;
}

NewLexeme en_noun(std::string lemma) {
  NewLexeme n;
  n.lemma = std::move(lemma);
  n.language = Language::EN;
  n.pos = PosName::Noun;
  n.paradigm_id = "en-noun-regular";
  return n;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::BadRequest;
}

Lexicon::Clock fixed_clock() {
  return [] { return std::chrono::system_clock::time_point{std::chrono::seconds(1792195200)}; };
}

}  // namespace

TEST(Lexicon, AddMaterializesFourteenForms) {
  Lexicon lx(shipped_rules());
  auto id = lx.add_lexeme(lt_noun("stalas"), "lex1");
  auto table = lx.paradigm(id);
  EXPECT_EQ(table.size(), 14u);
  EXPECT_EQ(lx.lookup_form(id, parse_bundle("case=genitive,number=sg")).surface, "stalo");
  for (const auto& [b, s] : table) EXPECT_EQ(lx.lookup_form(id, b).surface, s);
}

TEST(Lexicon, ValidationErrors) {
  Lexicon lx(shipped_rules());
  lx.add_lexeme(lt_noun("stalas"), "a");
  EXPECT_EQ(code_of([&] { lx.add_lexeme(lt_noun("stalas"), "a"); }), ErrorCode::DuplicateLexeme);
  EXPECT_EQ(code_of([&] { lx.add_lexeme(lt_noun("stalas", "nope"), "a"); }),
            ErrorCode::UnknownParadigm);
  auto aux = lt_noun("tas");
  aux.pos = PosName::Auxiliary;
  EXPECT_EQ(code_of([&] { lx.add_lexeme(aux, "a"); }), ErrorCode::PosLanguageMismatch);
  EXPECT_EQ(code_of([&] { lx.add_lexeme(lt_noun("gulbė"), "a"); }), ErrorCode::StemMismatch);
  EXPECT_EQ(code_of([&] { lx.get(999); }), ErrorCode::NotFound);
  EXPECT_EQ(code_of([&] { lx.delete_lexeme(999, "a"); }), ErrorCode::NotFound);
  // nothing failed is audited
  EXPECT_EQ(lx.audit_log().size(), 1u);
}

TEST(Lexicon, LookupFormMissingBundle) {
  Lexicon lx(shipped_rules());
  auto id = lx.add_lexeme(lt_noun("stalas"), "a");
  EXPECT_EQ(code_of([&] { lx.lookup_form(id, parse_bundle("tense=future")); }),
            ErrorCode::NoSuchForm);
}

TEST(Lexicon, LinkValidation) {
  Lexicon lx(shipped_rules());
  auto pen = lx.add_lexeme(en_noun("pen"), "a");
  auto stalas = lx.add_lexeme(lt_noun("stalas"), "a");
  auto namas = lx.add_lexeme(lt_noun("namas"), "a");
  lx.link_senses(pen, stalas, 1, std::nullopt, "a");
  EXPECT_EQ(code_of([&] { lx.link_senses(pen, namas, 1, std::nullopt, "a"); }),
            ErrorCode::PriorityCollision);
  EXPECT_EQ(code_of([&] { lx.link_senses(stalas, namas, 1, std::nullopt, "a"); }),
            ErrorCode::SameLanguage);
  EXPECT_EQ(code_of([&] { lx.link_senses(pen, 777, 2, std::nullopt, "a"); }),
            ErrorCode::NotFound);
  // priorities are stored per direction
  lx.link_senses(stalas, pen, 1, std::nullopt, "a");
  EXPECT_EQ(lx.links_from(stalas).size(), 1u);
  EXPECT_EQ(code_of([&] { lx.unlink_senses(pen, namas, "a"); }), ErrorCode::NotFound);
}

TEST(Lexicon, ResolveSensesDomainFirst) {
  auto lx = starter_lexicon();
  auto pen = *lx->find_id(Language::EN, "pen", PosName::Noun);
  auto plain = lx->resolve_senses(pen);
  ASSERT_EQ(plain.size(), 3u);
  EXPECT_EQ(plain[0].target.lemma, "rašiklis");
  EXPECT_EQ(plain[1].target.lemma, "gulbė");
  EXPECT_EQ(plain[2].target.lemma, "areštinė");
  auto law = lx->resolve_senses(pen, "law");
  EXPECT_EQ(law[0].target.lemma, "areštinė");
  EXPECT_EQ(law[1].target.lemma, "rašiklis");
  EXPECT_EQ(law[2].target.lemma, "gulbė");
  EXPECT_EQ(lx->resolve_senses(pen, "astronomy")[0].target.lemma, "rašiklis");
}

// Random link sets checked against an independently written comparator.
TEST(Lexicon, ResolveSensesMatchesBruteForce) {
  std::mt19937 rng(7);
  const std::vector<std::string> domains{"law", "zoology", "computing"};
  for (int trial = 0; trial < 200; ++trial) {
    Lexicon lx(shipped_rules());
    auto src = lx.add_lexeme(en_noun("word"), "t");
    const int n = std::uniform_int_distribution<int>(0, 8)(rng);
    std::vector<int> prios(20);
    std::iota(prios.begin(), prios.end(), 1);
    std::shuffle(prios.begin(), prios.end(), rng);
    std::vector<SenseLink> links;
    for (int i = 0; i < n; ++i) {
      auto tgt = lx.add_lexeme(lt_noun("t" + std::to_string(i) + "as"), "t");
      std::optional<std::string> d;
      if (rng() % 2) d = domains[rng() % domains.size()];
      links.push_back(lx.link_senses(src, tgt, prios[i], d, "t"));
    }
    std::optional<std::string> active;
    if (rng() % 3) active = domains[rng() % domains.size()];

    std::vector<SenseLink> expect = links;
    std::sort(expect.begin(), expect.end(), [&](const SenseLink& a, const SenseLink& b) {
      const bool ma = active && a.domain == active;
      const bool mb = active && b.domain == active;
      if (ma != mb) return ma;
      return a.priority < b.priority;
    });
    auto got = lx.resolve_senses(src, active);
    ASSERT_EQ(got.size(), expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].target.id, expect[i].target);
      EXPECT_EQ(got[i].priority, expect[i].priority);
    }
  }
}

TEST(Lexicon, PrioritiesStayUniqueUnderRandomOps) {
  std::mt19937 rng(11);
  Lexicon lx(shipped_rules());
  std::vector<LexemeId> en, lt;
  for (int i = 0; i < 4; ++i) en.push_back(lx.add_lexeme(en_noun("e" + std::to_string(i)), "t"));
  for (int i = 0; i < 6; ++i)
    lt.push_back(lx.add_lexeme(lt_noun("l" + std::to_string(i) + "as"), "t"));
  for (int step = 0; step < 2000; ++step) {
    auto s = en[rng() % en.size()];
    auto t = lt[rng() % lt.size()];
    try {
      if (rng() % 3) lx.link_senses(s, t, 1 + rng() % 5, std::nullopt, "t");
      else lx.unlink_senses(s, t, "t");
    } catch (const Error&) {
    }
    for (auto e : en) {
      std::set<int> seen;
      for (const auto& l : lx.links_from(e)) EXPECT_TRUE(seen.insert(l.priority).second);
    }
  }
}

TEST(Lexicon, DeleteRemovesLinksButNeverPhrases) {
  auto lx = starter_lexicon();
  const auto phrases = lx->phrase_count();
  auto table = *lx->find_id(Language::EN, "table", PosName::Noun);
  auto stalas = *lx->find_id(Language::LT, "stalas", PosName::Noun);
  lx->delete_lexeme(stalas, "lex1");
  EXPECT_EQ(lx->phrase_count(), phrases);
  for (const auto& s : lx->resolve_senses(table)) EXPECT_NE(s.target.id, stalas);
  EXPECT_TRUE(lx->lookup_surface("stalo", Language::LT).empty());
}

TEST(Lexicon, PhraseSurvivalProperty) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto lx = starter_lexicon();
    std::size_t expected = lx->phrase_count();
    std::vector<LexemeId> live;
    for (Language lang : kLanguages)
      for (const auto& l : lx->list_lexemes(lang)) live.push_back(l.id);
    int fresh = 0;
    for (int op = 0; op < 60; ++op) {
      const auto r = rng() % 4;
      if (r == 0 && !live.empty()) {
        auto i = rng() % live.size();
        lx->delete_lexeme(live[i], "t");
        live.erase(live.begin() + i);
      } else if (r == 1) {
        live.push_back(lx->add_lexeme(en_noun("w" + std::to_string(fresh++)), "t"));
      } else if (r == 2) {
        PhraseEntry p;
        p.source_language = Language::EN;
        p.source_pattern = {"w" + std::to_string(rng() % 10)};
        p.target_text = "x";
        lx->add_phrase(p, "t");
        ++expected;
      }
      EXPECT_EQ(lx->phrase_count(), expected);
    }
  }
}

TEST(Lexicon, AuditRecordsEverySuccessfulMutation) {
  Lexicon lx(shipped_rules(), {}, nullptr, fixed_clock());
  auto a = lx.add_lexeme(en_noun("pen"), "lex1");
  auto b = lx.add_lexeme(lt_noun("stalas"), "lex2");
  lx.link_senses(a, b, 1, std::nullopt, "lex1");
  EXPECT_THROW(lx.link_senses(a, b, 2, std::nullopt, "lex1"), Error);
  lx.delete_lexeme(b, "lex2");
  auto log = lx.audit_log();
  ASSERT_EQ(log.size(), 4u);
  EXPECT_EQ(log[0].actor, "lex1");
  EXPECT_EQ(log[1].actor, "lex2");
  EXPECT_EQ(log[2].entity, (EntityRef{"link", std::to_string(a) + ":" + std::to_string(b)}));
  EXPECT_EQ(log[3].op, ChangeOp::Delete);
  EXPECT_EQ(log[0].timestamp, "2026-10-17T00:00:00Z");
  for (std::size_t i = 1; i < log.size(); ++i) EXPECT_LT(log[i - 1].seq, log[i].seq);
  EXPECT_TRUE(lx.audit_log(log.back().seq).empty());
  EXPECT_EQ(lx.audit_log(log[1].seq).size(), 2u);
}

TEST(Lexicon, JournalReplayRestoresState) {
  TempDir dir;
  std::string exported;
  std::vector<ChangeRecord> audit;
  {
    auto lx = Lexicon::open(dir.path, shipped_rules());
    lx->import_exchange(read_file(data_dir() / "lexicon" / "starter.jsonl"), "seed");
    auto stalas = *lx->find_id(Language::LT, "stalas", PosName::Noun);
    auto pen = *lx->find_id(Language::EN, "pen", PosName::Noun);
    lx->unlink_senses(pen, 21, "lex1");
    lx->delete_lexeme(stalas, "lex1");
    lx->add_lexeme(lt_noun("namas"), "lex2");
    exported = lx->export_exchange();
    audit = lx->audit_log();
  }
  auto again = Lexicon::open(dir.path, shipped_rules());
  EXPECT_EQ(again->export_exchange(), exported);
  EXPECT_EQ(again->audit_log(), audit);
  // new ids continue after replayed ones
  auto id = again->add_lexeme(lt_noun("miestas"), "x");
  EXPECT_GT(id, 32u);
}

TEST(Lexicon, ExchangeRoundTripIsByteIdentical) {
  auto lx = starter_lexicon();
  const auto text = lx->export_exchange();
  Lexicon copy(shipped_rules());
  copy.import_exchange(text, "import");
  EXPECT_EQ(copy.export_exchange(), text);

  // record order in the input does not matter
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::stable_partition(lines.begin(), lines.end(),
                        [](const std::string& l) { return l.find("\"link\"") == std::string::npos; });
  std::reverse(lines.begin(), lines.end());
  std::stable_partition(lines.begin(), lines.end(), [](const std::string& l) {
    return l.find("\"kind\":\"lexeme\"") != std::string::npos;
  });
  std::string shuffled;
  for (const auto& l : lines) shuffled += l + "\n";
  Lexicon copy2(shipped_rules());
  copy2.import_exchange(shuffled, "import");
  EXPECT_EQ(copy2.export_exchange(), text);
}

TEST(Lexicon, ImportRejectsUnknownKinds) {
  Lexicon lx(shipped_rules());
  EXPECT_THROW(lx.import_exchange(R"({"kind":"widget","id":1})", "x"), Error);
  EXPECT_THROW(lx.import_exchange("{broken", "x"), Error);
}

TEST(Lexicon, ListFiltersAndCaseFoldedQuery) {
  auto lx = starter_lexicon();
  EXPECT_EQ(lx->list_lexemes(Language::LT).size(), 12u);
  EXPECT_EQ(lx->list_lexemes(Language::LT, {PosName::Noun, ""}).size(), 7u);
  auto q = lx->list_lexemes(Language::LT, {std::nullopt, "LENT"});
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0].lemma, "lentelė");
}

TEST(Lexicon, LookupCacheServesRepeatsAndClearsOnWrite) {
  auto lx = starter_lexicon();
  lx->lookup_surface("stalo", Language::LT);
  lx->lookup_surface("stalo", Language::LT);
  auto st = lx->lookup_cache_stats();
  EXPECT_EQ(st.misses, 1u);
  EXPECT_EQ(st.hits, 1u);
  lx->add_lexeme(lt_noun("namas"), "t");
  EXPECT_EQ(lx->lookup_cache_stats().entries, 0u);
  EXPECT_EQ(lx->lookup_surface("Stalo", Language::LT).size(), 1u);
}

TEST(Lexicon, ReindexRebuildsFormsFromNewRules) {
  auto lx = starter_lexicon();
  auto stalas = *lx->find_id(Language::LT, "stalas", PosName::Noun);
  auto rules = shipped_rules()->rules();
  for (auto& r : rules)
    if (r.id == "lt-noun-as-m") r.exceptions[parse_bundle("case=genitive,number=sg")] = "stalo2";
  auto replaced = std::make_shared<const RulePack>(rules);
  auto failed = lx->reindex(replaced, "maint");
  EXPECT_TRUE(failed.empty());
  EXPECT_EQ(lx->lookup_form(stalas, parse_bundle("case=genitive,number=sg")).surface, "stalo2");
  EXPECT_EQ(lx->lookup_surface("stalo2", Language::LT).size(), 1u);
  EXPECT_EQ(lx->audit_log().back().entity.kind, "forms");
}

TEST(Lexicon, ConcurrentReadersDuringWrites) {
  auto lx = starter_lexicon();
  std::atomic<bool> stop{false};
  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t)
    readers.emplace_back([&] {
      while (!stop) {
        auto a = lx->lookup_surface("stalo", Language::LT);
        if (a.size() != 1) ++bad;
        auto s = lx->resolve_senses(1);
        if (s.size() != 3) ++bad;
      }
    });
  for (int i = 0; i < 300; ++i) lx->add_lexeme(en_noun("n" + std::to_string(i)), "w");
  stop = true;
  for (auto& r : readers) r.join();
  EXPECT_EQ(bad.load(), 0);
  EXPECT_EQ(lx->lexeme_count(), 326u);
}
