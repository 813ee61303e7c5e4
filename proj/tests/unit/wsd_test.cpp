#include <gtest/gtest.h>

#include <httplib.h>

#include <random>
#include <thread>

#include "lexitransfer/corpus.hpp"
#include "lexitransfer/error.hpp"
#include "lexitransfer/wsd.hpp"
#include "support.hpp"

using namespace lexitransfer;
using namespace testsupport;

namespace {

std::vector<TranslationVariant> random_variants(std::mt19937& rng, std::size_t n,
                                                std::size_t slots) {
  std::vector<TranslationVariant> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].rendered = "v" + std::to_string(i);
    for (std::size_t s = 0; s < slots; ++s)
      out[i].sense_priorities.push_back(1 + static_cast<int>(rng() % 3));
  }
  return out;
}

// Exhaustive reference: highest count, then lowest priority sum, then the
// lexicographically smallest priority vector, then input position.
std::size_t brute_force_winner(const std::vector<TranslationVariant>& v,
                               const std::vector<std::uint64_t>& counts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    auto key = [&](std::size_t k) {
      int sum = 0;
      for (int p : v[k].sense_priorities) sum += p;
      return std::make_tuple(-static_cast<std::int64_t>(counts[k]), sum,
                             v[k].sense_priorities, k);
    };
    if (key(i) < key(best)) best = i;
  }
  return best;
}

std::string fixed_day() { return "2026-10-17"; }

}  // namespace

TEST(Wsd, FixtureFileHoldsTheNineRows) {
  auto fx = FixtureBackend::load(data_dir() / "fixtures" / "counts.tsv");
  EXPECT_EQ(fx.entries().size(), 9u);
  EXPECT_EQ(fx.count("Rašiklis yra ant stalo"), 301u);
  EXPECT_EQ(fx.count("Gulbė yra ant stalo"), 219u);
  EXPECT_EQ(fx.count("Areštinė yra ant plokščiakalnio"), 0u);
  EXPECT_EQ(fx.count("never seen"), 0u);
}

TEST(Wsd, FixtureParseErrors) {
  EXPECT_THROW(FixtureBackend::parse("a\t1\na\t2\n"), Error);
  EXPECT_THROW(FixtureBackend::parse("a\tmany\n"), Error);
  EXPECT_THROW(FixtureBackend::parse("no tab here\n"), Error);
  EXPECT_EQ(FixtureBackend::parse("a b\t3\n\n").count("a b"), 3u);
}

TEST(Wsd, SelectionMatchesBruteForce) {
  std::mt19937 rng(2026);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t n = 1 + rng() % 27;
    auto variants = random_variants(rng, n, 1 + rng() % 3);
    std::vector<std::uint64_t> counts(n);
    const std::uint64_t spread = 1 + rng() % 5;  // small spread forces ties
    for (auto& c : counts) c = rng() % spread;
    std::map<std::string, std::uint64_t> table;
    for (std::size_t i = 0; i < n; ++i) table[variants[i].rendered] = counts[i];
    auto sel = score_and_select(variants, [&](const std::string& p) { return table.at(p); });
    const bool all_zero = std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; });
    EXPECT_EQ(sel.fallback, all_zero);
    EXPECT_EQ(sel.winner, brute_force_winner(variants, counts));
    ASSERT_EQ(sel.ranking.size(), n);
    EXPECT_EQ(sel.ranking.front(), sel.winner);
  }
}

TEST(Wsd, ArgmaxInvariantUnderScaling) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 27;
    auto variants = random_variants(rng, n, 2);
    std::vector<std::uint64_t> counts(n);
    for (auto& c : counts) c = rng() % 1000;
    const std::uint64_t k = 1 + rng() % 10000;
    auto base = score_and_select(variants, [&](const std::string& p) {
      return counts[std::stoul(p.substr(1))];
    });
    auto scaled = score_and_select(variants, [&](const std::string& p) {
      return k * counts[std::stoul(p.substr(1))];
    });
    EXPECT_EQ(base.winner, scaled.winner);
    EXPECT_EQ(base.ranking, scaled.ranking);
  }
}

TEST(Wsd, LikelihoodsAreExactRationals) {
  std::vector<ScoredVariant> s(3);
  s[0].count = 301;
  s[1].count = 219;
  s[2].count = 52;
  auto l = likelihoods(s);
  EXPECT_EQ(l[0] + l[1] + l[2], Likelihood(1));
  EXPECT_EQ(to_string(l[0]), "301/572");
  EXPECT_EQ(to_string(l[2]), "1/11");
  std::vector<ScoredVariant> zero(2);
  EXPECT_THROW(likelihoods(zero), Error);
  EXPECT_THROW(score_and_select({}, [](const std::string&) { return 0ull; }), Error);
}

TEST(Wsd, BudgetCountsPerDayAndPersists) {
  TempDir dir;
  std::string day = "2026-10-17";
  auto clock = [&] { return day; };
  {
    QuotaBudget b(3, dir.path / "budget.state", clock);
    EXPECT_TRUE(b.try_spend());
    EXPECT_TRUE(b.try_spend());
  }
  QuotaBudget b(3, dir.path / "budget.state", clock);
  EXPECT_EQ(b.state().used, 2u);
  EXPECT_TRUE(b.try_spend());
  EXPECT_FALSE(b.try_spend());
  EXPECT_EQ(b.state().used, 3u);
  const auto text = read_file(dir.path / "budget.state");
  EXPECT_NE(text.find("2026-10-17"), std::string::npos);
  day = "2026-10-18";
  EXPECT_TRUE(b.try_spend());
  EXPECT_EQ(b.state().day, "2026-10-18");
  EXPECT_EQ(b.state().used, 1u);
}

TEST(Wsd, UtcTodayLooksLikeADate) {
  auto d = QuotaBudget::utc_today();
  ASSERT_EQ(d.size(), 10u);
  EXPECT_EQ(d[4], '-');
  EXPECT_EQ(d[7], '-');
}

TEST(Wsd, OracleSpendsOnlyOnMisses) {
  auto fx = std::make_shared<FixtureBackend>(FixtureBackend::load(data_dir() / "fixtures" / "counts.tsv"));
  auto budget = std::make_shared<QuotaBudget>(1000, std::nullopt, fixed_day);
  CountOracle oracle(fx, budget);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(oracle.get_count("Rašiklis yra ant stalo"), 301u);
  EXPECT_EQ(oracle.cache_stats().misses, 1u);
  EXPECT_EQ(oracle.cache_stats().hits, 999u);
  EXPECT_EQ(budget->state().used, 1u);
  EXPECT_EQ(oracle.backend_name(), "fixture");
}

TEST(Wsd, OracleConcurrentMissesSpendOnce) {
  class Slow : public CountBackend {
   public:
    std::atomic<int> calls{0};
    std::uint64_t count(const std::string&) override {
      ++calls;
      std::this_thread::sleep_for(std::chrono::milliseconds(30));
      return 7;
    }
    std::string_view name() const noexcept override { return "slow"; }
  };
  auto backend = std::make_shared<Slow>();
  auto budget = std::make_shared<QuotaBudget>(1000, std::nullopt, fixed_day);
  CountOracle oracle(backend, budget);
  std::vector<std::thread> ts;
  for (int i = 0; i < 12; ++i) ts.emplace_back([&] { EXPECT_EQ(oracle.get_count("x"), 7u); });
  for (auto& t : ts) t.join();
  EXPECT_EQ(backend->calls.load(), 1);
  EXPECT_EQ(budget->state().used, 1u);
}

TEST(Wsd, OracleExhaustionAndBackendFailure) {
  auto fx = std::make_shared<FixtureBackend>(FixtureBackend::parse("a\t1\nb\t2\n"));
  auto budget = std::make_shared<QuotaBudget>(1, std::nullopt, fixed_day);
  CountOracle oracle(fx, budget);
  EXPECT_EQ(oracle.get_count("a"), 1u);
  try {
    oracle.get_count("b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExhausted);
  }
  EXPECT_EQ(oracle.get_count("a"), 1u);  // cached, still free

  class Broken : public CountBackend {
    std::uint64_t count(const std::string&) override { throw std::runtime_error("down"); }
    std::string_view name() const noexcept override { return "broken"; }
  };
  CountOracle bad(std::make_shared<Broken>(),
                  std::make_shared<QuotaBudget>(10, std::nullopt, fixed_day));
  try {
    bad.get_count("x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BackendUnavailable);
  }
}

TEST(Wsd, BudgetFallbackRanksByPriority) {
  std::mt19937 rng(1);
  auto variants = random_variants(rng, 9, 2);
  auto fx = std::make_shared<FixtureBackend>(FixtureBackend::parse("v8\t1000\n"));
  CountOracle oracle(fx, std::make_shared<QuotaBudget>(5, std::nullopt, fixed_day));
  auto sel = score_and_select(variants, oracle);
  EXPECT_TRUE(sel.fallback);
  EXPECT_EQ(sel.fallback_reason, "budget_exhausted");
  auto by_priority = variants;
  std::stable_sort(by_priority.begin(), by_priority.end(), priority_less);
  EXPECT_EQ(sel.scored[sel.winner].variant.rendered, by_priority.front().rendered);
  EXPECT_EQ(oracle.budget().used, 5u);
}

TEST(Wsd, CorpusBackendCountsSentences) {
  auto idx = std::make_shared<CorpusIndex>(Language::LT);
  idx->ingest_text("Rašiklis yra ant stalo. Rašiklis yra ant stalo! Gulbė yra ant stalo.");
  CorpusBackend backend(idx);
  EXPECT_EQ(backend.count("Rašiklis yra ant stalo"), 2u);
  EXPECT_EQ(backend.count("gulbė yra ant stalo"), 1u);
}

TEST(Wsd, RemoteBackendTalksHttp) {
  httplib::Server server;
  server.Get("/count", [](const httplib::Request& req, httplib::Response& res) {
    res.set_content(req.get_param_value("q") == "Rašiklis yra ant stalo" ? "301" : "0",
                    "text/plain");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  RemoteBackend remote("http://127.0.0.1:" + std::to_string(port));
  EXPECT_EQ(remote.count("Rašiklis yra ant stalo"), 301u);
  EXPECT_EQ(remote.count("Gulbė yra ant stalo"), 0u);
  server.stop();
  t.join();
  EXPECT_THROW(remote.count("x"), std::exception);
}

TEST(Wsd, CountQueryDropsSentencePunctuation) {
  EXPECT_EQ(count_query("Rašiklis yra ant stalo."), "Rašiklis yra ant stalo");
  EXPECT_EQ(count_query("Ar tai stalas?! "), "Ar tai stalas");
  EXPECT_EQ(count_query("a, b"), "a, b");
  EXPECT_EQ(count_query(""), "");
}
