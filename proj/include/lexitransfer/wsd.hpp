#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/rational.hpp>

#include "lexitransfer/cache.hpp"
#include "lexitransfer/transfer.hpp"

namespace lexitransfer {

class CorpusIndex;

struct BudgetState {
  std::string day;  // YYYY-MM-DD, UTC
  std::uint64_t used = 0;
  std::uint64_t daily_limit = 1000;
};

/// Daily cap on uncached count queries. The counter resets when the day
/// changes. With a state file the counter survives restarts; the file is
/// plain text:
///
///   day 2026-10-17
///   used 3
///   limit 1000
class QuotaBudget {
 public:
  using DayClock = std::function<std::string()>;

  explicit QuotaBudget(std::uint64_t daily_limit = 1000,
                       std::optional<std::filesystem::path> state_file = {},
                       DayClock today = nullptr);

  /// Consumes one query; false when today's allowance is spent.
  bool try_spend();
  BudgetState state() const;

  static std::string utc_today();

 private:
  void roll_day();
  void persist() const;

  mutable std::mutex mu_;
  BudgetState state_;
  std::optional<std::filesystem::path> file_;
  DayClock today_;
};

class CountBackend {
 public:
  virtual ~CountBackend() = default;
  /// Total occurrence count of the phrase.
  virtual std::uint64_t count(const std::string& phrase) = 0;
  virtual std::string_view name() const noexcept = 0;
};

/// Counts from a `phrase<TAB>count` file. Unlisted phrases count 0.
class FixtureBackend final : public CountBackend {
 public:
  explicit FixtureBackend(std::unordered_map<std::string, std::uint64_t> counts);
  static FixtureBackend parse(std::string_view text);
  static FixtureBackend load(const std::filesystem::path& file);

  std::uint64_t count(const std::string& phrase) override;
  std::string_view name() const noexcept override { return "fixture"; }
  const std::unordered_map<std::string, std::uint64_t>& entries() const {
    return counts_;
  }

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
};

/// Counts from a local n-gram index. Phrases longer than the index order
/// get the min-over-windows estimate.
class CorpusBackend final : public CountBackend {
 public:
  explicit CorpusBackend(std::shared_ptr<const CorpusIndex> index);
  std::uint64_t count(const std::string& phrase) override;
  std::string_view name() const noexcept override { return "corpus_index"; }

 private:
  std::shared_ptr<const CorpusIndex> index_;
};

/// Adapter for a web count service: `GET <base>/count?q=<phrase>` answering
/// a decimal count in the body. No third-party service is wired in.
class RemoteBackend final : public CountBackend {
 public:
  explicit RemoteBackend(std::string base_url);
  std::uint64_t count(const std::string& phrase) override;
  std::string_view name() const noexcept override { return "remote_stub"; }

 private:
  std::string base_url_;
};

/// Count source used by WSD: cache first, then budget, then backend.
/// Only cache misses spend budget; concurrent identical misses spend once.
class CountOracle {
 public:
  CountOracle(std::shared_ptr<CountBackend> backend,
              std::shared_ptr<QuotaBudget> budget, CacheConfig cache = {});

  /// Throws Error(BudgetExhausted) on a miss with no allowance left and
  /// Error(BackendUnavailable) when the backend fails.
  std::uint64_t get_count(const std::string& phrase);

  CacheStats cache_stats() const { return cache_.stats(); }
  BudgetState budget() const { return budget_->state(); }
  std::string_view backend_name() const noexcept { return backend_->name(); }

 private:
  std::shared_ptr<CountBackend> backend_;
  std::shared_ptr<QuotaBudget> budget_;
  ReadThroughCache<std::uint64_t> cache_;
};

using Likelihood = boost::rational<std::int64_t>;

struct ScoredVariant {
  TranslationVariant variant;
  std::uint64_t count = 0;
  bool counted = false;
  std::optional<Likelihood> likelihood;
};

struct Selection {
  std::size_t winner = 0;              // index into scored
  std::vector<ScoredVariant> scored;   // input order
  std::vector<std::size_t> ranking;    // indices, best first
  bool fallback = false;
  std::string fallback_reason;         // all_zero | budget_exhausted
};

using CountFn = std::function<std::uint64_t(const std::string&)>;

/// Phrase queried for a rendered variant: the text without trailing
/// sentence-final punctuation and whitespace.
std::string count_query(std::string_view rendered);

/// Maximum-count selection. Ties go to the lower priority sum, then the
/// lexicographically smaller priority vector, then input order. When every
/// count is zero, or the budget runs out part way, all variants are ranked
/// by priority alone.
Selection score_and_select(const std::vector<TranslationVariant>& variants,
                           const CountFn& count);
Selection score_and_select(const std::vector<TranslationVariant>& variants,
                           CountOracle& oracle);

/// count / total for each entry. Throws Error(ZeroTotal) when the counts
/// sum to zero.
std::vector<Likelihood> likelihoods(const std::vector<ScoredVariant>& scored);

std::string to_string(const Likelihood& l);

}  // namespace lexitransfer
