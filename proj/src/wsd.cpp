#include "lexitransfer/wsd.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ctime>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lexitransfer/corpus.hpp"
#include "lexitransfer/error.hpp"

namespace lexitransfer {

namespace {

std::optional<std::uint64_t> parse_count(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
    s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty())
    return std::nullopt;
  return v;
}

}  // namespace

// --- budget ------------------------------------------------------------------

QuotaBudget::QuotaBudget(std::uint64_t daily_limit,
                         std::optional<std::filesystem::path> state_file,
                         DayClock today)
    : file_(std::move(state_file)),
      today_(today ? std::move(today) : DayClock(&QuotaBudget::utc_today)) {
  state_.daily_limit = daily_limit;
  state_.day = today_();
  if (file_ && std::filesystem::exists(*file_)) {
    std::ifstream in(*file_);
    std::string key, day;
    std::uint64_t used = 0;
    while (in >> key) {
      if (key == "day") in >> day;
      else if (key == "used") in >> used;
      else {
        std::string ignored;
        in >> ignored;
      }
    }
    if (day == state_.day) state_.used = std::min(used, daily_limit);
  }
}

std::string QuotaBudget::utc_today() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y-%m-%d", &tm);
  return buf;
}

void QuotaBudget::roll_day() {
  auto day = today_();
  if (day != state_.day) {
    state_.day = std::move(day);
    state_.used = 0;
  }
}

void QuotaBudget::persist() const {
  if (!file_) return;
  const auto tmp = file_->string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << "day " << state_.day << '\n'
        << "used " << state_.used << '\n'
        << "limit " << state_.daily_limit << '\n';
  }
  std::filesystem::rename(tmp, *file_);
}

bool QuotaBudget::try_spend() {
  std::lock_guard lock(mu_);
  roll_day();
  if (state_.used >= state_.daily_limit) return false;
  ++state_.used;
  persist();
  return true;
}

BudgetState QuotaBudget::state() const {
  std::lock_guard lock(mu_);
  BudgetState s = state_;
  if (today_() != s.day) {
    s.day = today_();
    s.used = 0;
  }
  return s;
}

// --- backends ----------------------------------------------------------------

FixtureBackend::FixtureBackend(std::unordered_map<std::string, std::uint64_t> counts)
    : counts_(std::move(counts)) {}

FixtureBackend FixtureBackend::parse(std::string_view text) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto tab = line.rfind('\t');
    auto count = tab == std::string_view::npos ? std::nullopt
                                               : parse_count(line.substr(tab + 1));
    if (!count || tab == 0)
      throw Error(ErrorCode::ParseError,
                  "fixture line " + std::to_string(line_no) + ": expected phrase<TAB>count");
    if (!counts.emplace(std::string(line.substr(0, tab)), *count).second)
      throw Error(ErrorCode::ParseError,
                  "fixture line " + std::to_string(line_no) + ": duplicate phrase");
  }
  return FixtureBackend(std::move(counts));
}

FixtureBackend FixtureBackend::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::uint64_t FixtureBackend::count(const std::string& phrase) {
  auto it = counts_.find(phrase);
  return it == counts_.end() ? 0 : it->second;
}

CorpusBackend::CorpusBackend(std::shared_ptr<const CorpusIndex> index)
    : index_(std::move(index)) {
  if (!index_) throw Error(ErrorCode::BackendUnavailable, "no corpus index");
}

std::uint64_t CorpusBackend::count(const std::string& phrase) {
  return index_->count_phrase(phrase).count;
}

RemoteBackend::RemoteBackend(std::string base_url) : base_url_(std::move(base_url)) {}

std::uint64_t RemoteBackend::count(const std::string& phrase) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(5);
  client.set_read_timeout(10);
  auto res = client.Get("/count", httplib::Params{{"q", phrase}}, httplib::Headers{});
  if (!res || res->status != 200)
    throw Error(ErrorCode::BackendUnavailable, "count service unavailable at " + base_url_);
  auto value = parse_count(res->body);
  if (!value)
    throw Error(ErrorCode::BackendUnavailable, "count service returned a non-number");
  return *value;
}

// --- oracle ------------------------------------------------------------------

CountOracle::CountOracle(std::shared_ptr<CountBackend> backend,
                         std::shared_ptr<QuotaBudget> budget, CacheConfig cache)
    : backend_(std::move(backend)),
      budget_(budget ? std::move(budget) : std::make_shared<QuotaBudget>()),
      cache_(cache, [](const std::uint64_t& v) { return std::to_string(v).size(); }) {
  if (!backend_) throw Error(ErrorCode::BackendUnavailable, "no count backend");
}

std::uint64_t CountOracle::get_count(const std::string& phrase) {
  if (phrase.empty()) throw Error(ErrorCode::BadRequest, "empty phrase");
  return cache_.get_through(phrase, [this](const std::string& key) {
    if (!budget_->try_spend())
      throw Error(ErrorCode::BudgetExhausted, "daily query budget exhausted");
    try {
      return backend_->count(key);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::BackendUnavailable) throw;
      throw Error(ErrorCode::BackendUnavailable, e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::BackendUnavailable, e.what());
    }
  });
}

// --- selection ---------------------------------------------------------------

std::string count_query(std::string_view rendered) {
  std::string out(rendered);
  for (;;) {
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    bool cut = false;
    for (std::string_view p : {".", "!", "?", "\u2026"}) {
      if (out.size() >= p.size() && out.compare(out.size() - p.size(), p.size(), p) == 0) {
        out.resize(out.size() - p.size());
        cut = true;
        break;
      }
    }
    if (!cut) return out;
  }
}

Selection score_and_select(const std::vector<TranslationVariant>& variants,
                           const CountFn& count) {
  if (variants.empty())
    throw Error(ErrorCode::EmptyVariantList, "nothing to disambiguate");
  Selection sel;
  sel.scored.reserve(variants.size());
  for (const auto& v : variants) sel.scored.push_back({v, 0, false, std::nullopt});

  for (auto& s : sel.scored) {
    try {
      s.count = count(count_query(s.variant.rendered));
      s.counted = true;
      s.variant.score = s.count;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetExhausted) throw;
      sel.fallback = true;
      sel.fallback_reason = "budget_exhausted";
      break;
    }
  }
  if (!sel.fallback &&
      std::all_of(sel.scored.begin(), sel.scored.end(),
                  [](const ScoredVariant& s) { return s.count == 0; })) {
    sel.fallback = true;
    sel.fallback_reason = "all_zero";
  }

  sel.ranking.resize(sel.scored.size());
  std::iota(sel.ranking.begin(), sel.ranking.end(), 0);
  auto by_priority = [&](std::size_t a, std::size_t b) {
    const auto& va = sel.scored[a].variant;
    const auto& vb = sel.scored[b].variant;
    if (priority_less(va, vb)) return true;
    if (priority_less(vb, va)) return false;
    return a < b;
  };
  if (sel.fallback) {
    std::sort(sel.ranking.begin(), sel.ranking.end(), by_priority);
  } else {
    std::sort(sel.ranking.begin(), sel.ranking.end(), [&](std::size_t a, std::size_t b) {
      if (sel.scored[a].count != sel.scored[b].count)
        return sel.scored[a].count > sel.scored[b].count;
      return by_priority(a, b);
    });
    auto ls = likelihoods(sel.scored);
    for (std::size_t i = 0; i < ls.size(); ++i) sel.scored[i].likelihood = ls[i];
  }
  sel.winner = sel.ranking.front();
  return sel;
}

Selection score_and_select(const std::vector<TranslationVariant>& variants,
                           CountOracle& oracle) {
  return score_and_select(variants, [&](const std::string& phrase) {
    return oracle.get_count(phrase);
  });
}

std::vector<Likelihood> likelihoods(const std::vector<ScoredVariant>& scored) {
  std::int64_t total = 0;
  for (const auto& s : scored) total += static_cast<std::int64_t>(s.count);
  if (total == 0) throw Error(ErrorCode::ZeroTotal, "counts sum to zero");
  std::vector<Likelihood> out;
  out.reserve(scored.size());
  for (const auto& s : scored)
    out.emplace_back(static_cast<std::int64_t>(s.count), total);
  return out;
}

std::string to_string(const Likelihood& l) {
  return std::to_string(l.numerator()) + "/" + std::to_string(l.denominator());
}

}  // namespace lexitransfer
