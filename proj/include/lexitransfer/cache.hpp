#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexitransfer/error.hpp"

namespace lexitransfer {

struct CacheConfig {
  std::size_t total_size_bytes = 26214400;
  std::size_t per_entry_limit_bytes = 1048576;
  bool enabled = true;

  void validate() const {
    if (total_size_bytes == 0 || per_entry_limit_bytes == 0 ||
        per_entry_limit_bytes > total_size_bytes) {
      throw Error(ErrorCode::BadRequest,
                  "cache limits must be positive with per-entry <= total");
    }
  }
};

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t evictions = 0;
  std::size_t resident_bytes = 0;
  std::size_t entries = 0;
};

/// Thread-safe read-through cache with LRU eviction under a byte budget.
///
/// An entry's size is whatever the sizer reports for the value (the
/// serialized length). Concurrent misses on one key share a single loader
/// call; callers that wait on someone else's load count as hits. Loader
/// exceptions propagate to every waiter and nothing is stored.
template <typename Value>
class ReadThroughCache {
 public:
  using Sizer = std::function<std::size_t(const Value&)>;

  ReadThroughCache(CacheConfig config, Sizer sizer)
      : config_(config), sizer_(std::move(sizer)) {
    config_.validate();
  }

  ReadThroughCache(const ReadThroughCache&) = delete;
  ReadThroughCache& operator=(const ReadThroughCache&) = delete;

  template <typename Loader>
  Value get_through(const std::string& key, Loader&& loader) {
    std::unique_lock lock(mu_);
    if (!config_.enabled) {
      ++stats_.misses;
      lock.unlock();
      return loader(key);
    }
    if (auto it = index_.find(key); it != index_.end()) {
      ++stats_.hits;
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->value;
    }
    if (auto it = inflight_.find(key); it != inflight_.end()) {
      ++stats_.hits;
      auto future = it->second->future;
      lock.unlock();
      return future.get();
    }

    ++stats_.misses;
    auto flight = std::make_shared<Flight>();
    flight->future = flight->promise.get_future().share();
    inflight_.emplace(key, flight);
    lock.unlock();

    try {
      Value value = loader(key);
      const std::size_t size = sizer_(value);
      lock.lock();
      finish(key, flight);
      if (!flight->stale && size <= config_.per_entry_limit_bytes) {
        store(key, value, size);
      }
      lock.unlock();
      flight->promise.set_value(value);
      return value;
    } catch (...) {
      if (!lock.owns_lock()) lock.lock();
      finish(key, flight);
      lock.unlock();
      flight->promise.set_exception(std::current_exception());
      throw;
    }
  }

  void invalidate(const std::string& key) {
    std::lock_guard lock(mu_);
    if (auto it = index_.find(key); it != index_.end()) {
      stats_.resident_bytes -= it->second->size;
      lru_.erase(it->second);
      index_.erase(it);
    }
    if (auto it = inflight_.find(key); it != inflight_.end()) {
      it->second->stale = true;
      inflight_.erase(it);
    }
  }

  void invalidate_all() {
    std::lock_guard lock(mu_);
    lru_.clear();
    index_.clear();
    stats_.resident_bytes = 0;
    for (auto& [key, flight] : inflight_) flight->stale = true;
    inflight_.clear();
  }

  bool contains(const std::string& key) const {
    std::lock_guard lock(mu_);
    return index_.count(key) != 0;
  }

  /// Resident keys, most recently used first.
  std::vector<std::string> keys_by_recency() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    out.reserve(lru_.size());
    for (const auto& e : lru_) out.push_back(e.key);
    return out;
  }

  CacheStats stats() const {
    std::lock_guard lock(mu_);
    CacheStats s = stats_;
    s.entries = lru_.size();
    return s;
  }

  const CacheConfig& config() const noexcept { return config_; }

 private:
  struct Entry {
    std::string key;
    Value value;
    std::size_t size;
  };
  struct Flight {
    std::promise<Value> promise;
    std::shared_future<Value> future;
    bool stale = false;
  };

  void finish(const std::string& key, const std::shared_ptr<Flight>& flight) {
    auto it = inflight_.find(key);
    if (it != inflight_.end() && it->second == flight) inflight_.erase(it);
  }

  void store(const std::string& key, const Value& value, std::size_t size) {
    while (!lru_.empty() &&
           stats_.resident_bytes + size > config_.total_size_bytes) {
      auto& victim = lru_.back();
      stats_.resident_bytes -= victim.size;
      index_.erase(victim.key);
      lru_.pop_back();
      ++stats_.evictions;
    }
    lru_.push_front(Entry{key, value, size});
    index_[key] = lru_.begin();
    stats_.resident_bytes += size;
  }

  CacheConfig config_;
  Sizer sizer_;
  mutable std::mutex mu_;
  std::list<Entry> lru_;
  std::unordered_map<std::string, typename std::list<Entry>::iterator> index_;
  std::unordered_map<std::string, std::shared_ptr<Flight>> inflight_;
  CacheStats stats_;
};

}  // namespace lexitransfer
