#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>

#include "doubtfire/resilience.hpp"

namespace doubtfire {

enum class Origin { Local, Remote };

/// Per-team cache of task outcomes: dubious local results waiting for their
/// counterpart and remote results that arrived ahead of local work.
///
/// Internally synchronised so concurrently running task workers of one team
/// may share it. Holds at most one Local and one Remote entry per task.
class OutcomeCache {
 public:
  struct Pair {
    std::optional<TaskOutcome> local;
    std::optional<TaskOutcome> remote;
  };

  OutcomeCache() = default;
  OutcomeCache(const OutcomeCache&) = delete;
  OutcomeCache& operator=(const OutcomeCache&) = delete;

  /// Throws DuplicateEntry if an entry with the same (id, origin) exists.
  void insert(Origin origin, TaskOutcome outcome);

  /// Removes and returns whatever is cached for `id`.
  Pair take(const TaskId& id);
  std::optional<TaskOutcome> take(const TaskId& id, Origin origin);

  bool contains(const TaskId& id, Origin origin) const;
  /// Dubious flag of the cached entry, or nullopt if absent.
  std::optional<bool> dubious(const TaskId& id, Origin origin) const;

  /// Drops every entry whose step is older than current_step - 1 and returns
  /// how many outcomes were discarded.
  std::size_t gc(std::uint32_t current_step);

  std::size_t size() const;
  bool empty() const { return size() == 0; }

 private:
  struct Slot {
    std::optional<TaskOutcome> local;
    std::optional<TaskOutcome> remote;
  };

  mutable std::mutex mutex_;
  std::map<TaskId, Slot> entries_;
};

}  // namespace doubtfire
