#include "doubtfire/outcome_cache.hpp"

#include <string>

#include "doubtfire/errors.hpp"

namespace doubtfire {

namespace {

std::string describe(const TaskId& id, Origin origin) {
  return std::string(origin == Origin::Local ? "local" : "remote") + " outcome for step " +
         std::to_string(id.step) + " cell " + std::to_string(id.cell);
}

}  // namespace

void OutcomeCache::insert(Origin origin, TaskOutcome outcome) {
  std::lock_guard lock(mutex_);
  const TaskId id = outcome.id;
  auto& slot = entries_[id];
  auto& entry = origin == Origin::Local ? slot.local : slot.remote;
  if (entry) throw DuplicateEntry("duplicate " + describe(id, origin));
  entry = std::move(outcome);
}

OutcomeCache::Pair OutcomeCache::take(const TaskId& id) {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(id);
  Pair pair;
  if (it == entries_.end()) return pair;
  pair.local.swap(it->second.local);
  pair.remote.swap(it->second.remote);
  entries_.erase(it);
  return pair;
}

std::optional<TaskOutcome> OutcomeCache::take(const TaskId& id, Origin origin) {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  auto& entry = origin == Origin::Local ? it->second.local : it->second.remote;
  std::optional<TaskOutcome> out = std::move(entry);
  entry.reset();
  if (!it->second.local && !it->second.remote) entries_.erase(it);
  return out;
}

bool OutcomeCache::contains(const TaskId& id, Origin origin) const {
  return dubious(id, origin).has_value();
}

std::optional<bool> OutcomeCache::dubious(const TaskId& id, Origin origin) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  const auto& entry = origin == Origin::Local ? it->second.local : it->second.remote;
  if (!entry) return std::nullopt;
  return entry->dubious;
}

std::size_t OutcomeCache::gc(std::uint32_t current_step) {
  std::lock_guard lock(mutex_);
  std::size_t discarded = 0;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->first.step + 1 < current_step) {
      discarded += (it->second.local ? 1 : 0) + (it->second.remote ? 1 : 0);
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
  return discarded;
}

std::size_t OutcomeCache::size() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& [id, slot] : entries_) n += (slot.local ? 1 : 0) + (slot.remote ? 1 : 0);
  return n;
}

}  // namespace doubtfire
