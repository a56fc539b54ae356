#include "ecpf/meta/record.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ecpf::meta {

ClassifierRecord* Collection::find(std::uint64_t id) noexcept {
  const auto it = std::lower_bound(records_.begin(), records_.end(), id,
                                   [](const ClassifierRecord& r, std::uint64_t v) { return r.id < v; });
  return it != records_.end() && it->id == id ? &*it : nullptr;
}

const ClassifierRecord* Collection::find(std::uint64_t id) const noexcept {
  return const_cast<Collection*>(this)->find(id);
}

ClassifierRecord& Collection::at(std::uint64_t id) {
  ClassifierRecord* r = find(id);
  if (r == nullptr) throw std::out_of_range("no classifier with id " + std::to_string(id));
  return *r;
}

ClassifierRecord& Collection::add(ClassifierRecord record) {
  if (!records_.empty() && record.id <= records_.back().id) {
    throw std::invalid_argument("classifier ids must increase");
  }
  if (!record.learner) throw std::invalid_argument("classifier record without learner");
  records_.push_back(std::move(record));
  return records_.back();
}

void Collection::erase(std::uint64_t id) {
  const auto it = std::find_if(records_.begin(), records_.end(),
                               [id](const ClassifierRecord& r) { return r.id == id; });
  if (it == records_.end()) return;
  records_.erase(it);
  sim_.remove(id);
}

std::size_t Collection::total_size() const {
  std::size_t total = 0;
  for (const auto& r : records_) total += r.learner->size_estimate();
  return total;
}

BufferEvaluation evaluate_on_buffer(const Collection& collection, std::span<const Instance> buffer) {
  BufferEvaluation ev;
  ev.length = buffer.size();
  std::vector<bool> flags(buffer.size());
  for (const auto& r : collection.records()) {
    for (std::size_t i = 0; i < buffer.size(); ++i) flags[i] = r.learner->classify(buffer[i]).error;
    ev.push(r.id, flags);
  }
  return ev;
}

std::optional<std::uint64_t> choose_reuse(const Collection& collection, const BufferEvaluation& ev) {
  const auto& records = collection.records();
  if (records.empty()) return std::nullopt;
  std::optional<std::uint64_t> best;
  if (ev.length == 0) {
    double best_acc = -1;
    for (const auto& r : records) {
      if (r.lifetime_accuracy() > best_acc) {
        best_acc = r.lifetime_accuracy();
        best = r.id;
      }
    }
    return best;
  }
  std::size_t best_correct = 0;
  for (const auto& r : records) {
    const std::size_t c = ev.correct[ev.index_of(r.id)];
    if (!best || c > best_correct) {
      best = r.id;
      best_correct = c;
    }
  }
  return best;
}

std::optional<ReuseChoice> select_reuse(Collection& collection, std::span<const Instance> buffer) {
  const auto id = choose_reuse(collection, evaluate_on_buffer(collection, buffer));
  if (!id) return std::nullopt;
  ClassifierRecord& source = collection.at(*id);
  ++source.reuse_count;
  return ReuseChoice{source.learner->deep_copy(), *id};
}

std::vector<Representation> represent_classifiers(Collection& collection, double m, std::uint64_t min_obs) {
  struct Pair {
    SimilarityMatrix::Key key;
    double sim;
  };
  std::vector<Pair> pairs;
  for (const auto& [key, stats] : collection.similarity().entries()) {
    if (stats.seen >= min_obs && stats.seen > 0 && stats.similarity() >= m) {
      pairs.push_back({key, stats.similarity()});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.sim > b.sim; });

  std::vector<Representation> out;
  for (const Pair& p : pairs) {
    ClassifierRecord* a = collection.find(p.key.first);
    ClassifierRecord* b = collection.find(p.key.second);
    if (a == nullptr || b == nullptr) continue;
    // a has the lower id and wins ties.
    ClassifierRecord* survivor = b->lifetime_accuracy() > a->lifetime_accuracy() ? b : a;
    ClassifierRecord* loser = survivor == a ? b : a;
    const Representation rep{survivor->id, loser->id, loser->fade_points};
    survivor->fade_points += rep.points;
    survivor->inherited_points += rep.points;
    collection.erase(rep.deleted);
    out.push_back(rep);
  }
  return out;
}

std::vector<std::uint64_t> fade_classifiers(Collection& collection, std::int64_t f,
                                            std::optional<std::uint64_t> reused,
                                            std::optional<std::uint64_t> saved) {
  std::vector<std::uint64_t> dead;
  for (const auto& r : collection.records()) {
    ClassifierRecord& rec = collection.at(r.id);
    if (reused && rec.id == *reused) {
      rec.fade_points += f;
      ++rec.drifts_survived;
    } else if (saved && rec.id == *saved) {
      continue;
    } else {
      rec.fade_points -= 1;
      ++rec.drifts_survived;
    }
    if (rec.fade_points <= 0) dead.push_back(rec.id);
  }
  for (const auto id : dead) collection.erase(id);
  return dead;
}

std::vector<std::uint64_t> enforce_memory_cap(Collection& collection, std::size_t cap,
                                              std::optional<std::uint64_t> protected_id) {
  std::vector<std::uint64_t> evicted;
  while (collection.size() > 1 && collection.total_size() > cap) {
    const ClassifierRecord* victim = nullptr;
    for (const auto& r : collection.records()) {
      if (protected_id && r.id == *protected_id) continue;
      if (victim == nullptr || r.fade_points < victim->fade_points) victim = &r;
    }
    if (victim == nullptr) break;
    const std::uint64_t id = victim->id;
    collection.erase(id);
    evicted.push_back(id);
  }
  return evicted;
}

}  // namespace ecpf::meta
