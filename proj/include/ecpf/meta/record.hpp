#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ecpf/learn/learner.hpp"
#include "ecpf/meta/similarity.hpp"

namespace ecpf::meta {

struct ClassifierRecord {
  std::uint64_t id = 0;
  learn::LearnerPtr learner;
  std::int64_t fade_points = 0;
  std::uint64_t lifetime_correct = 0;
  std::uint64_t lifetime_seen = 0;
  std::uint64_t created_at_drift = 0;
  std::uint64_t reuse_count = 0;       // r
  std::uint64_t drifts_survived = 0;   // d
  std::int64_t inherited_points = 0;   // Σ points taken over through representation

  double lifetime_accuracy() const noexcept {
    return lifetime_seen == 0 ? 0.0
                              : static_cast<double>(lifetime_correct) / static_cast<double>(lifetime_seen);
  }
  // (r + 1)·f + inherited − (d − r)
  std::int64_t closed_form_points(std::int64_t f) const noexcept {
    const auto r = static_cast<std::int64_t>(reuse_count);
    const auto d = static_cast<std::int64_t>(drifts_survived);
    return (r + 1) * f + inherited_points - (d - r);
  }
};

struct Representation {
  std::uint64_t survivor = 0;
  std::uint64_t deleted = 0;
  std::int64_t points = 0;  // fade points moved to the survivor
  bool operator==(const Representation&) const = default;
};

// Stored classifiers in ascending id order plus their similarity matrix.
class Collection {
 public:
  const std::vector<ClassifierRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  ClassifierRecord* find(std::uint64_t id) noexcept;
  const ClassifierRecord* find(std::uint64_t id) const noexcept;
  ClassifierRecord& at(std::uint64_t id);
  // Ids must be added in increasing order.
  ClassifierRecord& add(ClassifierRecord record);
  void erase(std::uint64_t id);

  SimilarityMatrix& similarity() noexcept { return sim_; }
  const SimilarityMatrix& similarity() const noexcept { return sim_; }

  std::size_t total_size() const;

 private:
  std::vector<ClassifierRecord> records_;
  SimilarityMatrix sim_;
};

// Every stored classifier classifies every buffer instance.
BufferEvaluation evaluate_on_buffer(const Collection& collection, std::span<const Instance> buffer);

// Record with the most correct buffer classifications, lowest id on ties.
// With an empty buffer the highest lifetime accuracy decides. Absent for an
// empty collection.
std::optional<std::uint64_t> choose_reuse(const Collection& collection, const BufferEvaluation& evaluation);

struct ReuseChoice {
  learn::LearnerPtr copy;
  std::uint64_t source_id = 0;
};

// choose_reuse over a fresh evaluation; returns a deep copy of the chosen
// learner and increments the source's reuse count.
std::optional<ReuseChoice> select_reuse(Collection& collection, std::span<const Instance> buffer);

// For every pair with seen >= min_obs and Sim >= m, in descending Sim order
// (ties by id pair), skipping pairs that lost a member earlier in the pass:
// the record with the higher lifetime accuracy (lowest id on ties) survives
// and takes over the other's fade points.
std::vector<Representation> represent_classifiers(Collection& collection, double m, std::uint64_t min_obs);

// reused gains f, saved is untouched, every other record loses a point;
// records left with no points are deleted and returned. drifts_survived is
// advanced for every record except an unreused fresh save.
std::vector<std::uint64_t> fade_classifiers(Collection& collection, std::int64_t f,
                                            std::optional<std::uint64_t> reused,
                                            std::optional<std::uint64_t> saved);

// While the summed size exceeds cap, evicts the record with the fewest fade
// points (oldest on ties). The protected record and the last remaining
// record are never evicted.
std::vector<std::uint64_t> enforce_memory_cap(Collection& collection, std::size_t cap,
                                              std::optional<std::uint64_t> protected_id);

}  // namespace ecpf::meta
