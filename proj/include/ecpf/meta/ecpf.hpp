#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ecpf/meta/framework.hpp"
#include "ecpf/meta/record.hpp"

namespace ecpf::meta {

struct SegmentCounter {
  std::uint64_t correct = 0;
  std::uint64_t seen = 0;
};

// Classifier reuse through conceptual equivalence. A new and a reused
// learner run side by side between drifts and the one with more correct
// classifications since the last drift speaks for the framework. At a drift
// the speaker is stored, the stored classifier that does best on the
// warning buffer is copied for reuse, a new learner starts from the buffer,
// equivalent stored classifiers are merged and idle ones fade out.
class Ecpf final : public Framework {
 public:
  Ecpf(FrameworkConfig config, SchemaPtr schema);

  std::size_t predict(const Instance& instance) override;
  drift::DriftSignal train(const Instance& instance, std::uint64_t index) override;
  void notify_true_drift(std::uint64_t index) override { detector_->mark_true_drift(index); }

  std::size_t size_estimate() const override;
  std::uint64_t drifts_detected() const override { return drift_count_; }
  std::size_t collection_size() const override { return collection_.size(); }
  std::size_t max_collection_size() const override { return max_collection_; }
  FrameworkKind kind() const noexcept override { return FrameworkKind::ecpf; }

  const Collection& collection() const noexcept { return collection_; }
  const learn::Learner& new_learner() const noexcept { return *c_new_; }
  const learn::Learner* reused_learner() const noexcept { return c_reused_.get(); }
  std::optional<std::uint64_t> reused_source() const noexcept { return reused_source_; }
  const SegmentCounter& new_counter() const noexcept { return new_count_; }
  const SegmentCounter& reused_counter() const noexcept { return reused_count_; }
  bool leader_is_reused() const noexcept;
  const std::vector<Instance>& buffer() const noexcept { return buffer_; }
  const FrameworkConfig& config() const noexcept { return config_; }

  // Called at the start of every drift, before any state changes.
  void set_drift_observer(std::function<void(const Ecpf&)> observer) { observer_ = std::move(observer); }

 private:
  void handle_drift(std::uint64_t index);

  FrameworkConfig config_;
  SchemaPtr schema_;
  drift::DetectorPtr detector_;
  Collection collection_;
  learn::LearnerPtr c_new_;
  learn::LearnerPtr c_reused_;
  std::optional<std::uint64_t> reused_source_;
  SegmentCounter new_count_;
  SegmentCounter reused_count_;
  std::vector<Instance> buffer_;
  std::uint64_t next_id_ = 1;
  std::uint64_t drift_count_ = 0;
  std::size_t max_collection_ = 0;

  std::size_t pending_new_ = 0;
  std::size_t pending_reused_ = 0;
  bool pending_leader_reused_ = false;

  std::function<void(const Ecpf&)> observer_;
};

}  // namespace ecpf::meta
