#pragma once

#include <cstdint>
#include <vector>

#include "ecpf/meta/framework.hpp"

namespace ecpf::meta {

// One learner, replaced at every drift by a fresh learner trained on the
// warning buffer.
class Baseline final : public Framework {
 public:
  Baseline(FrameworkConfig config, SchemaPtr schema);

  std::size_t predict(const Instance& instance) override;
  drift::DriftSignal train(const Instance& instance, std::uint64_t index) override;
  void notify_true_drift(std::uint64_t index) override { detector_->mark_true_drift(index); }

  std::size_t size_estimate() const override { return learner_->size_estimate(); }
  std::uint64_t drifts_detected() const override { return drift_count_; }
  FrameworkKind kind() const noexcept override { return FrameworkKind::baseline; }

  const learn::Learner& learner() const noexcept { return *learner_; }

 private:
  FrameworkConfig config_;
  SchemaPtr schema_;
  drift::DetectorPtr detector_;
  learn::LearnerPtr learner_;
  std::vector<Instance> buffer_;
  std::uint64_t drift_count_ = 0;
  std::size_t last_prediction_ = 0;
};

}  // namespace ecpf::meta
