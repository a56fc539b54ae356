#pragma once

#include <cstdint>
#include <vector>

#include "ecpf/meta/framework.hpp"
#include "ecpf/meta/record.hpp"

namespace ecpf::meta {

// A single current classifier drawn from the collection and trained in
// place. At a drift it waits for b_min buffered instances, then reuses a
// stored classifier that is accurate on the buffer or that behaves like a
// candidate trained on the even buffer positions (compared on the odd
// ones); otherwise the candidate joins the collection.
class Cpf final : public Framework {
 public:
  Cpf(FrameworkConfig config, SchemaPtr schema);

  std::size_t predict(const Instance& instance) override;
  drift::DriftSignal train(const Instance& instance, std::uint64_t index) override;
  void notify_true_drift(std::uint64_t index) override { detector_->mark_true_drift(index); }

  std::size_t size_estimate() const override { return collection_.total_size(); }
  std::uint64_t drifts_detected() const override { return drift_count_; }
  std::size_t collection_size() const override { return collection_.size(); }
  std::size_t max_collection_size() const override { return max_collection_; }
  FrameworkKind kind() const noexcept override { return FrameworkKind::cpf; }

  const Collection& collection() const noexcept { return collection_; }
  std::uint64_t current_id() const noexcept { return current_; }
  bool drift_pending() const noexcept { return pending_; }
  const std::vector<Instance>& buffer() const noexcept { return buffer_; }

 private:
  void decide(std::uint64_t index);
  ClassifierRecord& current() { return collection_.at(current_); }

  FrameworkConfig config_;
  SchemaPtr schema_;
  drift::DetectorPtr detector_;
  Collection collection_;
  std::uint64_t current_ = 0;
  std::uint64_t next_id_ = 1;
  std::vector<Instance> buffer_;
  bool pending_ = false;
  std::uint64_t drift_count_ = 0;
  std::size_t max_collection_ = 0;
  std::size_t last_prediction_ = 0;
};

}  // namespace ecpf::meta
