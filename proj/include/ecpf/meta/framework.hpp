#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>

#include "ecpf/drift/detector.hpp"
#include "ecpf/learn/learner.hpp"
#include "ecpf/meta/trace.hpp"

namespace ecpf::meta {

enum class FrameworkKind { ecpf, cpf, baseline };

std::string_view to_string(FrameworkKind kind) noexcept;
FrameworkKind parse_framework_kind(std::string_view name);  // throws ConfigError

struct FrameworkConfig {
  FrameworkKind kind = FrameworkKind::ecpf;
  double m = 0.95;
  std::int64_t f = 15;
  std::size_t b_min = 60;     // CPF minimum buffer before deciding
  std::uint64_t min_obs = 60;  // shared observations before a representation
  std::optional<std::size_t> memory_cap;
  drift::DetectorSpec detector;
  learn::LearnerSpec learner;
};

void validate(const FrameworkConfig& config);  // throws ConfigError

using TraceSink = std::function<void(const DriftEvent&)>;

// A stream classifier that manages its own models. For each instance the
// caller first asks for a prediction and then hands the same instance back
// for training, buffering or drift handling.
class Framework {
 public:
  virtual ~Framework() = default;

  virtual std::size_t predict(const Instance& instance) = 0;
  // Must follow predict() for the same instance.
  virtual drift::DriftSignal train(const Instance& instance, std::uint64_t index) = 0;

  struct Step {
    std::size_t prediction;
    drift::DriftSignal signal;
  };
  Step process(const Instance& instance, std::uint64_t index) {
    const std::size_t p = predict(instance);
    return {p, train(instance, index)};
  }

  // Ground-truth drift position of the upcoming instance; call before
  // predict(). Only the oracle detector uses it.
  virtual void notify_true_drift(std::uint64_t index) = 0;

  virtual std::size_t size_estimate() const = 0;
  virtual std::uint64_t drifts_detected() const = 0;
  virtual std::size_t collection_size() const { return 0; }
  virtual std::size_t max_collection_size() const { return 0; }
  virtual FrameworkKind kind() const noexcept = 0;

  void set_trace(TraceSink sink) { trace_ = std::move(sink); }

 protected:
  void emit(const DriftEvent& event) const {
    if (trace_) trace_(event);
  }
  bool tracing() const noexcept { return static_cast<bool>(trace_); }

 private:
  TraceSink trace_;
};

using FrameworkPtr = std::unique_ptr<Framework>;

FrameworkPtr make_framework(const FrameworkConfig& config, SchemaPtr schema);

}  // namespace ecpf::meta
