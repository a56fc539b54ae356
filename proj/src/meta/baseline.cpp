#include "ecpf/meta/baseline.hpp"

namespace ecpf::meta {

Baseline::Baseline(FrameworkConfig config, SchemaPtr schema)
    : config_(std::move(config)), schema_(std::move(schema)) {
  validate(config_);
  detector_ = drift::make_detector(config_.detector);
  learner_ = learn::make_learner(config_.learner, schema_);
}

std::size_t Baseline::predict(const Instance& x) {
  last_prediction_ = learner_->predict(x);
  return last_prediction_;
}

drift::DriftSignal Baseline::train(const Instance& x, std::uint64_t index) {
  const drift::DriftSignal signal = detector_->input(last_prediction_ != x.label, index);
  switch (signal) {
    case drift::DriftSignal::warning:
      buffer_.push_back(x);
      break;
    case drift::DriftSignal::drift: {
      ++drift_count_;
      const std::size_t buffered = buffer_.size();
      learner_ = learn::make_learner(config_.learner, schema_);
      for (const Instance& b : buffer_) learner_->train_on(b);
      buffer_.clear();
      if (tracing()) {
        DriftEvent ev;
        ev.drift = drift_count_;
        ev.instance = index;
        ev.buffer_length = buffered;
        emit(ev);
      }
      break;
    }
    case drift::DriftSignal::stable:
      learner_->train_on(x);
      buffer_.clear();
      break;
  }
  return signal;
}

}  // namespace ecpf::meta
