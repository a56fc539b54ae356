#include "ecpf/meta/ecpf.hpp"

namespace ecpf::meta {

Ecpf::Ecpf(FrameworkConfig config, SchemaPtr schema)
    : config_(std::move(config)), schema_(std::move(schema)) {
  validate(config_);
  detector_ = drift::make_detector(config_.detector);
  c_new_ = learn::make_learner(config_.learner, schema_);
}

bool Ecpf::leader_is_reused() const noexcept {
  return c_reused_ != nullptr && reused_count_.correct >= new_count_.correct;
}

std::size_t Ecpf::predict(const Instance& x) {
  pending_leader_reused_ = leader_is_reused();
  pending_new_ = c_new_->predict(x);
  pending_reused_ = c_reused_ ? c_reused_->predict(x) : pending_new_;
  return pending_leader_reused_ ? pending_reused_ : pending_new_;
}

drift::DriftSignal Ecpf::train(const Instance& x, std::uint64_t index) {
  const std::size_t emitted = pending_leader_reused_ ? pending_reused_ : pending_new_;
  ++new_count_.seen;
  if (pending_new_ == x.label) ++new_count_.correct;
  if (c_reused_) {
    ++reused_count_.seen;
    if (pending_reused_ == x.label) ++reused_count_.correct;
  }

  const drift::DriftSignal signal = detector_->input(emitted != x.label, index);
  switch (signal) {
    case drift::DriftSignal::warning:
      buffer_.push_back(x);
      break;
    case drift::DriftSignal::drift:
      handle_drift(index);
      break;
    case drift::DriftSignal::stable:
      c_new_->train_on(x);
      if (c_reused_) c_reused_->train_on(x);
      buffer_.clear();
      break;
  }
  return signal;
}

void Ecpf::handle_drift(std::uint64_t index) {
  if (observer_) observer_(*this);
  ++drift_count_;
  DriftEvent ev;
  ev.drift = drift_count_;
  ev.instance = index;
  ev.buffer_length = buffer_.size();

  // Store the current leader as a new record.
  const bool reused_leads = leader_is_reused();
  const SegmentCounter& lead_count = reused_leads ? reused_count_ : new_count_;
  ClassifierRecord saved;
  saved.id = next_id_++;
  saved.learner = reused_leads ? std::move(c_reused_) : std::move(c_new_);
  saved.fade_points = config_.f;
  saved.lifetime_correct = lead_count.correct;
  saved.lifetime_seen = lead_count.seen;
  saved.created_at_drift = drift_count_;
  const std::uint64_t saved_id = collection_.add(std::move(saved)).id;
  ev.saved = saved_id;

  // Pick the stored classifier that does best on the buffer.
  const BufferEvaluation evaluation = evaluate_on_buffer(collection_, buffer_);
  std::optional<std::uint64_t> reused = choose_reuse(collection_, evaluation);
  for (std::size_t i = 0; i < evaluation.ids.size(); ++i) {
    if (evaluation.ids[i] == saved_id) continue;
    ClassifierRecord& r = collection_.at(evaluation.ids[i]);
    r.lifetime_seen += evaluation.length;
    r.lifetime_correct += evaluation.correct[i];
  }
  c_reused_.reset();
  if (reused) {
    ClassifierRecord& source = collection_.at(*reused);
    ++source.reuse_count;
    c_reused_ = source.learner->deep_copy();
  }

  c_new_ = learn::make_learner(config_.learner, schema_);
  for (const Instance& x : buffer_) c_new_->train_on(x);

  collection_.similarity().update(evaluation);
  const std::optional<std::uint64_t> original = reused;
  ev.representations = represent_classifiers(collection_, config_.m, config_.min_obs);
  for (const Representation& rep : ev.representations) {
    if (reused && rep.deleted == *reused) reused = rep.survivor;
  }
  if (reused && reused != original) ++collection_.at(*reused).reuse_count;
  ev.reused = reused;

  ev.deletions = fade_classifiers(collection_, config_.f, reused, saved_id);
  if (config_.memory_cap) {
    const auto evicted = enforce_memory_cap(collection_, *config_.memory_cap,
                                            collection_.find(saved_id) ? std::optional(saved_id) : std::nullopt);
    ev.deletions.insert(ev.deletions.end(), evicted.begin(), evicted.end());
  }
  reused_source_ = reused;

  buffer_.clear();
  new_count_ = {};
  reused_count_ = {};
  max_collection_ = std::max(max_collection_, collection_.size());

  if (tracing()) {
    fill_state(ev, collection_, evaluation);
    emit(ev);
  }
}

std::size_t Ecpf::size_estimate() const {
  std::size_t total = collection_.total_size() + c_new_->size_estimate();
  if (c_reused_) total += c_reused_->size_estimate();
  return total;
}

}  // namespace ecpf::meta
