#include "ecpf/meta/cpf.hpp"

#include <algorithm>

namespace ecpf::meta {

namespace {

ClassifierRecord fresh_record(std::uint64_t id, learn::LearnerPtr learner, std::int64_t f, std::uint64_t drift) {
  ClassifierRecord r;
  r.id = id;
  r.learner = std::move(learner);
  r.fade_points = f;
  r.created_at_drift = drift;
  return r;
}

}  // namespace

Cpf::Cpf(FrameworkConfig config, SchemaPtr schema) : config_(std::move(config)), schema_(std::move(schema)) {
  validate(config_);
  detector_ = drift::make_detector(config_.detector);
  current_ = collection_.add(fresh_record(next_id_++, learn::make_learner(config_.learner, schema_), config_.f, 0)).id;
  max_collection_ = 1;
}

std::size_t Cpf::predict(const Instance& x) {
  last_prediction_ = current().learner->predict(x);
  return last_prediction_;
}

drift::DriftSignal Cpf::train(const Instance& x, std::uint64_t index) {
  ClassifierRecord& cur = current();
  ++cur.lifetime_seen;
  if (last_prediction_ == x.label) ++cur.lifetime_correct;

  if (pending_) {
    buffer_.push_back(x);
    if (buffer_.size() >= config_.b_min) decide(index);
    return drift::DriftSignal::warning;
  }

  const drift::DriftSignal signal = detector_->input(last_prediction_ != x.label, index);
  switch (signal) {
    case drift::DriftSignal::warning:
      buffer_.push_back(x);
      break;
    case drift::DriftSignal::drift:
      if (buffer_.size() >= config_.b_min) {
        decide(index);
      } else {
        pending_ = true;
      }
      break;
    case drift::DriftSignal::stable:
      cur.learner->train_on(x);
      buffer_.clear();
      break;
  }
  return signal;
}

void Cpf::decide(std::uint64_t index) {
  pending_ = false;
  ++drift_count_;
  DriftEvent ev;
  ev.drift = drift_count_;
  ev.instance = index;
  ev.buffer_length = buffer_.size();

  const BufferEvaluation evaluation = evaluate_on_buffer(collection_, buffer_);
  std::optional<std::uint64_t> reused;
  if (const auto best = choose_reuse(collection_, evaluation)) {
    const double acc = static_cast<double>(evaluation.correct[evaluation.index_of(*best)]) /
                       static_cast<double>(evaluation.length);
    if (acc >= config_.m) reused = best;
  }

  learn::LearnerPtr candidate;
  if (!reused) {
    candidate = learn::make_learner(config_.learner, schema_);
    std::vector<Instance> odd;
    for (std::size_t i = 0; i < buffer_.size(); ++i) {
      if (i % 2 == 0) {
        candidate->train_on(buffer_[i]);
      } else {
        odd.push_back(buffer_[i]);
      }
    }
    std::vector<bool> cand_errors(odd.size());
    for (std::size_t i = 0; i < odd.size(); ++i) cand_errors[i] = candidate->classify(odd[i]).error;
    double best_sim = -1;
    for (const auto& r : collection_.records()) {
      std::size_t agree = 0;
      for (std::size_t i = 0; i < odd.size(); ++i) {
        if (r.learner->classify(odd[i]).error == cand_errors[i]) ++agree;
      }
      const double sim = odd.empty() ? 0.0 : static_cast<double>(agree) / static_cast<double>(odd.size());
      if (sim > best_sim) {
        best_sim = sim;
        if (sim >= config_.m) reused = r.id;
      }
    }
  }

  for (std::size_t i = 0; i < evaluation.ids.size(); ++i) {
    ClassifierRecord& r = collection_.at(evaluation.ids[i]);
    r.lifetime_seen += evaluation.length;
    r.lifetime_correct += evaluation.correct[i];
  }

  std::optional<std::uint64_t> saved;
  if (reused) {
    ++collection_.at(*reused).reuse_count;
    current_ = *reused;
  } else {
    for (std::size_t i = 1; i < buffer_.size(); i += 2) candidate->train_on(buffer_[i]);
    ClassifierRecord rec = fresh_record(next_id_++, std::move(candidate), config_.f, drift_count_);
    saved = collection_.add(std::move(rec)).id;
    current_ = *saved;
  }
  ev.saved = saved;

  collection_.similarity().update(evaluation);
  const std::optional<std::uint64_t> original = reused;
  ev.representations = represent_classifiers(collection_, config_.m, config_.min_obs);
  for (const Representation& rep : ev.representations) {
    if (reused && rep.deleted == *reused) reused = rep.survivor;
    if (rep.deleted == current_) current_ = rep.survivor;
  }
  if (reused && reused != original) ++collection_.at(*reused).reuse_count;
  ev.reused = reused;

  ev.deletions = fade_classifiers(collection_, config_.f, reused, saved);
  if (collection_.find(current_) == nullptr) {
    current_ = collection_.add(fresh_record(next_id_++, learn::make_learner(config_.learner, schema_), config_.f,
                                            drift_count_))
                   .id;
    ev.saved = current_;
  }
  if (config_.memory_cap) {
    const auto evicted = enforce_memory_cap(collection_, *config_.memory_cap, current_);
    ev.deletions.insert(ev.deletions.end(), evicted.begin(), evicted.end());
  }

  buffer_.clear();
  max_collection_ = std::max(max_collection_, collection_.size());
  if (tracing()) {
    fill_state(ev, collection_, evaluation);
    emit(ev);
  }
}

}  // namespace ecpf::meta
