#include "ecpf/drift/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ecpf/core/errors.hpp"

namespace ecpf::drift {

std::string_view to_string(DriftSignal signal) noexcept {
  switch (signal) {
    case DriftSignal::stable: return "stable";
    case DriftSignal::warning: return "warning";
    case DriftSignal::drift: return "drift";
  }
  return "unknown";
}

std::string_view to_string(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::oracle: return "oracle";
    case DetectorKind::hddm_a: return "hddm_a";
    case DetectorKind::rddm: return "rddm";
  }
  return "unknown";
}

DetectorKind parse_detector_kind(std::string_view name) {
  if (name == "oracle") return DetectorKind::oracle;
  if (name == "hddm_a") return DetectorKind::hddm_a;
  if (name == "rddm") return DetectorKind::rddm;
  throw ConfigError("unknown detector '" + std::string(name) + "' (expected oracle, hddm_a or rddm)");
}

DriftSignal DriftDetector::input(bool error, std::uint64_t index) {
  if (last_index_ && index <= *last_index_) {
    throw UsageError("detector index " + std::to_string(index) + " does not follow " +
                     std::to_string(*last_index_));
  }
  last_index_ = index;
  return update(error, index);
}

void DriftDetector::reset() {
  last_index_.reset();
  clear();
}

// ---------------------------------------------------------------- oracle

OracleDetector::OracleDetector(std::size_t lead, std::vector<std::uint64_t> positions)
    : lead_(lead), positions_(std::move(positions)) {
  std::sort(positions_.begin(), positions_.end());
  positions_.erase(std::unique(positions_.begin(), positions_.end()), positions_.end());
}

void OracleDetector::mark_true_drift(std::uint64_t index) {
  const auto it = std::lower_bound(positions_.begin(), positions_.end(), index);
  if (it != positions_.end() && *it == index) return;
  const auto offset = static_cast<std::size_t>(it - positions_.begin());
  positions_.insert(it, index);
  if (offset < next_) ++next_;
}

DriftSignal OracleDetector::update(bool, std::uint64_t index) {
  while (next_ < positions_.size() && positions_[next_] <= index) {
    const std::uint64_t p = positions_[next_];
    if (index >= p + lead_) {
      ++next_;
      // A later position already passed its own lead window is folded into this drift.
      while (next_ < positions_.size() && positions_[next_] + lead_ <= index) ++next_;
      return DriftSignal::drift;
    }
    return DriftSignal::warning;
  }
  return DriftSignal::stable;
}

// ---------------------------------------------------------------- HDDM-A

namespace {

bool mean_increased(double c_min, double n_min, double total_c, double total_n, double confidence) {
  if (n_min == total_n) return false;
  const double m = (total_n - n_min) / n_min * (1.0 / total_n);
  const double bound = std::sqrt(m / 2.0 * std::log(2.0 / confidence));
  return total_c / total_n - c_min / n_min >= bound;
}

}  // namespace

HddmA::HddmA(double drift_confidence, double warning_confidence)
    : drift_confidence_(drift_confidence), warning_confidence_(warning_confidence) {
  DetectorSpec spec;
  spec.drift_confidence = drift_confidence;
  spec.warning_confidence = warning_confidence;
  validate(spec);
}

void HddmA::clear() { n_min_ = c_min_ = n_max_ = c_max_ = total_n_ = total_c_ = 0; }

DriftSignal HddmA::update(bool error, std::uint64_t) {
  const double value = error ? 1.0 : 0.0;
  total_n_ += 1;
  total_c_ += value;
  if (n_min_ == 0) {
    n_min_ = total_n_;
    c_min_ = total_c_;
  }
  if (n_max_ == 0) {
    n_max_ = total_n_;
    c_max_ = total_c_;
  }
  const double log_term = std::log(1.0 / drift_confidence_);
  const double bound_total = std::sqrt(1.0 / (2.0 * total_n_) * log_term);
  const double mean = total_c_ / total_n_;
  if (c_min_ / n_min_ + std::sqrt(1.0 / (2.0 * n_min_) * log_term) >= mean + bound_total) {
    c_min_ = total_c_;
    n_min_ = total_n_;
  }
  if (c_max_ / n_max_ - std::sqrt(1.0 / (2.0 * n_max_) * log_term) <= mean - bound_total) {
    c_max_ = total_c_;
    n_max_ = total_n_;
  }
  if (mean_increased(c_min_, n_min_, total_c_, total_n_, drift_confidence_)) {
    clear();
    return DriftSignal::drift;
  }
  if (mean_increased(c_min_, n_min_, total_c_, total_n_, warning_confidence_)) return DriftSignal::warning;
  return DriftSignal::stable;
}

// ---------------------------------------------------------------- RDDM

Rddm::Rddm(RddmOptions options) : opt_(options) {
  DetectorSpec spec;
  spec.kind = DetectorKind::rddm;
  spec.rddm = options;
  validate(spec);
  clear();
}

void Rddm::reset_learning(bool after_change) {
  n_ = 1;
  p_ = 1;
  s_ = 0;
  if (after_change) {
    p_min_ = s_min_ = ps_min_ = std::numeric_limits<double>::max();
  }
}

void Rddm::clear() {
  stored_.assign(opt_.stable_concept_size, 0);
  stored_count_ = 0;
  first_pos_ = 0;
  last_pos_ = -1;
  last_warn_pos_ = -1;
  last_warn_inst_ = -1;
  inst_num_ = 0;
  rebuild_ = false;
  change_ = false;
  reset_learning(false);
  p_min_ = s_min_ = ps_min_ = std::numeric_limits<double>::max();
}

DriftSignal Rddm::update(bool error, std::uint64_t) {
  const auto cap = static_cast<std::ptrdiff_t>(opt_.stable_concept_size);
  const auto min_n = static_cast<double>(opt_.min_instances);
  if (rebuild_) {
    reset_learning(change_);
    if (last_warn_pos_ != -1) {
      first_pos_ = static_cast<std::size_t>(last_warn_pos_);
      std::ptrdiff_t count = last_pos_ - last_warn_pos_ + 1;
      if (count <= 0) count += cap;
      stored_count_ = static_cast<std::size_t>(count);
    }
    std::size_t pos = first_pos_;
    for (std::size_t i = 0; i < stored_count_; ++i) {
      p_ += (static_cast<double>(stored_[pos]) - p_) / n_;
      s_ = std::sqrt(p_ * (1 - p_) / n_);
      if (change_ && n_ > min_n && p_ + s_ < ps_min_) {
        p_min_ = p_;
        s_min_ = s_;
        ps_min_ = p_ + s_;
      }
      n_ += 1;
      pos = (pos + 1) % opt_.stable_concept_size;
    }
    last_warn_pos_ = -1;
    last_warn_inst_ = -1;
    rebuild_ = false;
    change_ = false;
  }

  last_pos_ = (last_pos_ + 1) % cap;
  const std::uint8_t value = error ? 1 : 0;
  stored_[static_cast<std::size_t>(last_pos_)] = value;
  if (stored_count_ < opt_.stable_concept_size) {
    ++stored_count_;
  } else {
    first_pos_ = (first_pos_ + 1) % opt_.stable_concept_size;
    if (last_warn_pos_ == last_pos_) last_warn_pos_ = -1;
  }

  p_ += (static_cast<double>(value) - p_) / n_;
  s_ = std::sqrt(p_ * (1 - p_) / n_);
  ++inst_num_;
  n_ += 1;

  if (n_ <= min_n) return DriftSignal::stable;

  if (p_ + s_ < ps_min_) {
    p_min_ = p_;
    s_min_ = s_;
    ps_min_ = p_ + s_;
  }

  if (p_ + s_ > p_min_ + opt_.drift_level * s_min_) {
    change_ = true;
    rebuild_ = true;
    if (last_warn_inst_ == -1) {
      first_pos_ = static_cast<std::size_t>(last_pos_);
      stored_count_ = 1;
    }
    return DriftSignal::drift;
  }

  bool warning = false;
  if (p_ + s_ > p_min_ + opt_.warning_level * s_min_) {
    if (last_warn_inst_ != -1 &&
        last_warn_inst_ + static_cast<std::int64_t>(opt_.warning_limit) <= inst_num_) {
      change_ = true;
      rebuild_ = true;
      first_pos_ = static_cast<std::size_t>(last_pos_);
      stored_count_ = 1;
      last_warn_pos_ = -1;
      last_warn_inst_ = -1;
      return DriftSignal::drift;
    }
    warning = true;
    if (last_warn_inst_ == -1) {
      last_warn_inst_ = inst_num_;
      last_warn_pos_ = last_pos_;
    }
  } else {
    last_warn_inst_ = -1;
    last_warn_pos_ = -1;
  }
  if (n_ > static_cast<double>(opt_.max_concept_size) && !warning) rebuild_ = true;
  return warning ? DriftSignal::warning : DriftSignal::stable;
}

// ---------------------------------------------------------------- factory

void validate(const DetectorSpec& spec) {
  const auto in_unit = [](double v) { return v > 0 && v < 1; };
  switch (spec.kind) {
    case DetectorKind::oracle: break;
    case DetectorKind::hddm_a:
      if (!in_unit(spec.drift_confidence) || !in_unit(spec.warning_confidence)) {
        throw ConfigError("hddm_a confidences must lie in (0, 1)");
      }
      if (!(spec.warning_confidence > spec.drift_confidence)) {
        throw ConfigError("hddm_a warning confidence must be looser than drift confidence");
      }
      break;
    case DetectorKind::rddm:
      if (!(spec.rddm.warning_level > 0) || !(spec.rddm.drift_level > spec.rddm.warning_level)) {
        throw ConfigError("rddm requires 0 < warning_level < drift_level");
      }
      if (spec.rddm.stable_concept_size == 0 || spec.rddm.min_instances == 0 ||
          spec.rddm.max_concept_size == 0 || spec.rddm.warning_limit == 0) {
        throw ConfigError("rddm window and limit parameters must be positive");
      }
      break;
  }
}

DetectorPtr make_detector(const DetectorSpec& spec) {
  validate(spec);
  switch (spec.kind) {
    case DetectorKind::oracle: return std::make_unique<OracleDetector>(spec.lead);
    case DetectorKind::hddm_a: return std::make_unique<HddmA>(spec.drift_confidence, spec.warning_confidence);
    case DetectorKind::rddm: return std::make_unique<Rddm>(spec.rddm);
  }
  throw ConfigError("unknown detector kind");
}

}  // namespace ecpf::drift
