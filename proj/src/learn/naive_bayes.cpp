#include "ecpf/learn/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ecpf/simd/kernels.hpp"

namespace ecpf::learn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t argmax_first(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

StatisticsLayout::StatisticsLayout(const Schema& schema) : class_count(schema.class_count()) {
  for (std::size_t i = 0; i < schema.attribute_count(); ++i) {
    const auto& a = schema.attribute(i);
    if (a.is_nominal()) {
      nominal_attrs.push_back(i);
      nominal_values.push_back(a.value_count());
      nominal_offset.push_back(nominal_cells);
      nominal_cells += a.value_count() * class_count;
    } else {
      numeric_attrs.push_back(i);
    }
  }
}

NaiveBayesStatistics::NaiveBayesStatistics(LayoutPtr layout)
    : NaiveBayesStatistics(layout, std::vector<double>(layout->class_count, 0.0)) {}

NaiveBayesStatistics::NaiveBayesStatistics(LayoutPtr layout, std::vector<double> initial_class_weights)
    : layout_(std::move(layout)), class_weight_(std::move(initial_class_weights)) {
  const std::size_t k = layout_->class_count;
  const std::size_t cells = k * layout_->numeric_attrs.size();
  class_weight_.resize(k, 0.0);
  obs_.assign(k, 0.0);
  nominal_.assign(layout_->nominal_cells, 0.0);
  mean_.assign(cells, 0.0);
  m2_.assign(cells, 0.0);
  min_.assign(cells, std::numeric_limits<double>::infinity());
  max_.assign(cells, -std::numeric_limits<double>::infinity());
  inv_var_.assign(cells, 0.0);
  log_var_sum_.assign(k, 0.0);
}

double NaiveBayesStatistics::variance_floor(double mean) noexcept {
  return 1e-10 * std::max(1.0, mean * mean);
}

double NaiveBayesStatistics::variance(std::size_t cls, std::size_t slot) const noexcept {
  const double n = obs_[cls];
  return n > 1.0 ? m2_[cell(cls, slot)] / (n - 1.0) : 0.0;
}

double NaiveBayesStatistics::total_weight() const noexcept {
  double t = 0;
  for (const double w : class_weight_) t += w;
  return t;
}

bool NaiveBayesStatistics::is_pure() const noexcept {
  int positive = 0;
  for (const double w : class_weight_) {
    if (w > 0) ++positive;
  }
  return positive < 2;
}

void NaiveBayesStatistics::update(const Instance& x) {
  const std::size_t c = x.label;
  const std::size_t k = layout_->class_count;
  class_weight_[c] += 1.0;
  obs_[c] += 1.0;
  total_obs_ += 1.0;
  for (std::size_t s = 0; s < layout_->nominal_attrs.size(); ++s) {
    const auto v = static_cast<std::size_t>(x.values[layout_->nominal_attrs[s]]);
    nominal_[layout_->nominal_offset[s] + v * k + c] += 1.0;
  }
  const double n = obs_[c];
  for (std::size_t j = 0; j < layout_->numeric_attrs.size(); ++j) {
    const double value = x.values[layout_->numeric_attrs[j]];
    const std::size_t i = cell(c, j);
    const double delta = value - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (value - mean_[i]);
    min_[i] = std::min(min_[i], value);
    max_[i] = std::max(max_[i], value);
  }
  refresh_class(c);
}

void NaiveBayesStatistics::refresh_class(std::size_t c) {
  double log_sum = 0.0;
  for (std::size_t j = 0; j < layout_->numeric_attrs.size(); ++j) {
    const std::size_t i = cell(c, j);
    const double var = std::max(variance(c, j), variance_floor(mean_[i]));
    inv_var_[i] = 1.0 / var;
    log_sum += std::log(var);
  }
  log_var_sum_[c] = log_sum;
}

std::size_t NaiveBayesStatistics::majority_class() const noexcept { return argmax_first(class_weight_); }

std::vector<double> NaiveBayesStatistics::log_joint(const Instance& x) const {
  const std::size_t k = layout_->class_count;
  const std::size_t numeric = layout_->numeric_attrs.size();
  std::vector<double> out(k, kNegInf);
  const double total = total_weight();
  if (total <= 0) return out;

  thread_local std::vector<double> gathered;
  gathered.resize(numeric);
  for (std::size_t j = 0; j < numeric; ++j) gathered[j] = x.values[layout_->numeric_attrs[j]];
  const double log_two_pi = std::log(2.0 * std::numbers::pi);

  for (std::size_t c = 0; c < k; ++c) {
    if (class_weight_[c] <= 0) continue;
    double score = std::log(class_weight_[c] / total);
    const double n = obs_[c];
    for (std::size_t s = 0; s < layout_->nominal_attrs.size(); ++s) {
      const auto v = static_cast<std::size_t>(x.values[layout_->nominal_attrs[s]]);
      const double count = nominal_[layout_->nominal_offset[s] + v * k + c];
      score += std::log((count + 1.0) / (n + static_cast<double>(layout_->nominal_values[s])));
    }
    if (numeric > 0) {
      if (n <= 0) continue;  // no Gaussian evidence for this class
      const std::size_t base = c * numeric;
      const double quad = simd::weighted_sq_dist(
          gathered, std::span<const double>(mean_).subspan(base, numeric),
          std::span<const double>(inv_var_).subspan(base, numeric));
      score += -0.5 * (quad + log_var_sum_[c] + static_cast<double>(numeric) * log_two_pi);
    }
    out[c] = score;
  }
  return out;
}

std::size_t NaiveBayesStatistics::predict(const Instance& x) const {
  const auto scores = log_joint(x);
  const std::size_t best = argmax_first(scores);
  if (scores[best] == kNegInf) return majority_class();
  return best;
}

std::size_t NaiveBayesStatistics::stat_count() const noexcept {
  const std::size_t k = layout_->class_count;
  return 3 * k + layout_->nominal_cells + 5 * k * layout_->numeric_attrs.size();
}

NaiveBayes::NaiveBayes(SchemaPtr schema)
    : Learner(schema), stats_(std::make_shared<const StatisticsLayout>(*schema)) {}

std::size_t NaiveBayes::size_estimate() const {
  return kNodeBytes + stats_.stat_count() * kStatBytes;
}

}  // namespace ecpf::learn
