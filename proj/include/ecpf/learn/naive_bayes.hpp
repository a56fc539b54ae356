#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ecpf/learn/learner.hpp"

namespace ecpf::learn {

// Where each attribute's statistics live inside a NaiveBayesStatistics
// block. Built once per schema and shared by every block.
struct StatisticsLayout {
  explicit StatisticsLayout(const Schema& schema);

  std::size_t class_count = 0;
  std::vector<std::size_t> numeric_attrs;   // schema indices of numeric attributes
  std::vector<std::size_t> nominal_attrs;   // schema indices of nominal attributes
  std::vector<std::size_t> nominal_values;  // value count per nominal attribute
  std::vector<std::size_t> nominal_offset;  // start of [value][class] counts
  std::size_t nominal_cells = 0;
};

using LayoutPtr = std::shared_ptr<const StatisticsLayout>;

// Sufficient statistics of one naive-Bayes model: class weights, per-class
// value counts for nominal attributes and per-class Gaussian estimators for
// numeric attributes. Numeric estimators are stored class-major so the
// log-likelihood of one class is a contiguous SIMD reduction.
class NaiveBayesStatistics {
 public:
  explicit NaiveBayesStatistics(LayoutPtr layout);
  NaiveBayesStatistics(LayoutPtr layout, std::vector<double> initial_class_weights);

  void update(const Instance& instance);

  // Majority class of the class weights; lowest index on ties, 0 when empty.
  std::size_t majority_class() const noexcept;
  // argmax of log_joint; lowest index on ties. Falls back to the majority
  // class when every class has zero likelihood.
  std::size_t predict(const Instance& instance) const;
  // log P(c) + Σ log p(x_j | c) per class; -inf for impossible classes.
  std::vector<double> log_joint(const Instance& instance) const;

  const StatisticsLayout& layout() const noexcept { return *layout_; }
  const std::vector<double>& class_weights() const noexcept { return class_weight_; }
  double total_weight() const noexcept;
  bool is_pure() const noexcept;  // < 2 classes with positive weight

  // Observations actually seen (excludes inherited class weight).
  double observations(std::size_t cls) const noexcept { return obs_[cls]; }
  double total_observations() const noexcept { return total_obs_; }

  double nominal_count(std::size_t nominal_slot, std::size_t value, std::size_t cls) const noexcept {
    return nominal_[layout_->nominal_offset[nominal_slot] + value * layout_->class_count + cls];
  }
  double mean(std::size_t cls, std::size_t numeric_slot) const noexcept { return mean_[cell(cls, numeric_slot)]; }
  // Sample variance m2 / (n - 1); 0 for fewer than two observations.
  double variance(std::size_t cls, std::size_t numeric_slot) const noexcept;
  double min(std::size_t cls, std::size_t numeric_slot) const noexcept { return min_[cell(cls, numeric_slot)]; }
  double max(std::size_t cls, std::size_t numeric_slot) const noexcept { return max_[cell(cls, numeric_slot)]; }

  // Number of scalar statistics held.
  std::size_t stat_count() const noexcept;

  // Lower bound applied to variances in the likelihood.
  static double variance_floor(double mean) noexcept;

 private:
  std::size_t cell(std::size_t cls, std::size_t slot) const noexcept {
    return cls * layout_->numeric_attrs.size() + slot;
  }
  void refresh_class(std::size_t cls);

  LayoutPtr layout_;
  std::vector<double> class_weight_;
  std::vector<double> obs_;
  double total_obs_ = 0;
  std::vector<double> nominal_;
  std::vector<double> mean_, m2_, min_, max_, inv_var_;
  std::vector<double> log_var_sum_;
};

class NaiveBayes final : public Learner {
 public:
  explicit NaiveBayes(SchemaPtr schema);

  LearnerPtr deep_copy() const override { return std::make_unique<NaiveBayes>(*this); }
  std::size_t size_estimate() const override;
  LearnerKind kind() const noexcept override { return LearnerKind::naive_bayes; }

  const NaiveBayesStatistics& statistics() const noexcept { return stats_; }

 protected:
  void train_impl(const Instance& instance) override { stats_.update(instance); }
  std::size_t predict_impl(const Instance& instance) const override { return stats_.predict(instance); }

 private:
  NaiveBayesStatistics stats_;
};

}  // namespace ecpf::learn
