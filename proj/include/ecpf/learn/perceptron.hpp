#pragma once

#include <cstddef>
#include <vector>

#include "ecpf/learn/learner.hpp"

namespace ecpf::learn {

// One-vs-all sigmoid perceptron trained with the delta rule. Nominal
// attributes are one-hot encoded; a constant bias input is appended.
// Weights start at zero, so the untrained model predicts class 0.
class Perceptron final : public Learner {
 public:
  Perceptron(SchemaPtr schema, double learning_rate = 1.0);

  LearnerPtr deep_copy() const override { return std::make_unique<Perceptron>(*this); }
  std::size_t size_estimate() const override;
  LearnerKind kind() const noexcept override { return LearnerKind::perceptron; }

  std::size_t input_width() const noexcept { return width_; }
  const std::vector<double>& weights() const noexcept { return weights_; }  // class-major
  // Encoded input vector (one-hot nominals, bias last).
  std::vector<double> encode(const Instance& instance) const;

 protected:
  void train_impl(const Instance& instance) override;
  std::size_t predict_impl(const Instance& instance) const override;

 private:
  void encode_into(const Instance& instance, std::vector<double>& out) const;

  double learning_rate_;
  std::size_t classes_;
  std::size_t width_;
  std::vector<std::size_t> offset_;  // first input slot per attribute
  std::vector<double> weights_;
};

}  // namespace ecpf::learn
