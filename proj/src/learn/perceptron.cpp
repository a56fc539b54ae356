#include "ecpf/learn/perceptron.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "ecpf/simd/kernels.hpp"

namespace ecpf::learn {

Perceptron::Perceptron(SchemaPtr schema, double learning_rate)
    : Learner(schema), learning_rate_(learning_rate), classes_(schema->class_count()) {
  if (!(learning_rate > 0)) throw std::invalid_argument("learning rate must be positive");
  std::size_t w = 0;
  for (const auto& a : schema->attributes()) {
    offset_.push_back(w);
    w += a.is_nominal() ? a.value_count() : 1;
  }
  width_ = w + 1;
  weights_.assign(classes_ * width_, 0.0);
}

void Perceptron::encode_into(const Instance& x, std::vector<double>& out) const {
  out.assign(width_, 0.0);
  const auto& attrs = schema()->attributes();
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (attrs[i].is_nominal()) {
      out[offset_[i] + static_cast<std::size_t>(x.values[i])] = 1.0;
    } else {
      out[offset_[i]] = x.values[i];
    }
  }
  out[width_ - 1] = 1.0;
}

std::vector<double> Perceptron::encode(const Instance& x) const {
  std::vector<double> out;
  encode_into(x, out);
  return out;
}

void Perceptron::train_impl(const Instance& x) {
  thread_local std::vector<double> input;
  encode_into(x, input);
  for (std::size_t c = 0; c < classes_; ++c) {
    std::span<double> w(weights_.data() + c * width_, width_);
    const double y = 1.0 / (1.0 + std::exp(-simd::dot(w, input)));
    const double target = c == x.label ? 1.0 : 0.0;
    const double delta = (target - y) * y * (1.0 - y);
    simd::axpy(learning_rate_ * delta, input, w);
  }
}

std::size_t Perceptron::predict_impl(const Instance& x) const {
  thread_local std::vector<double> input;
  encode_into(x, input);
  std::size_t best = 0;
  double best_score = 0;
  for (std::size_t c = 0; c < classes_; ++c) {
    const double score =
        simd::dot(std::span<const double>(weights_.data() + c * width_, width_), input);
    if (c == 0 || score > best_score) {
      best = c;
      best_score = score;
    }
  }
  return best;
}

std::size_t Perceptron::size_estimate() const { return kNodeBytes + weights_.size() * kStatBytes; }

}  // namespace ecpf::learn
