#pragma once

#include <cstddef>
#include <memory>
#include <string_view>

#include "ecpf/stream/schema.hpp"

namespace ecpf::learn {

struct Classification {
  std::size_t label = 0;
  bool error = false;
};

enum class LearnerKind { hoeffding_tree, naive_bayes, perceptron };

std::string_view to_string(LearnerKind kind) noexcept;
LearnerKind parse_learner_kind(std::string_view name);  // throws ConfigError

// Size accounting shared by all learners: every node (a tree node, or the
// single implicit node of a flat model) costs kNodeBytes and every stored
// scalar statistic costs kStatBytes.
inline constexpr std::size_t kNodeBytes = 64;
inline constexpr std::size_t kStatBytes = 8;

// Incremental classifier. classify() never mutates state; train_on()
// consumes exactly one instance; deep_copy() returns a replica sharing no
// mutable state with the original. Untrained learners predict class 0.
class Learner {
 public:
  explicit Learner(SchemaPtr schema);
  virtual ~Learner() = default;

  Learner(const Learner&) = default;
  Learner& operator=(const Learner&) = delete;

  // Throws std::invalid_argument on schema mismatch.
  void train_on(const Instance& instance) {
    check(instance);
    train_impl(instance);
  }

  std::size_t predict(const Instance& instance) const {
    check(instance);
    return predict_impl(instance);
  }

  Classification classify(const Instance& instance) const {
    const std::size_t label = predict(instance);
    return Classification{label, label != instance.label};
  }

  virtual std::unique_ptr<Learner> deep_copy() const = 0;
  virtual std::size_t size_estimate() const = 0;
  virtual LearnerKind kind() const noexcept = 0;

  const SchemaPtr& schema() const noexcept { return schema_; }

 protected:
  virtual void train_impl(const Instance& instance) = 0;
  virtual std::size_t predict_impl(const Instance& instance) const = 0;

 private:
  void check(const Instance& instance) const;

  SchemaPtr schema_;
};

using LearnerPtr = std::unique_ptr<Learner>;

struct TreeOptions {
  std::size_t grace_period = 200;
  double split_confidence = 1e-7;
  double tie_threshold = 0.05;
};

struct LearnerSpec {
  LearnerKind kind = LearnerKind::hoeffding_tree;
  TreeOptions tree;
  double learning_rate = 1.0;  // perceptron
};

LearnerPtr make_learner(const LearnerSpec& spec, SchemaPtr schema);

// Hoeffding bound ε = sqrt(R² ln(1/δ) / (2n)). Throws std::invalid_argument
// unless R > 0, 0 < δ < 1 and n >= 1.
double hoeffding_bound(double range, double delta, double n);

}  // namespace ecpf::learn
