#include "ecpf/learn/learner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ecpf/core/errors.hpp"
#include "ecpf/learn/hoeffding_tree.hpp"
#include "ecpf/learn/naive_bayes.hpp"
#include "ecpf/learn/perceptron.hpp"

namespace ecpf::learn {

std::string_view to_string(LearnerKind kind) noexcept {
  switch (kind) {
    case LearnerKind::hoeffding_tree: return "hoeffding_tree";
    case LearnerKind::naive_bayes: return "naive_bayes";
    case LearnerKind::perceptron: return "perceptron";
  }
  return "unknown";
}

LearnerKind parse_learner_kind(std::string_view name) {
  if (name == "hoeffding_tree" || name == "ht" || name == "hoeffding_tree_nb") {
    return LearnerKind::hoeffding_tree;
  }
  if (name == "naive_bayes" || name == "nb") return LearnerKind::naive_bayes;
  if (name == "perceptron") return LearnerKind::perceptron;
  throw ConfigError("unknown learner '" + std::string(name) +
                    "' (expected hoeffding_tree, naive_bayes or perceptron)");
}

Learner::Learner(SchemaPtr schema) : schema_(std::move(schema)) {
  if (!schema_) throw std::invalid_argument("learner requires a schema");
}

void Learner::check(const Instance& instance) const { validate(*schema_, instance); }

LearnerPtr make_learner(const LearnerSpec& spec, SchemaPtr schema) {
  switch (spec.kind) {
    case LearnerKind::hoeffding_tree: return std::make_unique<HoeffdingTree>(std::move(schema), spec.tree);
    case LearnerKind::naive_bayes: return std::make_unique<NaiveBayes>(std::move(schema));
    case LearnerKind::perceptron: return std::make_unique<Perceptron>(std::move(schema), spec.learning_rate);
  }
  throw ConfigError("unknown learner kind");
}

double hoeffding_bound(double range, double delta, double n) {
  if (!(range > 0)) throw std::invalid_argument("hoeffding_bound: range must be positive");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("hoeffding_bound: delta must lie in (0, 1)");
  if (!(n >= 1)) throw std::invalid_argument("hoeffding_bound: n must be at least 1");
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

}  // namespace ecpf::learn
