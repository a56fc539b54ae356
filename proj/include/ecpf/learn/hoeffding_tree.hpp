#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "ecpf/learn/learner.hpp"
#include "ecpf/learn/naive_bayes.hpp"

namespace ecpf::learn {

// Candidate split of one leaf. post[b][c] is the class weight routed to
// branch b; branch 0 of a numeric split holds values <= threshold.
struct SplitCandidate {
  bool null_split = true;
  std::size_t attribute = 0;  // schema index
  bool nominal = false;
  double threshold = 0;
  double merit = 0;
  std::vector<std::vector<double>> post;
};

// Information gain in bits of splitting `pre` into `post`. -inf unless at
// least two branches each hold more than 1% of the total weight.
double information_gain(const std::vector<double>& pre, const std::vector<std::vector<double>>& post);
double entropy_bits(const std::vector<double>& distribution);

// Best split per attribute, computed from one leaf's statistics.
std::vector<SplitCandidate> split_candidates(const NaiveBayesStatistics& stats);

// Reported every time a leaf splits, with the leaf statistics as they were
// when the decision was taken.
struct SplitEvent {
  const NaiveBayesStatistics* stats = nullptr;
  SplitCandidate chosen;
  double best_merit = 0;
  double second_merit = 0;
  double epsilon = 0;
  double tie_threshold = 0;
};

// VFDT-style Hoeffding tree with adaptive naive-Bayes leaves. Nominal
// attributes split multiway; numeric attributes split binary on one of ten
// equal-width thresholds scored from per-class Gaussians. A split is taken
// when best - second > ε or ε < τ, where the candidates include not
// splitting (merit 0).
class HoeffdingTree final : public Learner {
 public:
  explicit HoeffdingTree(SchemaPtr schema, TreeOptions options = {});

  LearnerPtr deep_copy() const override { return std::make_unique<HoeffdingTree>(*this); }
  std::size_t size_estimate() const override;
  LearnerKind kind() const noexcept override { return LearnerKind::hoeffding_tree; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t leaf_count() const noexcept { return leaves_.size(); }
  std::size_t depth() const;
  std::size_t stat_count() const;
  const TreeOptions& options() const noexcept { return options_; }

  void set_split_observer(std::function<void(const SplitEvent&)> observer) {
    observer_ = std::move(observer);
  }

 protected:
  void train_impl(const Instance& instance) override;
  std::size_t predict_impl(const Instance& instance) const override;

 private:
  static constexpr std::uint32_t kNoLeaf = std::numeric_limits<std::uint32_t>::max();

  struct Node {
    std::uint32_t leaf = kNoLeaf;  // index into leaves_ when this is a leaf
    std::size_t attribute = 0;
    bool nominal = false;
    double threshold = 0;
    std::uint32_t first_child = 0;  // children are contiguous in nodes_
    std::uint32_t child_count = 0;
    std::vector<double> class_weights;  // internal nodes only
  };

  struct Leaf {
    NaiveBayesStatistics stats;
    double weight_at_last_eval = 0;
    double mc_correct = 0;
    double nb_correct = 0;
  };

  std::size_t sort_to_leaf(const Instance& instance) const;  // returns node index
  void attempt_split(std::size_t node);

  TreeOptions options_;
  LayoutPtr layout_;
  std::vector<Node> nodes_;
  std::vector<Leaf> leaves_;
  std::function<void(const SplitEvent&)> observer_;
};

}  // namespace ecpf::learn
