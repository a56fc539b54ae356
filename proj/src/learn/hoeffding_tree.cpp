#include "ecpf/learn/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ecpf::learn {

namespace {

constexpr double kMinBranchFraction = 0.01;
constexpr std::size_t kNumericBins = 10;

double sum(const std::vector<double>& v) {
  double s = 0;
  for (const double x : v) s += x;
  return s;
}

double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Weight of a per-class Gaussian falling below, at and above `value`.
struct Three {
  double less, equal, greater;
};

Three estimated_weights(double value, double mean, double variance, double weight) {
  const double sd = std::sqrt(variance);
  double equal = 0;
  if (weight > 0) {
    if (sd > 0) {
      equal = normal_pdf(value, mean, sd) * weight;
    } else if (value == mean) {
      equal = weight;
    }
  }
  double less = 0;
  if (sd > 0) {
    less = normal_cdf((value - mean) / sd) * weight - equal;
  } else if (value < mean) {
    less = weight - equal;
  }
  const double greater = std::max(0.0, weight - equal - less);
  return {less, equal, greater};
}

}  // namespace

double entropy_bits(const std::vector<double>& distribution) {
  const double total = sum(distribution);
  if (total <= 0) return 0;
  double h = 0;
  for (const double w : distribution) {
    if (w > 0) h -= (w / total) * std::log2(w / total);
  }
  return h;
}

double information_gain(const std::vector<double>& pre, const std::vector<std::vector<double>>& post) {
  double total = 0;
  std::vector<double> weights;
  weights.reserve(post.size());
  for (const auto& branch : post) {
    weights.push_back(sum(branch));
    total += weights.back();
  }
  int substantial = 0;
  for (const double w : weights) {
    if (total > 0 && w / total > kMinBranchFraction) ++substantial;
  }
  if (substantial < 2) return -std::numeric_limits<double>::infinity();
  double after = 0;
  for (std::size_t b = 0; b < post.size(); ++b) after += weights[b] / total * entropy_bits(post[b]);
  return entropy_bits(pre) - after;
}

std::vector<SplitCandidate> split_candidates(const NaiveBayesStatistics& stats) {
  const auto& layout = stats.layout();
  const std::size_t k = layout.class_count;
  std::vector<SplitCandidate> out;

  for (std::size_t s = 0; s < layout.nominal_attrs.size(); ++s) {
    SplitCandidate cand;
    cand.null_split = false;
    cand.attribute = layout.nominal_attrs[s];
    cand.nominal = true;
    cand.post.assign(layout.nominal_values[s], std::vector<double>(k, 0.0));
    std::vector<double> pre(k, 0.0);
    for (std::size_t v = 0; v < layout.nominal_values[s]; ++v) {
      for (std::size_t c = 0; c < k; ++c) {
        cand.post[v][c] = stats.nominal_count(s, v, c);
        pre[c] += cand.post[v][c];
      }
    }
    cand.merit = information_gain(pre, cand.post);
    out.push_back(std::move(cand));
  }

  for (std::size_t j = 0; j < layout.numeric_attrs.size(); ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (stats.observations(c) <= 0) continue;
      lo = std::min(lo, stats.min(c, j));
      hi = std::max(hi, stats.max(c, j));
    }
    SplitCandidate best;
    best.null_split = false;
    best.attribute = layout.numeric_attrs[j];
    best.merit = -std::numeric_limits<double>::infinity();
    bool any = false;
    if (lo < hi) {
      for (std::size_t i = 0; i < kNumericBins; ++i) {
        const double t = lo + (hi - lo) / static_cast<double>(kNumericBins + 1) * static_cast<double>(i + 1);
        if (!(t > lo && t < hi)) continue;
        std::vector<std::vector<double>> post(2, std::vector<double>(k, 0.0));
        for (std::size_t c = 0; c < k; ++c) {
          const double n = stats.observations(c);
          if (n <= 0) continue;
          if (t < stats.min(c, j)) {
            post[1][c] += n;
          } else if (t >= stats.max(c, j)) {
            post[0][c] += n;
          } else {
            const Three w = estimated_weights(t, stats.mean(c, j), stats.variance(c, j), n);
            post[0][c] += w.less + w.equal;
            post[1][c] += w.greater;
          }
        }
        std::vector<double> pre(k, 0.0);
        for (std::size_t c = 0; c < k; ++c) pre[c] = post[0][c] + post[1][c];
        const double merit = information_gain(pre, post);
        if (!any || merit > best.merit) {
          best.merit = merit;
          best.threshold = t;
          best.post = std::move(post);
          any = true;
        }
      }
    }
    if (any) out.push_back(std::move(best));
  }
  return out;
}

HoeffdingTree::HoeffdingTree(SchemaPtr schema, TreeOptions options)
    : Learner(schema), options_(options), layout_(std::make_shared<const StatisticsLayout>(*schema)) {
  if (options_.grace_period == 0) throw std::invalid_argument("grace_period must be positive");
  nodes_.push_back(Node{});
  nodes_[0].leaf = 0;
  leaves_.push_back(Leaf{NaiveBayesStatistics(layout_)});
}

std::size_t HoeffdingTree::sort_to_leaf(const Instance& x) const {
  std::size_t n = 0;
  while (nodes_[n].leaf == kNoLeaf) {
    const Node& node = nodes_[n];
    const double v = x.values[node.attribute];
    const std::size_t branch = node.nominal ? static_cast<std::size_t>(v) : (v <= node.threshold ? 0 : 1);
    n = node.first_child + branch;
  }
  return n;
}

void HoeffdingTree::train_impl(const Instance& x) {
  const std::size_t n = sort_to_leaf(x);
  Leaf& leaf = leaves_[nodes_[n].leaf];
  if (leaf.stats.majority_class() == x.label) leaf.mc_correct += 1;
  if (leaf.stats.predict(x) == x.label) leaf.nb_correct += 1;
  leaf.stats.update(x);
  const double seen = leaf.stats.total_observations();
  if (seen - leaf.weight_at_last_eval >= static_cast<double>(options_.grace_period)) {
    if (!leaf.stats.is_pure()) attempt_split(n);
    if (nodes_[n].leaf != kNoLeaf) leaves_[nodes_[n].leaf].weight_at_last_eval = seen;
  }
}

void HoeffdingTree::attempt_split(std::size_t n) {
  const std::uint32_t leaf_index = nodes_[n].leaf;
  const NaiveBayesStatistics& stats = leaves_[leaf_index].stats;
  std::vector<SplitCandidate> cands = split_candidates(stats);
  cands.push_back(SplitCandidate{});  // not splitting: merit 0
  std::stable_sort(cands.begin(), cands.end(),
                   [](const SplitCandidate& a, const SplitCandidate& b) { return a.merit > b.merit; });
  if (cands.size() < 2) return;
  const SplitCandidate& best = cands[0];
  const double range = std::log2(static_cast<double>(std::max<std::size_t>(layout_->class_count, 2)));
  const double eps = hoeffding_bound(range, options_.split_confidence, stats.total_observations());
  const bool decide = (best.merit - cands[1].merit > eps) || (eps < options_.tie_threshold);
  if (!decide || best.null_split || !(best.merit > 0)) return;

  if (observer_) {
    observer_(SplitEvent{&stats, best, best.merit, cands[1].merit, eps, options_.tie_threshold});
  }

  SplitCandidate chosen = cands[0];
  std::vector<double> weights = stats.class_weights();
  const auto first = static_cast<std::uint32_t>(nodes_.size());
  const auto count = static_cast<std::uint32_t>(chosen.post.size());
  for (std::uint32_t b = 0; b < count; ++b) {
    Node child;
    child.leaf = b == 0 ? leaf_index : static_cast<std::uint32_t>(leaves_.size() + b - 1);
    nodes_.push_back(std::move(child));
  }
  leaves_[leaf_index] = Leaf{NaiveBayesStatistics(layout_, chosen.post[0])};
  for (std::uint32_t b = 1; b < count; ++b) leaves_.push_back(Leaf{NaiveBayesStatistics(layout_, chosen.post[b])});

  Node& node = nodes_[n];
  node.leaf = kNoLeaf;
  node.attribute = chosen.attribute;
  node.nominal = chosen.nominal;
  node.threshold = chosen.threshold;
  node.first_child = first;
  node.child_count = count;
  node.class_weights = std::move(weights);
}

std::size_t HoeffdingTree::predict_impl(const Instance& x) const {
  const Leaf& leaf = leaves_[nodes_[sort_to_leaf(x)].leaf];
  if (leaf.nb_correct > leaf.mc_correct) return leaf.stats.predict(x);
  return leaf.stats.majority_class();
}

std::size_t HoeffdingTree::stat_count() const {
  std::size_t total = 0;
  for (const Node& node : nodes_) {
    total += node.leaf == kNoLeaf ? layout_->class_count : leaves_[node.leaf].stats.stat_count() + 2;
  }
  return total;
}

std::size_t HoeffdingTree::size_estimate() const {
  return nodes_.size() * kNodeBytes + stat_count() * kStatBytes;
}

std::size_t HoeffdingTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    deepest = std::max(deepest, level[i]);
    for (std::uint32_t b = 0; b < node.child_count; ++b) level[node.first_child + b] = level[i] + 1;
  }
  return deepest;
}

}  // namespace ecpf::learn
