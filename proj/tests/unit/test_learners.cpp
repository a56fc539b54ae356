#include <cmath>
#include <limits>
#include <numeric>

#include "doctest.h"

#include "ecpf/core/errors.hpp"
#include "ecpf/core/rng.hpp"
#include "ecpf/gen/generators.hpp"
#include "ecpf/learn/hoeffding_tree.hpp"
#include "ecpf/learn/naive_bayes.hpp"
#include "ecpf/learn/perceptron.hpp"

using namespace ecpf;
using namespace ecpf::learn;

namespace {

SchemaPtr one_nominal() {
  return std::make_shared<const Schema>(std::vector{AttributeSpec::nominal("v", {"p", "q"})},
                                        std::vector<std::string>{"A", "B"});
}

SchemaPtr one_numeric() {
  return std::make_shared<const Schema>(std::vector{AttributeSpec::numeric("x")},
                                        std::vector<std::string>{"A", "B"});
}

std::vector<Instance> draw(gen::Family f, double c, std::uint64_t seed, std::size_t n) {
  auto src = gen::make_generator({f, c, seed});
  std::vector<Instance> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(src->next()->instance);
  return out;
}

}  // namespace

TEST_CASE("hoeffding bound") {
  CHECK(hoeffding_bound(1, 0.05, 1000) == doctest::Approx(0.03871).epsilon(1e-4));
  CHECK(hoeffding_bound(1, 0.05, 2000) / hoeffding_bound(1, 0.05, 1000) ==
        doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(hoeffding_bound(1, 0.05, 1e12) < 1e-4);
  CHECK(hoeffding_bound(5, 1e-7, 1e12) < 1e-4);
  CHECK_THROWS_AS(hoeffding_bound(0, 0.05, 10), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_bound(1, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_bound(1, 0.05, 0.5), std::invalid_argument);
}

TEST_CASE("information gain and entropy") {
  CHECK(entropy_bits({5, 5}) == doctest::Approx(1.0));
  CHECK(entropy_bits({4, 0}) == 0.0);
  CHECK(information_gain({5, 5}, {{5, 0}, {0, 5}}) == doctest::Approx(1.0));
  CHECK(information_gain({5, 5}, {{5, 5}, {0, 0}}) == -std::numeric_limits<double>::infinity());
  CHECK(information_gain({1000, 1000}, {{1000, 1000}, {0, 1.0}}) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("learner kinds parse and build") {
  CHECK(parse_learner_kind("ht") == LearnerKind::hoeffding_tree);
  CHECK(parse_learner_kind("nb") == LearnerKind::naive_bayes);
  CHECK(parse_learner_kind("perceptron") == LearnerKind::perceptron);
  CHECK_THROWS_AS(parse_learner_kind("svm"), ConfigError);
  for (const auto kind : {LearnerKind::hoeffding_tree, LearnerKind::naive_bayes, LearnerKind::perceptron}) {
    LearnerSpec spec;
    spec.kind = kind;
    auto l = make_learner(spec, one_numeric());
    CHECK(l->kind() == kind);
    CHECK(l->size_estimate() > 0);
  }
}

TEST_CASE("untrained learners predict class 0") {
  for (const auto kind : {LearnerKind::hoeffding_tree, LearnerKind::naive_bayes, LearnerKind::perceptron}) {
    LearnerSpec spec;
    spec.kind = kind;
    auto l = make_learner(spec, one_numeric());
    const auto c = l->classify(Instance{{0.3}, 1});
    CHECK(c.label == 0);
    CHECK(c.error);
  }
}

TEST_CASE("schema mismatch is rejected") {
  HoeffdingTree t(one_numeric());
  CHECK_THROWS_AS(t.train_on(Instance{{0.3, 0.2}, 0}), std::invalid_argument);
  CHECK_THROWS_AS(t.predict(Instance{{0.3}, 4}), std::invalid_argument);
}

TEST_CASE("naive Bayes trained on one label predicts it everywhere") {
  NaiveBayes nb(one_numeric());
  for (int i = 0; i < 50; ++i) nb.train_on(Instance{{0.1 * i}, 1});
  for (const double x : {-100.0, 0.0, 2.5, 1e6}) CHECK(nb.predict(Instance{{x}, 0}) == 1);
}

TEST_CASE("naive Bayes nominal joint matches hand computation") {
  NaiveBayes nb(one_nominal());
  nb.train_on(Instance{{0}, 0});
  nb.train_on(Instance{{0}, 0});
  nb.train_on(Instance{{1}, 1});
  const auto lj = nb.statistics().log_joint(Instance{{0}, 0});
  CHECK(lj[0] == doctest::Approx(std::log(2.0 / 3 * 3.0 / 4)));
  CHECK(lj[1] == doctest::Approx(std::log(1.0 / 3 * 1.0 / 3)));
  const double norm = std::exp(lj[0]) + std::exp(lj[1]);
  CHECK(std::exp(lj[0]) / norm == doctest::Approx(0.5 / (0.5 + 1.0 / 9)));
}

TEST_CASE("naive Bayes Gaussian joint and normalisation") {
  NaiveBayes nb(one_numeric());
  nb.train_on(Instance{{1}, 0});
  nb.train_on(Instance{{3}, 0});
  for (const double v : {9.0, 10.0, 11.0, 12.0}) nb.train_on(Instance{{v}, 1});
  const auto& s = nb.statistics();
  CHECK(s.mean(0, 0) == doctest::Approx(2));
  CHECK(s.variance(0, 0) == doctest::Approx(2));
  CHECK(s.min(1, 0) == 9);
  CHECK(s.max(1, 0) == 12);
  const auto lj = s.log_joint(Instance{{2}, 0});
  CHECK(lj[0] == doctest::Approx(std::log(2.0 / 6) - 0.5 * (std::log(2.0) + std::log(2 * 3.141592653589793))));
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const auto j = s.log_joint(Instance{{rng.uniform(-5, 20)}, 0});
    const double mx = std::max(j[0], j[1]);
    const double p0 = std::exp(j[0] - mx);
    const double p1 = std::exp(j[1] - mx);
    CHECK(p0 / (p0 + p1) + p1 / (p0 + p1) == doctest::Approx(1.0));
    CHECK(std::isfinite(mx));
  }
}

TEST_CASE("majority fallback with counts 10 to 2") {
  HoeffdingTree t(one_nominal());
  for (int i = 0; i < 10; ++i) t.train_on(Instance{{0}, 0});
  for (int i = 0; i < 2; ++i) t.train_on(Instance{{0}, 1});
  CHECK(t.node_count() == 1);
  CHECK(t.predict(Instance{{0}, 1}) == 0);
  CHECK(t.predict(Instance{{1}, 1}) == 0);
  NaiveBayesStatistics stats(std::make_shared<const StatisticsLayout>(*one_nominal()), {10, 2});
  CHECK(stats.majority_class() == 0);
}

TEST_CASE("hoeffding tree learns stagger concept 1") {
  const auto data = draw(gen::Family::stagger, 1, 5, 5000);
  HoeffdingTree t(gen::make_concept_generator(gen::Family::stagger)->schema());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i >= 4000) correct += t.predict(data[i]) == data[i].label ? 1 : 0;
    t.train_on(data[i]);
  }
  CHECK(static_cast<double>(correct) / 1000 > 0.95);
  CHECK(t.depth() <= 3);
}

TEST_CASE("splits satisfy the Hoeffding test") {
  const auto data = draw(gen::Family::agrawal, 1, 7, 20000);
  HoeffdingTree t(gen::make_concept_generator(gen::Family::agrawal)->schema());
  std::size_t events = 0;
  std::size_t children = 0;
  t.set_split_observer([&](const SplitEvent& ev) {
    ++events;
    children += ev.chosen.post.size();
    REQUIRE(ev.stats != nullptr);
    CHECK_FALSE(ev.chosen.null_split);
    CHECK(ev.chosen.merit > 0);
    CHECK(ev.best_merit == ev.chosen.merit);
    CHECK((ev.best_merit - ev.second_merit > ev.epsilon || ev.epsilon < ev.tie_threshold));
    const double k = static_cast<double>(ev.stats->layout().class_count);
    CHECK(ev.epsilon == doctest::Approx(hoeffding_bound(std::log2(std::max(k, 2.0)), 1e-7,
                                                        ev.stats->total_observations())));
    std::vector<double> pre(ev.chosen.post.front().size(), 0.0);
    for (const auto& branch : ev.chosen.post) {
      for (std::size_t c = 0; c < branch.size(); ++c) pre[c] += branch[c];
    }
    CHECK(ev.chosen.merit == doctest::Approx(information_gain(pre, ev.chosen.post)));
    double best_other = 0;
    for (const auto& c : split_candidates(*ev.stats)) {
      CHECK(c.merit <= ev.chosen.merit + 1e-12);
      if (c.attribute != ev.chosen.attribute && c.merit > best_other) best_other = c.merit;
    }
    CHECK(ev.second_merit == doctest::Approx(best_other));
  });
  for (const auto& x : data) t.train_on(x);
  CHECK(events > 0);
  CHECK(t.node_count() == 1 + children);
}

TEST_CASE("size accounting on a three-node tree") {
  HoeffdingTree t(one_nominal());
  CHECK(t.size_estimate() == 64 + 8 * (10 + 2));
  CHECK(t.depth() == 0);
  for (int i = 0; i < 400 && t.node_count() == 1; ++i) t.train_on(Instance{{static_cast<double>(i % 2)}, static_cast<std::size_t>(i % 2)});
  REQUIRE(t.node_count() == 3);
  CHECK(t.leaf_count() == 2);
  CHECK(t.depth() == 1);
  CHECK(t.stat_count() == 2 + 2 * (10 + 2));
  CHECK(t.size_estimate() == 3 * 64 + 8 * 26);
  CHECK(t.predict(Instance{{0}, 0}) == 0);
  CHECK(t.predict(Instance{{1}, 0}) == 1);
}

TEST_CASE("tree size never shrinks as it grows") {
  const auto data = draw(gen::Family::random_rbf, 20, 3, 8000);
  HoeffdingTree t(gen::make_concept_generator(gen::Family::random_rbf)->schema());
  std::size_t last = t.size_estimate();
  for (const auto& x : data) {
    t.train_on(x);
    CHECK(t.size_estimate() >= last);
    last = t.size_estimate();
  }
  CHECK(t.node_count() > 1);
}

TEST_CASE("naive Bayes size counts its statistics") {
  NaiveBayes nb(one_numeric());
  CHECK(nb.size_estimate() == 64 + 8 * (3 * 2 + 5 * 2));
}

TEST_CASE("deep copies are isolated from later training") {
  const auto train = draw(gen::Family::stagger, 1, 2, 3000);
  const auto more = draw(gen::Family::stagger, 3, 3, 1000);
  const auto probe = draw(gen::Family::stagger, 2, 4, 1000);
  const SchemaPtr schema = gen::make_concept_generator(gen::Family::stagger)->schema();
  for (const auto kind : {LearnerKind::hoeffding_tree, LearnerKind::naive_bayes, LearnerKind::perceptron}) {
    LearnerSpec spec;
    spec.kind = kind;
    auto original = make_learner(spec, schema);
    for (const auto& x : train) original->train_on(x);
    std::vector<std::size_t> before;
    for (const auto& x : probe) before.push_back(original->predict(x));
    const std::size_t size_before = original->size_estimate();

    auto copy = original->deep_copy();
    for (const auto& x : more) copy->train_on(x);
    std::size_t mismatches = 0;
    std::size_t copy_changed = 0;
    for (std::size_t i = 0; i < probe.size(); ++i) {
      mismatches += original->predict(probe[i]) != before[i] ? 1 : 0;
      copy_changed += copy->predict(probe[i]) != before[i] ? 1 : 0;
    }
    INFO(to_string(kind));
    CHECK(mismatches == 0);
    CHECK(copy_changed > 0);
    CHECK(original->size_estimate() == size_before);
  }
}

TEST_CASE("perceptron separates a threshold concept") {
  Perceptron p(one_numeric());
  Rng rng(6);
  std::size_t correct = 0;
  for (int i = 0; i < 6000; ++i) {
    const double x = rng.uniform();
    const Instance in{{x}, x > 0.5 ? 1u : 0u};
    if (i >= 5000) correct += p.predict(in) == in.label ? 1 : 0;
    p.train_on(in);
  }
  CHECK(correct > 900);
}
