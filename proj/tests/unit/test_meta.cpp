#include <functional>
#include <set>

#include "doctest.h"

#include "ecpf/core/errors.hpp"
#include "ecpf/gen/schedule.hpp"
#include "ecpf/learn/hoeffding_tree.hpp"
#include "ecpf/meta/baseline.hpp"
#include "ecpf/meta/cpf.hpp"
#include "ecpf/meta/ecpf.hpp"
#include "ecpf/meta/record.hpp"

using namespace ecpf;
using namespace ecpf::meta;

namespace {

SchemaPtr line_schema() {
  static const SchemaPtr s = std::make_shared<const Schema>(std::vector{AttributeSpec::numeric("x")},
                                                            std::vector<std::string>{"n", "y"});
  return s;
}

// Predicts through a fixed function; counts training calls.
class StubLearner final : public learn::Learner {
 public:
  StubLearner(std::function<std::size_t(const Instance&)> rule, std::size_t size = 100)
      : Learner(line_schema()), rule_(std::move(rule)), size_(size) {}
  learn::LearnerPtr deep_copy() const override { return std::make_unique<StubLearner>(*this); }
  std::size_t size_estimate() const override { return size_; }
  learn::LearnerKind kind() const noexcept override { return learn::LearnerKind::naive_bayes; }
  std::size_t trained() const noexcept { return trained_; }

 protected:
  void train_impl(const Instance&) override { ++trained_; }
  std::size_t predict_impl(const Instance& x) const override { return rule_(x); }

 private:
  std::function<std::size_t(const Instance&)> rule_;
  std::size_t size_;
  std::size_t trained_ = 0;
};

// Buffer of n instances x = 0..n-1, all labelled 1.
std::vector<Instance> ones(std::size_t n) {
  std::vector<Instance> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back(Instance{{static_cast<double>(i)}, 1});
  return b;
}

// Correct on x >= k, wrong below.
learn::LearnerPtr wrong_below(double k, std::size_t size = 100) {
  return std::make_unique<StubLearner>([k](const Instance& x) { return x.values[0] >= k ? 1u : 0u; }, size);
}

ClassifierRecord record(std::uint64_t id, learn::LearnerPtr l, std::int64_t points, std::uint64_t correct = 0,
                        std::uint64_t seen = 0) {
  ClassifierRecord r;
  r.id = id;
  r.learner = std::move(l);
  r.fade_points = points;
  r.lifetime_correct = correct;
  r.lifetime_seen = seen;
  return r;
}

BufferEvaluation evaluation(std::size_t length, const std::vector<std::pair<std::uint64_t, std::vector<bool>>>& rows) {
  BufferEvaluation ev;
  ev.length = length;
  for (const auto& [id, flags] : rows) ev.push(id, flags);
  return ev;
}

std::vector<bool> errors_first(std::size_t length, std::size_t wrong) {
  std::vector<bool> v(length, false);
  for (std::size_t i = 0; i < wrong; ++i) v[i] = true;
  return v;
}

template <typename F>
void drive(Framework& fw, StreamSource& src, F&& each) {
  std::uint64_t i = 0;
  while (auto item = src.next()) {
    if (item->drift) fw.notify_true_drift(i);
    each(item->instance, i);
    ++i;
  }
}

FrameworkConfig oracle_config(FrameworkKind kind) {
  FrameworkConfig c;
  c.kind = kind;
  c.detector.kind = drift::DetectorKind::oracle;
  return c;
}

}  // namespace

TEST_CASE("collection keeps ids increasing") {
  Collection c;
  c.add(record(1, wrong_below(0), 3));
  c.add(record(4, wrong_below(0), 3));
  CHECK_THROWS_AS(c.add(record(4, wrong_below(0), 3)), std::invalid_argument);
  CHECK_THROWS_AS(c.at(2), std::out_of_range);
  c.erase(1);
  CHECK(c.size() == 1);
  CHECK(c.find(4) != nullptr);
  CHECK(c.total_size() == 100);
}

TEST_CASE("a single stored classifier is chosen regardless of accuracy") {
  Collection c;
  c.add(record(1, wrong_below(1e9), 3));
  const auto buffer = ones(20);
  const auto choice = select_reuse(c, buffer);
  REQUIRE(choice);
  CHECK(choice->source_id == 1);
  CHECK(c.at(1).reuse_count == 1);
}

TEST_CASE("the most accurate classifier on the buffer is copied") {
  Collection c;
  c.add(record(1, wrong_below(1), 3));  // 0.9 on ten instances
  c.add(record(2, wrong_below(4), 3));  // 0.6
  const auto buffer = ones(10);
  const auto ev = evaluate_on_buffer(c, buffer);
  CHECK(ev.correct == std::vector<std::size_t>{9, 6});
  CHECK(ev.error_at(0, 0));
  CHECK_FALSE(ev.error_at(0, 1));
  const auto choice = select_reuse(c, buffer);
  REQUIRE(choice);
  CHECK(choice->source_id == 1);
  CHECK(choice->copy.get() != c.at(1).learner.get());
  CHECK(c.at(1).reuse_count == 1);
  CHECK(c.at(2).reuse_count == 0);
}

TEST_CASE("buffer accuracy ties go to the lowest id") {
  Collection c;
  c.add(record(3, wrong_below(2), 3));
  c.add(record(5, wrong_below(2), 3));
  c.add(record(8, wrong_below(2), 3));
  CHECK(select_reuse(c, ones(10))->source_id == 3);
}

TEST_CASE("empty buffer falls back to lifetime accuracy") {
  Collection c;
  c.add(record(1, wrong_below(0), 3, 50, 100));
  c.add(record(2, wrong_below(0), 3, 90, 100));
  c.add(record(3, wrong_below(0), 3, 90, 100));
  CHECK(choose_reuse(c, evaluate_on_buffer(c, {})) == std::optional<std::uint64_t>(2));
  CHECK_FALSE(choose_reuse(Collection{}, BufferEvaluation{}));
  CHECK_FALSE(select_reuse(*std::make_unique<Collection>(), ones(5)));
}

TEST_CASE("similarity of error vectors") {
  SimilarityMatrix m;
  // c_new and c_3 agree on all five compared instances.
  m.update(evaluation(5, {{1, {true, false, false, true, false}}, {3, {true, false, false, true, false}}}));
  CHECK(m.similarity(1, 3) == 1.0);
  CHECK(m.similarity(1, 3) >= 0.95);

  SimilarityMatrix c;
  c.update(evaluation(4, {{1, {false, false, false, false}}, {2, {true, true, true, true}}}));
  CHECK(c.similarity(1, 2) == 0.0);
  CHECK(c.get(2, 1) == PairStats{4, 0});

  c.update(evaluation(4, {{1, {false, true, false, false}}, {2, {true, true, true, true}}}));
  CHECK(c.get(1, 2) == PairStats{8, 1});
  c.update(evaluation(0, {{1, {}}, {2, {}}}));
  CHECK(c.get(1, 2) == PairStats{8, 1});
  c.remove(2);
  CHECK(c.size() == 0);
  CHECK(SimilarityMatrix::key(9, 4) == SimilarityMatrix::Key{4, 9});
}

TEST_CASE("similarity over long packed buffers") {
  const std::size_t n = 300;
  std::vector<bool> a(n), b(n);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = i % 3 == 0;
    b[i] = i % 5 == 0;
    agree += a[i] == b[i] ? 1 : 0;
  }
  SimilarityMatrix m;
  m.update(evaluation(n, {{1, a}, {2, b}}));
  CHECK(m.get(1, 2) == PairStats{n, agree});
}

TEST_CASE("no qualifying pair leaves the collection unchanged") {
  Collection c;
  c.add(record(1, wrong_below(0), 4, 9, 10));
  c.add(record(2, wrong_below(0), 5, 8, 10));
  c.similarity().update(evaluation(59, {{1, std::vector<bool>(59, false)}, {2, std::vector<bool>(59, false)}}));
  CHECK(represent_classifiers(c, 0.95, 60).empty());
  CHECK(c.size() == 2);
  c.similarity().update(evaluation(61, {{1, errors_first(61, 0)}, {2, errors_first(61, 30)}}));
  CHECK(represent_classifiers(c, 0.95, 60).empty());
  CHECK(c.size() == 2);
}

TEST_CASE("similarity exactly at m is represented") {
  Collection c;
  c.add(record(1, wrong_below(0), 4, 9, 10));
  c.add(record(2, wrong_below(0), 5, 8, 10));
  c.similarity().update(evaluation(60, {{1, errors_first(60, 0)}, {2, errors_first(60, 12)}}));
  REQUIRE(c.similarity().similarity(1, 2) == 0.8);
  const auto reps = represent_classifiers(c, 0.8, 60);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0] == Representation{1, 2, 5});
  CHECK(c.size() == 1);
  CHECK(c.at(1).fade_points == 9);
  CHECK(c.at(1).inherited_points == 5);
  CHECK(c.similarity().size() == 0);
}

TEST_CASE("the saved copy represents an older record and gains its point") {
  // f = 3: c2 holds one point, the saved c4 holds three and is more accurate.
  Collection c;
  c.add(record(1, wrong_below(0), 2, 70, 100));
  c.add(record(2, wrong_below(0), 1, 60, 100));
  c.add(record(4, wrong_below(0), 3, 95, 100));
  c.similarity().update(evaluation(100, {{1, errors_first(100, 40)}, {2, errors_first(100, 0)}, {4, errors_first(100, 2)}}));
  const auto reps = represent_classifiers(c, 0.95, 60);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0] == Representation{4, 2, 1});
  CHECK(c.at(4).fade_points == 4);
  CHECK(c.find(2) == nullptr);
}

TEST_CASE("survivor ties go to the lowest id") {
  Collection c;
  c.add(record(1, wrong_below(0), 4, 8, 10));
  c.add(record(2, wrong_below(0), 5, 8, 10));
  c.similarity().update(evaluation(60, {{1, errors_first(60, 0)}, {2, errors_first(60, 0)}}));
  const auto reps = represent_classifiers(c, 0.95, 60);
  REQUIRE(reps.size() == 1);
  CHECK(reps[0].survivor == 1);
}

TEST_CASE("pairs are processed by descending similarity, skipping deleted members") {
  Collection c;
  c.add(record(1, wrong_below(0), 5, 50, 100));
  c.add(record(2, wrong_below(0), 7, 60, 100));
  c.add(record(3, wrong_below(0), 2, 70, 100));
  c.similarity().update(evaluation(100, {{1, errors_first(100, 0)}, {2, errors_first(100, 0)}}));
  c.similarity().update(evaluation(100, {{2, errors_first(100, 0)}, {3, errors_first(100, 2)}}));
  c.similarity().update(evaluation(100, {{1, errors_first(100, 0)}, {3, errors_first(100, 3)}}));
  const auto reps = represent_classifiers(c, 0.95, 60);
  REQUIRE(reps.size() == 2);
  CHECK(reps[0] == Representation{2, 1, 5});
  CHECK(reps[1] == Representation{3, 2, 12});
  REQUIRE(c.size() == 1);
  CHECK(c.at(3).fade_points == 14);
  CHECK(c.at(3).inherited_points == 12);
}

TEST_CASE("fading: reused gains f, saved untouched, others lose one") {
  // f = 3; c4 is the copy saved at this drift.
  Collection c;
  c.add(record(1, wrong_below(0), 3));
  c.add(record(2, wrong_below(0), 2));
  c.add(record(3, wrong_below(0), 1));
  c.add(record(4, wrong_below(0), 3));
  const auto dead = fade_classifiers(c, 3, 2, 4);
  CHECK(c.at(1).fade_points == 2);
  CHECK(c.at(2).fade_points == 5);
  CHECK(c.at(4).fade_points == 3);
  CHECK(dead == std::vector<std::uint64_t>{3});
  CHECK(c.find(3) == nullptr);
  CHECK(c.at(1).drifts_survived == 1);
  CHECK(c.at(2).drifts_survived == 1);
  CHECK(c.at(2).reuse_count == 0);
  CHECK(c.at(4).drifts_survived == 0);
}

TEST_CASE("fading with no reuse decrements everything but the save") {
  Collection c;
  c.add(record(1, wrong_below(0), 3));
  c.add(record(2, wrong_below(0), 3));
  const auto dead = fade_classifiers(c, 3, std::nullopt, 2);
  CHECK(dead.empty());
  CHECK(c.at(1).fade_points == 2);
  CHECK(c.at(2).fade_points == 3);
}

TEST_CASE("an unreused record is deleted after exactly f drifts") {
  const std::int64_t f = 15;
  Collection c;
  c.add(record(1, wrong_below(0), f));
  CHECK(c.at(1).closed_form_points(f) == f);
  for (std::int64_t d = 1; d < f; ++d) {
    CHECK(fade_classifiers(c, f, std::nullopt, std::nullopt).empty());
    CHECK(c.at(1).fade_points == f - d);
    CHECK(c.at(1).closed_form_points(f) == c.at(1).fade_points);
  }
  CHECK(fade_classifiers(c, f, std::nullopt, std::nullopt) == std::vector<std::uint64_t>{1});
  CHECK(c.empty());
}

TEST_CASE("closed form: reused once over five drifts gives 26") {
  ClassifierRecord r;
  r.reuse_count = 1;
  r.drifts_survived = 5;
  CHECK(r.closed_form_points(15) == 26);

  // The same history through the fading rule: saved at creation, reused at
  // the next drift, then four idle drifts.
  Collection c;
  c.add(record(1, wrong_below(0), 15));
  c.at(1).reuse_count = 1;
  fade_classifiers(c, 15, 1, std::nullopt);
  for (int i = 0; i < 4; ++i) fade_classifiers(c, 15, std::nullopt, std::nullopt);
  CHECK(c.at(1).drifts_survived == 5);
  CHECK(c.at(1).fade_points == 26);
  CHECK(c.at(1).closed_form_points(15) == 26);
}

TEST_CASE("memory cap evicts the fewest points first") {
  Collection c;
  c.add(record(1, wrong_below(0, 100), 3));
  c.add(record(2, wrong_below(0, 100), 7));
  CHECK(enforce_memory_cap(c, 500, std::nullopt).empty());
  CHECK(c.size() == 2);
  CHECK(enforce_memory_cap(c, 150, std::nullopt) == std::vector<std::uint64_t>{1});
  CHECK(c.size() == 1);
}

TEST_CASE("memory cap below any single record keeps only the protected save") {
  Collection c;
  c.add(record(1, wrong_below(0, 100), 9));
  c.add(record(2, wrong_below(0, 100), 3));
  c.add(record(3, wrong_below(0, 100), 1));
  const auto evicted = enforce_memory_cap(c, 10, 3);
  CHECK(evicted == std::vector<std::uint64_t>{2, 1});
  REQUIRE(c.size() == 1);
  CHECK(c.records()[0].id == 3);

  Collection d;
  d.add(record(1, wrong_below(0, 100), 9));
  d.add(record(2, wrong_below(0, 100), 3));
  enforce_memory_cap(d, 10, std::nullopt);
  REQUIRE(d.size() == 1);
  CHECK(d.records()[0].id == 1);
}

TEST_CASE("framework configuration is validated") {
  FrameworkConfig c;
  c.m = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = FrameworkConfig{};
  c.f = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = FrameworkConfig{};
  c.memory_cap = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK(parse_framework_kind("cpf") == FrameworkKind::cpf);
  CHECK_THROWS_AS(parse_framework_kind("arf"), ConfigError);
}

TEST_CASE("ecpf predictions come from the segment leader") {
  auto src = gen::scheduled_stream(gen::Family::agrawal, {{1, 3, 5}, 800, 8}, 3);
  Ecpf fw(oracle_config(FrameworkKind::ecpf), src->schema());
  std::size_t reused_led = 0;
  std::size_t new_led = 0;
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) {
    const learn::Learner* reused = fw.reused_learner();
    const bool lead = reused != nullptr && fw.reused_counter().correct >= fw.new_counter().correct;
    CHECK(fw.leader_is_reused() == lead);
    const std::size_t expected = lead ? reused->predict(x) : fw.new_learner().predict(x);
    if (reused != nullptr && fw.reused_counter().correct > fw.new_counter().correct) ++reused_led;
    if (reused != nullptr && fw.new_counter().correct > fw.reused_counter().correct) ++new_led;
    CHECK(fw.predict(x) == expected);
    fw.train(x, i);
  });
  CHECK(reused_led > 0);
  CHECK(new_led > 0);
  CHECK(fw.drifts_detected() == 8);
}

TEST_CASE("ecpf first drift: the saved leader is the only candidate") {
  auto src = gen::scheduled_stream(gen::Family::stagger, {{1, 2}, 500, 1}, 3);
  Ecpf fw(oracle_config(FrameworkKind::ecpf), src->schema());
  std::vector<DriftEvent> events;
  fw.set_trace([&](const DriftEvent& ev) { events.push_back(ev); });
  CHECK(fw.reused_learner() == nullptr);
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) { fw.process(x, i); });
  REQUIRE(events.size() == 1);
  CHECK(events[0].instance == 560);
  CHECK(events[0].buffer_length == 60);
  CHECK(events[0].saved == std::optional<std::uint64_t>(1));
  CHECK(events[0].reused == std::optional<std::uint64_t>(1));
  CHECK(fw.collection().size() == 1);
  CHECK(fw.reused_source() == std::optional<std::uint64_t>(1));
  CHECK(fw.reused_learner() != nullptr);
  REQUIRE(events[0].fade.size() == 1);
  CHECK(events[0].fade[0] == FadeRow{1, 30, 1, 1, 0});
}

TEST_CASE("ecpf warning instances are buffered, not trained") {
  auto src = gen::scheduled_stream(gen::Family::stagger, {{1, 2}, 300, 1}, 5);
  Ecpf fw(oracle_config(FrameworkKind::ecpf), src->schema());
  std::size_t max_buffer = 0;
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) {
    const auto step = fw.process(x, i);
    if (step.signal == drift::DriftSignal::warning) max_buffer = std::max(max_buffer, fw.buffer().size());
    if (step.signal == drift::DriftSignal::drift) CHECK(fw.buffer().empty());
  });
  CHECK(max_buffer == 60);
}

TEST_CASE("ecpf bookkeeping over a long run") {
  auto src = gen::scheduled_stream(gen::Family::agrawal, {{1, 3, 5, 7, 9}, 500, 60}, 11);
  FrameworkConfig config = oracle_config(FrameworkKind::ecpf);
  Ecpf fw(config, src->schema());
  std::size_t events = 0;
  std::set<std::uint64_t> ids;
  fw.set_trace([&](const DriftEvent& ev) {
    ++events;
    for (const auto& row : ev.fade) {
      ClassifierRecord r;
      r.reuse_count = row.reuse_count;
      r.drifts_survived = row.drifts_survived;
      r.inherited_points = row.inherited;
      CHECK(row.points == r.closed_form_points(config.f));
      CHECK(row.points > 0);
    }
    for (const auto& row : ev.similarity) {
      CHECK(row.agree <= row.seen);
      CHECK(fw.collection().similarity().get(row.a, row.b) == PairStats{row.seen, row.agree});
    }
    CHECK(ev.fade.size() == fw.collection().size());
  });
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) { fw.process(x, i); });
  CHECK(events == 60);
  CHECK(fw.max_collection_size() <= 2 * static_cast<std::size_t>(config.f));
  for (const auto& r : fw.collection().records()) {
    CHECK(r.fade_points == r.closed_form_points(config.f));
    CHECK(r.lifetime_correct <= r.lifetime_seen);
    CHECK(ids.insert(r.id).second);
  }
}

TEST_CASE("ecpf never mutates the stored source of its reused copy") {
  auto src = gen::scheduled_stream(gen::Family::agrawal, {{1, 3, 5}, 600, 15}, 2);
  auto probe_src = gen::scheduled_stream(gen::Family::agrawal, {{1, 3, 5, 7, 9}, 100, 4}, 77);
  std::vector<Instance> probe;
  while (auto p = probe_src->next()) probe.push_back(p->instance);
  Ecpf fw(oracle_config(FrameworkKind::ecpf), src->schema());
  std::optional<std::uint64_t> source;
  std::vector<std::size_t> snapshot;
  std::size_t checked = 0;
  fw.set_drift_observer([&](const Ecpf& e) {
    if (!source) return;
    const ClassifierRecord* r = e.collection().find(*source);
    if (r == nullptr) return;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < probe.size(); ++i) mismatches += r->learner->predict(probe[i]) != snapshot[i];
    CHECK(mismatches == 0);
    ++checked;
  });
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) {
    if (fw.process(x, i).signal != drift::DriftSignal::drift) return;
    source = fw.reused_source();
    snapshot.clear();
    if (const ClassifierRecord* r = fw.collection().find(source.value_or(0))) {
      for (const auto& p : probe) snapshot.push_back(r->learner->predict(p));
    } else {
      source.reset();
    }
  });
  CHECK(checked >= 10);
}

TEST_CASE("cpf defers the decision until b_min instances are buffered") {
  auto src = gen::scheduled_stream(gen::Family::stagger, {{1, 2}, 500, 1}, 4);
  FrameworkConfig config = oracle_config(FrameworkKind::cpf);
  config.detector.lead = 10;
  config.b_min = 30;
  Cpf fw(config, src->schema());
  std::vector<DriftEvent> events;
  fw.set_trace([&](const DriftEvent& ev) { events.push_back(ev); });
  bool saw_pending = false;
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) {
    fw.process(x, i);
    if (i == 510) {
      CHECK(fw.drift_pending());
      CHECK(fw.drifts_detected() == 0);
      saw_pending = true;
    }
    if (i == 529) CHECK(fw.drift_pending());
    if (i == 530) CHECK_FALSE(fw.drift_pending());
  });
  CHECK(saw_pending);
  REQUIRE(events.size() == 1);
  CHECK(events[0].instance == 530);
  CHECK(events[0].buffer_length == 30);
  CHECK(fw.collection().find(fw.current_id()) != nullptr);
}

TEST_CASE("cpf reuses stored classifiers on a recurring concept") {
  auto src = gen::scheduled_stream(gen::Family::stagger, {{1, 2}, 1000, 5}, 4);
  Cpf fw(oracle_config(FrameworkKind::cpf), src->schema());
  std::vector<DriftEvent> events;
  fw.set_trace([&](const DriftEvent& ev) { events.push_back(ev); });
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) { fw.process(x, i); });
  REQUIRE(events.size() == 5);
  std::size_t direct = 0;
  for (const auto& ev : events) {
    if (ev.reused && !ev.saved) ++direct;
    CHECK(fw.collection().size() <= 2 * 15);
  }
  CHECK(direct >= 2);
  CHECK(fw.collection().find(fw.current_id()) != nullptr);
}

TEST_CASE("baseline without drifts matches the bare learner") {
  auto src = gen::scheduled_stream(gen::Family::agrawal, {{1}, 4000, 0}, 6);
  Baseline fw(oracle_config(FrameworkKind::baseline), src->schema());
  learn::HoeffdingTree bare(src->schema());
  std::size_t mismatches = 0;
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) {
    mismatches += fw.process(x, i).prediction != bare.predict(x);
    bare.train_on(x);
  });
  CHECK(mismatches == 0);
  CHECK(fw.drifts_detected() == 0);
}

TEST_CASE("baseline restarts from the buffer at each drift") {
  auto src = gen::scheduled_stream(gen::Family::stagger, {{1, 3}, 400, 3}, 6);
  Baseline fw(oracle_config(FrameworkKind::baseline), src->schema());
  std::vector<DriftEvent> events;
  fw.set_trace([&](const DriftEvent& ev) { events.push_back(ev); });
  drive(fw, *src, [&](const Instance& x, std::uint64_t i) { fw.process(x, i); });
  REQUIRE(events.size() == 3);
  CHECK(events[0].buffer_length == 60);
  CHECK(events[2].instance == 1260);
}
