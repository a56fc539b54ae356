#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ecpf/core/rng.hpp"
#include "ecpf/drift/detector.hpp"
#include "ecpf/eval/metrics.hpp"
#include "ecpf/eval/plan.hpp"
#include "ecpf/eval/summary.hpp"
#include "ecpf/gen/generators.hpp"
#include "ecpf/meta/ecpf.hpp"
#include "ecpf/meta/trace.hpp"

using namespace ecpf;

namespace {

constexpr std::uint64_t kSeeds = 10;

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("%s  %2d  %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const std::string& what) {
  std::printf("info    %s\n", what.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c, d);
  return buf;
}

eval::Cell desk_cell(meta::FrameworkKind kind, gen::Family family, std::uint64_t seed) {
  eval::Cell c;
  c.framework.kind = kind;
  c.framework.detector.kind = drift::DetectorKind::oracle;
  c.framework.detector.lead = 60;
  c.stream.family = family;
  c.stream.schedule = {gen::legal_concepts(family), 1000, 100};
  c.seed = seed;
  return c;
}

struct Traced {
  eval::CellResult result;
  std::vector<meta::DriftEvent> events;
  std::size_t copy_checks = 0;
  std::size_t copy_mismatches = 0;
};

std::vector<Instance> probe_set(gen::Family family) {
  auto src = gen::scheduled_stream(family, {gen::legal_concepts(family), 200, 4}, 999);
  std::vector<Instance> out;
  while (auto item = src->next()) out.push_back(item->instance);
  return out;
}

// Runs one cell with the trace log and, for ECPF, the copy-isolation probe.
Traced run_traced(const eval::Cell& cell, std::size_t plan_index, const std::vector<Instance>& probe) {
  Traced t;
  auto src = eval::open_stream(cell.stream, cell.seed);
  auto fw = meta::make_framework(cell.framework, src->schema());
  auto* e = dynamic_cast<meta::Ecpf*>(fw.get());
  std::optional<std::uint64_t> source;
  std::vector<std::size_t> snapshot;
  fw->set_trace([&](const meta::DriftEvent& ev) {
    t.events.push_back(ev);
    if (e == nullptr) return;
    source = e->reused_source();
    snapshot.clear();
    if (!source) return;
    const meta::ClassifierRecord* r = e->collection().find(*source);
    if (r == nullptr) {
      source.reset();
      return;
    }
    for (const auto& x : probe) snapshot.push_back(r->learner->predict(x));
  });
  if (e != nullptr) {
    e->set_drift_observer([&](const meta::Ecpf& fw_now) {
      if (!source) return;
      const meta::ClassifierRecord* r = fw_now.collection().find(*source);
      if (r == nullptr) return;
      ++t.copy_checks;
      for (std::size_t i = 0; i < probe.size(); ++i) t.copy_mismatches += r->learner->predict(probe[i]) != snapshot[i];
    });
  }
  t.result.plan_index = plan_index;
  t.result.framework = cell.framework_label();
  t.result.stream = cell.stream.label();
  t.result.seed = cell.seed;
  t.result.run = eval::run_prequential(*fw, *src);
  return t;
}

std::vector<meta::DriftEvent> through_csv(const std::vector<meta::DriftEvent>& events) {
  std::stringstream ss;
  meta::write_trace_header(ss);
  for (const auto& ev : events) meta::write_trace_row(ss, ev);
  return meta::read_trace(ss);
}

// Replays the error-vector log and compares every pair with the logged matrix.
bool similarity_matches(const std::vector<meta::DriftEvent>& events, std::size_t& pairs_checked) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, meta::PairStats> brute;
  for (const auto& ev : events) {
    for (std::size_t i = 0; i < ev.errors.size(); ++i) {
      for (std::size_t j = i + 1; j < ev.errors.size(); ++j) {
        const auto& a = ev.errors[i];
        const auto& b = ev.errors[j];
        if (a.bits.size() != b.bits.size()) return false;
        auto& s = brute[{std::min(a.id, b.id), std::max(a.id, b.id)}];
        s.seen += a.bits.size();
        for (std::size_t k = 0; k < a.bits.size(); ++k) s.agree += a.bits[k] == b.bits[k] ? 1 : 0;
      }
    }
    std::set<std::uint64_t> gone(ev.deletions.begin(), ev.deletions.end());
    for (const auto& rep : ev.representations) gone.insert(rep.deleted);
    std::erase_if(brute, [&](const auto& kv) { return gone.count(kv.first.first) || gone.count(kv.first.second); });

    std::map<std::pair<std::uint64_t, std::uint64_t>, meta::PairStats> live;
    for (const auto& row : ev.similarity) live[{row.a, row.b}] = {row.seen, row.agree};
    if (live != brute) return false;
    pairs_checked += live.size();
  }
  return true;
}

bool closed_form_holds(const std::vector<meta::DriftEvent>& events, std::int64_t f, std::size_t& rows_checked) {
  for (const auto& ev : events) {
    for (const auto& row : ev.fade) {
      const auto r = static_cast<std::int64_t>(row.reuse_count);
      const auto d = static_cast<std::int64_t>(row.drifts_survived);
      if (row.points != (r + 1) * f + row.inherited - (d - r)) return false;
      ++rows_checked;
    }
  }
  return true;
}

bool same_non_timing(const eval::CellResult& a, const eval::CellResult& b) {
  return a.framework == b.framework && a.stream == b.stream && a.seed == b.seed && a.status == b.status &&
         a.run.instances == b.run.instances && a.run.accuracy == b.run.accuracy && a.run.kappa == b.run.kappa &&
         a.run.peak_memory_bytes == b.run.peak_memory_bytes && a.run.drifts_detected == b.run.drifts_detected &&
         a.run.max_collection_size == b.run.max_collection_size;
}

double mean_accuracy(const std::vector<eval::CellResult>& rs, const std::string& fw, const std::string& stream) {
  std::vector<double> v;
  for (const auto& r : rs) {
    if (r.framework == fw && r.stream == stream) v.push_back(r.run.accuracy);
  }
  return eval::sample_mean(v);
}

}  // namespace

int main() {
  const auto started = std::chrono::steady_clock::now();

  // Desk-scale runs behind criteria 1-6 and 11.
  eval::ExperimentPlan desk;
  for (std::uint64_t s = 1; s <= kSeeds; ++s) {
    desk.cells.push_back(desk_cell(meta::FrameworkKind::ecpf, gen::Family::stagger, s));
  }
  for (const auto family : {gen::Family::agrawal, gen::Family::random_rbf}) {
    for (const auto kind : {meta::FrameworkKind::ecpf, meta::FrameworkKind::cpf, meta::FrameworkKind::baseline}) {
      for (std::uint64_t s = 1; s <= kSeeds; ++s) desk.cells.push_back(desk_cell(kind, family, s));
    }
  }
  std::map<gen::Family, std::vector<Instance>> probes;
  std::vector<Traced> traced;
  const auto desk_started = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < desk.cells.size(); ++i) {
    const auto& cell = desk.cells[i];
    if (!probes.count(cell.stream.family)) probes[cell.stream.family] = probe_set(cell.stream.family);
    traced.push_back(run_traced(cell, i, probes[cell.stream.family]));
  }
  const double desk_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - desk_started).count();
  std::vector<eval::CellResult> results;
  for (const auto& t : traced) results.push_back(t.result);

  // 1
  {
    const double m = mean_accuracy(results, "ecpf", "stagger");
    report(1, m >= 0.975, fmt("STAGGER ECPF oracle desk scale: mean accuracy %.4f (need >= 0.975)", m));
    eval::ExperimentPlan longer;
    for (std::uint64_t s = 1; s <= kSeeds; ++s) {
      eval::Cell c = desk_cell(meta::FrameworkKind::ecpf, gen::Family::stagger, s);
      c.stream.schedule = {{1, 2, 3}, 2500, 100};
      longer.cells.push_back(c);
    }
    const auto lr = eval::run_plan(longer, 1);
    info(fmt("STAGGER ECPF oracle with 2500-instance segments: mean accuracy %.4f", mean_accuracy(lr, "ecpf", "stagger")));
  }

  // 2
  {
    bool pass = true;
    std::string detail;
    for (const std::string stream : {"agrawal", "random_rbf"}) {
      const double e = mean_accuracy(results, "ecpf", stream);
      const double c = mean_accuracy(results, "cpf", stream);
      const double b = mean_accuracy(results, "baseline", stream);
      pass = pass && e >= c && e >= b + 0.02;
      detail += stream + fmt(" ecpf %.4f cpf %.4f baseline %.4f; ", e, c, b);
    }
    report(2, pass, "reuse ordering (ecpf >= cpf, ecpf >= baseline + 0.02): " + detail);
  }

  // 3
  {
    std::size_t worst = 0;
    std::size_t worst_cpf = 0;
    for (const auto& t : traced) {
      if (t.result.framework == "ecpf") worst = std::max(worst, t.result.run.max_collection_size);
      if (t.result.framework == "cpf") worst_cpf = std::max(worst_cpf, t.result.run.max_collection_size);
    }
    const std::size_t bound = 2 * 15;
    report(3, worst <= bound,
           fmt("ECPF collection bound: largest collection %.0f over all desk runs (need <= 2f = %.0f)",
               static_cast<double>(worst), static_cast<double>(bound)));
    info(fmt("CPF largest collection over the same runs: %.0f", static_cast<double>(worst_cpf)));
  }

  // 4, 5
  {
    bool sim_ok = true;
    bool fade_ok = true;
    bool log_ok = true;
    std::size_t pairs = 0;
    std::size_t rows = 0;
    std::size_t runs = 0;
    for (const auto& t : traced) {
      if (t.result.framework != "ecpf") continue;
      ++runs;
      const auto parsed = through_csv(t.events);
      log_ok = log_ok && parsed == t.events;
      sim_ok = sim_ok && similarity_matches(parsed, pairs);
      fade_ok = fade_ok && closed_form_holds(parsed, 15, rows);
    }
    report(4, sim_ok && log_ok,
           fmt("similarity recomputed from logged error vectors equals the live matrix: %.0f runs, %.0f pair states",
               static_cast<double>(runs), static_cast<double>(pairs)));
    report(5, fade_ok && log_ok,
           fmt("fade points equal (r+1)f + inherited - (d-r): %.0f record states", static_cast<double>(rows)));
  }

  // 6
  {
    std::size_t checks = 0;
    std::size_t mismatches = 0;
    for (const auto& t : traced) {
      checks += t.copy_checks;
      mismatches += t.copy_mismatches;
    }
    report(6, checks > 0 && mismatches == 0,
           fmt("copy isolation on a 1000-instance probe: %.0f segments checked, %.0f mismatches",
               static_cast<double>(checks), static_cast<double>(mismatches)));
  }

  // 7
  {
    std::size_t detected = 0;
    std::vector<std::size_t> false_drifts;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      drift::HddmA d;
      Rng rng(seed);
      bool hit = false;
      for (std::uint64_t i = 0; i < 5500 && !hit; ++i) {
        const bool fired = d.input(rng.bernoulli(i < 5000 ? 0.2 : 0.5), i) == drift::DriftSignal::drift;
        hit = fired && i >= 5000;
      }
      detected += hit ? 1 : 0;

      drift::HddmA q;
      Rng qr(1000 + seed);
      std::size_t n = 0;
      for (std::uint64_t i = 0; i < 100000; ++i) n += q.input(qr.bernoulli(0.2), i) == drift::DriftSignal::drift;
      false_drifts.push_back(n);
    }
    auto sorted = false_drifts;
    std::sort(sorted.begin(), sorted.end());
    const double median = (static_cast<double>(sorted[49]) + static_cast<double>(sorted[50])) / 2;
    report(7, detected >= 95 && median == 0,
           fmt("HDDM-A: step 0.2->0.5 detected within 500 on %.0f/100 seeds (need >= 95); median false drifts %.1f "
               "over 1e5 stationary instances (need 0)",
               static_cast<double>(detected), median));
    const auto over = std::count_if(false_drifts.begin(), false_drifts.end(), [](std::size_t n) { return n > 2; });
    info(fmt("HDDM-A stationary false drifts: max %.0f per seed, %.0f/100 seeds above 2",
             static_cast<double>(sorted.back()), static_cast<double>(over)));
  }

  // 8
  {
    Rng rng(2024);
    bool in_range = true;
    std::size_t checked = 0;
    while (checked < 10000) {
      const std::size_t k = 2 + rng.below(9);
      eval::ConfusionMatrix m(k);
      const std::uint64_t scale = 1 + rng.below(rng.bernoulli(0.5) ? 5 : 1000);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
          if (!rng.bernoulli(0.2)) m.add(a, b, rng.below(scale + 1));
        }
      }
      if (m.total() == 0) continue;
      const double v = eval::kappa(m);
      in_range = in_range && v >= -1.0 && v <= 1.0;
      ++checked;
    }
    const double fixture = eval::kappa(eval::ConfusionMatrix::from_rows({{40, 10}, {10, 40}}));
    report(8, in_range && fixture == 0.6,
           fmt("kappa within [-1, 1] on 10000 random matrices; [[40,10],[10,40]] gives %.15g", fixture));
  }

  // 9
  {
    eval::Cell e = desk_cell(meta::FrameworkKind::ecpf, gen::Family::agrawal, 1);
    e.stream.schedule = {gen::legal_concepts(gen::Family::agrawal), 1000, 999};
    eval::Cell b = e;
    b.framework.kind = meta::FrameworkKind::baseline;
    const auto re = eval::run_cell(e, 0);
    const auto rb = eval::run_cell(b, 1);
    const double ratio = re.run.runtime_ms / rb.run.runtime_ms;
    report(9, re.ok() && rb.ok() && re.run.instances == 1000000 && ratio <= 2.5,
           fmt("runtime on 1e6 Agrawal instances: ECPF %.0f ms, baseline %.0f ms, ratio %.2f (need <= 2.5)",
               re.run.runtime_ms, rb.run.runtime_ms, ratio));
    info(fmt("baseline throughput %.0f instances/s (soft target 1e5)",
             static_cast<double>(rb.run.instances) / (rb.run.runtime_ms / 1000.0)));
  }

  // 10
  {
    eval::ExperimentPlan plan;
    for (const double m : {0.90, 0.99}) {
      for (std::uint64_t s = 1; s <= kSeeds; ++s) {
        eval::Cell c = desk_cell(meta::FrameworkKind::ecpf, gen::Family::agrawal, s);
        c.framework.m = m;
        c.framework_name = m < 0.95 ? "m090" : "m099";
        plan.cells.push_back(c);
      }
    }
    const auto rs = eval::run_plan(plan, 1);
    const double low = mean_accuracy(rs, "m090", "agrawal");
    const double high = mean_accuracy(rs, "m099", "agrawal");
    report(10, high >= low, fmt("Agrawal ECPF m=0.99 mean %.4f vs m=0.90 mean %.4f (need >=)", high, low));
  }

  // 11
  {
    const auto again = eval::run_plan(desk, 1);
    bool same = again.size() == results.size();
    for (std::size_t i = 0; same && i < again.size(); ++i) same = same_non_timing(again[i], results[i]);
    report(11, same,
           fmt("determinism: %.0f desk runs repeated with identical non-timing columns",
               static_cast<double>(results.size())));
  }

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  info(fmt("desk runs %.1f s, whole acceptance %.1f s", desk_seconds, total));
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
