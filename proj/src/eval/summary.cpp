#include "ecpf/eval/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

namespace ecpf::eval {

double sample_mean(const std::vector<double>& v) {
  if (v.empty()) return 0;
  double s = 0;
  for (const double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_stdev(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  const double mu = sample_mean(v);
  double ss = 0;
  for (const double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Summary summarize(const std::vector<CellResult>& results) {
  struct Acc {
    std::vector<double> accuracy, kappa, runtime;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;  // (stream, framework)
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : results) {
    seen.insert({r.stream, r.framework});
    if (!r.ok()) continue;
    Acc& a = groups[{r.stream, r.framework}];
    a.accuracy.push_back(r.run.accuracy);
    a.kappa.push_back(r.run.kappa);
    a.runtime.push_back(r.run.runtime_ms);
  }

  Summary out;
  for (const auto& key : seen) {
    if (!groups.count(key)) {
      out.warnings.push_back("group " + key.second + " / " + key.first + " has no successful results; excluded");
    }
  }
  for (const auto& [key, a] : groups) {
    SummaryRow row;
    row.stream = key.first;
    row.framework = key.second;
    row.n = a.accuracy.size();
    row.mean = sample_mean(a.accuracy);
    row.stdev = sample_stdev(a.accuracy);
    row.mean_kappa = sample_mean(a.kappa);
    row.mean_runtime_ms = sample_mean(a.runtime);
    out.rows.push_back(row);
  }

  std::map<std::string, std::vector<double>> ranks;
  for (std::size_t begin = 0; begin < out.rows.size();) {
    std::size_t end = begin;
    while (end < out.rows.size() && out.rows[end].stream == out.rows[begin].stream) ++end;
    for (std::size_t i = begin; i < end; ++i) {
      double better = 0;
      double equal = 0;
      for (std::size_t j = begin; j < end; ++j) {
        if (out.rows[j].mean > out.rows[i].mean) better += 1;
        if (out.rows[j].mean == out.rows[i].mean) equal += 1;
      }
      ranks[out.rows[i].framework].push_back(better + (equal + 1) / 2);
    }
    begin = end;
  }
  for (auto& row : out.rows) row.mean_rank = sample_mean(ranks[row.framework]);
  return out;
}

void write_summary_csv(std::ostream& out, const Summary& s) {
  out << "framework,stream,n,mean,stdev,mean_kappa,mean_runtime_ms,mean_rank\n";
  char buf[256];
  for (const auto& r : s.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g,%.6g,%.6g", r.n, r.mean, r.stdev, r.mean_kappa,
                  r.mean_runtime_ms, r.mean_rank);
    out << r.framework << ',' << r.stream << ',' << buf << '\n';
  }
}

void print_summary(std::ostream& out, const Summary& s) {
  std::size_t fw = 9;
  std::size_t st = 6;
  for (const auto& r : s.rows) {
    fw = std::max(fw, r.framework.size());
    st = std::max(st, r.stream.size());
  }
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-*s  %-*s  %4s  %18s  %8s  %9s\n", static_cast<int>(st), "stream",
                static_cast<int>(fw), "framework", "n", "accuracy (%)", "kappa", "mean_rank");
  out << buf;
  for (const auto& r : s.rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %4zu  %8.2f +- %6.2f  %8.4f  %9.3f\n", static_cast<int>(st),
                  r.stream.c_str(), static_cast<int>(fw), r.framework.c_str(), r.n, 100 * r.mean, 100 * r.stdev,
                  r.mean_kappa, r.mean_rank);
    out << buf;
  }
  for (const auto& w : s.warnings) out << "warning: " << w << '\n';
}

}  // namespace ecpf::eval
