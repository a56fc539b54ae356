#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ecpf/eval/plan.hpp"

namespace ecpf::eval {

struct SummaryRow {
  std::string framework;
  std::string stream;
  std::size_t n = 0;
  double mean = 0;   // accuracy
  double stdev = 0;  // sample standard deviation, 0 for a single result
  double mean_kappa = 0;
  double mean_runtime_ms = 0;
  double mean_rank = 0;  // of the framework, averaged over streams
};

struct Summary {
  std::vector<SummaryRow> rows;       // sorted by (stream, framework)
  std::vector<std::string> warnings;  // e.g. groups without successful results
};

double sample_mean(const std::vector<double>& values);
double sample_stdev(const std::vector<double>& values);

// Groups successful results by (framework, stream). Within each stream the
// frameworks are ranked by mean accuracy (1 = best, ties share the average
// rank); a framework's mean_rank averages its ranks over the streams where
// it appears.
Summary summarize(const std::vector<CellResult>& results);

// framework,stream,n,mean,stdev,mean_kappa,mean_runtime_ms,mean_rank
void write_summary_csv(std::ostream& out, const Summary& summary);
// Human-readable table: means ± stdev in percent and mean ranks.
void print_summary(std::ostream& out, const Summary& summary);

}  // namespace ecpf::eval
