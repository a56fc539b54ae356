#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ecpf/eval/prequential.hpp"
#include "ecpf/gen/schedule.hpp"
#include "ecpf/meta/framework.hpp"

namespace ecpf::eval {

// Either a generator schedule or a file.
struct StreamConfig {
  std::string name;  // defaults to the family name or the file stem
  gen::Family family = gen::Family::stagger;
  gen::ConceptSchedule schedule{{1, 2, 3}, 1000, 100};
  std::optional<gen::NoiseSpec> noise;
  std::optional<std::filesystem::path> file;
  FileStreamOptions file_options;

  std::string label() const;
};

void validate(const StreamConfig& config);  // throws ConfigError
// For generators the seed drives the instance sequence; files ignore it.
SourcePtr open_stream(const StreamConfig& config, std::uint64_t seed);

struct Cell {
  std::string framework_name;  // defaults to the framework kind
  meta::FrameworkConfig framework;
  StreamConfig stream;
  std::uint64_t seed = 1;

  std::string framework_label() const;
};

struct ExperimentPlan {
  std::vector<Cell> cells;
};

struct CellResult {
  std::size_t plan_index = 0;
  std::string framework;
  std::string stream;
  std::uint64_t seed = 0;
  RunResult run;
  std::string status = "ok";  // "ok" or "failed: <reason>"

  bool ok() const noexcept { return status == "ok"; }
};

// Opens the stream, builds the framework and runs it prequentially.
CellResult run_cell(const Cell& cell, std::size_t plan_index, const PrequentialOptions& options = {});

// Runs every cell on up to `parallelism` threads; results follow plan order.
// A failing cell is recorded in its status and does not stop the others.
std::vector<CellResult> run_plan(const ExperimentPlan& plan, std::size_t parallelism,
                                 const PrequentialOptions& options = {});

// Results CSV: plan_index, framework, stream, seed, instances, accuracy,
// kappa, runtime_ms, peak_memory_bytes, drifts_detected, status.
void write_results_csv(std::ostream& out, const std::vector<CellResult>& results);
// Throws UsageError when a required column is missing.
std::vector<CellResult> read_results_csv(std::istream& in);
std::vector<CellResult> read_results_csv(const std::filesystem::path& path);

}  // namespace ecpf::eval
