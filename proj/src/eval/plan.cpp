#include "ecpf/eval/plan.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "ecpf/core/errors.hpp"

namespace ecpf::eval {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, p) : std::string("nan");
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& s, const char* column) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw UsageError(std::string("bad value '") + s + "' in column " + column);
  }
  return v;
}

}  // namespace

std::string StreamConfig::label() const {
  if (!name.empty()) return name;
  if (file) return file->stem().string();
  return std::string(gen::to_string(family));
}

void validate(const StreamConfig& c) {
  if (c.file) {
    if (!std::filesystem::exists(*c.file)) throw ConfigError("stream file not found: " + c.file->string());
  } else {
    gen::validate(c.family, c.schedule);
  }
}

SourcePtr open_stream(const StreamConfig& c, std::uint64_t seed) {
  validate(c);
  std::optional<gen::NoiseSpec> noise = c.noise;
  if (noise) {
    if (noise->is_identity()) {
      noise.reset();
    } else {
      noise->seed = derive_seed(seed, noise->seed ^ 0x6e6f697365ULL);
    }
  }
  if (c.file) {
    FileStreamOptions opts = c.file_options;
    opts.format = format_from_path(*c.file);
    SourcePtr src = open_file_stream(*c.file, opts);
    if (noise) src = gen::apply_noise(std::move(src), *noise);
    return src;
  }
  return gen::scheduled_stream(c.family, c.schedule, seed, noise);
}

std::string Cell::framework_label() const {
  return framework_name.empty() ? std::string(meta::to_string(framework.kind)) : framework_name;
}

CellResult run_cell(const Cell& cell, std::size_t plan_index, const PrequentialOptions& options) {
  CellResult r;
  r.plan_index = plan_index;
  r.framework = cell.framework_label();
  r.stream = cell.stream.label();
  r.seed = cell.seed;
  try {
    SourcePtr source = open_stream(cell.stream, cell.seed);
    meta::FrameworkPtr framework = meta::make_framework(cell.framework, source->schema());
    r.run = run_prequential(*framework, *source, options);
  } catch (const std::exception& e) {
    r.run = RunResult{};
    r.status = "failed: " + sanitize(e.what());
  }
  return r;
}

std::vector<CellResult> run_plan(const ExperimentPlan& plan, std::size_t parallelism,
                                 const PrequentialOptions& options) {
  if (plan.cells.empty()) throw std::invalid_argument("plan has no cells");
  std::vector<CellResult> results(plan.cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < plan.cells.size(); i = next.fetch_add(1)) {
      results[i] = run_cell(plan.cells[i], i, options);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(parallelism, 1, plan.cells.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return results;
}

void write_results_csv(std::ostream& out, const std::vector<CellResult>& results) {
  out << "plan_index,framework,stream,seed,instances,accuracy,kappa,runtime_ms,peak_memory_bytes,drifts_detected,"
         "status\n";
  for (const auto& r : results) {
    out << r.plan_index << ',' << sanitize(r.framework) << ',' << sanitize(r.stream) << ',' << r.seed << ','
        << r.run.instances << ',' << format_double(r.run.accuracy) << ',' << format_double(r.run.kappa) << ','
        << format_double(r.run.runtime_ms) << ',' << r.run.peak_memory_bytes << ',' << r.run.drifts_detected
        << ',' << sanitize(r.status) << '\n';
  }
}

std::vector<CellResult> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw UsageError("results file is empty");
  const auto header = split_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* required : {"framework", "stream", "seed", "accuracy"}) {
    if (!col.count(required)) throw UsageError(std::string("results file lacks column '") + required + "'");
  }
  const auto get = [&](const std::vector<std::string>& f, const char* name) -> const std::string* {
    const auto it = col.find(name);
    if (it == col.end() || it->second >= f.size()) return nullptr;
    return &f[it->second];
  };
  std::vector<CellResult> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != header.size()) throw UsageError("results row has " + std::to_string(f.size()) + " fields");
    CellResult r;
    r.plan_index = out.size();
    if (const auto* v = get(f, "plan_index")) r.plan_index = parse_field<std::size_t>(*v, "plan_index");
    r.framework = *get(f, "framework");
    r.stream = *get(f, "stream");
    r.seed = parse_field<std::uint64_t>(*get(f, "seed"), "seed");
    r.run.accuracy = parse_field<double>(*get(f, "accuracy"), "accuracy");
    if (const auto* v = get(f, "instances")) r.run.instances = parse_field<std::uint64_t>(*v, "instances");
    if (const auto* v = get(f, "kappa")) r.run.kappa = parse_field<double>(*v, "kappa");
    if (const auto* v = get(f, "runtime_ms")) r.run.runtime_ms = parse_field<double>(*v, "runtime_ms");
    if (const auto* v = get(f, "peak_memory_bytes")) {
      r.run.peak_memory_bytes = parse_field<std::size_t>(*v, "peak_memory_bytes");
    }
    if (const auto* v = get(f, "drifts_detected")) {
      r.run.drifts_detected = parse_field<std::uint64_t>(*v, "drifts_detected");
    }
    if (const auto* v = get(f, "status")) r.status = *v;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CellResult> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  return read_results_csv(in);
}

}  // namespace ecpf::eval
