#include "commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "ecpf/core/errors.hpp"
#include "ecpf/eval/config.hpp"
#include "ecpf/eval/plan.hpp"
#include "ecpf/eval/prequential.hpp"
#include "ecpf/eval/summary.hpp"
#include "ecpf/meta/trace.hpp"

namespace ecpf::cli {

namespace fs = std::filesystem;
using eval::Json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

struct StreamFlags {
  std::string family;
  std::string concepts;
  std::size_t period = 0;
  std::size_t drifts = 0;
  std::string file;
  std::size_t class_column = 0;
  std::vector<std::string> drop_columns;
  double attribute_noise = 0;
  double class_noise = 0;
  double majority_fraction = 0;
  CLI::Option* o_family = nullptr;
  CLI::Option* o_concepts = nullptr;
  CLI::Option* o_period = nullptr;
  CLI::Option* o_drifts = nullptr;
  CLI::Option* o_file = nullptr;
  CLI::Option* o_class_column = nullptr;
  CLI::Option* o_drop = nullptr;
  CLI::Option* o_attribute_noise = nullptr;
  CLI::Option* o_class_noise = nullptr;
  CLI::Option* o_majority = nullptr;

  void attach(CLI::App& app) {
    o_family = app.add_option("--family", family, "generator family (agrawal, circles, led, random_rbf, stagger)");
    o_concepts = app.add_option("--concepts", concepts, "comma-separated concept values, cycled in order");
    o_period = app.add_option("--period", period, "instances per concept segment");
    o_drifts = app.add_option("--drifts", drifts, "number of concept switches");
    o_file = app.add_option("--file", file, "read an ARFF or CSV file instead of a generator");
    o_class_column = app.add_option("--class-column", class_column, "0-based class column of a file stream");
    o_drop = app.add_option("--drop-column", drop_columns, "CSV column to ignore (repeatable)");
    o_attribute_noise = app.add_option("--attribute-noise", attribute_noise, "attribute noise level in [0, 1]");
    o_class_noise = app.add_option("--class-noise", class_noise, "label flip probability");
    o_majority = app.add_option("--majority-fraction", majority_fraction, "target fraction of class 0");
  }

  Json overlay() const {
    Json j = Json::object();
    if (o_family->count()) j["family"] = family;
    if (o_concepts->count()) j["concepts"] = parse_concepts(concepts);
    if (o_period->count()) j["period"] = period;
    if (o_drifts->count()) j["drifts"] = drifts;
    if (o_file->count()) j["file"] = file;
    if (o_class_column->count()) j["class_column"] = class_column;
    if (o_drop->count()) j["drop_columns"] = drop_columns;
    Json noise = Json::object();
    if (o_attribute_noise->count()) noise["attribute_noise"] = attribute_noise;
    if (o_class_noise->count()) noise["class_noise"] = class_noise;
    if (o_majority->count()) noise["majority_fraction"] = majority_fraction;
    if (!noise.empty()) j["noise"] = noise;
    return j;
  }

  static std::vector<double> parse_concepts(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
      const auto v = parse_number(token);
      if (!v) throw ConfigError("concept value '" + token + "' is not a number");
      out.push_back(*v);
    }
    if (out.empty()) throw ConfigError("--concepts needs at least one value");
    return out;
  }
};

struct FrameworkFlags {
  std::string framework;
  double m = 0;
  std::int64_t f = 0;
  std::size_t b_min = 0;
  std::uint64_t min_obs = 0;
  std::size_t memory_cap = 0;
  std::string detector;
  std::size_t lead = 0;
  std::string learner;
  CLI::Option* o_framework = nullptr;
  CLI::Option* o_m = nullptr;
  CLI::Option* o_f = nullptr;
  CLI::Option* o_b_min = nullptr;
  CLI::Option* o_min_obs = nullptr;
  CLI::Option* o_memory_cap = nullptr;
  CLI::Option* o_detector = nullptr;
  CLI::Option* o_lead = nullptr;
  CLI::Option* o_learner = nullptr;

  void attach(CLI::App& app) {
    o_framework = app.add_option("--framework", framework, "ecpf, cpf or baseline");
    o_m = app.add_option("--m", m, "similarity threshold");
    o_f = app.add_option("--f", f, "fade points on creation and reuse");
    o_b_min = app.add_option("--b-min", b_min, "CPF minimum buffer size");
    o_min_obs = app.add_option("--min-obs", min_obs, "shared observations before representation");
    o_memory_cap = app.add_option("--memory-cap", memory_cap, "maximum number of stored classifiers");
    o_detector = app.add_option("--detector", detector, "oracle, hddm_a or rddm");
    o_lead = app.add_option("--lead", lead, "oracle warning lead in instances");
    o_learner = app.add_option("--learner", learner, "hoeffding_tree, naive_bayes or perceptron");
  }

  Json overlay() const {
    Json j = Json::object();
    if (o_framework->count()) j["kind"] = framework;
    if (o_m->count()) j["m"] = m;
    if (o_f->count()) j["f"] = f;
    if (o_b_min->count()) j["b_min"] = b_min;
    if (o_min_obs->count()) j["min_obs"] = min_obs;
    if (o_memory_cap->count()) j["memory_cap"] = memory_cap;
    Json det = Json::object();
    if (o_detector->count()) det["kind"] = detector;
    if (o_lead->count()) det["lead"] = lead;
    if (!det.empty()) j["detector"] = det;
    if (o_learner->count()) j["learner"] = Json{{"kind", learner}};
    return j;
  }
};

Json load_config(const std::string& path, std::initializer_list<const char*> keys) {
  if (path.empty()) return Json::object();
  Json j = eval::read_json_file(path);
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in config file");
  }
  return j;
}

std::uint64_t resolve_seed(const Json& config, CLI::Option* flag, std::uint64_t value) {
  if (flag->count()) return value;
  if (!config.contains("seed")) return 1;
  if (!config["seed"].is_number_unsigned()) throw ConfigError("key 'seed' must be a non-negative integer");
  try {
    return config["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("key 'seed' has the wrong type");
  }
}

eval::StreamConfig resolve_stream(const Json& config, const StreamFlags& flags) {
  eval::StreamConfig s;
  if (config.contains("stream")) s = eval::stream_from_json(config["stream"], s);
  s = eval::stream_from_json(flags.overlay(), s);
  eval::validate(s);
  return s;
}

meta::FrameworkConfig resolve_framework(const Json& config, const FrameworkFlags& flags, std::string* name) {
  meta::FrameworkConfig c;
  if (config.contains("framework")) c = eval::framework_from_json(config["framework"], c, name);
  return eval::framework_from_json(flags.overlay(), c, name);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw StreamError("cannot write " + path.string());
  return out;
}

void write_json(const fs::path& path, const Json& j) {
  std::ofstream out = open_output(path);
  out << j.dump(2) << '\n';
}

std::string format_value(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void write_stream_csv(std::ostream& out, StreamSource& source) {
  const Schema& schema = *source.schema();
  for (const auto& a : schema.attributes()) out << csv_field(a.name) << ',';
  out << csv_field(schema.class_name()) << ",drift\n";
  while (auto item = source.next()) {
    const Instance& x = item->instance;
    for (std::size_t i = 0; i < schema.attribute_count(); ++i) {
      const auto& a = schema.attribute(i);
      if (a.is_nominal()) {
        out << csv_field(a.values.at(static_cast<std::size_t>(x.values[i])));
      } else {
        out << format_value(x.values[i]);
      }
      out << ',';
    }
    out << csv_field(schema.class_values().at(x.label)) << ',' << (item->drift ? 1 : 0) << '\n';
  }
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recurring-concept stream classification experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 1;
  bool trace = false;
  std::size_t parallelism = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> inputs;

  StreamFlags gen_stream;
  CLI::App* generate = app.add_subcommand("generate", "write a scheduled stream to CSV");
  generate->add_option("--config", config_path, "JSON config with 'seed' and 'stream'");
  generate->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* gen_seed = generate->add_option("--seed", seed, "stream seed");
  gen_stream.attach(*generate);

  StreamFlags run_stream;
  FrameworkFlags run_framework;
  CLI::App* run = app.add_subcommand("run", "run one framework on one stream");
  run->add_option("--config", config_path, "JSON config with 'seed', 'stream' and 'framework'");
  run->add_option("--out", out_dir, "output directory")->required();
  CLI::Option* run_seed = run->add_option("--seed", seed, "stream seed");
  run->add_flag("--trace", trace, "write the per-drift event log to trace.csv");
  run_stream.attach(*run);
  run_framework.attach(*run);

  CLI::App* bench = app.add_subcommand("bench", "run an experiment plan");
  bench->add_option("--config", config_path, "JSON plan file")->required();
  bench->add_option("--out", out_dir, "output directory")->required();
  bench->add_option("--parallelism", parallelism, "worker threads");

  CLI::App* compare = app.add_subcommand("compare", "summarise one or more results CSVs");
  compare->add_option("inputs", inputs, "results CSV files")->required();
  compare->add_option("--out", out_dir, "also write summary.csv here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kUsage;
  }

  eval::StreamConfig stream;
  meta::FrameworkConfig framework;
  std::string framework_name;
  eval::ExperimentPlan plan;
  std::vector<eval::CellResult> merged;
  try {
    if (*generate) {
      const Json config = load_config(config_path, {"seed", "stream"});
      seed = resolve_seed(config, gen_seed, seed);
      stream = resolve_stream(config, gen_stream);
    } else if (*run) {
      const Json config = load_config(config_path, {"seed", "stream", "framework"});
      seed = resolve_seed(config, run_seed, seed);
      stream = resolve_stream(config, run_stream);
      framework = resolve_framework(config, run_framework, &framework_name);
    } else if (*bench) {
      plan = eval::plan_from_json(eval::read_json_file(config_path));
      if (plan.cells.empty()) throw ConfigError("plan has no cells");
    } else {
      for (const auto& path : inputs) {
        auto rows = eval::read_results_csv(fs::path(path));
        merged.insert(merged.end(), rows.begin(), rows.end());
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }

  try {
    if (!out_dir.empty()) fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    if (*generate) {
      write_json(dir / "config.json", Json{{"seed", seed}, {"stream", eval::to_json(stream)}});
      SourcePtr source = eval::open_stream(stream, seed);
      std::ofstream csv = open_output(dir / "stream.csv");
      write_stream_csv(csv, *source);
      if (!csv) throw StreamError("write to stream.csv failed");
      return kOk;
    }

    if (*run) {
      write_json(dir / "config.json", Json{{"seed", seed},
                                           {"stream", eval::to_json(stream)},
                                           {"framework", eval::to_json(framework, framework_name)}});
      eval::Cell cell{framework_name, framework, stream, seed};
      eval::CellResult result;
      result.framework = cell.framework_label();
      result.stream = stream.label();
      result.seed = seed;
      SourcePtr source;
      try {
        source = eval::open_stream(stream, seed);
      } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
      }
      meta::FrameworkPtr fw = meta::make_framework(framework, source->schema());
      std::optional<std::ofstream> trace_out;
      if (trace) {
        trace_out.emplace(open_output(dir / "trace.csv"));
        meta::write_trace_header(*trace_out);
        fw->set_trace([&](const meta::DriftEvent& ev) { meta::write_trace_row(*trace_out, ev); });
      }
      result.run = eval::run_prequential(*fw, *source);
      std::ofstream csv = open_output(dir / "results.csv");
      eval::write_results_csv(csv, {result});
      out << result.framework << " on " << result.stream << " seed " << seed << ": accuracy "
          << format_value(result.run.accuracy) << ", kappa " << format_value(result.run.kappa) << ", "
          << result.run.instances << " instances, " << result.run.drifts_detected << " drifts, "
          << format_value(result.run.runtime_ms) << " ms\n";
      return kOk;
    }

    if (*bench) {
      write_json(dir / "config.json", eval::to_json(plan));
      const auto results = eval::run_plan(plan, parallelism);
      std::ofstream csv = open_output(dir / "results.csv");
      eval::write_results_csv(csv, results);
      const eval::Summary summary = eval::summarize(results);
      std::ofstream scsv = open_output(dir / "summary.csv");
      eval::write_summary_csv(scsv, summary);
      eval::print_summary(out, summary);
      std::size_t failed = 0;
      for (const auto& r : results) failed += r.ok() ? 0 : 1;
      if (failed) err << failed << " of " << results.size() << " cells failed; see results.csv\n";
      return kOk;
    }

    const eval::Summary summary = eval::summarize(merged);
    eval::print_summary(out, summary);
    if (!out_dir.empty()) {
      std::ofstream scsv = open_output(dir / "summary.csv");
      eval::write_summary_csv(scsv, summary);
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace ecpf::cli
