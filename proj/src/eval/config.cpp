#include "ecpf/eval/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <string>
#include <type_traits>

#include "ecpf/core/errors.hpp"

namespace ecpf::eval {

namespace {

void require_object(const Json& j, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

void allow_keys(const Json& j, const char* what, std::initializer_list<const char*> keys) {
  require_object(j, what);
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + what);
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!it->is_number_unsigned()) throw ConfigError(std::string("key '") + key + "' must be a non-negative integer");
  } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    if (!it->is_number_integer()) throw ConfigError(std::string("key '") + key + "' must be an integer");
  }
  try {
    out = it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("key '") + key + "' has the wrong type");
  }
}

std::string read_string(const Json& j, const char* key, const std::string& fallback) {
  std::string s = fallback;
  read(j, key, s);
  return s;
}

}  // namespace

Json to_json(const drift::DetectorSpec& s) {
  Json j;
  j["kind"] = std::string(drift::to_string(s.kind));
  switch (s.kind) {
    case drift::DetectorKind::oracle: j["lead"] = s.lead; break;
    case drift::DetectorKind::hddm_a:
      j["drift_confidence"] = s.drift_confidence;
      j["warning_confidence"] = s.warning_confidence;
      break;
    case drift::DetectorKind::rddm:
      j["rddm"] = {{"min_instances", s.rddm.min_instances},
                   {"warning_level", s.rddm.warning_level},
                   {"drift_level", s.rddm.drift_level},
                   {"max_concept_size", s.rddm.max_concept_size},
                   {"stable_concept_size", s.rddm.stable_concept_size},
                   {"warning_limit", s.rddm.warning_limit}};
      break;
  }
  return j;
}

drift::DetectorSpec detector_from_json(const Json& j, drift::DetectorSpec s) {
  allow_keys(j, "detector", {"kind", "lead", "drift_confidence", "warning_confidence", "rddm"});
  if (j.contains("kind")) s.kind = drift::parse_detector_kind(read_string(j, "kind", ""));
  read(j, "lead", s.lead);
  read(j, "drift_confidence", s.drift_confidence);
  read(j, "warning_confidence", s.warning_confidence);
  if (j.contains("rddm")) {
    const Json& r = j["rddm"];
    allow_keys(r, "rddm", {"min_instances", "warning_level", "drift_level", "max_concept_size",
                           "stable_concept_size", "warning_limit"});
    read(r, "min_instances", s.rddm.min_instances);
    read(r, "warning_level", s.rddm.warning_level);
    read(r, "drift_level", s.rddm.drift_level);
    read(r, "max_concept_size", s.rddm.max_concept_size);
    read(r, "stable_concept_size", s.rddm.stable_concept_size);
    read(r, "warning_limit", s.rddm.warning_limit);
  }
  drift::validate(s);
  return s;
}

Json to_json(const learn::LearnerSpec& s) {
  Json j;
  j["kind"] = std::string(learn::to_string(s.kind));
  if (s.kind == learn::LearnerKind::hoeffding_tree) {
    j["grace_period"] = s.tree.grace_period;
    j["split_confidence"] = s.tree.split_confidence;
    j["tie_threshold"] = s.tree.tie_threshold;
  } else if (s.kind == learn::LearnerKind::perceptron) {
    j["learning_rate"] = s.learning_rate;
  }
  return j;
}

learn::LearnerSpec learner_from_json(const Json& j, learn::LearnerSpec s) {
  allow_keys(j, "learner", {"kind", "grace_period", "split_confidence", "tie_threshold", "learning_rate"});
  if (j.contains("kind")) s.kind = learn::parse_learner_kind(read_string(j, "kind", ""));
  read(j, "grace_period", s.tree.grace_period);
  read(j, "split_confidence", s.tree.split_confidence);
  read(j, "tie_threshold", s.tree.tie_threshold);
  read(j, "learning_rate", s.learning_rate);
  if (s.tree.grace_period == 0) throw ConfigError("grace_period must be positive");
  if (!(s.tree.split_confidence > 0 && s.tree.split_confidence < 1)) {
    throw ConfigError("split_confidence must lie in (0, 1)");
  }
  if (!(s.tree.tie_threshold >= 0)) throw ConfigError("tie_threshold must be non-negative");
  if (!(s.learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  return s;
}

Json to_json(const meta::FrameworkConfig& c, const std::string& name) {
  Json j;
  if (!name.empty()) j["name"] = name;
  j["kind"] = std::string(meta::to_string(c.kind));
  j["m"] = c.m;
  j["f"] = c.f;
  j["b_min"] = c.b_min;
  j["min_obs"] = c.min_obs;
  if (c.memory_cap) {
    j["memory_cap"] = *c.memory_cap;
  } else {
    j["memory_cap"] = nullptr;
  }
  j["detector"] = to_json(c.detector);
  j["learner"] = to_json(c.learner);
  return j;
}

meta::FrameworkConfig framework_from_json(const Json& j, meta::FrameworkConfig c, std::string* name) {
  allow_keys(j, "framework", {"name", "kind", "m", "f", "b_min", "min_obs", "memory_cap", "detector", "learner"});
  if (j.contains("kind")) c.kind = meta::parse_framework_kind(read_string(j, "kind", ""));
  if (name != nullptr) *name = read_string(j, "name", *name);
  read(j, "m", c.m);
  read(j, "f", c.f);
  read(j, "b_min", c.b_min);
  read(j, "min_obs", c.min_obs);
  if (j.contains("memory_cap")) {
    if (j["memory_cap"].is_null()) {
      c.memory_cap.reset();
    } else {
      std::size_t cap = 0;
      read(j, "memory_cap", cap);
      c.memory_cap = cap;
    }
  }
  if (j.contains("detector")) c.detector = detector_from_json(j["detector"], c.detector);
  if (j.contains("learner")) c.learner = learner_from_json(j["learner"], c.learner);
  meta::validate(c);
  return c;
}

Json to_json(const StreamConfig& c) {
  Json j;
  if (!c.name.empty()) j["name"] = c.name;
  if (c.file) {
    j["file"] = c.file->string();
    if (c.file_options.class_column) j["class_column"] = *c.file_options.class_column;
    if (!c.file_options.drop_columns.empty()) j["drop_columns"] = c.file_options.drop_columns;
  } else {
    j["family"] = std::string(gen::to_string(c.family));
    j["concepts"] = c.schedule.concepts;
    j["period"] = c.schedule.drift_period;
    j["drifts"] = c.schedule.total_drifts;
  }
  if (c.noise) {
    Json n;
    n["attribute_noise"] = c.noise->attribute_noise;
    n["class_noise"] = c.noise->class_noise;
    if (c.noise->majority_fraction) {
      n["majority_fraction"] = *c.noise->majority_fraction;
    } else {
      n["majority_fraction"] = nullptr;
    }
    n["seed"] = c.noise->seed;
    j["noise"] = n;
  }
  return j;
}

StreamConfig stream_from_json(const Json& j, StreamConfig c) {
  allow_keys(j, "stream",
             {"name", "family", "concepts", "period", "drifts", "noise", "file", "class_column", "drop_columns"});
  read(j, "name", c.name);
  if (j.contains("family")) {
    c.family = gen::parse_family(read_string(j, "family", ""));
    if (!j.contains("concepts")) c.schedule.concepts = gen::legal_concepts(c.family);
  }
  read(j, "concepts", c.schedule.concepts);
  read(j, "period", c.schedule.drift_period);
  read(j, "drifts", c.schedule.total_drifts);
  if (j.contains("file")) {
    if (j["file"].is_null()) {
      c.file.reset();
    } else {
      c.file = std::filesystem::path(read_string(j, "file", ""));
    }
  }
  if (j.contains("class_column")) {
    std::size_t col = 0;
    read(j, "class_column", col);
    c.file_options.class_column = col;
  }
  read(j, "drop_columns", c.file_options.drop_columns);
  if (j.contains("noise")) {
    if (j["noise"].is_null()) {
      c.noise.reset();
    } else {
      const Json& n = j["noise"];
      allow_keys(n, "noise", {"attribute_noise", "class_noise", "majority_fraction", "seed"});
      gen::NoiseSpec spec = c.noise.value_or(gen::NoiseSpec{});
      read(n, "attribute_noise", spec.attribute_noise);
      read(n, "class_noise", spec.class_noise);
      read(n, "seed", spec.seed);
      if (n.contains("majority_fraction")) {
        if (n["majority_fraction"].is_null()) {
          spec.majority_fraction.reset();
        } else {
          double v = 0;
          read(n, "majority_fraction", v);
          spec.majority_fraction = v;
        }
      }
      c.noise = spec;
    }
  }
  if (!c.file) gen::validate(c.family, c.schedule);
  return c;
}

ExperimentPlan plan_from_json(const Json& j) {
  allow_keys(j, "plan", {"frameworks", "streams", "seeds", "repetitions", "base_seed", "cells"});
  ExperimentPlan plan;
  if (j.contains("cells")) {
    if (!j["cells"].is_array()) throw ConfigError("'cells' must be an array");
    for (const Json& cj : j["cells"]) {
      allow_keys(cj, "cell", {"framework", "stream", "seed"});
      Cell cell;
      if (cj.contains("framework")) cell.framework = framework_from_json(cj["framework"], {}, &cell.framework_name);
      if (cj.contains("stream")) cell.stream = stream_from_json(cj["stream"]);
      read(cj, "seed", cell.seed);
      plan.cells.push_back(std::move(cell));
    }
    return plan;
  }
  if (!j.contains("frameworks") || !j["frameworks"].is_array() || j["frameworks"].empty()) {
    throw ConfigError("plan needs a non-empty 'frameworks' array");
  }
  if (!j.contains("streams") || !j["streams"].is_array() || j["streams"].empty()) {
    throw ConfigError("plan needs a non-empty 'streams' array");
  }
  std::vector<std::uint64_t> seeds;
  if (j.contains("seeds")) {
    const Json& list = j.at("seeds");
    if (!list.is_array()) throw ConfigError("key 'seeds' must be an array");
    for (const auto& v : list) {
      if (!v.is_number_unsigned()) throw ConfigError("seeds must be non-negative integers");
    }
    read(j, "seeds", seeds);
  } else {
    std::size_t reps = 1;
    std::uint64_t base = 1;
    read(j, "repetitions", reps);
    read(j, "base_seed", base);
    for (std::size_t i = 0; i < reps; ++i) seeds.push_back(base + i);
  }
  if (seeds.empty()) throw ConfigError("plan has no seeds");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("plan seeds must be distinct");
  }
  std::vector<std::pair<std::string, meta::FrameworkConfig>> frameworks;
  for (const Json& fj : j["frameworks"]) {
    std::string name;
    auto config = framework_from_json(fj, {}, &name);
    frameworks.emplace_back(name, config);
  }
  std::vector<StreamConfig> streams;
  for (const Json& sj : j["streams"]) streams.push_back(stream_from_json(sj));
  for (const auto& stream : streams) {
    for (const auto& [name, fw] : frameworks) {
      for (const auto seed : seeds) plan.cells.push_back(Cell{name, fw, stream, seed});
    }
  }
  return plan;
}

Json to_json(const ExperimentPlan& plan) {
  Json cells = Json::array();
  for (const auto& c : plan.cells) {
    cells.push_back({{"framework", to_json(c.framework, c.framework_name)},
                     {"stream", to_json(c.stream)},
                     {"seed", c.seed}});
  }
  return Json{{"cells", cells}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

}  // namespace ecpf::eval
