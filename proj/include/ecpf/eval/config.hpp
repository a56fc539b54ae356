#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "json.hpp"

#include "ecpf/eval/plan.hpp"

namespace ecpf::eval {

using Json = nlohmann::ordered_json;

// JSON mapping of the configuration types. Readers start from `base` and
// override the keys present; unknown keys and ill-typed values throw
// ConfigError.
Json to_json(const drift::DetectorSpec& spec);
Json to_json(const learn::LearnerSpec& spec);
Json to_json(const meta::FrameworkConfig& config, const std::string& name = "");
Json to_json(const StreamConfig& config);

drift::DetectorSpec detector_from_json(const Json& j, drift::DetectorSpec base = {});
learn::LearnerSpec learner_from_json(const Json& j, learn::LearnerSpec base = {});
meta::FrameworkConfig framework_from_json(const Json& j, meta::FrameworkConfig base = {},
                                          std::string* name = nullptr);
StreamConfig stream_from_json(const Json& j, StreamConfig base = {});

// {"frameworks": [...], "streams": [...], "seeds": [...]} or, instead of
// "seeds", "repetitions" with an optional "base_seed" (seeds base_seed,
// base_seed + 1, ...). Cells are ordered stream, framework, seed.
ExperimentPlan plan_from_json(const Json& j);
Json to_json(const ExperimentPlan& plan);

Json read_json_file(const std::filesystem::path& path);  // throws ConfigError

}  // namespace ecpf::eval
