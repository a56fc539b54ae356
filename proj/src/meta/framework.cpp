#include "ecpf/meta/framework.hpp"

#include <string>

#include "ecpf/core/errors.hpp"
#include "ecpf/meta/baseline.hpp"
#include "ecpf/meta/cpf.hpp"
#include "ecpf/meta/ecpf.hpp"

namespace ecpf::meta {

std::string_view to_string(FrameworkKind kind) noexcept {
  switch (kind) {
    case FrameworkKind::ecpf: return "ecpf";
    case FrameworkKind::cpf: return "cpf";
    case FrameworkKind::baseline: return "baseline";
  }
  return "unknown";
}

FrameworkKind parse_framework_kind(std::string_view name) {
  if (name == "ecpf") return FrameworkKind::ecpf;
  if (name == "cpf") return FrameworkKind::cpf;
  if (name == "baseline") return FrameworkKind::baseline;
  throw ConfigError("unknown framework '" + std::string(name) + "' (expected ecpf, cpf or baseline)");
}

void validate(const FrameworkConfig& c) {
  if (!(c.m > 0 && c.m <= 1)) throw ConfigError("m must lie in (0, 1]");
  if (c.f < 1) throw ConfigError("f must be at least 1");
  if (c.b_min < 1) throw ConfigError("b_min must be at least 1");
  if (c.memory_cap && *c.memory_cap == 0) throw ConfigError("memory_cap must be positive");
  drift::validate(c.detector);
}

FrameworkPtr make_framework(const FrameworkConfig& config, SchemaPtr schema) {
  switch (config.kind) {
    case FrameworkKind::ecpf: return std::make_unique<Ecpf>(config, std::move(schema));
    case FrameworkKind::cpf: return std::make_unique<Cpf>(config, std::move(schema));
    case FrameworkKind::baseline: return std::make_unique<Baseline>(config, std::move(schema));
  }
  throw ConfigError("unknown framework kind");
}

}  // namespace ecpf::meta
