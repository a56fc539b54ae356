#include "ecpf/stream/schema.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ecpf {

namespace {

void require_unique(const std::vector<std::string>& items, const std::string& what) {
  std::unordered_set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(item).second) {
      throw std::invalid_argument("duplicate " + what + " '" + item + "'");
    }
  }
}

}  // namespace

AttributeSpec AttributeSpec::numeric(std::string name) {
  return AttributeSpec{std::move(name), AttributeKind::numeric, {}};
}

AttributeSpec AttributeSpec::nominal(std::string name, std::vector<std::string> values) {
  return AttributeSpec{std::move(name), AttributeKind::nominal, std::move(values)};
}

std::optional<std::size_t> AttributeSpec::index_of(const std::string& value) const {
  const auto it = std::find(values.begin(), values.end(), value);
  if (it == values.end()) return std::nullopt;
  return static_cast<std::size_t>(it - values.begin());
}

Schema::Schema(std::vector<AttributeSpec> attributes, std::vector<std::string> class_values,
               std::string relation, std::string class_name)
    : attributes_(std::move(attributes)),
      class_values_(std::move(class_values)),
      relation_(std::move(relation)),
      class_name_(std::move(class_name)) {
  std::vector<std::string> names;
  names.reserve(attributes_.size());
  for (const auto& a : attributes_) {
    names.push_back(a.name);
    if (a.is_nominal()) {
      if (a.values.empty()) {
        throw std::invalid_argument("nominal attribute '" + a.name + "' has no values");
      }
      require_unique(a.values, "value of attribute '" + a.name + "'");
    } else {
      ++numeric_count_;
    }
  }
  require_unique(names, "attribute name");
  if (class_values_.size() < 2) {
    throw std::invalid_argument("schema needs at least two class values");
  }
  require_unique(class_values_, "class value");
}

std::optional<std::size_t> Schema::class_index_of(const std::string& label) const {
  const auto it = std::find(class_values_.begin(), class_values_.end(), label);
  if (it == class_values_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - class_values_.begin());
}

void validate(const Schema& schema, const Instance& instance) {
  if (instance.values.size() != schema.attribute_count()) {
    throw std::invalid_argument("instance has " + std::to_string(instance.values.size()) +
                                " values, schema expects " +
                                std::to_string(schema.attribute_count()));
  }
  if (instance.label >= schema.class_count()) {
    throw std::invalid_argument("label index " + std::to_string(instance.label) +
                                " out of range");
  }
  for (std::size_t i = 0; i < instance.values.size(); ++i) {
    const double v = instance.values[i];
    const auto& spec = schema.attribute(i);
    if (!std::isfinite(v)) {
      throw std::invalid_argument("attribute '" + spec.name + "' is not finite");
    }
    if (spec.is_nominal()) {
      if (v < 0 || v != std::floor(v) || v >= static_cast<double>(spec.value_count())) {
        throw std::invalid_argument("attribute '" + spec.name + "' has invalid nominal index");
      }
    }
  }
}

bool conforms(const Schema& schema, const Instance& instance) noexcept {
  try {
    validate(schema, instance);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

}  // namespace ecpf
