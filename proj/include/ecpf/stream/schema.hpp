#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ecpf {

enum class AttributeKind { numeric, nominal };

struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::numeric;
  std::vector<std::string> values;  // nominal only

  static AttributeSpec numeric(std::string name);
  static AttributeSpec nominal(std::string name, std::vector<std::string> values);

  bool is_nominal() const noexcept { return kind == AttributeKind::nominal; }
  std::size_t value_count() const noexcept { return values.size(); }
  std::optional<std::size_t> index_of(const std::string& value) const;

  bool operator==(const AttributeSpec&) const = default;
};

// Ordered predictor attributes plus the class attribute's labels. Validated
// on construction; an existing Schema always satisfies its invariants.
class Schema {
 public:
  Schema(std::vector<AttributeSpec> attributes, std::vector<std::string> class_values,
         std::string relation = "stream", std::string class_name = "class");

  const std::vector<AttributeSpec>& attributes() const noexcept { return attributes_; }
  const AttributeSpec& attribute(std::size_t i) const { return attributes_.at(i); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }

  const std::vector<std::string>& class_values() const noexcept { return class_values_; }
  std::size_t class_count() const noexcept { return class_values_.size(); }
  std::optional<std::size_t> class_index_of(const std::string& label) const;

  const std::string& relation() const noexcept { return relation_; }
  const std::string& class_name() const noexcept { return class_name_; }

  std::size_t numeric_count() const noexcept { return numeric_count_; }
  std::size_t nominal_count() const noexcept { return attributes_.size() - numeric_count_; }

  bool operator==(const Schema& other) const {
    return attributes_ == other.attributes_ && class_values_ == other.class_values_;
  }

 private:
  std::vector<AttributeSpec> attributes_;
  std::vector<std::string> class_values_;
  std::string relation_;
  std::string class_name_;
  std::size_t numeric_count_ = 0;
};

using SchemaPtr = std::shared_ptr<const Schema>;

// One labeled observation. Numeric attributes hold their value, nominal
// attributes hold the value index (stored as a double).
struct Instance {
  std::vector<double> values;
  std::size_t label = 0;

  bool operator==(const Instance&) const = default;
};

// Throws std::invalid_argument describing the first violation.
void validate(const Schema& schema, const Instance& instance);
bool conforms(const Schema& schema, const Instance& instance) noexcept;

}  // namespace ecpf
