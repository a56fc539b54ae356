#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ecpf/stream/schema.hpp"

namespace ecpf {

struct StreamItem {
  Instance instance;
  bool drift = false;  // true only on the first instance of a new concept
};

// Single-consumer supplier of instances conforming to one schema. next()
// returns std::nullopt once exhausted; read failures throw, they are never
// reported as exhaustion.
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual const SchemaPtr& schema() const noexcept = 0;
  virtual std::optional<StreamItem> next() = 0;
};

using SourcePtr = std::unique_ptr<StreamSource>;

// In-memory source, mostly for tests and buffered replays.
class VectorSource final : public StreamSource {
 public:
  VectorSource(SchemaPtr schema, std::vector<StreamItem> items);
  VectorSource(SchemaPtr schema, const std::vector<Instance>& instances);

  const SchemaPtr& schema() const noexcept override { return schema_; }
  std::optional<StreamItem> next() override;

 private:
  SchemaPtr schema_;
  std::vector<StreamItem> items_;
  std::size_t pos_ = 0;
};

enum class FileFormat { arff, csv };

struct FileStreamOptions {
  FileFormat format = FileFormat::arff;
  // Column holding the class; defaults to the last column after any drops.
  std::optional<std::size_t> class_column;
  // CSV only: header names of columns to ignore entirely.
  std::vector<std::string> drop_columns;
};

FileFormat format_from_path(const std::filesystem::path& path);

// Opens an ARFF (minimal subset: @relation, numeric and nominal
// @attribute, @data, '%' comments) or a CSV file with a header row. CSV
// columns are numeric unless a value fails to parse as a number, in which
// case they become nominal over the observed values in order of first
// appearance. The CSV class column is always nominal; if all its labels
// are numeric they are ordered numerically.
SourcePtr open_file_stream(const std::filesystem::path& path, const FileStreamOptions& options);

// Locale-independent numeric literal parsing; the whole token must parse.
std::optional<double> parse_number(std::string_view token) noexcept;

}  // namespace ecpf
