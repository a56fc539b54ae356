#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_map>

#include "ecpf/core/errors.hpp"
#include "ecpf/stream/source.hpp"

namespace ecpf {

VectorSource::VectorSource(SchemaPtr schema, std::vector<StreamItem> items)
    : schema_(std::move(schema)), items_(std::move(items)) {}

VectorSource::VectorSource(SchemaPtr schema, const std::vector<Instance>& instances)
    : schema_(std::move(schema)) {
  items_.reserve(instances.size());
  for (const auto& inst : instances) items_.push_back(StreamItem{inst, false});
}

std::optional<StreamItem> VectorSource::next() {
  if (pos_ >= items_.size()) return std::nullopt;
  return items_[pos_++];
}

std::optional<double> parse_number(std::string_view token) noexcept {
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

FileFormat format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".csv") return FileFormat::csv;
  if (ext == ".arff") return FileFormat::arff;
  throw ConfigError("cannot infer file format from '" + path.string() + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return std::string(s);
}

// Splits on commas outside single or double quotes; tokens are trimmed and
// unquoted.
std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  char quote = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
    } else if (c == '\'' || c == '"') {
      quote = c;
    } else if (c == ',') {
      out.push_back(unquote(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(unquote(line.substr(start)));
  return out;
}

bool iequals_prefix(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

bool is_missing(const std::string& token) { return token.empty() || token == "?"; }

struct Column {
  enum class Role { numeric, nominal, label, dropped };
  Role role = Role::numeric;
  std::string name;
  std::unordered_map<std::string, std::size_t> lookup;  // nominal and label
};

// Converts a tokenized row into an Instance; shared by both formats.
class RowDecoder {
 public:
  explicit RowDecoder(std::vector<Column> columns) : columns_(std::move(columns)) {
    for (const auto& c : columns_) {
      if (c.role == Column::Role::numeric || c.role == Column::Role::nominal) ++attr_count_;
    }
  }

  Instance decode(const std::vector<std::string>& fields, std::size_t row) const {
    if (fields.size() != columns_.size()) {
      throw RowError(row, "expected " + std::to_string(columns_.size()) + " fields, found " +
                              std::to_string(fields.size()));
    }
    Instance inst;
    inst.values.reserve(attr_count_);
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      const auto& col = columns_[i];
      const auto& tok = fields[i];
      if (col.role == Column::Role::dropped) continue;
      if (is_missing(tok)) throw RowError(row, "missing value in column '" + col.name + "'");
      switch (col.role) {
        case Column::Role::numeric: {
          const auto v = parse_number(tok);
          if (!v) throw RowError(row, "non-numeric value '" + tok + "' in column '" + col.name + "'");
          inst.values.push_back(*v);
          break;
        }
        case Column::Role::nominal:
        case Column::Role::label: {
          const auto it = col.lookup.find(tok);
          if (it == col.lookup.end()) {
            throw RowError(row, "unknown value '" + tok + "' in column '" + col.name + "'");
          }
          if (col.role == Column::Role::label) {
            inst.label = it->second;
          } else {
            inst.values.push_back(static_cast<double>(it->second));
          }
          break;
        }
        case Column::Role::dropped:
          break;
      }
    }
    return inst;
  }

 private:
  std::vector<Column> columns_;
  std::size_t attr_count_ = 0;
};

Column make_lookup_column(Column::Role role, std::string name, const std::vector<std::string>& values) {
  Column c;
  c.role = role;
  c.name = std::move(name);
  for (std::size_t i = 0; i < values.size(); ++i) c.lookup.emplace(values[i], i);
  return c;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StreamError("cannot open '" + path.string() + "'");
  return in;
}

// Reads data lines, skipping blanks (and comments when requested).
class LineReader {
 public:
  LineReader(std::ifstream in, bool arff_comments) : in_(std::move(in)), comments_(arff_comments) {}

  // Returns the next content line, or nullopt at end of file.
  std::optional<std::string> next(std::size_t& line_no) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no;
      const auto t = trim(line);
      if (t.empty()) continue;
      if (comments_ && t.front() == '%') continue;
      return std::string(t);
    }
    if (in_.bad()) throw StreamError("read failure");
    return std::nullopt;
  }

  std::ifstream& stream() { return in_; }

 private:
  std::ifstream in_;
  bool comments_;
};

class DelimitedSource final : public StreamSource {
 public:
  DelimitedSource(SchemaPtr schema, RowDecoder decoder, LineReader reader, std::size_t line_no)
      : schema_(std::move(schema)),
        decoder_(std::move(decoder)),
        reader_(std::move(reader)),
        line_no_(line_no) {}

  const SchemaPtr& schema() const noexcept override { return schema_; }

  std::optional<StreamItem> next() override {
    auto line = reader_.next(line_no_);
    if (!line) return std::nullopt;
    ++row_;
    return StreamItem{decoder_.decode(split_fields(*line), row_), false};
  }

 private:
  SchemaPtr schema_;
  RowDecoder decoder_;
  LineReader reader_;
  std::size_t line_no_;
  std::size_t row_ = 0;
};

// --- ARFF -----------------------------------------------------------------

struct ArffAttribute {
  std::string name;
  bool nominal = false;
  std::vector<std::string> values;
};

ArffAttribute parse_arff_attribute(std::string_view rest, std::size_t line_no) {
  rest = trim(rest);
  ArffAttribute attr;
  std::size_t name_end = 0;
  if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
    const auto close = rest.find(rest.front(), 1);
    if (close == std::string_view::npos) throw ParseError(line_no, "unterminated attribute name");
    attr.name = std::string(rest.substr(1, close - 1));
    name_end = close + 1;
  } else {
    name_end = rest.find_first_of(" \t");
    if (name_end == std::string_view::npos) throw ParseError(line_no, "attribute type missing");
    attr.name = std::string(rest.substr(0, name_end));
  }
  const auto type = trim(rest.substr(name_end));
  if (type.empty()) throw ParseError(line_no, "attribute type missing");
  if (type.front() == '{') {
    if (type.back() != '}') throw ParseError(line_no, "unterminated nominal value list");
    attr.nominal = true;
    attr.values = split_fields(type.substr(1, type.size() - 2));
    if (attr.values.size() == 1 && attr.values.front().empty()) attr.values.clear();
    if (attr.values.empty()) throw ParseError(line_no, "empty nominal value list");
    for (const auto& v : attr.values) {
      if (v.empty()) throw ParseError(line_no, "empty nominal value");
    }
    return attr;
  }
  if (iequals_prefix(type, "numeric") || iequals_prefix(type, "real") ||
      iequals_prefix(type, "integer")) {
    return attr;
  }
  throw ParseError(line_no, "unsupported attribute type '" + std::string(type) + "'");
}

SourcePtr open_arff(const std::filesystem::path& path, const FileStreamOptions& options) {
  LineReader reader(open_or_throw(path), true);
  std::size_t line_no = 0;
  std::string relation = path.stem().string();
  std::vector<ArffAttribute> attrs;
  bool in_data = false;
  while (auto line = reader.next(line_no)) {
    const std::string_view l = *line;
    if (iequals_prefix(l, "@relation")) {
      relation = unquote(l.substr(9));
    } else if (iequals_prefix(l, "@attribute")) {
      attrs.push_back(parse_arff_attribute(l.substr(10), line_no));
    } else if (iequals_prefix(l, "@data")) {
      in_data = true;
      break;
    } else {
      throw ParseError(line_no, "unexpected header line '" + std::string(l) + "'");
    }
  }
  if (!in_data) throw ParseError(line_no, "missing @data section");
  if (attrs.size() < 2) throw ParseError(line_no, "need at least one attribute plus the class");
  const std::size_t class_col = options.class_column.value_or(attrs.size() - 1);
  if (class_col >= attrs.size()) throw ConfigError("class column out of range");
  if (!attrs[class_col].nominal) {
    throw ConfigError("class attribute '" + attrs[class_col].name + "' must be nominal");
  }

  std::vector<AttributeSpec> specs;
  std::vector<Column> columns;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const auto& a = attrs[i];
    if (i == class_col) {
      columns.push_back(make_lookup_column(Column::Role::label, a.name, a.values));
    } else if (a.nominal) {
      specs.push_back(AttributeSpec::nominal(a.name, a.values));
      columns.push_back(make_lookup_column(Column::Role::nominal, a.name, a.values));
    } else {
      specs.push_back(AttributeSpec::numeric(a.name));
      columns.push_back(Column{Column::Role::numeric, a.name, {}});
    }
  }
  SchemaPtr schema;
  try {
    schema = std::make_shared<const Schema>(std::move(specs), attrs[class_col].values, relation,
                                            attrs[class_col].name);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, e.what());
  }
  return std::make_unique<DelimitedSource>(std::move(schema), RowDecoder(std::move(columns)),
                                           std::move(reader), line_no);
}

// --- CSV ------------------------------------------------------------------

struct ColumnSurvey {
  bool numeric = true;
  std::vector<std::string> values;  // first-appearance order
  std::unordered_map<std::string, std::size_t> seen;

  void observe(const std::string& tok) {
    if (numeric && !parse_number(tok)) numeric = false;
    if (seen.emplace(tok, values.size()).second) values.push_back(tok);
  }
};

SourcePtr open_csv(const std::filesystem::path& path, const FileStreamOptions& options) {
  std::vector<std::string> header;
  std::vector<ColumnSurvey> survey;
  std::size_t header_line = 0;
  {
    LineReader reader(open_or_throw(path), false);
    std::size_t line_no = 0;
    auto first = reader.next(line_no);
    if (!first) throw ParseError(line_no, "missing header row");
    header_line = line_no;
    header = split_fields(*first);
    for (const auto& h : header) {
      if (h.empty()) throw ParseError(line_no, "empty column name in header");
    }
    survey.resize(header.size());
    std::size_t row = 0;
    while (auto line = reader.next(line_no)) {
      ++row;
      const auto fields = split_fields(*line);
      if (fields.size() != header.size()) {
        throw RowError(row, "expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(fields.size()));
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (is_missing(fields[i])) {
          throw RowError(row, "missing value in column '" + header[i] + "'");
        }
        survey[i].observe(fields[i]);
      }
    }
  }

  std::vector<bool> dropped(header.size(), false);
  for (const auto& name : options.drop_columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it != header.end()) dropped[static_cast<std::size_t>(it - header.begin())] = true;
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!dropped[i]) kept.push_back(i);
  }
  if (kept.size() < 2) throw ParseError(header_line, "need at least one attribute plus the class");
  const std::size_t class_pos = options.class_column.value_or(kept.size() - 1);
  if (class_pos >= kept.size()) throw ConfigError("class column out of range");
  const std::size_t class_col = kept[class_pos];

  auto& class_survey = survey[class_col];
  std::vector<std::string> class_values = class_survey.values;
  if (class_survey.numeric) {
    std::stable_sort(class_values.begin(), class_values.end(),
                     [](const std::string& a, const std::string& b) {
                       return *parse_number(a) < *parse_number(b);
                     });
  }

  std::vector<AttributeSpec> specs;
  std::vector<Column> columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (dropped[i]) {
      columns.push_back(Column{Column::Role::dropped, header[i], {}});
    } else if (i == class_col) {
      columns.push_back(make_lookup_column(Column::Role::label, header[i], class_values));
    } else if (survey[i].numeric) {
      specs.push_back(AttributeSpec::numeric(header[i]));
      columns.push_back(Column{Column::Role::numeric, header[i], {}});
    } else {
      specs.push_back(AttributeSpec::nominal(header[i], survey[i].values));
      columns.push_back(make_lookup_column(Column::Role::nominal, header[i], survey[i].values));
    }
  }
  if (class_values.size() < 2) {
    // Degenerate single-class files still stream; pad with a placeholder label.
    class_values.push_back(class_values.empty() ? "__none0" : "__other");
    if (class_values.size() < 2) class_values.push_back("__none1");
  }
  SchemaPtr schema;
  try {
    schema = std::make_shared<const Schema>(std::move(specs), class_values, path.stem().string(),
                                            header[class_col]);
  } catch (const std::invalid_argument& e) {
    throw ParseError(header_line, e.what());
  }

  LineReader reader(open_or_throw(path), false);
  std::size_t line_no = 0;
  reader.next(line_no);  // header
  return std::make_unique<DelimitedSource>(std::move(schema), RowDecoder(std::move(columns)),
                                           std::move(reader), line_no);
}

}  // namespace

SourcePtr open_file_stream(const std::filesystem::path& path, const FileStreamOptions& options) {
  if (!std::filesystem::exists(path)) {
    throw StreamError("no such file '" + path.string() + "'");
  }
  return options.format == FileFormat::arff ? open_arff(path, options) : open_csv(path, options);
}

}  // namespace ecpf
