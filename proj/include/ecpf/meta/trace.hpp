#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ecpf/meta/record.hpp"

namespace ecpf::meta {

struct FadeRow {
  std::uint64_t id = 0;
  std::int64_t points = 0;
  std::uint64_t reuse_count = 0;
  std::uint64_t drifts_survived = 0;
  std::int64_t inherited = 0;
  bool operator==(const FadeRow&) const = default;
};

struct ErrorRow {
  std::uint64_t id = 0;
  std::string bits;  // one '0'/'1' per buffer instance, '1' = error
  bool operator==(const ErrorRow&) const = default;
};

struct SimilarityRow {
  std::uint64_t a = 0, b = 0;
  std::uint64_t seen = 0, agree = 0;
  bool operator==(const SimilarityRow&) const = default;
};

// What happened at one handled drift. The collection state (fade table,
// similarity) is recorded after all updates of that drift.
struct DriftEvent {
  std::uint64_t drift = 0;     // 1-based count of handled drifts
  std::uint64_t instance = 0;  // index of the instance that completed the drift
  std::size_t buffer_length = 0;
  std::optional<std::uint64_t> saved;
  std::optional<std::uint64_t> reused;
  std::vector<Representation> representations;
  std::vector<std::uint64_t> deletions;  // faded out or evicted
  std::vector<FadeRow> fade;
  std::vector<ErrorRow> errors;  // classifiers evaluated on the buffer
  std::vector<SimilarityRow> similarity;

  bool operator==(const DriftEvent&) const = default;
};

void fill_state(DriftEvent& event, const Collection& collection, const BufferEvaluation& evaluation);

// One header line plus one line per event. Lists inside a field are
// separated by ';'. Formats: representations "survivor<deleted:points",
// fade "id:points:r:d:inherited", errors "id=bits", similarity
// "a-b:seen/agree".
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const DriftEvent& event);
std::vector<DriftEvent> read_trace(std::istream& in);  // throws ParseError
std::vector<DriftEvent> read_trace(const std::filesystem::path& path);

}  // namespace ecpf::meta
