#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace ecpf::meta {

struct PairStats {
  std::uint64_t seen = 0;
  std::uint64_t agree = 0;

  double similarity() const noexcept {
    return seen == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(seen);
  }
  bool operator==(const PairStats&) const = default;
};

// Error outcomes of a set of classifiers on one buffer. errors[i] is a
// packed bitset over buffer positions (bit set = misclassified).
struct BufferEvaluation {
  std::size_t length = 0;
  std::vector<std::uint64_t> ids;
  std::vector<std::vector<std::uint64_t>> errors;
  std::vector<std::size_t> correct;

  std::size_t index_of(std::uint64_t id) const;  // throws std::out_of_range
  bool error_at(std::size_t row, std::size_t position) const noexcept {
    return (errors[row][position / 64] >> (position % 64)) & 1U;
  }
  void push(std::uint64_t id, const std::vector<bool>& error_flags);
};

// Pairwise agreement counts between stored classifiers, keyed by the
// ordered id pair (lower id first).
class SimilarityMatrix {
 public:
  using Key = std::pair<std::uint64_t, std::uint64_t>;

  // For each pair evaluated on the buffer: seen += length and agree += the
  // number of positions where both erred or both were right. No-op for an
  // empty buffer.
  void update(const BufferEvaluation& evaluation);

  PairStats get(std::uint64_t a, std::uint64_t b) const;
  double similarity(std::uint64_t a, std::uint64_t b) const { return get(a, b).similarity(); }
  void remove(std::uint64_t id);
  const std::map<Key, PairStats>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  static Key key(std::uint64_t a, std::uint64_t b) noexcept {
    return a < b ? Key{a, b} : Key{b, a};
  }

 private:
  std::map<Key, PairStats> entries_;
};

}  // namespace ecpf::meta
