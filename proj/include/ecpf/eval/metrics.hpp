#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ecpf::eval {

// k×k counts, rows = true label, columns = predicted label.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes);
  // Row-major k×k counts; throws std::invalid_argument if not square.
  static ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows);

  void add(std::size_t truth, std::size_t predicted, std::uint64_t count = 1);

  std::size_t classes() const noexcept { return k_; }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts_.at(truth * k_ + predicted); }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t trace() const noexcept;
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t column_sum(std::size_t predicted) const;

  double accuracy() const;  // throws std::invalid_argument when empty

 private:
  std::size_t k_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// (p0 − pc) / (1 − pc); 0 when pc = 1. Throws std::invalid_argument for an
// empty matrix.
double kappa(const ConfusionMatrix& confusion);

}  // namespace ecpf::eval
