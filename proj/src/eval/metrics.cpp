#include "ecpf/eval/metrics.hpp"

#include <stdexcept>

namespace ecpf::eval {

ConfusionMatrix::ConfusionMatrix(std::size_t classes) : k_(classes), counts_(classes * classes, 0) {
  if (classes == 0) throw std::invalid_argument("confusion matrix needs at least one class");
}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("confusion matrix must be square");
    for (std::size_t j = 0; j < rows.size(); ++j) m.add(i, j, rows[i][j]);
  }
  return m;
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::uint64_t count) {
  if (truth >= k_ || predicted >= k_) throw std::out_of_range("label outside confusion matrix");
  counts_[truth * k_ + predicted] += count;
  total_ += count;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < k_; ++i) t += counts_[i * k_ + i];
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < k_; ++j) s += counts_.at(truth * k_ + j);
  return s;
}

std::uint64_t ConfusionMatrix::column_sum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < k_; ++i) s += counts_.at(i * k_ + predicted);
  return s;
}

double ConfusionMatrix::accuracy() const {
  if (total_ == 0) throw std::invalid_argument("accuracy of an empty confusion matrix");
  return static_cast<double>(trace()) / static_cast<double>(total_);
}

double kappa(const ConfusionMatrix& m) {
  if (m.total() == 0) throw std::invalid_argument("kappa of an empty confusion matrix");
  // (N·trace − Σ r_i c_i) / (N² − Σ r_i c_i), exact in integers until the final division.
  __extension__ using wide = __int128;
  const auto n = static_cast<wide>(m.total());
  wide chance = 0;
  for (std::size_t i = 0; i < m.classes(); ++i) {
    chance += static_cast<wide>(m.row_sum(i)) * static_cast<wide>(m.column_sum(i));
  }
  const wide num = n * static_cast<wide>(m.trace()) - chance;
  const wide den = n * n - chance;
  if (den == 0) return 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace ecpf::eval
