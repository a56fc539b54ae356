#include "ecpf/meta/similarity.hpp"

#include <stdexcept>

#include "ecpf/simd/kernels.hpp"

namespace ecpf::meta {

std::size_t BufferEvaluation::index_of(std::uint64_t id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return i;
  }
  throw std::out_of_range("classifier " + std::to_string(id) + " not in evaluation");
}

void BufferEvaluation::push(std::uint64_t id, const std::vector<bool>& error_flags) {
  if (ids.empty()) length = error_flags.size();
  if (error_flags.size() != length) throw std::invalid_argument("error vector length mismatch");
  std::vector<std::uint64_t> bits((length + 63) / 64, 0);
  std::size_t right = 0;
  for (std::size_t i = 0; i < length; ++i) {
    if (error_flags[i]) {
      bits[i / 64] |= std::uint64_t{1} << (i % 64);
    } else {
      ++right;
    }
  }
  ids.push_back(id);
  errors.push_back(std::move(bits));
  correct.push_back(right);
}

void SimilarityMatrix::update(const BufferEvaluation& ev) {
  if (ev.length == 0) return;
  for (std::size_t i = 0; i < ev.ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ev.ids.size(); ++j) {
      PairStats& s = entries_[key(ev.ids[i], ev.ids[j])];
      s.seen += ev.length;
      s.agree += simd::count_equal_bits(ev.errors[i], ev.errors[j], ev.length);
    }
  }
}

PairStats SimilarityMatrix::get(std::uint64_t a, std::uint64_t b) const {
  const auto it = entries_.find(key(a, b));
  return it == entries_.end() ? PairStats{} : it->second;
}

void SimilarityMatrix::remove(std::uint64_t id) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->first.first == id || it->first.second == id) {
      it = entries_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace ecpf::meta
