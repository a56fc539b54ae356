#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "ecpf/meta/framework.hpp"
#include "ecpf/stream/source.hpp"

namespace ecpf::eval {

struct RunResult {
  std::uint64_t instances = 0;
  double accuracy = 0;
  double kappa = 0;
  double runtime_ms = 0;
  std::size_t peak_memory_bytes = 0;
  std::uint64_t drifts_detected = 0;
  std::size_t max_collection_size = 0;
};

struct PrequentialOptions {
  std::uint64_t memory_sample_interval = 10000;
  // Stop after this many instances (0 = run to exhaustion).
  std::uint64_t max_instances = 0;
};

// Test-then-train over the whole source. Only framework calls are timed.
// Peak memory is the largest framework size estimate sampled at every
// drift signal and every memory_sample_interval instances. Throws
// std::invalid_argument for an empty stream; stream errors propagate.
RunResult run_prequential(meta::Framework& framework, StreamSource& source, const PrequentialOptions& options = {});

}  // namespace ecpf::eval
