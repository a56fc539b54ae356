#include "ecpf/eval/prequential.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "ecpf/eval/metrics.hpp"

namespace ecpf::eval {

RunResult run_prequential(meta::Framework& framework, StreamSource& source, const PrequentialOptions& options) {
  using clock = std::chrono::steady_clock;
  ConfusionMatrix confusion(source.schema()->class_count());
  RunResult result;
  clock::duration busy{};
  std::uint64_t index = 0;
  std::size_t peak = framework.size_estimate();

  while (options.max_instances == 0 || index < options.max_instances) {
    std::optional<StreamItem> item = source.next();
    if (!item) break;
    const auto t0 = clock::now();
    if (item->drift) framework.notify_true_drift(index);
    const std::size_t predicted = framework.predict(item->instance);
    const auto t1 = clock::now();
    confusion.add(item->instance.label, predicted);
    const auto t2 = clock::now();
    const drift::DriftSignal signal = framework.train(item->instance, index);
    const auto t3 = clock::now();
    busy += (t1 - t0) + (t3 - t2);
    ++index;
    if (signal == drift::DriftSignal::drift || index % options.memory_sample_interval == 0) {
      peak = std::max(peak, framework.size_estimate());
    }
  }
  if (index == 0) throw std::invalid_argument("stream produced no instances");
  peak = std::max(peak, framework.size_estimate());

  result.instances = index;
  result.accuracy = confusion.accuracy();
  result.kappa = kappa(confusion);
  result.runtime_ms = std::chrono::duration<double, std::milli>(busy).count();
  result.peak_memory_bytes = peak;
  result.drifts_detected = framework.drifts_detected();
  result.max_collection_size = framework.max_collection_size();
  return result;
}

}  // namespace ecpf::eval
