#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace ecpf::drift {

enum class DriftSignal { stable, warning, drift };

std::string_view to_string(DriftSignal signal) noexcept;

enum class DetectorKind { oracle, hddm_a, rddm };

std::string_view to_string(DetectorKind kind) noexcept;
DetectorKind parse_detector_kind(std::string_view name);  // throws ConfigError

// Three-state error-rate monitor. input() takes one classification outcome
// (true = error) and the instance index, which must strictly increase
// between resets.
class DriftDetector {
 public:
  virtual ~DriftDetector() = default;

  // Throws UsageError when index does not exceed the previous one.
  DriftSignal input(bool error, std::uint64_t index);
  // Clears statistics; parameters are kept.
  void reset();

  // Ground-truth hook used by the oracle; a no-op for statistical detectors.
  virtual void mark_true_drift(std::uint64_t /*index*/) {}
  virtual DetectorKind kind() const noexcept = 0;
  virtual std::unique_ptr<DriftDetector> clone() const = 0;

 protected:
  virtual DriftSignal update(bool error, std::uint64_t index) = 0;
  virtual void clear() = 0;

 private:
  std::optional<std::uint64_t> last_index_;
};

using DetectorPtr = std::unique_ptr<DriftDetector>;

// Warning from each true drift position p through p + lead - 1, Drift at
// p + lead. Ignores the error input.
class OracleDetector final : public DriftDetector {
 public:
  explicit OracleDetector(std::size_t lead = 60, std::vector<std::uint64_t> positions = {});

  void mark_true_drift(std::uint64_t index) override;
  DetectorKind kind() const noexcept override { return DetectorKind::oracle; }
  DetectorPtr clone() const override { return std::make_unique<OracleDetector>(*this); }
  std::size_t lead() const noexcept { return lead_; }

 protected:
  DriftSignal update(bool error, std::uint64_t index) override;
  void clear() override { next_ = 0; }

 private:
  std::size_t lead_;
  std::vector<std::uint64_t> positions_;  // sorted
  std::size_t next_ = 0;                  // first position not yet signalled as Drift
};

// HDDM with the bounded-average (A) test, one-sided for error increases.
class HddmA final : public DriftDetector {
 public:
  explicit HddmA(double drift_confidence = 0.001, double warning_confidence = 0.005);

  DetectorKind kind() const noexcept override { return DetectorKind::hddm_a; }
  DetectorPtr clone() const override { return std::make_unique<HddmA>(*this); }
  double drift_confidence() const noexcept { return drift_confidence_; }
  double warning_confidence() const noexcept { return warning_confidence_; }

 protected:
  DriftSignal update(bool error, std::uint64_t index) override;
  void clear() override;

 private:
  double drift_confidence_;
  double warning_confidence_;
  double n_min_ = 0, c_min_ = 0, n_max_ = 0, c_max_ = 0, total_n_ = 0, total_c_ = 0;
};

struct RddmOptions {
  std::size_t min_instances = 129;
  double warning_level = 1.773;
  double drift_level = 2.258;
  std::size_t max_concept_size = 40000;
  std::size_t stable_concept_size = 7000;
  std::size_t warning_limit = 1400;
};

// DDM variant that, after a drift, rebuilds its statistics from the most
// recent stored predictions, and forces a drift after long warnings or very
// long concepts.
class Rddm final : public DriftDetector {
 public:
  explicit Rddm(RddmOptions options = {});

  DetectorKind kind() const noexcept override { return DetectorKind::rddm; }
  DetectorPtr clone() const override { return std::make_unique<Rddm>(*this); }
  const RddmOptions& options() const noexcept { return opt_; }

 protected:
  DriftSignal update(bool error, std::uint64_t index) override;
  void clear() override;

 private:
  void reset_learning(bool after_change);

  RddmOptions opt_;
  std::vector<std::uint8_t> stored_;
  std::size_t stored_count_ = 0;
  std::size_t first_pos_ = 0;
  std::ptrdiff_t last_pos_ = -1;
  std::ptrdiff_t last_warn_pos_ = -1;
  std::int64_t last_warn_inst_ = -1;
  std::int64_t inst_num_ = 0;
  bool rebuild_ = false;
  bool change_ = false;
  double n_ = 1, p_ = 1, s_ = 0;
  double p_min_ = 0, s_min_ = 0, ps_min_ = 0;
};

struct DetectorSpec {
  DetectorKind kind = DetectorKind::hddm_a;
  double drift_confidence = 0.001;
  double warning_confidence = 0.005;
  RddmOptions rddm;
  std::size_t lead = 60;
};

// Throws ConfigError for out-of-range parameters.
void validate(const DetectorSpec& spec);
DetectorPtr make_detector(const DetectorSpec& spec);

}  // namespace ecpf::drift
