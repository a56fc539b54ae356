#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ecpf/gen/generators.hpp"

namespace ecpf::gen {

struct NoiseSpec {
  double attribute_noise = 0.0;             // attnoise in [0, 1]
  double class_noise = 0.0;                 // probability in [0, 1]
  std::optional<double> majority_fraction;  // in [1/k, 1]; absent = natural balance
  std::uint64_t seed = 1;

  bool is_identity() const noexcept {
    return attribute_noise == 0.0 && class_noise == 0.0 && !majority_fraction;
  }
};

void validate(const NoiseSpec& noise, std::size_t class_count);

// Per-instance noise and imbalance transform. The majority class is class
// index 0.
class NoiseModel {
 public:
  NoiseModel(NoiseSpec spec, SchemaPtr schema);

  // Rejection rule for imbalance: while the running emitted fraction of the
  // majority class is below target, minority instances are discarded; while
  // it is above target, majority instances are discarded.
  bool accept(std::size_t label) const noexcept;
  // Records an emitted label; call once per accepted instance.
  void record(std::size_t label) noexcept;

  // Multiplies numerics by 1 + N(0, attnoise / 3), switches nominals to a
  // different random value with probability attnoise, switches the label to
  // a different random label with probability class_noise.
  void perturb(Instance& instance);

  const NoiseSpec& spec() const noexcept { return spec_; }

 private:
  NoiseSpec spec_;
  SchemaPtr schema_;
  Rng rng_;
  std::uint64_t emitted_ = 0;
  std::uint64_t majority_emitted_ = 0;
};

struct ConceptSchedule {
  std::vector<double> concepts;
  std::size_t drift_period = 1;
  std::size_t total_drifts = 0;

  std::size_t total_instances() const noexcept { return drift_period * (total_drifts + 1); }
};

void validate(Family family, const ConceptSchedule& schedule);

// Abrupt recurring schedule: drift_period instances of concept i, then a
// switch to concept (i + 1) mod n, for total_drifts switches. The instance
// RNG is reseeded per segment from (seed, segment index); concept structure
// is seeded from (seed, concept value) so that recurring concepts are
// identical. Noise, when given, is applied per draw, so imbalance rejection
// changes what is consumed from the generator, not what is emitted.
class ScheduledStream final : public StreamSource {
 public:
  ScheduledStream(Family family, ConceptSchedule schedule, std::uint64_t seed,
                  std::optional<NoiseSpec> noise = std::nullopt);

  const SchemaPtr& schema() const noexcept override { return generator_->schema(); }
  std::optional<StreamItem> next() override;

  double current_concept() const noexcept { return current_concept_; }
  std::size_t segment() const noexcept { return segment_; }
  const ConceptSchedule& schedule() const noexcept { return schedule_; }

 private:
  void enter_segment(std::size_t segment);

  Family family_;
  ConceptSchedule schedule_;
  std::uint64_t seed_;
  std::unique_ptr<ConceptGenerator> generator_;
  std::optional<NoiseModel> noise_;
  Rng rng_;
  std::size_t emitted_ = 0;
  std::size_t segment_ = 0;
  double current_concept_ = 0;
};

SourcePtr scheduled_stream(Family family, const ConceptSchedule& schedule, std::uint64_t seed,
                           std::optional<NoiseSpec> noise = std::nullopt);

// Generic noise wrapper over any source. Imbalance rejection here reduces
// the emitted count; a drift marker on a discarded instance moves to the
// next emitted one.
SourcePtr apply_noise(SourcePtr source, const NoiseSpec& noise);

}  // namespace ecpf::gen
