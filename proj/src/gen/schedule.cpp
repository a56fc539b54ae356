#include "ecpf/gen/schedule.hpp"

#include <string>

#include "ecpf/core/errors.hpp"

namespace ecpf::gen {

void validate(const NoiseSpec& noise, std::size_t class_count) {
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(noise.attribute_noise)) throw ConfigError("attribute noise must be in [0, 1]");
  if (!in_unit(noise.class_noise)) throw ConfigError("class noise must be in [0, 1]");
  if (noise.majority_fraction) {
    const double lo = 1.0 / static_cast<double>(class_count);
    if (*noise.majority_fraction < lo - 1e-12 || *noise.majority_fraction > 1.0) {
      throw ConfigError("majority fraction must be in [1/k, 1]");
    }
  }
}

NoiseModel::NoiseModel(NoiseSpec spec, SchemaPtr schema)
    : spec_(spec), schema_(std::move(schema)), rng_(derive_seed(spec.seed, 0x6e6f697365ULL)) {
  validate(spec_, schema_->class_count());
}

bool NoiseModel::accept(std::size_t label) const noexcept {
  if (!spec_.majority_fraction || emitted_ == 0) return true;
  const double target = *spec_.majority_fraction;
  const double fraction = static_cast<double>(majority_emitted_) / static_cast<double>(emitted_);
  const bool majority = label == 0;
  if (fraction < target) return majority;
  if (fraction > target) return !majority;
  return true;
}

void NoiseModel::record(std::size_t label) noexcept {
  ++emitted_;
  if (label == 0) ++majority_emitted_;
}

void NoiseModel::perturb(Instance& instance) {
  const double attnoise = spec_.attribute_noise;
  if (attnoise > 0.0) {
    const double sigma = attnoise / 3.0;
    for (std::size_t i = 0; i < instance.values.size(); ++i) {
      const auto& attr = schema_->attribute(i);
      if (!attr.is_nominal()) {
        instance.values[i] *= 1.0 + sigma * rng_.gaussian();
      } else if (attr.value_count() > 1 && rng_.bernoulli(attnoise)) {
        const auto current = static_cast<std::uint64_t>(instance.values[i]);
        auto other = rng_.below(attr.value_count() - 1);
        if (other >= current) ++other;
        instance.values[i] = static_cast<double>(other);
      }
    }
  }
  if (spec_.class_noise > 0.0 && rng_.bernoulli(spec_.class_noise)) {
    auto other = rng_.below(schema_->class_count() - 1);
    if (other >= instance.label) ++other;
    instance.label = static_cast<std::size_t>(other);
  }
}

void validate(Family family, const ConceptSchedule& schedule) {
  if (schedule.concepts.empty()) throw ConfigError("schedule needs at least one concept");
  if (schedule.drift_period < 1) throw ConfigError("drift period must be >= 1");
  for (const double c : schedule.concepts) {
    if (!is_legal_concept(family, c)) {
      std::string legal;
      for (const double v : legal_concepts(family)) {
        if (!legal.empty()) legal += ", ";
        auto text = std::to_string(v);
        text.erase(text.find_last_not_of('0') + 1);
        if (text.back() == '.') text.pop_back();
        legal += text;
      }
      throw ConfigError("illegal concept value " + std::to_string(c) + " for " +
                        std::string(to_string(family)) + " (legal: " + legal + ")");
    }
  }
}

ScheduledStream::ScheduledStream(Family family, ConceptSchedule schedule, std::uint64_t seed,
                                 std::optional<NoiseSpec> noise)
    : family_(family),
      schedule_(std::move(schedule)),
      seed_(seed),
      generator_(make_concept_generator(family)) {
  validate(family_, schedule_);
  if (noise && !noise->is_identity()) noise_.emplace(*noise, generator_->schema());
  enter_segment(0);
}

void ScheduledStream::enter_segment(std::size_t segment) {
  segment_ = segment;
  current_concept_ = schedule_.concepts[segment % schedule_.concepts.size()];
  generator_->set_concept(current_concept_, concept_model_seed(seed_, current_concept_));
  rng_.reseed(derive_seed(seed_, segment));
}

std::optional<StreamItem> ScheduledStream::next() {
  if (emitted_ >= schedule_.total_instances()) return std::nullopt;
  const bool drift = emitted_ > 0 && emitted_ % schedule_.drift_period == 0;
  if (drift) enter_segment(segment_ + 1);
  Instance inst = generator_->draw(rng_);
  if (noise_) {
    while (!noise_->accept(inst.label)) inst = generator_->draw(rng_);
    noise_->record(inst.label);
    noise_->perturb(inst);
  }
  ++emitted_;
  return StreamItem{std::move(inst), drift};
}

SourcePtr scheduled_stream(Family family, const ConceptSchedule& schedule, std::uint64_t seed,
                           std::optional<NoiseSpec> noise) {
  return std::make_unique<ScheduledStream>(family, schedule, seed, std::move(noise));
}

namespace {

class NoisySource final : public StreamSource {
 public:
  NoisySource(SourcePtr inner, const NoiseSpec& noise)
      : inner_(std::move(inner)), model_(noise, inner_->schema()) {}

  const SchemaPtr& schema() const noexcept override { return inner_->schema(); }

  std::optional<StreamItem> next() override {
    bool carried_drift = false;
    while (auto item = inner_->next()) {
      carried_drift = carried_drift || item->drift;
      if (!model_.accept(item->instance.label)) continue;
      model_.record(item->instance.label);
      model_.perturb(item->instance);
      item->drift = carried_drift;
      return item;
    }
    return std::nullopt;
  }

 private:
  SourcePtr inner_;
  NoiseModel model_;
};

}  // namespace

SourcePtr apply_noise(SourcePtr source, const NoiseSpec& noise) {
  if (noise.is_identity()) return source;
  return std::make_unique<NoisySource>(std::move(source), noise);
}

}  // namespace ecpf::gen
