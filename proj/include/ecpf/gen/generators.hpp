#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecpf/core/rng.hpp"
#include "ecpf/stream/source.hpp"

namespace ecpf::gen {

enum class Family { agrawal, circles, led, random_rbf, stagger };

std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view name);  // throws ConfigError
const std::vector<double>& legal_concepts(Family family);
bool is_legal_concept(Family family, double concept_value);

// A concept-parameterised instance generator. It is not a stream by itself:
// a stream couples it with a concept schedule and an instance RNG.
class ConceptGenerator {
 public:
  virtual ~ConceptGenerator() = default;
  virtual const SchemaPtr& schema() const noexcept = 0;
  // model_seed feeds generators with random concept structure (RandomRBF).
  virtual void set_concept(double concept_value, std::uint64_t model_seed) = 0;
  virtual Instance draw(Rng& rng) = 0;
};

std::unique_ptr<ConceptGenerator> make_concept_generator(Family family);

// Seed for a concept's random structure; a function of the concept value so
// that a recurring concept reproduces the same model.
std::uint64_t concept_model_seed(std::uint64_t seed, double concept_value);

// Deterministic concept functions, exposed for oracles and tests.
// Agrawal attribute order: salary, commission, age, elevel, car, zipcode,
// hvalue, hyears, loan. Returns 0 for groupA, 1 for groupB.
std::size_t agrawal_class(int function, const std::vector<double>& values);
// Nominal indices: size {small, medium, large}, color {red, blue, green},
// shape {circle, square, triangle}. Returns 1 when the concept holds.
std::size_t stagger_class(int function, std::size_t size, std::size_t color, std::size_t shape);
// Returns 1 ("inside") when (x, y) lies within the circle of the given
// radius centred at (0.5, 0.5), else 0 ("outside").
std::size_t circles_class(double radius, double x, double y);
// Position of each logical LED attribute (7 segments then 3 irrelevant)
// after swapping `drift_attributes` segments with irrelevant positions.
std::vector<std::size_t> led_permutation(int drift_attributes);

struct GeneratorSpec {
  Family family = Family::stagger;
  double concept_value = 1;
  std::uint64_t seed = 1;
};

// Infinite single-concept source. Throws ConfigError for an illegal concept.
SourcePtr make_generator(const GeneratorSpec& spec);

}  // namespace ecpf::gen
