#include "ecpf/gen/generators.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>

#include "ecpf/core/errors.hpp"

namespace ecpf::gen {

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::agrawal: return "agrawal";
    case Family::circles: return "circles";
    case Family::led: return "led";
    case Family::random_rbf: return "random_rbf";
    case Family::stagger: return "stagger";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "agrawal") return Family::agrawal;
  if (name == "circles") return Family::circles;
  if (name == "led") return Family::led;
  if (name == "random_rbf" || name == "randomrbf" || name == "rbf") return Family::random_rbf;
  if (name == "stagger") return Family::stagger;
  throw ConfigError("unknown generator family '" + std::string(name) +
                    "' (legal: agrawal, circles, led, random_rbf, stagger)");
}

const std::vector<double>& legal_concepts(Family family) {
  static const std::vector<double> agrawal{1, 3, 5, 7, 9};
  static const std::vector<double> circles{0.2, 0.25, 0.3, 0.35, 0.4};
  static const std::vector<double> led{1, 3, 5, 7};
  static const std::vector<double> rbf{10, 20, 30, 40, 50};
  static const std::vector<double> stagger{1, 2, 3};
  switch (family) {
    case Family::agrawal: return agrawal;
    case Family::circles: return circles;
    case Family::led: return led;
    case Family::random_rbf: return rbf;
    case Family::stagger: return stagger;
  }
  return stagger;
}

bool is_legal_concept(Family family, double concept_value) {
  for (const double c : legal_concepts(family)) {
    if (std::abs(c - concept_value) < 1e-9) return true;
  }
  return false;
}

// --- concept functions ------------------------------------------------------

std::size_t agrawal_class(int function, const std::vector<double>& v) {
  const double salary = v[0];
  const double commission = v[1];
  const double age = v[2];
  const double elevel = v[3];
  const double hvalue = v[6];
  const double hyears = v[7];
  const double loan = v[8];
  const auto in = [](double x, double lo, double hi) { return lo <= x && x <= hi; };
  const auto group = [](bool a) -> std::size_t { return a ? 0 : 1; };
  switch (function) {
    case 1:
      return group(age < 40 || 60 <= age);
    case 2:
      if (age < 40) return group(in(salary, 50000, 100000));
      if (age < 60) return group(in(salary, 75000, 125000));
      return group(in(salary, 25000, 75000));
    case 3:
      if (age < 40) return group(elevel == 0 || elevel == 1);
      if (age < 60) return group(elevel == 1 || elevel == 2 || elevel == 3);
      return group(elevel == 2 || elevel == 3 || elevel == 4);
    case 4:
      if (age < 40) {
        return (elevel == 0 || elevel == 1) ? group(in(salary, 25000, 75000))
                                            : group(in(salary, 50000, 100000));
      }
      if (age < 60) {
        return (elevel == 1 || elevel == 2 || elevel == 3) ? group(in(salary, 50000, 100000))
                                                           : group(in(salary, 75000, 125000));
      }
      return (elevel == 2 || elevel == 3 || elevel == 4) ? group(in(salary, 50000, 100000))
                                                         : group(in(salary, 25000, 75000));
    case 5:
      if (age < 40) {
        return in(salary, 50000, 100000) ? group(in(loan, 100000, 300000))
                                         : group(in(loan, 200000, 400000));
      }
      if (age < 60) {
        return in(salary, 75000, 125000) ? group(in(loan, 200000, 400000))
                                         : group(in(loan, 300000, 500000));
      }
      return in(salary, 25000, 75000) ? group(in(loan, 300000, 500000))
                                      : group(in(loan, 100000, 300000));
    case 6: {
      const double total = salary + commission;
      if (age < 40) return group(in(total, 50000, 100000));
      if (age < 60) return group(in(total, 75000, 125000));
      return group(in(total, 25000, 75000));
    }
    case 7: {
      const double disposable = 2.0 * (salary + commission) / 3.0 - loan / 5.0 - 20000.0;
      return group(disposable > 0);
    }
    case 8: {
      const double disposable = 2.0 * (salary + commission) / 3.0 - 5000.0 * elevel - 20000.0;
      return group(disposable > 0);
    }
    case 9: {
      const double disposable =
          2.0 * (salary + commission) / 3.0 - 5000.0 * elevel - loan / 5.0 - 10000.0;
      return group(disposable > 0);
    }
    case 10: {
      const double equity = hyears >= 20 ? hvalue * (hyears - 20.0) / 10.0 : 0.0;
      const double disposable =
          2.0 * (salary + commission) / 3.0 - 5000.0 * elevel + equity / 5.0 - 10000.0;
      return group(disposable > 0);
    }
    default:
      throw ConfigError("Agrawal function must be in 1..10");
  }
}

std::size_t stagger_class(int function, std::size_t size, std::size_t color, std::size_t shape) {
  constexpr std::size_t small = 0, medium = 1, large = 2;
  constexpr std::size_t red = 0, green = 2;
  constexpr std::size_t circle = 0;
  switch (function) {
    case 1: return (size == small && color == red) ? 1 : 0;
    case 2: return (color == green || shape == circle) ? 1 : 0;
    case 3: return (size == medium || size == large) ? 1 : 0;
    default: throw ConfigError("STAGGER function must be 1, 2 or 3");
  }
}

std::size_t circles_class(double radius, double x, double y) {
  const double dx = x - 0.5;
  const double dy = y - 0.5;
  return dx * dx + dy * dy <= radius * radius ? 1 : 0;
}

std::vector<std::size_t> led_permutation(int drift_attributes) {
  std::vector<std::size_t> perm(10);
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (int i = 0; i < drift_attributes; ++i) {
    const auto seg = static_cast<std::size_t>(i % 7);
    const auto irr = 7 + static_cast<std::size_t>(i % 3);
    std::swap(perm[seg], perm[irr]);
  }
  return perm;
}

namespace {

int as_int(double concept_value) { return static_cast<int>(std::lround(concept_value)); }

class AgrawalGenerator final : public ConceptGenerator {
 public:
  AgrawalGenerator() {
    std::vector<AttributeSpec> attrs;
    for (const char* name :
         {"salary", "commission", "age", "elevel", "car", "zipcode", "hvalue", "hyears", "loan"}) {
      attrs.push_back(AttributeSpec::numeric(name));
    }
    schema_ = std::make_shared<const Schema>(std::move(attrs),
                                             std::vector<std::string>{"groupA", "groupB"},
                                             "agrawal");
  }

  const SchemaPtr& schema() const noexcept override { return schema_; }
  void set_concept(double concept_value, std::uint64_t) override { function_ = as_int(concept_value); }

  Instance draw(Rng& rng) override {
    double salary = 20000.0 + 130000.0 * rng.uniform();
    double commission = salary >= 75000.0 ? 0.0 : 10000.0 + 65000.0 * rng.uniform();
    double age = 20.0 + static_cast<double>(rng.below(61));
    const double elevel = static_cast<double>(rng.below(5));
    const double car = 1.0 + static_cast<double>(rng.below(20));
    const double zipcode = static_cast<double>(rng.below(9));
    double hvalue = (9.0 - zipcode) * 100000.0 * (0.5 + rng.uniform());
    double hyears = 1.0 + static_cast<double>(rng.below(30));
    double loan = rng.uniform() * 500000.0;
    Instance inst{{salary, commission, age, elevel, car, zipcode, hvalue, hyears, loan}, 0};
    inst.label = agrawal_class(function_, inst.values);

    // Attribute perturbation applied after labelling.
    const auto perturb = [&](double val, double range, double lo, double hi) {
      val += range * (2.0 * (rng.uniform() - 0.5)) * kPerturbation;
      return std::clamp(val, lo, hi);
    };
    salary = perturb(salary, 130000.0, 20000.0, 150000.0);
    if (commission > 0) commission = perturb(commission, 65000.0, 10000.0, 75000.0);
    age = std::round(perturb(age, 60.0, 20.0, 80.0));
    hvalue = perturb(hvalue, (9.0 - zipcode) * 100000.0, 0.0, 1350000.0);
    hyears = std::round(perturb(hyears, 29.0, 1.0, 30.0));
    loan = perturb(loan, 500000.0, 0.0, 500000.0);
    inst.values = {salary, commission, age, elevel, car, zipcode, hvalue, hyears, loan};
    return inst;
  }

 private:
  static constexpr double kPerturbation = 0.05;
  SchemaPtr schema_;
  int function_ = 1;
};

class CirclesGenerator final : public ConceptGenerator {
 public:
  CirclesGenerator()
      : schema_(std::make_shared<const Schema>(
            std::vector<AttributeSpec>{AttributeSpec::numeric("x"), AttributeSpec::numeric("y")},
            std::vector<std::string>{"outside", "inside"}, "circles")) {}

  const SchemaPtr& schema() const noexcept override { return schema_; }
  void set_concept(double concept_value, std::uint64_t) override { radius_ = concept_value; }

  Instance draw(Rng& rng) override {
    const double x = rng.uniform();
    const double y = rng.uniform();
    return Instance{{x, y}, circles_class(radius_, x, y)};
  }

 private:
  SchemaPtr schema_;
  double radius_ = 0.2;
};

class LedGenerator final : public ConceptGenerator {
 public:
  LedGenerator() {
    std::vector<AttributeSpec> attrs;
    for (int i = 1; i <= 7; ++i) attrs.push_back(AttributeSpec::nominal("seg" + std::to_string(i), {"0", "1"}));
    for (int i = 1; i <= 3; ++i) attrs.push_back(AttributeSpec::nominal("irr" + std::to_string(i), {"0", "1"}));
    std::vector<std::string> classes;
    for (int d = 0; d < 10; ++d) classes.push_back(std::to_string(d));
    schema_ = std::make_shared<const Schema>(std::move(attrs), std::move(classes), "led");
    perm_ = led_permutation(1);
  }

  const SchemaPtr& schema() const noexcept override { return schema_; }
  void set_concept(double concept_value, std::uint64_t) override { perm_ = led_permutation(as_int(concept_value)); }

  Instance draw(Rng& rng) override {
    static constexpr std::array<std::array<int, 7>, 10> kDigits{{
        {1, 1, 1, 0, 1, 1, 1}, {0, 0, 1, 0, 0, 1, 0}, {1, 0, 1, 1, 1, 0, 1}, {1, 0, 1, 1, 0, 1, 1},
        {0, 1, 1, 1, 0, 1, 0}, {1, 1, 0, 1, 0, 1, 1}, {1, 1, 0, 1, 1, 1, 1}, {1, 0, 1, 0, 0, 1, 0},
        {1, 1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 0, 1, 1},
    }};
    const auto digit = static_cast<std::size_t>(rng.below(10));
    Instance inst{std::vector<double>(10, 0.0), digit};
    for (std::size_t i = 0; i < 7; ++i) {
      int bit = kDigits[digit][i];
      if (rng.below(100) < kNoisePercent) bit = 1 - bit;
      inst.values[perm_[i]] = bit;
    }
    for (std::size_t i = 7; i < 10; ++i) inst.values[perm_[i]] = static_cast<double>(rng.below(2));
    return inst;
  }

 private:
  static constexpr std::uint64_t kNoisePercent = 10;
  SchemaPtr schema_;
  std::vector<std::size_t> perm_;
};

class RandomRbfGenerator final : public ConceptGenerator {
 public:
  static constexpr std::size_t kAttributes = 10;

  RandomRbfGenerator() {
    std::vector<AttributeSpec> attrs;
    for (std::size_t i = 0; i < kAttributes; ++i) attrs.push_back(AttributeSpec::numeric("att" + std::to_string(i + 1)));
    schema_ = std::make_shared<const Schema>(std::move(attrs),
                                             std::vector<std::string>{"class1", "class2"}, "random_rbf");
  }

  const SchemaPtr& schema() const noexcept override { return schema_; }

  void set_concept(double concept_value, std::uint64_t model_seed) override {
    Rng model(model_seed);
    const auto count = static_cast<std::size_t>(as_int(concept_value));
    centroids_.assign(count, Centroid{});
    total_weight_ = 0.0;
    for (auto& c : centroids_) {
      c.centre.resize(kAttributes);
      for (auto& x : c.centre) x = model.uniform();
      c.label = static_cast<std::size_t>(model.below(2));
      c.std_dev = model.uniform();
      c.weight = model.uniform();
      total_weight_ += c.weight;
    }
  }

  Instance draw(Rng& rng) override {
    const Centroid& c = choose(rng);
    std::array<double, kAttributes> dir{};
    double magnitude = 0.0;
    for (auto& d : dir) {
      d = rng.uniform() * 2.0 - 1.0;
      magnitude += d * d;
    }
    magnitude = std::sqrt(magnitude);
    const double scale = magnitude > 0 ? rng.gaussian() * c.std_dev / magnitude : 0.0;
    Instance inst{std::vector<double>(kAttributes), c.label};
    for (std::size_t i = 0; i < kAttributes; ++i) inst.values[i] = c.centre[i] + dir[i] * scale;
    return inst;
  }

 private:
  struct Centroid {
    std::vector<double> centre;
    std::size_t label = 0;
    double std_dev = 0;
    double weight = 0;
  };

  const Centroid& choose(Rng& rng) const {
    double r = rng.uniform() * total_weight_;
    for (const auto& c : centroids_) {
      if (r < c.weight) return c;
      r -= c.weight;
    }
    return centroids_.back();
  }

  SchemaPtr schema_;
  std::vector<Centroid> centroids_;
  double total_weight_ = 0.0;
};

class StaggerGenerator final : public ConceptGenerator {
 public:
  StaggerGenerator()
      : schema_(std::make_shared<const Schema>(
            std::vector<AttributeSpec>{
                AttributeSpec::nominal("size", {"small", "medium", "large"}),
                AttributeSpec::nominal("color", {"red", "blue", "green"}),
                AttributeSpec::nominal("shape", {"circle", "square", "triangle"})},
            std::vector<std::string>{"false", "true"}, "stagger")) {}

  const SchemaPtr& schema() const noexcept override { return schema_; }
  void set_concept(double concept_value, std::uint64_t) override { function_ = as_int(concept_value); }

  Instance draw(Rng& rng) override {
    const auto size = static_cast<std::size_t>(rng.below(3));
    const auto color = static_cast<std::size_t>(rng.below(3));
    const auto shape = static_cast<std::size_t>(rng.below(3));
    return Instance{{static_cast<double>(size), static_cast<double>(color), static_cast<double>(shape)},
                    stagger_class(function_, size, color, shape)};
  }

 private:
  SchemaPtr schema_;
  int function_ = 1;
};

class SingleConceptSource final : public StreamSource {
 public:
  SingleConceptSource(std::unique_ptr<ConceptGenerator> generator, std::uint64_t seed)
      : generator_(std::move(generator)), rng_(derive_seed(seed, 0)) {}

  const SchemaPtr& schema() const noexcept override { return generator_->schema(); }
  std::optional<StreamItem> next() override { return StreamItem{generator_->draw(rng_), false}; }

 private:
  std::unique_ptr<ConceptGenerator> generator_;
  Rng rng_;
};

}  // namespace

std::unique_ptr<ConceptGenerator> make_concept_generator(Family family) {
  switch (family) {
    case Family::agrawal: return std::make_unique<AgrawalGenerator>();
    case Family::circles: return std::make_unique<CirclesGenerator>();
    case Family::led: return std::make_unique<LedGenerator>();
    case Family::random_rbf: return std::make_unique<RandomRbfGenerator>();
    case Family::stagger: return std::make_unique<StaggerGenerator>();
  }
  throw ConfigError("unknown generator family");
}

std::uint64_t concept_model_seed(std::uint64_t seed, double concept_value) {
  return derive_seed(seed ^ 0x6d6f64656c736565ULL, std::bit_cast<std::uint64_t>(concept_value));
}

SourcePtr make_generator(const GeneratorSpec& spec) {
  if (!is_legal_concept(spec.family, spec.concept_value)) {
    throw ConfigError("illegal concept value for " + std::string(to_string(spec.family)));
  }
  auto generator = make_concept_generator(spec.family);
  generator->set_concept(spec.concept_value, concept_model_seed(spec.seed, spec.concept_value));
  return std::make_unique<SingleConceptSource>(std::move(generator), spec.seed);
}

}  // namespace ecpf::gen
