// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "cbr/error.hpp"

namespace cbr {

std::string_view to_string(EntropyMode mode) {
  return mode == EntropyMode::actual ? "actual" : "maximal";
}

std::optional<EntropyMode> parse_entropy_mode(std::string_view text) {
  if (text == "actual") return EntropyMode::actual;
  if (text == "maximal") return EntropyMode::maximal;
  return std::nullopt;
}

Pmf Pmf::from(std::vector<double> probabilities) {
  if (probabilities.empty()) throw Error(Errc::invalid_pmf, "no outcomes");
  double sum = 0.0;
  for (double& p : probabilities) {
    if (!std::isfinite(p) || p < -kProbabilityTolerance || p > 1.0 + kProbabilityTolerance) {
      throw Error(Errc::invalid_pmf, "probability " + std::to_string(p) + " outside [0,1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    throw Error(Errc::invalid_pmf, "probabilities sum to " + std::to_string(sum));
  }
  if (sum != 1.0) {
    for (double& p : probabilities) p /= sum;
  }
  return Pmf(std::move(probabilities));
}

Pmf Pmf::uniform(std::size_t n) {
  if (n == 0) throw Error(Errc::invalid_pmf, "no outcomes");
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  // Rounding can leave -0 or a few ulps below zero for certain outcomes.
  return std::max(h, 0.0);
}

Alphabet Alphabet::enumerated(std::string name, std::vector<Letter> letters, Pmf pmf) {
  if (letters.empty()) throw Error(Errc::invariant_violation, "alphabet '" + name + "' has no letters");
  if (letters.size() != pmf.size()) {
    throw Error(Errc::invalid_pmf, "alphabet '" + name + "' has " + std::to_string(letters.size()) +
                                       " letters but " + std::to_string(pmf.size()) + " probabilities");
  }
  auto model = std::make_shared<EnumeratedModel>();
  model->index.reserve(letters.size());
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (!model->index.emplace(letters[i].id, i).second) {
      throw Error(Errc::invariant_violation,
                  "duplicate letter '" + letters[i].id + "' in alphabet '" + name + "'");
    }
  }
  model->letters = std::move(letters);
  model->pmf = std::move(pmf);
  return Alphabet(std::move(name), std::shared_ptr<const EnumeratedModel>(std::move(model)));
}

Alphabet Alphabet::enumerated(std::string name, std::vector<Letter> letters,
                              std::vector<double> probabilities) {
  return enumerated(std::move(name), std::move(letters), Pmf::from(std::move(probabilities)));
}

Alphabet Alphabet::enumerated(std::string name, const std::vector<std::string>& ids,
                              std::vector<double> probabilities) {
  std::vector<Letter> letters;
  letters.reserve(ids.size());
  for (const auto& id : ids) letters.push_back({id, {}});
  return enumerated(std::move(name), std::move(letters), std::move(probabilities));
}

Alphabet Alphabet::uniform(std::string name, std::size_t n) {
  std::vector<Letter> letters;
  letters.reserve(n);
  for (std::size_t i = 0; i < n; ++i) letters.push_back({std::to_string(i), {}});
  return enumerated(std::move(name), std::move(letters), Pmf::uniform(n));
}

Alphabet Alphabet::uniform(std::string name, const std::vector<std::string>& ids) {
  std::vector<Letter> letters;
  letters.reserve(ids.size());
  for (const auto& id : ids) letters.push_back({id, {}});
  return enumerated(std::move(name), std::move(letters), Pmf::uniform(ids.size()));
}

Alphabet Alphabet::symbolic(std::string name, double entropy_bits, double max_entropy_bits) {
  if (!std::isfinite(entropy_bits) || !std::isfinite(max_entropy_bits) || entropy_bits < 0.0 ||
      max_entropy_bits < 0.0) {
    throw Error(Errc::invariant_violation, "symbolic alphabet '" + name + "' needs finite non-negative entropies");
  }
  if (entropy_bits > max_entropy_bits + kProbabilityTolerance) {
    throw Error(Errc::invariant_violation,
                "symbolic alphabet '" + name + "' declares entropy above its maximal entropy");
  }
  return Alphabet(std::move(name), SymbolicModel{std::min(entropy_bits, max_entropy_bits), max_entropy_bits});
}

Alphabet Alphabet::product(std::string name, const Alphabet& factor, std::uint64_t count) {
  if (count == 0) throw Error(Errc::empty_product, "alphabet '" + name + "'");
  return Alphabet(std::move(name), ProductModel{std::make_shared<const Alphabet>(factor), count});
}

Alphabet Alphabet::renamed(std::string name) const {
  Alphabet copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Alphabet::Kind Alphabet::kind() const {
  switch (model_.index()) {
    case 0: return Kind::enumerated;
    case 1: return Kind::symbolic;
    default: return Kind::product;
  }
}

const EnumeratedModel& Alphabet::enumerated_model() const {
  if (const auto* m = std::get_if<std::shared_ptr<const EnumeratedModel>>(&model_)) return **m;
  throw Error(Errc::requires_enumerated, "alphabet '" + name_ + "'");
}

const std::vector<Letter>& Alphabet::letters() const { return enumerated_model().letters; }

const Pmf& Alphabet::pmf() const { return enumerated_model().pmf; }

std::optional<std::size_t> Alphabet::find(std::string_view id) const {
  const auto& index = enumerated_model().index;
  auto it = index.find(std::string(id));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const SymbolicModel& Alphabet::symbolic_model() const {
  if (const auto* m = std::get_if<SymbolicModel>(&model_)) return *m;
  throw Error(Errc::mode_mismatch, "alphabet '" + name_ + "' is not symbolic");
}

const Alphabet& Alphabet::factor() const {
  if (const auto* m = std::get_if<ProductModel>(&model_)) return *m->factor;
  throw Error(Errc::mode_mismatch, "alphabet '" + name_ + "' is not a product");
}

std::uint64_t Alphabet::count() const {
  if (const auto* m = std::get_if<ProductModel>(&model_)) return m->count;
  throw Error(Errc::mode_mismatch, "alphabet '" + name_ + "' is not a product");
}

double entropy(const Alphabet& a) {
  switch (a.kind()) {
    case Alphabet::Kind::enumerated: return entropy_bits(a.pmf().values());
    case Alphabet::Kind::symbolic: return a.symbolic_model().entropy_bits;
    case Alphabet::Kind::product: return static_cast<double>(a.count()) * entropy(a.factor());
  }
  return 0.0;
}

double max_entropy(const Alphabet& a) {
  switch (a.kind()) {
    case Alphabet::Kind::enumerated: return std::log2(static_cast<double>(a.size()));
    case Alphabet::Kind::symbolic: return a.symbolic_model().max_entropy_bits;
    case Alphabet::Kind::product: return static_cast<double>(a.count()) * max_entropy(a.factor());
  }
  return 0.0;
}

double entropy(const Alphabet& a, EntropyMode mode) {
  return mode == EntropyMode::actual ? entropy(a) : max_entropy(a);
}

Alphabet product(const Alphabet& a, std::uint64_t count) {
  return Alphabet::product(a.name() + "^" + std::to_string(count), a, count);
}

Alphabet restrict_to(const Alphabet& a, std::span<const std::string> subset) {
  if (subset.empty()) throw Error(Errc::unconditionable_subset, "empty subset");
  std::vector<bool> keep(a.size(), false);
  for (const auto& id : subset) {
    auto i = a.find(id);
    if (!i) throw Error(Errc::unconditionable_subset, "letter '" + id + "' not in '" + a.name() + "'");
    keep[*i] = true;
  }
  std::vector<Letter> letters;
  std::vector<double> mass;
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!keep[i]) continue;
    letters.push_back(a.letters()[i]);
    mass.push_back(a.pmf()[i]);
    total += a.pmf()[i];
  }
  if (total <= 0.0) throw Error(Errc::unconditionable_subset, "subset has zero probability");
  for (double& p : mass) p /= total;
  return Alphabet::enumerated(a.name(), std::move(letters), Pmf::from(std::move(mass)));
}

namespace {

bool close(double x, double y, double tolerance) {
  return std::abs(x - y) <= tolerance * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

}  // namespace

bool equivalent(const Alphabet& a, const Alphabet& b, double tolerance) {
  if (a.is_enumerated() && b.is_enumerated()) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto j = b.find(a.letters()[i].id);
      if (!j || std::abs(a.pmf()[i] - b.pmf()[*j]) > tolerance) return false;
    }
    return true;
  }
  if (a.is_enumerated() != b.is_enumerated()) return false;
  return close(entropy(a), entropy(b), tolerance) && close(max_entropy(a), max_entropy(b), tolerance);
}

}  // namespace cbr
