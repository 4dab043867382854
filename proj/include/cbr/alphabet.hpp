// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace cbr {

/// Absolute tolerance on probability sums, row sums and pointwise pmf equality.
inline constexpr double kProbabilityTolerance = 1e-9;

/// Which entropy an analysis reads off an alphabet: the entropy of its
/// probability model, or log2 of its cardinality.
enum class EntropyMode { actual, maximal };

std::string_view to_string(EntropyMode mode);
std::optional<EntropyMode> parse_entropy_mode(std::string_view text);

struct Letter {
  std::string id;
  std::string payload;

  bool operator==(const Letter&) const = default;
};

/// A validated probability vector. Entries lie in [0,1] and sum to one;
/// inputs within kProbabilityTolerance of that are renormalized, anything
/// further off is rejected.
class Pmf {
 public:
  Pmf() = default;

  static Pmf from(std::vector<double> probabilities);
  static Pmf uniform(std::size_t n);

  std::span<const double> values() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

  bool operator==(const Pmf&) const = default;

 private:
  explicit Pmf(std::vector<double> p) : p_(std::move(p)) {}

  std::vector<double> p_;
};

/// -sum p log2 p over a probability vector, with 0 log 0 taken as 0.
double entropy_bits(std::span<const double> probabilities);

class Alphabet;

struct EnumeratedModel {
  std::vector<Letter> letters;
  Pmf pmf;
  std::unordered_map<std::string, std::size_t> index;
};

struct SymbolicModel {
  double entropy_bits = 0.0;
  double max_entropy_bits = 0.0;
};

/// count independent copies of factor.
struct ProductModel {
  std::shared_ptr<const Alphabet> factor;
  std::uint64_t count = 1;
};

/// The set of valid values of a variable together with its probability
/// model. Immutable; copies share the underlying letter table.
class Alphabet {
 public:
  enum class Kind { enumerated, symbolic, product };

  static Alphabet enumerated(std::string name, std::vector<Letter> letters, Pmf pmf);
  static Alphabet enumerated(std::string name, std::vector<Letter> letters,
                             std::vector<double> probabilities);
  static Alphabet enumerated(std::string name, const std::vector<std::string>& ids,
                             std::vector<double> probabilities);
  /// Uniform alphabet with letters "0", "1", ..., "n-1".
  static Alphabet uniform(std::string name, std::size_t n);
  static Alphabet uniform(std::string name, const std::vector<std::string>& ids);
  static Alphabet symbolic(std::string name, double entropy_bits, double max_entropy_bits);
  static Alphabet product(std::string name, const Alphabet& factor, std::uint64_t count);

  const std::string& name() const { return name_; }
  Alphabet renamed(std::string name) const;

  Kind kind() const;
  bool is_enumerated() const { return kind() == Kind::enumerated; }

  // Enumerated view. These throw Errc::requires_enumerated on other models.
  const std::vector<Letter>& letters() const;
  const Pmf& pmf() const;
  std::size_t size() const { return letters().size(); }
  std::optional<std::size_t> find(std::string_view id) const;

  const SymbolicModel& symbolic_model() const;
  const Alphabet& factor() const;
  std::uint64_t count() const;

 private:
  using Model = std::variant<std::shared_ptr<const EnumeratedModel>, SymbolicModel, ProductModel>;

  Alphabet(std::string name, Model model) : name_(std::move(name)), model_(std::move(model)) {}

  const EnumeratedModel& enumerated_model() const;

  std::string name_;
  Model model_;
};

double entropy(const Alphabet& a);
double max_entropy(const Alphabet& a);
double entropy(const Alphabet& a, EntropyMode mode);

/// count i.i.d. copies of a; entropies scale linearly.
Alphabet product(const Alphabet& a, std::uint64_t count);

/// Conditions an enumerated alphabet on a subset of its letters.
Alphabet restrict_to(const Alphabet& a, std::span<const std::string> subset);

/// Same letters with pointwise-equal pmfs (enumerated), otherwise equal
/// entropy and maximal entropy, within tolerance.
bool equivalent(const Alphabet& a, const Alphabet& b, double tolerance = kProbabilityTolerance);

}  // namespace cbr
