// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <concepts>
#include <string>
#include <type_traits>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cbr/alphabet.hpp"
#include "cbr/transform.hpp"

namespace cbr {

/// Perfect Bayesian inversion: g(x|y) = p(x) / q(y) on the preimage of y.
struct ExactConditional {
  bool operator==(const ExactConditional&) const = default;
};

/// Spreads each output letter's mass evenly over its preimage.
struct UniformPreimage {
  bool operator==(const UniformPreimage&) const = default;
};

/// Spreads each output letter's mass over its preimage in proportion to a
/// prior over input letters (the observer's own knowledge).
struct PriorWeighted {
  std::vector<std::pair<std::string, double>> prior;

  bool operator==(const PriorWeighted&) const = default;
};

/// Distortion stated directly, for steps with no enumerable impression.
struct DeclaredDivergence {
  double bits = 0.0;

  bool operator==(const DeclaredDivergence&) const = default;
};

/// Machine-centric stand-in for the divergence: H(input) - I(input; output),
/// i.e. the inverse recovers exactly the mutual information.
struct MutualInformationShortcut {
  bool operator==(const MutualInformationShortcut&) const = default;
};

class Reconstruction {
 public:
  using Kind =
      std::variant<ExactConditional, UniformPreimage, PriorWeighted, DeclaredDivergence, MutualInformationShortcut>;

  Reconstruction() = default;
  Reconstruction(Kind kind);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::same_as<std::decay_t<T>, Kind> && std::constructible_from<Kind, T>)
  Reconstruction(T&& kind) : Reconstruction(Kind(std::forward<T>(kind))) {}  // NOLINT(google-explicit-constructor)

  const Kind& kind() const { return kind_; }
  std::string_view kind_name() const;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

  bool operator==(const Reconstruction&) const = default;

 private:
  Kind kind_;
};

/// The observer's impression of the input after seeing the output: the
/// mixture over output letters of g(.|y), weighted by the output pmf. The
/// result shares the input's letter set.
Alphabet impression(const Reconstruction& g, const Transform& t, const Alphabet& input);

inline constexpr double kSmoothingFloor = 1e-12;

struct KlOptions {
  /// Floor q at kSmoothingFloor and renormalize instead of failing on
  /// support violations.
  bool smoothing = false;
};

/// D(p || q) in bits.
double kl_divergence(const Pmf& p, const Pmf& q, KlOptions options = {});

/// H(input) - I(input; t(input)).
double machine_distortion_bits(const Transform& t, const Alphabet& input);

/// The divergence term a step contributes, by whichever route g names.
double distortion_bits(const Reconstruction& g, const Transform& t, const Alphabet& input);

}  // namespace cbr
