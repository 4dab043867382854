// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/reconstruction.hpp"

#include <cmath>
#include <unordered_map>

#include "cbr/error.hpp"

namespace cbr {

Reconstruction::Reconstruction(Kind kind) : kind_(std::move(kind)) {
  if (const auto* d = as<DeclaredDivergence>()) {
    if (!std::isfinite(d->bits) || d->bits < 0.0) {
      throw Error(Errc::invariant_violation, "declared divergence must be non-negative");
    }
  }
  if (const auto* p = as<PriorWeighted>()) {
    std::vector<double> mass;
    mass.reserve(p->prior.size());
    for (const auto& entry : p->prior) mass.push_back(entry.second);
    Pmf::from(std::move(mass));
  }
}

std::string_view Reconstruction::kind_name() const {
  switch (kind_.index()) {
    case 0: return "exact_conditional";
    case 1: return "uniform_preimage";
    case 2: return "prior_weighted";
    case 3: return "declared";
    default: return "mutual_information";
  }
}

namespace {

std::vector<double> prior_over(const PriorWeighted& g, const Alphabet& input) {
  std::vector<double> prior(input.size(), 0.0);
  for (const auto& [id, mass] : g.prior) {
    auto i = input.find(id);
    if (!i) {
      throw Error(Errc::invariant_violation, "prior names letter '" + id + "' outside '" + input.name() + "'");
    }
    prior[*i] = mass;
  }
  auto normalized = Pmf::from(std::move(prior));
  return {normalized.values().begin(), normalized.values().end()};
}

}  // namespace

Alphabet impression(const Reconstruction& g, const Transform& t, const Alphabet& input) {
  if (g.as<DeclaredDivergence>() || g.as<MutualInformationShortcut>()) {
    throw Error(Errc::no_enumerated_impression, std::string(g.kind_name()) + " reconstruction");
  }
  if (!input.is_enumerated()) {
    throw Error(Errc::requires_enumerated, "impression of '" + input.name() + "'");
  }
  if (!t.deterministic()) {
    throw Error(Errc::mode_mismatch, "'" + t.name() + "' is not deterministic");
  }
  const auto p = input.pmf().values();
  const std::string name = input.name() + "'";
  if (g.as<ExactConditional>()) {
    return Alphabet::enumerated(name, input.letters(), input.pmf());
  }

  auto m = letter_map(t, input.letters());
  std::vector<double> weight(p.size(), 1.0);
  if (const auto* prior = g.as<PriorWeighted>()) weight = prior_over(*prior, input);

  std::vector<double> out_mass(m.output_letters.size(), 0.0);
  std::vector<double> norm(m.output_letters.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out_mass[m.image[i]] += p[i];
    norm[m.image[i]] += weight[i];
  }
  std::vector<double> guess(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::size_t y = m.image[i];
    if (out_mass[y] == 0.0) continue;
    if (norm[y] <= 0.0) {
      throw Error(Errc::unconditionable_subset,
                  "prior has no mass on the preimage of '" + m.output_letters[y] + "'");
    }
    guess[i] = out_mass[y] * weight[i] / norm[y];
  }
  return Alphabet::enumerated(name, input.letters(), Pmf::from(std::move(guess)));
}

double kl_divergence(const Pmf& p, const Pmf& q, KlOptions options) {
  if (p.size() != q.size()) {
    throw Error(Errc::invariant_violation, "divergence between pmfs of different sizes");
  }
  bool equal = true;
  for (std::size_t i = 0; i < p.size() && equal; ++i) equal = std::abs(p[i] - q[i]) <= kProbabilityTolerance;
  if (equal) return 0.0;

  std::vector<double> reference(q.values().begin(), q.values().end());
  if (options.smoothing) {
    double total = 0.0;
    for (double& v : reference) {
      v = std::max(v, kSmoothingFloor);
      total += v;
    }
    for (double& v : reference) v /= total;
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (reference[i] == 0.0) {
      throw Error(Errc::divergence_undefined, "p > 0 where q = 0 at outcome " + std::to_string(i));
    }
    d += p[i] * std::log2(p[i] / reference[i]);
  }
  return std::max(d, 0.0);
}

double machine_distortion_bits(const Transform& t, const Alphabet& input) {
  return entropy(input) - mutual_information(t, input);
}

double distortion_bits(const Reconstruction& g, const Transform& t, const Alphabet& input) {
  if (const auto* d = g.as<DeclaredDivergence>()) return d->bits;
  if (g.as<MutualInformationShortcut>()) return machine_distortion_bits(t, input);
  if (!input.is_enumerated()) {
    throw Error(Errc::requires_enumerated, "distortion of '" + t.name() + "' on '" + input.name() + "'");
  }
  return kl_divergence(impression(g, t, input).pmf(), input.pmf());
}

}  // namespace cbr
