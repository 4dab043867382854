// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <optional>

#include "cbr/alphabet.hpp"
#include "cbr/reconstruction.hpp"
#include "cbr/transform.hpp"

namespace cbr {

// Per-step measures. All entropies and divergences are in bits; the ratios
// are unitless and the cost-benefit ratios are bits per cost unit.

/// h_out / h_in. Not clamped: a human step may raise entropy.
double alphabet_compression_ratio(double h_in, double h_out);

/// d_kl / h_in.
double potential_distortion_ratio(double d_kl, double h_in);

/// (h_out + d_kl) / h_in, the sum of the two ratios above.
double effectual_compression_ratio(double h_in, double h_out, double d_kl);

/// h_in - h_out - d_kl. Negative when the step adds uncertainty.
double benefit(double h_in, double h_out, double d_kl);

double incremental_cbr(double benefit_bits, const CostRecord& cost);

/// (I - h_out) / cost, the benefit of a machine step whose inverse recovers
/// exactly the mutual information.
double machine_cbr(double i_bits, double h_out, const CostRecord& cost);

/// |H(X) - H(Y) - sum_k q(y_k) H_k| for a deterministic grouping of X into Y,
/// where H_k is the entropy of X restricted to the k-th group.
double grouping_check(const Alphabet& input, const Transform& grouping);

struct StepMetrics {
  EntropyMode entropy_mode = EntropyMode::actual;
  double h_in = 0.0;
  double h_out = 0.0;
  CostRecord cost;
  // Ratios are absent when h_in is zero; everything that needs the
  // divergence is absent when the step has no reconstruction.
  std::optional<double> acr;
  std::optional<double> pdr;
  std::optional<double> ecr;
  std::optional<double> distortion_bits;
  std::optional<double> benefit_bits;
  std::optional<double> incremental_cbr;
  // Only for enumerable steps over enumerated inputs.
  std::optional<double> mutual_information;
  std::optional<double> machine_cbr;
};

StepMetrics score_step(const Transform& t, const std::optional<Reconstruction>& g, const Alphabet& input,
                       const Alphabet& output, EntropyMode mode);

}  // namespace cbr
