// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/metrics.hpp"

#include <cmath>

#include "cbr/error.hpp"

namespace cbr {

namespace {

void require_uncertain_input(double h_in) {
  if (!(h_in > 0.0)) {
    throw Error(Errc::transformation_unnecessary, "input entropy is zero, the input is already certain");
  }
}

void require_positive_cost(const CostRecord& cost) {
  if (!(cost.amount > 0.0)) throw Error(Errc::invariant_violation, "cost must be positive");
}

}  // namespace

double alphabet_compression_ratio(double h_in, double h_out) {
  require_uncertain_input(h_in);
  return h_out / h_in;
}

double potential_distortion_ratio(double d_kl, double h_in) {
  require_uncertain_input(h_in);
  if (d_kl < 0.0) throw Error(Errc::invariant_violation, "negative divergence");
  return d_kl / h_in;
}

double effectual_compression_ratio(double h_in, double h_out, double d_kl) {
  require_uncertain_input(h_in);
  if (d_kl < 0.0) throw Error(Errc::invariant_violation, "negative divergence");
  return (h_out + d_kl) / h_in;
}

double benefit(double h_in, double h_out, double d_kl) {
  if (d_kl < 0.0) throw Error(Errc::invariant_violation, "negative divergence");
  return h_in - h_out - d_kl;
}

double incremental_cbr(double benefit_bits, const CostRecord& cost) {
  require_positive_cost(cost);
  return benefit_bits / cost.amount;
}

double machine_cbr(double i_bits, double h_out, const CostRecord& cost) {
  require_positive_cost(cost);
  return (i_bits - h_out) / cost.amount;
}

double grouping_check(const Alphabet& input, const Transform& grouping) {
  auto m = letter_map(grouping, input.letters());
  if (!m.deterministic()) throw Error(Errc::mode_mismatch, "'" + grouping.name() + "' is not a grouping");
  const auto p = input.pmf().values();

  std::vector<double> q(m.output_letters.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) q[m.image[i]] += p[i];

  // H_k is the entropy of X conditioned on the k-th group.
  std::vector<std::vector<double>> groups(q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[m.image[i]] > 0.0) groups[m.image[i]].push_back(p[i] / q[m.image[i]]);
  }
  double within = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (q[k] > 0.0) within += q[k] * entropy_bits(groups[k]);
  }
  double h_x = entropy(input);
  double h_y = entropy_bits(q);
  return std::abs(h_x - h_y - within);
}

StepMetrics score_step(const Transform& t, const std::optional<Reconstruction>& g, const Alphabet& input,
                       const Alphabet& output, EntropyMode mode) {
  StepMetrics s;
  s.entropy_mode = mode;
  s.h_in = entropy(input, mode);
  s.h_out = entropy(output, mode);
  s.cost = t.cost();
  const bool certain_input = !(s.h_in > 0.0);
  if (!certain_input) s.acr = alphabet_compression_ratio(s.h_in, s.h_out);

  if (g) {
    double d = distortion_bits(*g, t, input);
    s.distortion_bits = d;
    s.benefit_bits = benefit(s.h_in, s.h_out, d);
    s.incremental_cbr = incremental_cbr(*s.benefit_bits, s.cost);
    if (!certain_input) {
      s.pdr = potential_distortion_ratio(d, s.h_in);
      s.ecr = effectual_compression_ratio(s.h_in, s.h_out, d);
    }
  }

  if (input.is_enumerated() && !t.as<Declared>() && !t.as<Aggregator>()) {
    try {
      double info = mutual_information(t, input);
      s.mutual_information = info;
      s.machine_cbr = machine_cbr(info, entropy(output), s.cost);
    } catch (const Error& e) {
      // Composites over declared parts have no letter map; leave MI absent.
      if (e.code() != Errc::mode_mismatch) throw;
    }
  }
  return s;
}

}  // namespace cbr
