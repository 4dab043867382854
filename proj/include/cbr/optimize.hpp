// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cbr/reconstruction.hpp"
#include "cbr/transform.hpp"
#include "cbr/workflow.hpp"

namespace cbr {

using ParamValue = std::variant<double, bool, std::string>;

struct Candidate {
  std::string label;
  ParamValue value;
  /// Replaces the edge's cost amount when this candidate is chosen, after
  /// the parameter itself has been applied.
  std::optional<double> cost;
  bool operator==(const Candidate&) const = default;
};

/// One searchable knob. Parameters:
///   bins             quantizer bin count over the current range (number)
///   window, levels   aggregator fields (number)
///   cost             cost amount (number)
///   distortion_bits  declared divergence of the step (number)
///   reconstruction   exact_conditional, uniform_preimage, mutual_information
///                    or a catalog name (string)
///   transform        catalog name (string)
///   include          false contracts the edge away (bool)
struct Dimension {
  std::string edge;
  std::string parameter;
  std::vector<Candidate> candidates;
  bool operator==(const Dimension&) const = default;
};

struct ParamSpace {
  std::vector<Dimension> dimensions;
  std::map<std::string, Reconstruction> reconstructions;
  std::map<std::string, Transform> transforms;

  /// Number of assignments, saturating at UINT64_MAX.
  std::uint64_t combinations() const;
};

/// Candidate index per dimension.
using Assignment = std::vector<std::size_t>;

/// The definition with `assignment` applied. Targets of edges whose output
/// may change lose their declared alphabet so it is derived again.
WorkflowDefinition instantiate(const WorkflowDefinition& base, const ParamSpace& space, const Assignment& assignment);

std::string describe(const ParamSpace& space, const Assignment& assignment);

enum class Objective { midpoint, lower_bound };

inline constexpr std::uint64_t kDefaultSeed = 0x243F6A8885A308D3ULL;
inline constexpr std::uint64_t kDefaultCombinationCap = 1'000'000;

/// CBR_SEED when set (decimal), otherwise kDefaultSeed.
std::uint64_t seed_from_environment();

struct SearchOptions {
  std::optional<CostRecord> budget;
  CostMerge merge = CostMerge::sum;
  EntropyMode mode = EntropyMode::actual;
  Objective objective = Objective::midpoint;
  std::uint64_t cap = kDefaultCombinationCap;
  std::uint64_t seed = kDefaultSeed;
};

struct Evaluation {
  Assignment assignment;
  CostRecord cost;
  Interval benefit;
  Interval cbr;
  double objective = 0.0;
  bool feasible = true;
};

struct FrontierPoint {
  double cost = 0.0;
  double benefit = 0.0;
  Interval benefit_interval;
  std::string assignment;
};

struct OptimizeResult {
  Assignment best_index;
  std::vector<std::pair<std::string, std::string>> best_assignment;  // "edge.parameter" -> label
  Interval best_cbr;
  Interval best_benefit;
  CostRecord best_cost;
  std::vector<FrontierPoint> frontier;
  std::size_t evaluations = 0;
  /// True for exhaustive search; greedy results are local optima.
  bool certified = false;
  std::uint64_t seed = 0;
  /// Every distinct assignment evaluated, in evaluation order.
  std::vector<Evaluation> history;
};

Evaluation evaluate(const WorkflowDefinition& base, const ParamSpace& space, const Assignment& assignment,
                    const SearchOptions& options);

/// Strict preference between two evaluations: feasible first, then higher
/// objective, lower cost, lexicographically smaller assignment.
bool better(const Evaluation& a, const Evaluation& b);

OptimizeResult exhaustive_search(const WorkflowDefinition& base, const ParamSpace& space,
                                 const SearchOptions& options = {});

/// Coordinate ascent from `restarts` starts: the all-first assignment, then
/// starts drawn from a generator seeded with options.seed.
OptimizeResult greedy_search(const WorkflowDefinition& base, const ParamSpace& space, std::size_t restarts,
                             const SearchOptions& options = {});

/// Nondominated points (lower cost, higher benefit), sorted by cost. Of
/// identical points the first is kept.
std::vector<FrontierPoint> pareto_frontier(const std::vector<FrontierPoint>& points);

/// Columns: assignment, cost, benefit_lo, benefit_hi, cbr_mid.
std::string frontier_csv(const std::vector<FrontierPoint>& frontier);

}  // namespace cbr
