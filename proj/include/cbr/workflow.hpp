// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cbr/alphabet.hpp"
#include "cbr/metrics.hpp"
#include "cbr/reconstruction.hpp"
#include "cbr/transform.hpp"

namespace cbr {

enum class WorkflowClass { W1, W2, W3, W4, W5, W6 };
enum class VisLevel { V_D, V_O, V_A, V_M };

std::string_view to_string(WorkflowClass c);
std::optional<WorkflowClass> parse_workflow_class(std::string_view text);
std::string_view to_string(VisLevel level);
std::optional<VisLevel> parse_vis_level(std::string_view text);

struct LevelInfo {
  VisLevel level = VisLevel::V_D;
  std::string question_form;
  std::string complexity_class;
};

LevelInfo level_info(VisLevel level);

/// How parallel branches combine their costs at a joint: summed (energy,
/// money) or the slowest branch (time).
enum class CostMerge { sum, max_parallel };

std::string_view to_string(CostMerge merge);
std::optional<CostMerge> parse_cost_merge(std::string_view text);

/// Closed interval [lo, hi]. Benefits are exact on sequential workflows and
/// bounded at joints.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
  bool point() const { return lo == hi; }

  Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
  Interval operator+(double x) const { return {lo + x, hi + x}; }
  Interval operator/(double x) const { return {lo / x, hi / x}; }
  bool operator==(const Interval&) const = default;
};

struct NodeDef {
  std::string name;
  /// Absent for nodes whose alphabet follows from their single incoming edge.
  std::optional<Alphabet> alphabet;
  std::optional<NodeKind> kind;
};

struct EdgeDef {
  std::string id;  // defaults to "from->to"
  std::string from;
  std::string to;
  Transform transform;
  std::optional<Reconstruction> reconstruction;
};

struct WorkflowDefinition {
  std::vector<NodeDef> nodes;
  std::vector<EdgeDef> edges;
  std::optional<std::string> decisional;
  /// Estimated mutual information shared by the branches arriving at a
  /// machine-only joint, keyed by joint node. Missing joints use 0.
  std::map<std::string, double> shared_mi;
  std::optional<WorkflowClass> class_tag;
  std::optional<VisLevel> level_tag;
};

/// A validated workflow: acyclic, every edge's endpoints consistent with its
/// transform, exactly one decisional sink. Immutable.
class WorkflowGraph {
 public:
  explicit WorkflowGraph(WorkflowDefinition definition);

  const WorkflowDefinition& definition() const { return def_; }

  std::size_t node_count() const { return def_.nodes.size(); }
  std::size_t edge_count() const { return def_.edges.size(); }
  const NodeDef& node(std::size_t i) const { return def_.nodes[i]; }
  const EdgeDef& edge(std::size_t e) const { return def_.edges[e]; }
  const Alphabet& alphabet(std::size_t i) const { return alphabets_[i]; }
  std::optional<std::size_t> node_index(std::string_view name) const;
  std::optional<std::size_t> edge_index(std::string_view id) const;

  std::size_t source_of(std::size_t e) const { return from_[e]; }
  std::size_t target_of(std::size_t e) const { return to_[e]; }
  const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_[v]; }
  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& topological_order() const { return topo_; }
  std::size_t decisional() const { return decisional_; }

  /// A single chain with no branching or joints.
  bool sequential() const;

  /// Kind annotation of a node: declared, else the kind of the step producing it.
  std::optional<NodeKind> node_kind(std::size_t v) const;

 private:
  WorkflowDefinition def_;
  std::vector<Alphabet> alphabets_;
  std::vector<std::size_t> from_, to_;
  std::vector<std::vector<std::size_t>> in_, out_;
  std::vector<std::size_t> topo_;
  std::size_t decisional_ = 0;
};

/// Step metrics for every edge, in edge order.
std::vector<StepMetrics> score_edges(const WorkflowGraph& g, EntropyMode mode);

CostRecord total_cost(const WorkflowGraph& g, CostMerge merge);

/// Benefit accumulated at the decisional alphabet. Sequential segments add
/// up; at a joint the arriving branch benefits combine into
/// [max, sum] when any branch involves a human step, and into
/// [max, min(sum - shared MI, H(branch point))] when all are machine steps.
Interval total_benefit(const WorkflowGraph& g, EntropyMode mode = EntropyMode::actual);

Interval overall_cbr(const WorkflowGraph& g, CostMerge merge, EntropyMode mode = EntropyMode::actual);

struct OverallMetrics {
  CostRecord total_cost;
  Interval total_benefit;
  Interval overall_cbr;
  double distortion_sum = 0.0;
  /// sum over steps of (H(out) + D) / C, reported next to the ratio of sums.
  double cost_weighted_uncertainty = 0.0;
};

OverallMetrics overall_metrics(const WorkflowGraph& g, CostMerge merge, EntropyMode mode);

struct Classification {
  std::optional<WorkflowClass> workflow_class;
  std::optional<LevelInfo> level;
  bool interaction = false;
};

/// Structural match of the graph's step kinds against the six workflow
/// templates. Unmatched graphs fall back to the definition's level tag.
Classification classify(const WorkflowGraph& g);

/// Graphviz rendering with entropies on nodes and step measures on edges.
std::string to_dot(const WorkflowGraph& g, EntropyMode mode);

}  // namespace cbr
