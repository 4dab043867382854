// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cbr/alphabet.hpp"
#include "cbr/optimize.hpp"
#include "cbr/transform.hpp"
#include "cbr/workflow.hpp"

namespace cbr {

inline constexpr std::string_view kSchemaVersion = "1";

// Declarations mirror the JSON document one to one, so that emit followed
// by parse gives back an equal value. Building them into domain objects is
// a separate step.

struct AlphabetDecl {
  std::string name;
  /// enumerated, symbolic, product, restricted or derived.
  std::string kind = "enumerated";
  std::vector<Letter> letters;
  std::optional<std::vector<double>> probabilities;  // uniform when absent
  double entropy_bits = 0.0;
  double max_entropy_bits = 0.0;
  std::string base;  // product factor, or the alphabet a restriction narrows
  std::uint64_t count = 0;
  std::vector<std::string> subset;
  bool operator==(const AlphabetDecl&) const = default;
};

struct CostDecl {
  double amount = 1.0;
  std::optional<CostKind> kind;  // cost_model default when absent
  std::optional<std::string> unit;
  bool operator==(const CostDecl&) const = default;
};

struct TransformDecl {
  std::string name;
  /// grouping, quantizer, aggregator, channel, declared or composite.
  std::string kind;
  NodeKind node_kind = NodeKind::M;
  CostDecl cost;
  std::vector<std::pair<std::string, std::string>> map;  // grouping
  std::vector<double> edges;                              // quantizer
  std::vector<std::string> labels;                        // quantizer
  std::uint64_t window = 1;                               // aggregator
  std::string statistic = "mean";
  std::optional<std::uint64_t> levels;
  std::vector<std::string> output_letters;                // channel
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::string output;                                     // declared
  double distortion_bits = 0.0;
  std::string first, second;                              // composite
  bool operator==(const TransformDecl&) const = default;
};

struct ReconstructionDecl {
  std::string name;
  /// exact_conditional, uniform_preimage, prior_weighted, declared or
  /// mutual_information.
  std::string kind;
  std::vector<std::pair<std::string, double>> prior;
  double bits = 0.0;
  bool operator==(const ReconstructionDecl&) const = default;
};

struct EdgeDecl {
  std::optional<std::string> id;
  std::string from;
  std::string to;
  std::string transform;
  /// A declared reconstruction name or a parameter-free kind name. Steps
  /// with a declared transform default to its stated distortion.
  std::optional<std::string> reconstruction;
  bool operator==(const EdgeDecl&) const = default;
};

struct GraphDecl {
  std::vector<EdgeDecl> edges;
  std::optional<std::string> decisional;
  std::map<std::string, NodeKind> node_kinds;
  std::map<std::string, double> shared_mi;
  std::optional<WorkflowClass> class_tag;
  std::optional<VisLevel> level_tag;
  bool operator==(const GraphDecl&) const = default;
};

struct CostModel {
  CostKind kind = CostKind::abstract;
  std::string unit = "unit";
  CostMerge merge = CostMerge::sum;
  bool operator==(const CostModel&) const = default;
};

struct WorkflowSpec {
  std::string schema_version{kSchemaVersion};
  std::string name;
  std::optional<std::string> fixture_tag;
  EntropyMode entropy_mode = EntropyMode::actual;
  CostModel cost_model;
  std::vector<AlphabetDecl> alphabets;
  std::vector<TransformDecl> transforms;
  std::vector<ReconstructionDecl> reconstructions;
  GraphDecl graph;
  std::optional<std::vector<Dimension>> param_space;
  std::vector<std::string> notes;
  bool operator==(const WorkflowSpec&) const = default;
};

/// Reads without checking references.
WorkflowSpec read_spec(std::string_view text);

/// Reads and validates: every reference resolves and the graph builds.
/// Errors carry the JSON path, and the line for syntax errors.
WorkflowSpec parse_spec(std::string_view text);

std::string emit_spec(const WorkflowSpec& spec);

Alphabet build_alphabet(const WorkflowSpec& spec, std::string_view name);
Transform build_transform(const WorkflowSpec& spec, std::string_view name);
Reconstruction build_reconstruction(const WorkflowSpec& spec, std::string_view name);
WorkflowDefinition build_definition(const WorkflowSpec& spec);
WorkflowGraph build_graph(const WorkflowSpec& spec);
ParamSpace build_param_space(const WorkflowSpec& spec);

/// Everything `analyze` reports for one spec.
struct Analysis {
  WorkflowSpec spec;
  WorkflowGraph graph;
  EntropyMode mode;
  std::vector<StepMetrics> steps;
  std::optional<OverallMetrics> overall;
  Classification classification;
  std::vector<std::string> notes;
};

Analysis analyze(const WorkflowSpec& spec, std::optional<EntropyMode> mode = std::nullopt);

/// Looks up a value such as "nodes.Z1.max_entropy", "edges.F1.benefit" or
/// "overall.cbr_mid".
double metric(const Analysis& analysis, std::string_view path);

std::string report_json(const Analysis& analysis);
std::string report_table(const Analysis& analysis);

std::string optimize_json(const OptimizeResult& result);
std::string optimize_table(const OptimizeResult& result);

// Fixtures: named scenarios with expected values.

struct Expectation {
  /// "<variant>:<metric path>".
  std::string metric;
  /// eq, le, ge, lt or gt.
  std::string relation = "eq";
  std::optional<double> value;
  /// Compare against another metric instead of a constant.
  std::optional<std::string> other;
  double tolerance = 0.0;
  /// Where the expected value comes from: reported (stated with the
  /// scenario), computed (independent arithmetic) or ordering (a
  /// qualitative claim between variants).
  std::string provenance;
  std::string note;
  bool operator==(const Expectation&) const = default;
};

struct Fixture {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, WorkflowSpec>> variants;
  std::vector<Expectation> expected;
  bool operator==(const Fixture&) const = default;
};

Fixture parse_fixture(std::string_view text);
std::string emit_fixture(const Fixture& fixture);

struct ExpectationResult {
  Expectation expectation;
  double computed = 0.0;
  std::optional<double> reference;
  bool pass = false;
  std::string error;
};

struct FixtureRun {
  std::string name;
  std::vector<ExpectationResult> results;
  bool pass() const;
};

FixtureRun run_fixture(const Fixture& fixture);
std::string fixture_table(const FixtureRun& run);

}  // namespace cbr
