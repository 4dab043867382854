// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cbr/alphabet.hpp"

namespace cbr {

enum class CostKind { energy, time, monetary, abstract };

std::string_view to_string(CostKind kind);
std::optional<CostKind> parse_cost_kind(std::string_view text);

/// What executing a transformation costs. The amount is strictly positive:
/// any action that transforms an alphabet costs something.
struct CostRecord {
  CostKind kind = CostKind::abstract;
  double amount = 1.0;
  std::string unit;

  static CostRecord make(CostKind kind, double amount, std::string unit);

  bool commensurable_with(const CostRecord& other) const {
    return kind == other.kind && unit == other.unit;
  }
  bool operator==(const CostRecord&) const = default;
};

/// Machine processing, human processing, visual mapping, interaction.
enum class NodeKind { M, H, V, I };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

inline bool is_human_centric(NodeKind kind) { return kind == NodeKind::H || kind == NodeKind::I; }

/// Deterministic many-to-one relabelling of letters.
struct Grouping {
  std::vector<std::pair<std::string, std::string>> assignment;  // input id -> output id
  std::vector<std::string> output_letters;

  /// Output letters in order of first appearance in the assignment.
  static Grouping from_assignment(std::vector<std::pair<std::string, std::string>> assignment);

  bool operator==(const Grouping&) const = default;
};

/// Bins numeric letter ids into k intervals [e_i, e_{i+1}); the last bin is
/// closed on the right.
struct Quantizer {
  std::vector<double> edges;
  std::vector<std::string> labels;

  static Quantizer uniform_bins(double lower, double upper, std::size_t bins);

  std::size_t bins() const { return edges.size() - 1; }
  std::optional<std::size_t> bin_of(double value) const;

  bool operator==(const Quantizer&) const = default;
};

/// Window aggregation over a product alphabet. Only tracks bit budgets:
/// `window` consecutive factors collapse into one, and `levels`, when set,
/// caps the number of distinguishable values per output factor.
struct Aggregator {
  std::uint64_t window = 1;
  std::string statistic = "mean";
  std::optional<std::uint64_t> levels;

  bool operator==(const Aggregator&) const = default;
};

/// Row-stochastic conditional pmf c(y|x).
struct Channel {
  std::vector<std::string> output_letters;
  std::vector<std::pair<std::string, std::vector<double>>> rows;

  bool operator==(const Channel&) const = default;
};

/// A step whose output alphabet and distortion are declared rather than
/// computed, e.g. a human judgement or a machine step over an alphabet too
/// large to enumerate.
struct Declared {
  Alphabet output;
  double distortion_bits = 0.0;
};

class Transform;

/// second after first.
struct Composite {
  std::shared_ptr<const Transform> first;
  std::shared_ptr<const Transform> second;
};

class Transform {
 public:
  using Mapping = std::variant<Grouping, Quantizer, Aggregator, Channel, Declared, Composite>;

  Transform(std::string name, Mapping mapping, CostRecord cost, NodeKind node_kind = NodeKind::M);

  const std::string& name() const { return name_; }
  const Mapping& mapping() const { return mapping_; }
  const CostRecord& cost() const { return cost_; }
  NodeKind node_kind() const { return node_kind_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&mapping_);
  }

  /// Grouping, Quantizer, and composites built only from those.
  bool deterministic() const;

  Transform with_cost(CostRecord cost) const;
  Transform with_mapping(Mapping mapping) const;

 private:
  std::string name_;
  Mapping mapping_;
  CostRecord cost_;
  NodeKind node_kind_;
};

/// The action of an enumerable transform on a concrete letter set: either a
/// deterministic image index per input letter, or dense stochastic rows.
struct LetterMap {
  std::vector<std::string> output_letters;
  std::vector<std::size_t> image;
  std::vector<std::vector<double>> rows;

  bool deterministic() const { return rows.empty(); }
};

LetterMap letter_map(const Transform& t, std::span<const Letter> input_letters);

/// Image measure of `input` under `t`.
Alphabet pushforward(const Transform& t, const Alphabet& input);

/// I(X; t(X)) in bits for an enumerated input.
double mutual_information(const Transform& t, const Alphabet& input);

/// t2 after t1, with summed cost.
Transform compose(const Transform& t1, const Transform& t2);

}  // namespace cbr
