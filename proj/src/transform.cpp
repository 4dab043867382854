// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/transform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "cbr/error.hpp"

namespace cbr {

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::energy: return "energy";
    case CostKind::time: return "time";
    case CostKind::monetary: return "monetary";
    case CostKind::abstract: return "abstract";
  }
  return "abstract";
}

std::optional<CostKind> parse_cost_kind(std::string_view text) {
  if (text == "energy") return CostKind::energy;
  if (text == "time") return CostKind::time;
  if (text == "monetary") return CostKind::monetary;
  if (text == "abstract") return CostKind::abstract;
  return std::nullopt;
}

CostRecord CostRecord::make(CostKind kind, double amount, std::string unit) {
  if (!std::isfinite(amount) || amount <= 0.0) {
    throw Error(Errc::invariant_violation, "cost amount must be positive, got " + std::to_string(amount));
  }
  return CostRecord{kind, amount, std::move(unit)};
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::M: return "M";
    case NodeKind::H: return "H";
    case NodeKind::V: return "V";
    case NodeKind::I: return "I";
  }
  return "M";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
  if (text == "M") return NodeKind::M;
  if (text == "H") return NodeKind::H;
  if (text == "V") return NodeKind::V;
  if (text == "I") return NodeKind::I;
  return std::nullopt;
}

Grouping Grouping::from_assignment(std::vector<std::pair<std::string, std::string>> assignment) {
  Grouping g;
  std::unordered_set<std::string> seen;
  for (const auto& [from, to] : assignment) {
    if (seen.insert(to).second) g.output_letters.push_back(to);
  }
  g.assignment = std::move(assignment);
  return g;
}

Quantizer Quantizer::uniform_bins(double lower, double upper, std::size_t bins) {
  if (bins == 0 || !(upper > lower)) {
    throw Error(Errc::invariant_violation, "quantizer needs at least one bin over a nonempty range");
  }
  Quantizer q;
  q.edges.reserve(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    q.edges.push_back(lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(bins));
  }
  q.edges.back() = upper;
  for (std::size_t i = 0; i < bins; ++i) q.labels.push_back("b" + std::to_string(i));
  return q;
}

std::optional<std::size_t> Quantizer::bin_of(double value) const {
  if (std::isnan(value) || value < edges.front() || value > edges.back()) return std::nullopt;
  auto it = std::upper_bound(edges.begin(), edges.end(), value);
  auto bin = static_cast<std::size_t>(it - edges.begin());
  return bin == 0 ? 0 : std::min(bin - 1, bins() - 1);
}

namespace {

void require_unique(const std::vector<std::string>& ids, const std::string& what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw Error(Errc::invariant_violation, "duplicate " + what + " '" + id + "'");
  }
}

void validate(const std::string& name, Grouping& g) {
  if (g.output_letters.empty()) throw Error(Errc::invariant_violation, "grouping '" + name + "' has no outputs");
  require_unique(g.output_letters, "output letter");
  std::unordered_set<std::string> outputs(g.output_letters.begin(), g.output_letters.end());
  std::unordered_set<std::string> inputs;
  std::unordered_set<std::string> hit;
  for (const auto& [from, to] : g.assignment) {
    if (!inputs.insert(from).second) {
      throw Error(Errc::invariant_violation, "grouping '" + name + "' maps '" + from + "' twice");
    }
    if (!outputs.count(to)) {
      throw Error(Errc::invariant_violation, "grouping '" + name + "' maps to undeclared letter '" + to + "'");
    }
    hit.insert(to);
  }
  if (hit.size() != outputs.size()) {
    throw Error(Errc::invariant_violation, "grouping '" + name + "' is not onto its output letters");
  }
}

void validate(const std::string& name, Quantizer& q) {
  if (q.edges.size() < 2) throw Error(Errc::invariant_violation, "quantizer '" + name + "' needs k >= 1 bins");
  for (std::size_t i = 0; i < q.edges.size(); ++i) {
    if (!std::isfinite(q.edges[i]) || (i > 0 && !(q.edges[i] > q.edges[i - 1]))) {
      throw Error(Errc::invariant_violation, "quantizer '" + name + "' edges must be finite and increasing");
    }
  }
  if (q.labels.empty()) {
    for (std::size_t i = 0; i < q.bins(); ++i) q.labels.push_back("b" + std::to_string(i));
  }
  if (q.labels.size() != q.bins()) {
    throw Error(Errc::invariant_violation, "quantizer '" + name + "' needs one label per bin");
  }
  require_unique(q.labels, "bin label");
}

void validate(const std::string& name, Aggregator& a) {
  if (a.window == 0) throw Error(Errc::invariant_violation, "aggregator '" + name + "' window must be >= 1");
  if (a.levels && *a.levels == 0) {
    throw Error(Errc::invariant_violation, "aggregator '" + name + "' needs at least one level");
  }
}

void validate(const std::string& name, Channel& c) {
  if (c.output_letters.empty()) throw Error(Errc::invariant_violation, "channel '" + name + "' has no outputs");
  require_unique(c.output_letters, "output letter");
  std::unordered_set<std::string> inputs;
  for (auto& [from, row] : c.rows) {
    if (!inputs.insert(from).second) {
      throw Error(Errc::invariant_violation, "channel '" + name + "' has two rows for '" + from + "'");
    }
    if (row.size() != c.output_letters.size()) {
      throw Error(Errc::invariant_violation, "channel '" + name + "' row '" + from + "' has wrong width");
    }
    auto normalized = Pmf::from(row);
    row.assign(normalized.values().begin(), normalized.values().end());
  }
}

void validate(const std::string& name, Declared& d) {
  if (!std::isfinite(d.distortion_bits) || d.distortion_bits < 0.0) {
    throw Error(Errc::invariant_violation, "declared step '" + name + "' needs a non-negative distortion");
  }
}

void validate(const std::string& name, Composite& c) {
  if (!c.first || !c.second) throw Error(Errc::invariant_violation, "composite '" + name + "' is incomplete");
}

}  // namespace

Transform::Transform(std::string name, Mapping mapping, CostRecord cost, NodeKind node_kind)
    : name_(std::move(name)), mapping_(std::move(mapping)), cost_(std::move(cost)), node_kind_(node_kind) {
  cost_ = CostRecord::make(cost_.kind, cost_.amount, cost_.unit);
  std::visit([this](auto& m) { validate(name_, m); }, mapping_);
}

bool Transform::deterministic() const {
  if (as<Grouping>() || as<Quantizer>()) return true;
  if (const auto* c = as<Composite>()) return c->first->deterministic() && c->second->deterministic();
  return false;
}

Transform Transform::with_cost(CostRecord cost) const { return Transform(name_, mapping_, std::move(cost), node_kind_); }

Transform Transform::with_mapping(Mapping mapping) const {
  return Transform(name_, std::move(mapping), cost_, node_kind_);
}

namespace {

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

LetterMap map_grouping(const std::string& name, const Grouping& g, std::span<const Letter> input) {
  std::unordered_map<std::string, std::size_t> out_index;
  for (std::size_t i = 0; i < g.output_letters.size(); ++i) out_index.emplace(g.output_letters[i], i);
  std::unordered_map<std::string_view, std::size_t> target;
  for (const auto& [from, to] : g.assignment) target.emplace(from, out_index.at(to));
  LetterMap m{g.output_letters, {}, {}};
  m.image.reserve(input.size());
  for (const auto& letter : input) {
    auto it = target.find(letter.id);
    if (it == target.end()) {
      throw Error(Errc::partial_mapping, "'" + name + "' does not map letter '" + letter.id + "'");
    }
    m.image.push_back(it->second);
  }
  return m;
}

LetterMap map_quantizer(const std::string& name, const Quantizer& q, std::span<const Letter> input) {
  LetterMap m{q.labels, {}, {}};
  m.image.reserve(input.size());
  for (const auto& letter : input) {
    auto value = parse_number(letter.id);
    auto bin = value ? q.bin_of(*value) : std::nullopt;
    if (!bin) {
      throw Error(Errc::partial_mapping, "'" + name + "' has no bin for letter '" + letter.id + "'");
    }
    m.image.push_back(*bin);
  }
  return m;
}

LetterMap map_channel(const std::string& name, const Channel& c, std::span<const Letter> input) {
  std::unordered_map<std::string_view, const std::vector<double>*> rows;
  for (const auto& [from, row] : c.rows) rows.emplace(from, &row);
  LetterMap m{c.output_letters, {}, {}};
  m.rows.reserve(input.size());
  for (const auto& letter : input) {
    auto it = rows.find(letter.id);
    if (it == rows.end()) {
      throw Error(Errc::partial_mapping, "'" + name + "' has no row for letter '" + letter.id + "'");
    }
    m.rows.push_back(*it->second);
  }
  return m;
}

std::vector<double> dense_row(const LetterMap& m, std::size_t i) {
  if (!m.deterministic()) return m.rows[i];
  std::vector<double> row(m.output_letters.size(), 0.0);
  row[m.image[i]] = 1.0;
  return row;
}

LetterMap chain(const LetterMap& first, const LetterMap& second) {
  LetterMap m{second.output_letters, {}, {}};
  std::size_t n = first.deterministic() ? first.image.size() : first.rows.size();
  if (first.deterministic() && second.deterministic()) {
    m.image.reserve(n);
    for (std::size_t i = 0; i < n; ++i) m.image.push_back(second.image[first.image[i]]);
    return m;
  }
  m.rows.assign(n, std::vector<double>(m.output_letters.size(), 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    auto row = dense_row(first, i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] == 0.0) continue;
      if (second.deterministic()) {
        m.rows[i][second.image[j]] += row[j];
      } else {
        for (std::size_t k = 0; k < m.output_letters.size(); ++k) m.rows[i][k] += row[j] * second.rows[j][k];
      }
    }
  }
  return m;
}

std::vector<Letter> as_letters(const std::vector<std::string>& ids) {
  std::vector<Letter> letters;
  letters.reserve(ids.size());
  for (const auto& id : ids) letters.push_back({id, {}});
  return letters;
}

std::vector<double> image_mass(const LetterMap& m, std::span<const double> p) {
  std::vector<double> q(m.output_letters.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (m.deterministic()) {
      q[m.image[i]] += p[i];
    } else {
      for (std::size_t k = 0; k < q.size(); ++k) q[k] += p[i] * m.rows[i][k];
    }
  }
  return q;
}

}  // namespace

LetterMap letter_map(const Transform& t, std::span<const Letter> input_letters) {
  if (const auto* g = t.as<Grouping>()) return map_grouping(t.name(), *g, input_letters);
  if (const auto* q = t.as<Quantizer>()) return map_quantizer(t.name(), *q, input_letters);
  if (const auto* c = t.as<Channel>()) return map_channel(t.name(), *c, input_letters);
  if (const auto* c = t.as<Composite>()) {
    auto first = letter_map(*c->first, input_letters);
    auto middle = as_letters(first.output_letters);
    auto second = letter_map(*c->second, middle);
    return chain(first, second);
  }
  throw Error(Errc::mode_mismatch, "'" + t.name() + "' has no letter-level mapping");
}

Alphabet pushforward(const Transform& t, const Alphabet& input) {
  if (const auto* d = t.as<Declared>()) return d->output;
  if (const auto* c = t.as<Composite>()) return pushforward(*c->second, pushforward(*c->first, input));
  if (const auto* a = t.as<Aggregator>()) {
    if (input.kind() != Alphabet::Kind::product) {
      throw Error(Errc::mode_mismatch, "'" + t.name() + "' aggregates product alphabets only");
    }
    if (input.count() % a->window != 0) {
      throw Error(Errc::mode_mismatch, "'" + t.name() + "' window " + std::to_string(a->window) +
                                           " does not divide " + std::to_string(input.count()));
    }
    Alphabet factor = input.factor();
    if (a->levels) {
      double bits = std::min(std::log2(static_cast<double>(*a->levels)), max_entropy(factor));
      factor = Alphabet::symbolic(factor.name() + "@" + std::to_string(*a->levels),
                                  std::min(entropy(factor), bits), bits);
    }
    return Alphabet::product(t.name(), factor, input.count() / a->window);
  }
  if (!input.is_enumerated()) {
    throw Error(Errc::mode_mismatch, "'" + t.name() + "' needs an enumerated input, '" + input.name() + "' is not");
  }
  auto m = letter_map(t, input.letters());
  auto q = image_mass(m, input.pmf().values());
  return Alphabet::enumerated(t.name(), as_letters(m.output_letters), Pmf::from(std::move(q)));
}

double mutual_information(const Transform& t, const Alphabet& input) {
  if (!input.is_enumerated()) {
    throw Error(Errc::requires_enumerated, "mutual information of '" + t.name() + "' on '" + input.name() + "'");
  }
  auto m = letter_map(t, input.letters());
  if (m.deterministic()) {
    // I(X; f(X)) = H(f(X)); reuse the pushforward so both sides agree bit for bit.
    return entropy(pushforward(t, input));
  }
  auto p = input.pmf().values();
  auto q = image_mass(m, p);
  double info = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    for (std::size_t k = 0; k < q.size(); ++k) {
      double c = m.rows[i][k];
      if (c > 0.0) info += p[i] * c * std::log2(c / q[k]);
    }
  }
  return std::max(info, 0.0);
}

Transform compose(const Transform& t1, const Transform& t2) {
  if (!t1.cost().commensurable_with(t2.cost())) {
    throw Error(Errc::incommensurable_costs, "'" + t1.name() + "' and '" + t2.name() + "'");
  }
  NodeKind kind = t1.node_kind();
  if (t1.node_kind() != t2.node_kind()) {
    if (is_human_centric(t1.node_kind()) || is_human_centric(t2.node_kind())) {
      kind = NodeKind::H;
    } else {
      kind = NodeKind::M;
    }
  }
  CostRecord cost = t1.cost();
  cost.amount += t2.cost().amount;
  return Transform(t1.name() + ";" + t2.name(),
                   Composite{std::make_shared<const Transform>(t1), std::make_shared<const Transform>(t2)},
                   std::move(cost), kind);
}

}  // namespace cbr
