// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cbr/error.hpp"

namespace cbr {

std::string_view to_string(WorkflowClass c) {
  static constexpr std::string_view names[] = {"W1", "W2", "W3", "W4", "W5", "W6"};
  return names[static_cast<int>(c)];
}

std::optional<WorkflowClass> parse_workflow_class(std::string_view text) {
  for (int i = 0; i < 6; ++i) {
    auto c = static_cast<WorkflowClass>(i);
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::string_view to_string(VisLevel level) {
  static constexpr std::string_view names[] = {"V_D", "V_O", "V_A", "V_M"};
  return names[static_cast<int>(level)];
}

std::optional<VisLevel> parse_vis_level(std::string_view text) {
  for (int i = 0; i < 4; ++i) {
    auto l = static_cast<VisLevel>(i);
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

LevelInfo level_info(VisLevel level) {
  switch (level) {
    case VisLevel::V_D: return {level, "This is A!", "O(1)"};
    case VisLevel::V_O: return {level, "What has happened? When and where did A, B, C happen?", "O(n)"};
    case VisLevel::V_A: return {level, "What does A relate to? Why?", "O(n^k)"};
    case VisLevel::V_M: return {level, "How does A lead to B? What are the exact steps from A to B?", "O(k^n) / O(n!)"};
  }
  return {};
}

std::string_view to_string(CostMerge merge) { return merge == CostMerge::sum ? "sum" : "max_parallel"; }

std::optional<CostMerge> parse_cost_merge(std::string_view text) {
  if (text == "sum") return CostMerge::sum;
  if (text == "max_parallel") return CostMerge::max_parallel;
  return std::nullopt;
}

WorkflowGraph::WorkflowGraph(WorkflowDefinition definition) : def_(std::move(definition)) {
  const std::size_t n = def_.nodes.size();
  if (n == 0) throw Error(Errc::invariant_violation, "workflow has no alphabets");

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(def_.nodes[i].name, i).second) {
      throw Error(Errc::invariant_violation, "duplicate alphabet node '" + def_.nodes[i].name + "'");
    }
  }

  in_.assign(n, {});
  out_.assign(n, {});
  std::set<std::string> edge_ids;
  for (std::size_t e = 0; e < def_.edges.size(); ++e) {
    auto& edge = def_.edges[e];
    if (edge.id.empty()) edge.id = edge.from + "->" + edge.to;
    if (!edge_ids.insert(edge.id).second) throw Error(Errc::invariant_violation, "duplicate edge id '" + edge.id + "'");
    auto f = index.find(edge.from);
    auto t = index.find(edge.to);
    if (f == index.end()) throw Error(Errc::dangling_reference, "edges." + edge.id + ".from = " + edge.from);
    if (t == index.end()) throw Error(Errc::dangling_reference, "edges." + edge.id + ".to = " + edge.to);
    if (f->second == t->second) throw Error(Errc::invariant_violation, "edge '" + edge.id + "' is a self-loop");
    from_.push_back(f->second);
    to_.push_back(t->second);
    out_[f->second].push_back(e);
    in_[t->second].push_back(e);
  }

  // Kahn's algorithm, lowest index first for a stable order.
  std::vector<std::size_t> indegree(n);
  std::set<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    indegree[v] = in_[v].size();
    if (indegree[v] == 0) ready.insert(v);
  }
  while (!ready.empty()) {
    std::size_t v = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(v);
    for (std::size_t e : out_[v]) {
      if (--indegree[to_[e]] == 0) ready.insert(to_[e]);
    }
  }
  if (topo_.size() != n) throw Error(Errc::invariant_violation, "workflow graph has a cycle");

  if (def_.decisional) {
    auto d = index.find(*def_.decisional);
    if (d == index.end()) throw Error(Errc::dangling_reference, "decisional = " + *def_.decisional);
    if (!out_[d->second].empty()) {
      throw Error(Errc::invariant_violation, "decisional alphabet '" + *def_.decisional + "' is not a sink");
    }
    decisional_ = d->second;
  } else {
    std::vector<std::size_t> sinks;
    for (std::size_t v = 0; v < n; ++v) {
      if (out_[v].empty()) sinks.push_back(v);
    }
    if (sinks.size() != 1) {
      throw Error(Errc::invariant_violation, "exactly one decisional sink required, found " +
                                                 std::to_string(sinks.size()) + " sinks and none designated");
    }
    decisional_ = sinks.front();
    def_.decisional = def_.nodes[decisional_].name;
  }

  for (const auto& [joint, bits] : def_.shared_mi) {
    auto j = index.find(joint);
    if (j == index.end()) throw Error(Errc::dangling_reference, "shared_mi." + joint);
    if (in_[j->second].size() < 2 || !(bits >= 0.0)) {
      throw Error(Errc::invariant_violation, "shared_mi." + joint + " must name a joint with a non-negative value");
    }
  }

  std::vector<std::optional<Alphabet>> resolved(n);
  for (std::size_t v : topo_) {
    const auto& node = def_.nodes[v];
    if (!node.alphabet) {
      if (in_[v].size() != 1) {
        throw Error(Errc::invariant_violation,
                    "alphabet '" + node.name + "' must be declared: it does not have exactly one incoming step");
      }
      std::size_t e = in_[v].front();
      resolved[v] = pushforward(def_.edges[e].transform, *resolved[from_[e]]).renamed(node.name);
      continue;
    }
    resolved[v] = node.alphabet->renamed(node.name);
    for (std::size_t e : in_[v]) {
      auto image = pushforward(def_.edges[e].transform, *resolved[from_[e]]);
      if (!equivalent(image, *resolved[v])) {
        throw Error(Errc::invariant_violation,
                    "edge '" + def_.edges[e].id + "' does not produce the alphabet declared for '" + node.name + "'");
      }
    }
  }
  alphabets_.reserve(n);
  for (auto& a : resolved) alphabets_.push_back(std::move(*a));
}

std::optional<std::size_t> WorkflowGraph::node_index(std::string_view name) const {
  for (std::size_t i = 0; i < def_.nodes.size(); ++i) {
    if (def_.nodes[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> WorkflowGraph::edge_index(std::string_view id) const {
  for (std::size_t e = 0; e < def_.edges.size(); ++e) {
    if (def_.edges[e].id == id) return e;
  }
  return std::nullopt;
}

bool WorkflowGraph::sequential() const {
  for (std::size_t v = 0; v < node_count(); ++v) {
    if (in_[v].size() > 1 || out_[v].size() > 1) return false;
  }
  return edge_count() + 1 == node_count();
}

std::optional<NodeKind> WorkflowGraph::node_kind(std::size_t v) const {
  if (def_.nodes[v].kind) return def_.nodes[v].kind;
  if (in_[v].size() == 1) return def_.edges[in_[v].front()].transform.node_kind();
  return std::nullopt;
}

std::vector<StepMetrics> score_edges(const WorkflowGraph& g, EntropyMode mode) {
  std::vector<StepMetrics> out;
  out.reserve(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    out.push_back(score_step(edge.transform, edge.reconstruction, g.alphabet(g.source_of(e)),
                             g.alphabet(g.target_of(e)), mode));
  }
  return out;
}

namespace {

void require_commensurable(const WorkflowGraph& g) {
  for (std::size_t e = 1; e < g.edge_count(); ++e) {
    if (!g.edge(e).transform.cost().commensurable_with(g.edge(0).transform.cost())) {
      throw Error(Errc::incommensurable_costs,
                  "edge '" + g.edge(e).id + "' costs " + std::string(to_string(g.edge(e).transform.cost().kind)) +
                      "/" + g.edge(e).transform.cost().unit + ", edge '" + g.edge(0).id + "' costs " +
                      std::string(to_string(g.edge(0).transform.cost().kind)) + "/" + g.edge(0).transform.cost().unit);
    }
  }
}

// Accumulates benefit intervals relative to dominators. The virtual root,
// index n, dominates every node; it stands for "before all sources".
class BenefitAccumulator {
 public:
  BenefitAccumulator(const WorkflowGraph& g, EntropyMode mode) : g_(g), mode_(mode), root_(g.node_count()) {
    const std::size_t n = g.node_count();
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& edge = g.edge(e);
      if (!edge.reconstruction) throw Error(Errc::unscored_edge, "edge '" + edge.id + "' has no reconstruction");
    }
    auto scores = score_edges(g, mode);
    for (const auto& s : scores) step_benefit_.push_back(*s.benefit_bits);

    position_.assign(n + 1, -1);
    for (std::size_t i = 0; i < g.topological_order().size(); ++i) {
      position_[g.topological_order()[i]] = static_cast<long>(i);
    }
    dominators_.assign(n, std::vector<bool>(n + 1, false));
    idom_.assign(n, root_);
    for (std::size_t v : g.topological_order()) {
      auto& dom = dominators_[v];
      if (g.in_edges(v).empty()) {
        dom[root_] = true;
      } else {
        dom = dominators_[g.source_of(g.in_edges(v).front())];
        for (std::size_t e : g.in_edges(v)) {
          const auto& other = dominators_[g.source_of(e)];
          for (std::size_t k = 0; k <= n; ++k) dom[k] = dom[k] && other[k];
        }
      }
      dom[v] = true;
      long best = -1;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != v && dom[k] && position_[k] > best) {
          best = position_[k];
          idom_[v] = k;
        }
      }
    }

    reach_.assign(n, std::vector<bool>(n, false));
    for (auto it = g.topological_order().rbegin(); it != g.topological_order().rend(); ++it) {
      std::size_t v = *it;
      reach_[v][v] = true;
      for (std::size_t e : g.out_edges(v)) {
        const auto& next = reach_[g.target_of(e)];
        for (std::size_t k = 0; k < n; ++k) reach_[v][k] = reach_[v][k] || next[k];
      }
    }
  }

  Interval at(std::size_t v) { return relative(root_, v); }

 private:
  bool reaches(std::size_t from, std::size_t to) const { return from == root_ || reach_[from][to]; }

  Interval relative(std::size_t d, std::size_t x) {
    if (x == d) return {0.0, 0.0};
    auto key = std::make_pair(d, x);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const auto& incoming = g_.in_edges(x);
    Interval result;
    if (incoming.empty()) {
      result = {0.0, 0.0};
    } else if (incoming.size() == 1) {
      std::size_t e = incoming.front();
      result = relative(d, g_.source_of(e)) + step_benefit_[e];
    } else {
      std::size_t branch = idom_[x];
      std::vector<Interval> arriving;
      for (std::size_t e : incoming) arriving.push_back(relative(branch, g_.source_of(e)) + step_benefit_[e]);
      result = relative(d, branch) + merge(branch, x, arriving);
    }
    memo_.emplace(key, result);
    return result;
  }

  Interval merge(std::size_t branch, std::size_t joint, const std::vector<Interval>& arriving) const {
    double lo = arriving.front().lo;
    double sum = 0.0;
    for (const auto& a : arriving) {
      lo = std::max(lo, a.lo);
      sum += a.hi;
    }
    bool human = false;
    for (std::size_t e = 0; e < g_.edge_count() && !human; ++e) {
      bool inside = reaches(branch, g_.source_of(e)) && reach_[g_.target_of(e)][joint];
      human = inside && is_human_centric(g_.edge(e).transform.node_kind());
    }
    if (human) return {lo, std::max(lo, sum)};

    double cap = 0.0;
    if (branch == root_) {
      for (std::size_t v = 0; v < g_.node_count(); ++v) {
        if (g_.in_edges(v).empty() && reach_[v][joint]) cap += entropy(g_.alphabet(v), mode_);
      }
    } else {
      cap = entropy(g_.alphabet(branch), mode_);
    }
    double shared = 0.0;
    if (auto it = g_.definition().shared_mi.find(g_.node(joint).name); it != g_.definition().shared_mi.end()) {
      shared = it->second;
    }
    return {lo, std::max(lo, std::min(sum - shared, cap))};
  }

  const WorkflowGraph& g_;
  EntropyMode mode_;
  std::size_t root_;
  std::vector<double> step_benefit_;
  std::vector<long> position_;
  std::vector<std::vector<bool>> dominators_;
  std::vector<std::size_t> idom_;
  std::vector<std::vector<bool>> reach_;
  std::map<std::pair<std::size_t, std::size_t>, Interval> memo_;
};

}  // namespace

CostRecord total_cost(const WorkflowGraph& g, CostMerge merge) {
  if (g.edge_count() == 0) throw Error(Errc::invariant_violation, "workflow has no transformations to cost");
  require_commensurable(g);
  CostRecord total = g.edge(0).transform.cost();
  if (merge == CostMerge::sum) {
    total.amount = 0.0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) total.amount += g.edge(e).transform.cost().amount;
    return total;
  }
  std::vector<double> finish(g.node_count(), 0.0);
  double makespan = 0.0;
  for (std::size_t v : g.topological_order()) {
    for (std::size_t e : g.in_edges(v)) {
      finish[v] = std::max(finish[v], finish[g.source_of(e)] + g.edge(e).transform.cost().amount);
    }
    makespan = std::max(makespan, finish[v]);
  }
  total.amount = makespan;
  return total;
}

Interval total_benefit(const WorkflowGraph& g, EntropyMode mode) {
  BenefitAccumulator acc(g, mode);
  return acc.at(g.decisional());
}

Interval overall_cbr(const WorkflowGraph& g, CostMerge merge, EntropyMode mode) {
  auto cost = total_cost(g, merge);
  return total_benefit(g, mode) / cost.amount;
}

OverallMetrics overall_metrics(const WorkflowGraph& g, CostMerge merge, EntropyMode mode) {
  OverallMetrics m;
  m.total_cost = total_cost(g, merge);
  m.total_benefit = total_benefit(g, mode);
  m.overall_cbr = m.total_benefit / m.total_cost.amount;
  for (const auto& s : score_edges(g, mode)) {
    m.distortion_sum += *s.distortion_bits;
    m.cost_weighted_uncertainty += (s.h_out + *s.distortion_bits) / s.cost.amount;
  }
  return m;
}

namespace {

// Step kinds along every source-to-decisional path, interaction steps
// dropped and repeated kinds collapsed ("VHH" reads as "VH").
std::vector<std::string> kind_paths(const WorkflowGraph& g) {
  constexpr std::size_t kMaxPaths = 4096;
  std::vector<std::string> paths;
  std::function<void(std::size_t, std::string)> walk = [&](std::size_t v, std::string acc) {
    if (paths.size() >= kMaxPaths) return;
    if (v == g.decisional()) {
      paths.push_back(acc);
      return;
    }
    for (std::size_t e : g.out_edges(v)) {
      NodeKind k = g.node(g.target_of(e)).kind.value_or(g.edge(e).transform.node_kind());
      std::string next = acc;
      if (k != NodeKind::I) {
        char c = to_string(k).front();
        if (next.empty() || next.back() != c) next.push_back(c);
      }
      walk(g.target_of(e), std::move(next));
    }
  };
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    if (g.in_edges(v).empty()) walk(v, "");
  }
  return paths;
}

std::optional<WorkflowClass> match_path(const std::string& path) {
  static const std::vector<std::pair<std::regex, WorkflowClass>> templates = {
      {std::regex("^M?HVH$"), WorkflowClass::W1},    {std::regex("^VH$"), WorkflowClass::W2},
      {std::regex("^MVH$"), WorkflowClass::W3},      {std::regex("^VHM(VH)?$"), WorkflowClass::W5},
      {std::regex("^HM(VH)?$"), WorkflowClass::W6},
  };
  for (const auto& [pattern, cls] : templates) {
    if (std::regex_match(path, pattern)) return cls;
  }
  return std::nullopt;
}

VisLevel level_of(WorkflowClass c) {
  switch (c) {
    case WorkflowClass::W1:
    case WorkflowClass::W3: return VisLevel::V_D;
    case WorkflowClass::W2: return VisLevel::V_O;
    case WorkflowClass::W4: return VisLevel::V_A;
    case WorkflowClass::W5:
    case WorkflowClass::W6: return VisLevel::V_M;
  }
  return VisLevel::V_D;
}

}  // namespace

Classification classify(const WorkflowGraph& g) {
  Classification out;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    out.interaction = out.interaction || g.edge(e).transform.node_kind() == NodeKind::I;
  }
  auto paths = kind_paths(g);

  // Machine results viewed alongside a direct view of the same data.
  static const std::regex machine_branch("^MV?H$");
  bool has_machine_branch = false;
  bool has_view_branch = false;
  for (const auto& p : paths) {
    has_machine_branch = has_machine_branch || std::regex_match(p, machine_branch);
    has_view_branch = has_view_branch || p == "VH";
  }
  if (paths.size() > 1 && has_machine_branch && has_view_branch) {
    out.workflow_class = WorkflowClass::W4;
  } else {
    for (const auto& p : paths) {
      auto c = match_path(p);
      if (c && (!out.workflow_class || *c < *out.workflow_class)) out.workflow_class = c;
    }
  }

  if (out.workflow_class) {
    out.level = level_info(level_of(*out.workflow_class));
  } else if (g.definition().level_tag) {
    out.level = level_info(*g.definition().level_tag);
  }
  return out;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("-"); }

}  // namespace

std::string to_dot(const WorkflowGraph& g, EntropyMode mode) {
  auto scores = score_edges(g, mode);
  std::ostringstream os;
  os << "digraph workflow {\n  rankdir=LR;\n";
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto& name = g.node(v).name;
    std::string label = name + "\\nH=" + fmt(entropy(g.alphabet(v), mode)) + " bits (" +
                        std::string(to_string(mode)) + ")";
    os << "  " << quoted(name) << " [label=\"" << label << "\""
       << (v == g.decisional() ? ", shape=doubleoctagon" : ", shape=box") << "];\n";
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& s = scores[e];
    std::string label = g.edge(e).transform.name() + " [" + std::string(to_string(g.edge(e).transform.node_kind())) +
                        "]\\nACR=" + fmt(s.acr) + " PDR=" + fmt(s.pdr) + "\\nB=" + fmt(s.benefit_bits) +
                        " CBR=" + fmt(s.incremental_cbr);
    os << "  " << quoted(g.node(g.source_of(e)).name) << " -> " << quoted(g.node(g.target_of(e)).name)
       << " [label=\"" << label << "\""
       << (g.edge(e).transform.node_kind() == NodeKind::I ? ", style=bold" : "") << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cbr
