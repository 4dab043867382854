// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/optimize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "cbr/error.hpp"

namespace cbr {

std::uint64_t ParamSpace::combinations() const {
  std::uint64_t total = 1;
  for (const auto& d : dimensions) {
    std::uint64_t k = d.candidates.size();
    if (k == 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
    total *= k;
  }
  return total;
}

namespace {

double number(const Dimension& d, const Candidate& c) {
  if (const auto* v = std::get_if<double>(&c.value)) return *v;
  throw Error(Errc::invariant_violation, d.edge + "." + d.parameter + " candidate '" + c.label + "' must be a number");
}

std::uint64_t count(const Dimension& d, const Candidate& c) {
  double v = number(d, c);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) {
    throw Error(Errc::invariant_violation,
                d.edge + "." + d.parameter + " candidate '" + c.label + "' must be a positive integer");
  }
  return static_cast<std::uint64_t>(v);
}

const std::string& text(const Dimension& d, const Candidate& c) {
  if (const auto* v = std::get_if<std::string>(&c.value)) return *v;
  throw Error(Errc::invariant_violation, d.edge + "." + d.parameter + " candidate '" + c.label + "' must be a name");
}

Reconstruction named_reconstruction(const ParamSpace& space, const std::string& name) {
  if (auto it = space.reconstructions.find(name); it != space.reconstructions.end()) return it->second;
  if (name == "exact_conditional") return Reconstruction(ExactConditional{});
  if (name == "uniform_preimage") return Reconstruction(UniformPreimage{});
  if (name == "mutual_information") return Reconstruction(MutualInformationShortcut{});
  throw Error(Errc::dangling_reference, "reconstruction '" + name + "'");
}

EdgeDef& find_edge(WorkflowDefinition& def, const std::string& id) {
  for (auto& e : def.edges) {
    std::string effective = e.id.empty() ? e.from + "->" + e.to : e.id;
    if (effective == id) {
      e.id = effective;
      return e;
    }
  }
  throw Error(Errc::dangling_reference, "parameter edge '" + id + "'");
}

// Removes edge `id`; its target merges into its source.
void contract(WorkflowDefinition& def, const std::string& id) {
  auto it = std::find_if(def.edges.begin(), def.edges.end(), [&](const EdgeDef& e) { return e.id == id; });
  if (it == def.edges.end()) return;
  const std::string from = it->from;
  const std::string to = it->to;
  auto incoming = std::count_if(def.edges.begin(), def.edges.end(), [&](const EdgeDef& e) { return e.to == to; });
  bool sink = std::none_of(def.edges.begin(), def.edges.end(), [&](const EdgeDef& e) { return e.from == to; });
  if (incoming != 1 || sink || def.decisional == to) {
    throw Error(Errc::invariant_violation,
                "edge '" + id + "' cannot be excluded: its target is a joint or the decisional alphabet");
  }
  def.edges.erase(it);
  for (auto& e : def.edges) {
    if (e.from == to) e.from = from;
  }
  std::erase_if(def.nodes, [&](const NodeDef& n) { return n.name == to; });
}

}  // namespace

WorkflowDefinition instantiate(const WorkflowDefinition& base, const ParamSpace& space, const Assignment& assignment) {
  if (assignment.size() != space.dimensions.size()) {
    throw Error(Errc::invariant_violation, "assignment does not match the parameter space");
  }
  WorkflowDefinition def = base;
  std::set<std::string> reshaped;
  std::vector<std::string> excluded;

  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const auto& dim = space.dimensions[i];
    if (assignment[i] >= dim.candidates.size()) throw Error(Errc::invariant_violation, "candidate index out of range");
    const auto& c = dim.candidates[assignment[i]];
    EdgeDef& edge = find_edge(def, dim.edge);
    const auto& p = dim.parameter;

    if (p == "bins") {
      const auto* q = edge.transform.as<Quantizer>();
      if (!q) throw Error(Errc::mode_mismatch, "bins on non-quantizer edge '" + dim.edge + "'");
      edge.transform = edge.transform.with_mapping(Quantizer::uniform_bins(q->edges.front(), q->edges.back(), count(dim, c)));
      reshaped.insert(edge.to);
    } else if (p == "window" || p == "levels") {
      const auto* a = edge.transform.as<Aggregator>();
      if (!a) throw Error(Errc::mode_mismatch, p + " on non-aggregator edge '" + dim.edge + "'");
      Aggregator next = *a;
      if (p == "window") {
        next.window = count(dim, c);
      } else {
        next.levels = count(dim, c);
      }
      edge.transform = edge.transform.with_mapping(next);
      reshaped.insert(edge.to);
    } else if (p == "cost") {
      CostRecord cost = edge.transform.cost();
      edge.transform = edge.transform.with_cost(CostRecord::make(cost.kind, number(dim, c), cost.unit));
    } else if (p == "distortion_bits") {
      double bits = number(dim, c);
      if (const auto* d = edge.transform.as<Declared>()) {
        edge.transform = edge.transform.with_mapping(Declared{d->output, bits});
      }
      edge.reconstruction = Reconstruction(DeclaredDivergence{bits});
    } else if (p == "reconstruction") {
      edge.reconstruction = named_reconstruction(space, text(dim, c));
    } else if (p == "transform") {
      auto it = space.transforms.find(text(dim, c));
      if (it == space.transforms.end()) throw Error(Errc::dangling_reference, "transform '" + text(dim, c) + "'");
      edge.transform = it->second;
      if (const auto* d = edge.transform.as<Declared>()) edge.reconstruction = Reconstruction(DeclaredDivergence{d->distortion_bits});
      reshaped.insert(edge.to);
    } else if (p == "include") {
      const auto* keep = std::get_if<bool>(&c.value);
      if (!keep) throw Error(Errc::invariant_violation, dim.edge + ".include candidates must be booleans");
      if (!*keep) excluded.push_back(edge.id);
    } else {
      throw Error(Errc::invariant_violation, "unknown parameter '" + p + "'");
    }

    if (c.cost) {
      CostRecord cost = edge.transform.cost();
      edge.transform = edge.transform.with_cost(CostRecord::make(cost.kind, *c.cost, cost.unit));
    }
  }

  for (auto& node : def.nodes) {
    if (!reshaped.count(node.name)) continue;
    auto incoming = std::count_if(def.edges.begin(), def.edges.end(), [&](const EdgeDef& e) { return e.to == node.name; });
    if (incoming == 1) node.alphabet.reset();
  }
  for (const auto& id : excluded) contract(def, id);
  return def;
}

std::string describe(const ParamSpace& space, const Assignment& assignment) {
  std::string out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const auto& d = space.dimensions[i];
    if (!out.empty()) out += ";";
    out += d.edge + "." + d.parameter + "=" + d.candidates[assignment[i]].label;
  }
  return out;
}

std::uint64_t seed_from_environment() {
  const char* raw = std::getenv("CBR_SEED");
  if (!raw || !*raw) return kDefaultSeed;
  std::string_view s(raw);
  std::uint64_t seed = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw Error(Errc::parse_error, "CBR_SEED must be a decimal 64-bit integer, got '" + std::string(s) + "'");
  }
  return seed;
}

Evaluation evaluate(const WorkflowDefinition& base, const ParamSpace& space, const Assignment& assignment,
                    const SearchOptions& options) {
  WorkflowGraph g(instantiate(base, space, assignment));
  Evaluation ev;
  ev.assignment = assignment;
  ev.cost = total_cost(g, options.merge);
  ev.benefit = total_benefit(g, options.mode);
  ev.cbr = ev.benefit / ev.cost.amount;
  ev.objective = options.objective == Objective::midpoint ? ev.cbr.mid() : ev.cbr.lo;
  if (options.budget) {
    if (!options.budget->commensurable_with(ev.cost)) {
      throw Error(Errc::incommensurable_costs, "budget is not in the workflow's cost unit");
    }
    ev.feasible = ev.cost.amount <= options.budget->amount;
  }
  return ev;
}

namespace {

bool clearly_greater(double a, double b) {
  return a - b > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

bool better(const Evaluation& a, const Evaluation& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (clearly_greater(a.objective, b.objective)) return true;
  if (clearly_greater(b.objective, a.objective)) return false;
  if (clearly_greater(b.cost.amount, a.cost.amount)) return true;
  if (clearly_greater(a.cost.amount, b.cost.amount)) return false;
  return a.assignment < b.assignment;
}

namespace {

void finish(OptimizeResult& r, const ParamSpace& space) {
  const Evaluation* best = nullptr;
  std::vector<FrontierPoint> points;
  for (const auto& ev : r.history) {
    if (!ev.feasible) continue;
    if (!best || better(ev, *best)) best = &ev;
    points.push_back({ev.cost.amount, ev.benefit.mid(), ev.benefit, describe(space, ev.assignment)});
  }
  if (!best) throw Error(Errc::infeasible_budget, "no evaluated assignment fits the budget");
  r.best_index = best->assignment;
  for (std::size_t i = 0; i < best->assignment.size(); ++i) {
    const auto& d = space.dimensions[i];
    r.best_assignment.emplace_back(d.edge + "." + d.parameter, d.candidates[best->assignment[i]].label);
  }
  r.best_cbr = best->cbr;
  r.best_benefit = best->benefit;
  r.best_cost = best->cost;
  r.frontier = pareto_frontier(points);
  r.evaluations = r.history.size();
}

}  // namespace

OptimizeResult exhaustive_search(const WorkflowDefinition& base, const ParamSpace& space, const SearchOptions& options) {
  const std::uint64_t total = space.combinations();
  if (total == 0) throw Error(Errc::invariant_violation, "a parameter dimension has no candidates");
  if (total > options.cap) {
    throw Error(Errc::search_space_too_large, std::to_string(total) + " combinations exceed the cap of " +
                                                  std::to_string(options.cap) + "; use greedy_search");
  }
  OptimizeResult r;
  r.certified = true;
  r.seed = options.seed;
  r.history.reserve(total);
  Assignment a(space.dimensions.size(), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    r.history.push_back(evaluate(base, space, a, options));
    for (std::size_t i = a.size(); i-- > 0;) {
      if (++a[i] < space.dimensions[i].candidates.size()) break;
      a[i] = 0;
    }
  }
  finish(r, space);
  return r;
}

OptimizeResult greedy_search(const WorkflowDefinition& base, const ParamSpace& space, std::size_t restarts,
                             const SearchOptions& options) {
  if (restarts == 0) throw Error(Errc::invariant_violation, "restarts must be at least 1");
  if (space.combinations() == 0) throw Error(Errc::invariant_violation, "a parameter dimension has no candidates");
  OptimizeResult r;
  r.certified = false;
  r.seed = options.seed;
  std::map<Assignment, std::size_t> seen;
  auto eval = [&](const Assignment& a) -> const Evaluation& {
    auto it = seen.find(a);
    if (it == seen.end()) {
      r.history.push_back(evaluate(base, space, a, options));
      it = seen.emplace(a, r.history.size() - 1).first;
    }
    return r.history[it->second];
  };

  std::mt19937_64 rng(options.seed);
  const std::size_t dims = space.dimensions.size();
  for (std::size_t s = 0; s < restarts; ++s) {
    Assignment current(dims, 0);
    if (s > 0) {
      for (std::size_t i = 0; i < dims; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, space.dimensions[i].candidates.size() - 1);
        current[i] = pick(rng);
      }
    }
    Evaluation here = eval(current);
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < dims; ++i) {
        for (std::size_t k = 0; k < space.dimensions[i].candidates.size(); ++k) {
          if (k == current[i]) continue;
          Assignment next = current;
          next[i] = k;
          const Evaluation& there = eval(next);
          if (better(there, here) && (there.feasible || !here.feasible)) {
            // Move only on a real gain so ties cannot cycle.
            if (there.feasible != here.feasible || clearly_greater(there.objective, here.objective) ||
                clearly_greater(here.cost.amount, there.cost.amount)) {
              here = there;
              current = next;
              improved = true;
            }
          }
        }
      }
    }
  }
  finish(r, space);
  return r;
}

std::vector<FrontierPoint> pareto_frontier(const std::vector<FrontierPoint>& points) {
  std::vector<FrontierPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (i == j) continue;
      const auto& q = points[j];
      bool weakly = q.cost <= p.cost && q.benefit >= p.benefit;
      bool strictly = q.cost < p.cost || q.benefit > p.benefit;
      dominated = weakly && (strictly || j < i);
    }
    if (!dominated) out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(), [](const FrontierPoint& a, const FrontierPoint& b) { return a.cost < b.cost; });
  return out;
}

std::string frontier_csv(const std::vector<FrontierPoint>& frontier) {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream os;
  os << std::setprecision(17);
  os << "assignment,cost,benefit_lo,benefit_hi,cbr_mid\n";
  for (const auto& p : frontier) {
    os << field(p.assignment) << ',' << p.cost << ',' << p.benefit_interval.lo << ',' << p.benefit_interval.hi << ','
       << (p.benefit_interval.mid() / p.cost) << '\n';
  }
  return os.str();
}

}  // namespace cbr
