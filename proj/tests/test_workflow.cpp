// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "cbr/error.hpp"
#include "cbr/workflow.hpp"
#include "oracles.hpp"

using namespace cbr;
using doctest::Approx;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no cbr::Error raised");
  return Errc::invariant_violation;
}

CostRecord secs(double amount) { return CostRecord::make(CostKind::time, amount, "s"); }

NodeDef node(std::string name, std::optional<Alphabet> a = std::nullopt, std::optional<NodeKind> kind = std::nullopt) {
  return {std::move(name), std::move(a), kind};
}

NodeDef sym(const std::string& name, double h) { return node(name, Alphabet::symbolic(name, h, h)); }

Transform declared(const std::string& name, const Alphabet& out, double d, double cost, NodeKind kind = NodeKind::H) {
  return Transform(name, Declared{out, d}, secs(cost), kind);
}

EdgeDef step(std::string id, std::string from, std::string to, Transform t,
             std::optional<Reconstruction> g = std::nullopt) {
  if (!g) {
    if (const auto* d = t.as<Declared>()) g = Reconstruction(DeclaredDivergence{d->distortion_bits});
  }
  return {std::move(id), std::move(from), std::move(to), std::move(t), std::move(g)};
}

Transform halve(const Alphabet& in, const std::string& name, double cost) {
  Grouping g;
  for (std::size_t i = 0; i < in.size(); ++i) g.assignment.emplace_back(in.letters()[i].id, name + std::to_string(i / 2));
  for (std::size_t i = 0; i < (in.size() + 1) / 2; ++i) g.output_letters.push_back(name + std::to_string(i));
  return Transform(name, g, secs(cost));
}

// Z1 (8 letters) -> Z2 (4) -> Z3 (2) -> Z4 (1), all exact reconstructions.
WorkflowDefinition halving_chain(const std::vector<double>& costs, const std::vector<double>& p) {
  WorkflowDefinition def;
  auto z1 = Alphabet::enumerated("Z1", oracle::ids(8), p);
  def.nodes = {node("Z1", z1), node("Z2"), node("Z3"), node("Z4")};
  auto t1 = halve(z1, "a", costs[0]);
  auto z2 = pushforward(t1, z1);
  auto t2 = halve(z2, "b", costs[1]);
  auto z3 = pushforward(t2, z2);
  auto t3 = halve(z3, "c", costs[2]);
  def.edges = {step("F1", "Z1", "Z2", t1, ExactConditional{}), step("F2", "Z2", "Z3", t2, ExactConditional{}),
               step("F3", "Z3", "Z4", t3, ExactConditional{})};
  return def;
}

// S -> J twice (parallel steps with the given kinds and distortions), J -> K.
WorkflowDefinition diamond(double h_source, double h_joint, double d1, double d2, NodeKind kind, double c1,
                           double c2) {
  WorkflowDefinition def;
  auto joint = Alphabet::symbolic("J", h_joint, h_joint);
  def.nodes = {sym("S", h_source), node("J", joint), sym("K", 0)};
  def.edges = {step("left", "S", "J", declared("left", joint, d1, c1, kind)),
               step("right", "S", "J", declared("right", joint, d2, c2, kind)),
               step("down", "J", "K", declared("down", Alphabet::symbolic("K", 0, 0), 0, 2, kind))};
  return def;
}

}  // namespace

TEST_CASE("graph validation") {
  WorkflowDefinition empty;
  CHECK(code_of([&] { WorkflowGraph g(empty); }) == Errc::invariant_violation);

  WorkflowDefinition single;
  single.nodes = {sym("only", 1)};
  WorkflowGraph one(single);
  CHECK(one.edge_count() == 0);
  CHECK(one.node(one.decisional()).name == "only");

  WorkflowDefinition dangling;
  dangling.nodes = {sym("A", 2)};
  dangling.edges = {step("e", "A", "B", declared("e", Alphabet::symbolic("B", 1, 1), 0, 1))};
  CHECK(code_of([&] { WorkflowGraph g(dangling); }) == Errc::dangling_reference);

  WorkflowDefinition cycle;
  auto b = Alphabet::symbolic("B", 1, 1);
  auto a = Alphabet::symbolic("A", 1, 1);
  cycle.nodes = {node("A", a), node("B", b), sym("C", 0)};
  cycle.edges = {step("ab", "A", "B", declared("ab", b, 0, 1)), step("ba", "B", "A", declared("ba", a, 0, 1)),
                 step("bc", "B", "C", declared("bc", Alphabet::symbolic("C", 0, 0), 0, 1))};
  CHECK(code_of([&] { WorkflowGraph g(cycle); }) == Errc::invariant_violation);

  WorkflowDefinition two_sinks;
  two_sinks.nodes = {sym("A", 2), node("B", b), node("C", b)};
  two_sinks.edges = {step("ab", "A", "B", declared("ab", b, 0, 1)), step("ac", "A", "C", declared("ac", b, 0, 1))};
  CHECK(code_of([&] { WorkflowGraph g(two_sinks); }) == Errc::invariant_violation);
  two_sinks.decisional = "C";
  CHECK(WorkflowGraph(two_sinks).node(WorkflowGraph(two_sinks).decisional()).name == "C");
  two_sinks.decisional = "A";
  CHECK(code_of([&] { WorkflowGraph g(two_sinks); }) == Errc::invariant_violation);

  WorkflowDefinition mismatch;
  mismatch.nodes = {sym("A", 2), sym("B", 1.5)};
  mismatch.edges = {step("ab", "A", "B", declared("ab", b, 0, 1))};
  CHECK(code_of([&] { WorkflowGraph g(mismatch); }) == Errc::invariant_violation);

  WorkflowDefinition dup;
  dup.nodes = {sym("A", 2), node("B", b)};
  dup.edges = {step("x", "A", "B", declared("ab", b, 0, 1)), step("x", "A", "B", declared("ab", b, 0, 1))};
  CHECK(code_of([&] { WorkflowGraph g(dup); }) == Errc::invariant_violation);
}

TEST_CASE("derived alphabets and topology") {
  auto def = halving_chain({2, 3, 5}, std::vector<double>(8, 0.125));
  WorkflowGraph g(def);
  CHECK(g.sequential());
  CHECK(g.alphabet(*g.node_index("Z3")).size() == 2);
  CHECK(g.alphabet(*g.node_index("Z3")).name() == "Z3");
  CHECK(g.topological_order() == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(g.node(g.decisional()).name == "Z4");
  CHECK(g.edge_index("F2") == 1u);
  CHECK_FALSE(WorkflowGraph(diamond(10, 2, 0, 0, NodeKind::H, 1, 1)).sequential());
}

TEST_CASE("total cost") {
  WorkflowGraph chain(halving_chain({2, 3, 5}, std::vector<double>(8, 0.125)));
  CHECK(total_cost(chain, CostMerge::sum).amount == 10.0);
  CHECK(total_cost(chain, CostMerge::max_parallel).amount == 10.0);

  WorkflowGraph par(diamond(10, 2, 0, 0, NodeKind::H, 4, 7));
  CHECK(total_cost(par, CostMerge::max_parallel).amount == 9.0);
  CHECK(total_cost(par, CostMerge::sum).amount == 13.0);

  WorkflowDefinition single;
  auto b = Alphabet::symbolic("B", 1, 1);
  single.nodes = {sym("A", 2), node("B", b)};
  single.edges = {step("ab", "A", "B", declared("ab", b, 0, 4.5))};
  CHECK(total_cost(WorkflowGraph(single), CostMerge::sum).amount == 4.5);

  auto mixed = diamond(10, 2, 0, 0, NodeKind::H, 4, 7);
  mixed.edges[1].transform = mixed.edges[1].transform.with_cost(CostRecord::make(CostKind::energy, 1, "J"));
  CHECK(code_of([&] { total_cost(WorkflowGraph(mixed), CostMerge::sum); }) == Errc::incommensurable_costs);

  WorkflowDefinition lone;
  lone.nodes = {sym("A", 1)};
  CHECK_THROWS_AS(total_cost(WorkflowGraph(lone), CostMerge::sum), Error);
}

TEST_CASE("sum-merge cost is invariant under edge order") {
  auto def = diamond(10, 2, 0, 0, NodeKind::H, 4, 7);
  auto before = total_cost(WorkflowGraph(def), CostMerge::sum).amount;
  std::reverse(def.edges.begin(), def.edges.end());
  CHECK(total_cost(WorkflowGraph(def), CostMerge::sum).amount == before);
}

TEST_CASE("sequential benefit telescopes") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    auto p = oracle::random_pmf(rng, 8, trial % 2 == 1);
    WorkflowGraph g(halving_chain({1, 2, 3}, p));
    auto b = total_benefit(g);
    CHECK(b.point());
    double h1 = oracle::entropy(p);
    CHECK(b.lo == Approx(h1 - 0.0).epsilon(1e-9));
    double sum = 0.0;
    for (const auto& s : score_edges(g, EntropyMode::actual)) sum += *s.benefit_bits;
    CHECK(std::abs(sum - b.lo) <= 1e-9);
  }
}

TEST_CASE("sequential benefit with distortions: both forms agree") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    WorkflowDefinition def;
    std::size_t steps = 1 + rng() % 6;
    double h = 50 + rng() % 100;
    def.nodes.push_back(sym("Z0", h));
    double dsum = 0.0;
    double h_last = h;
    for (std::size_t s = 1; s <= steps; ++s) {
      h_last = (rng() % 1000) / 10.0;
      double d = (rng() % 100) / 10.0;
      dsum += d;
      auto out = Alphabet::symbolic("Z" + std::to_string(s), h_last, h_last);
      def.nodes.push_back(node(out.name(), out));
      def.edges.push_back(step("F" + std::to_string(s), "Z" + std::to_string(s - 1), out.name(),
                               declared("F" + std::to_string(s), out, d, 1 + rng() % 5)));
    }
    WorkflowGraph g(def);
    double telescoped = h - h_last - dsum;
    double summed = 0.0;
    for (const auto& st : score_edges(g, EntropyMode::actual)) summed += *st.benefit_bits;
    auto b = total_benefit(g);
    CHECK(b.point());
    CHECK(std::abs(b.lo - telescoped) <= 1e-9);
    CHECK(std::abs(summed - telescoped) <= 1e-9);
  }
}

TEST_CASE("joint benefits") {
  // human branches arriving with 5 and 8 bits
  auto human = total_benefit(WorkflowGraph(diamond(10, 2, 3, 0, NodeKind::H, 1, 1)));
  CHECK(human.lo == Approx(8 + 2));
  CHECK(human.hi == Approx(13 + 2));

  // machine branches from a 3-bit branch point arriving with 2 and 2.5 bits
  WorkflowDefinition m;
  auto j = Alphabet::symbolic("J", 0.5, 0.5);
  m.nodes = {sym("B", 3), node("J", j)};
  m.edges = {step("p", "B", "J", declared("p", j, 0.5, 1, NodeKind::M)),
             step("q", "B", "J", declared("q", j, 0.0, 1, NodeKind::M))};
  auto machine = total_benefit(WorkflowGraph(m));
  CHECK(machine.lo == Approx(2.5));
  CHECK(machine.hi == Approx(3.0));

  m.shared_mi["J"] = 2.0;
  auto shared = total_benefit(WorkflowGraph(m));
  CHECK(shared.lo == Approx(2.5));
  CHECK(shared.hi == Approx(2.5));

  m.shared_mi["B"] = 1.0;
  CHECK_THROWS_AS(WorkflowGraph{m}, Error);
}

TEST_CASE("joint intervals stay ordered on random diamonds") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    double hs = 1 + rng() % 20;
    double hj = (rng() % 100) / 100.0 * hs;
    auto kind = trial % 2 ? NodeKind::M : NodeKind::H;
    auto def = diamond(hs, hj, (rng() % 30) / 10.0, (rng() % 30) / 10.0, kind, 1, 1);
    if (kind == NodeKind::M) def.shared_mi["J"] = (rng() % 40) / 10.0;
    auto b = total_benefit(WorkflowGraph(def));
    CHECK(b.lo <= b.hi + 1e-12);
  }
}

TEST_CASE("unscored edges") {
  auto def = halving_chain({1, 1, 1}, std::vector<double>(8, 0.125));
  def.edges[1].reconstruction.reset();
  WorkflowGraph g(def);
  CHECK(code_of([&] { total_benefit(g); }) == Errc::unscored_edge);
  CHECK_FALSE(score_edges(g, EntropyMode::actual)[1].benefit_bits.has_value());
}

TEST_CASE("overall cbr") {
  WorkflowDefinition def;
  auto out = Alphabet::symbolic("F", 3.17, 3.17);
  def.nodes = {sym("P", 420), node("F", out)};
  def.edges = {step("see", "P", "F", declared("see", out, 1.83, 10))};
  auto cbr = overall_cbr(WorkflowGraph(def), CostMerge::sum);
  CHECK(cbr.lo == Approx(41.5));
  CHECK(cbr.point());

  def.edges[0].transform = def.edges[0].transform.with_cost(secs(20));
  CHECK(overall_cbr(WorkflowGraph(def), CostMerge::sum).lo == Approx(41.5 / 2));

  auto flat = Alphabet::symbolic("F", 420, 420);
  def.nodes[1] = node("F", flat);
  def.edges = {step("see", "P", "F", declared("see", flat, 0, 10))};
  CHECK(overall_cbr(WorkflowGraph(def), CostMerge::sum) == Interval{0, 0});

  auto base = diamond(10, 2, 3, 0, NodeKind::H, 1, 1);
  auto before = overall_cbr(WorkflowGraph(base), CostMerge::sum);
  for (auto& e : base.edges) e.transform = e.transform.with_cost(secs(2 * e.transform.cost().amount));
  auto after = overall_cbr(WorkflowGraph(base), CostMerge::sum);
  CHECK(after.lo == Approx(before.lo / 2));
  CHECK(after.hi == Approx(before.hi / 2));
}

TEST_CASE("overall metrics") {
  auto def = diamond(10, 2, 3, 0, NodeKind::H, 1, 1);
  auto m = overall_metrics(WorkflowGraph(def), CostMerge::sum, EntropyMode::actual);
  CHECK(m.distortion_sum == 3.0);
  CHECK(m.total_cost.amount == 4.0);
  // (2 + 3) / 1 + (2 + 0) / 1 + (0 + 0) / 2
  CHECK(m.cost_weighted_uncertainty == Approx(7.0));
}

namespace {

// A chain with the given step kinds, decisional node last.
WorkflowDefinition kinds_chain(const std::vector<NodeKind>& kinds) {
  WorkflowDefinition def;
  def.nodes.push_back(sym("N0", 10));
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    std::string to = "N" + std::to_string(i + 1);
    auto out = Alphabet::symbolic(to, 9.0 - i, 9.0 - i);
    def.nodes.push_back(node(to, out));
    def.edges.push_back(step("F" + std::to_string(i + 1), "N" + std::to_string(i), to,
                             declared("F" + std::to_string(i + 1), out, 0, 1, kinds[i])));
  }
  return def;
}

}  // namespace

TEST_CASE("classification") {
  using K = NodeKind;
  auto w1 = classify(WorkflowGraph(kinds_chain({K::H, K::V, K::H})));
  CHECK(w1.workflow_class == WorkflowClass::W1);
  CHECK(w1.level->level == VisLevel::V_D);
  CHECK(w1.level->complexity_class == "O(1)");

  auto w2 = classify(WorkflowGraph(kinds_chain({K::V, K::H, K::I})));
  CHECK(w2.workflow_class == WorkflowClass::W2);
  CHECK(w2.level->level == VisLevel::V_O);
  CHECK(w2.level->complexity_class == "O(n)");
  CHECK(w2.interaction);

  auto w3 = classify(WorkflowGraph(kinds_chain({K::M, K::V, K::H})));
  CHECK(w3.workflow_class == WorkflowClass::W3);
  CHECK(w3.level->level == VisLevel::V_D);

  // machine results and a visual view both reaching the analyst
  WorkflowDefinition w4;
  auto j = Alphabet::symbolic("D", 1, 1);
  auto a = Alphabet::symbolic("A", 5, 5);
  auto b = Alphabet::symbolic("B", 5, 5);
  w4.nodes = {sym("S", 10), node("A", a), node("B", b), node("D", j)};
  w4.edges = {step("m", "S", "A", declared("m", a, 0, 1, K::M)), step("v", "S", "B", declared("v", b, 0, 1, K::V)),
              step("ha", "A", "D", declared("ha", j, 0, 1, K::H)), step("hb", "B", "D", declared("hb", j, 0, 1, K::H))};
  auto c4 = classify(WorkflowGraph(w4));
  CHECK(c4.workflow_class == WorkflowClass::W4);
  CHECK(c4.level->level == VisLevel::V_A);

  auto w5 = classify(WorkflowGraph(kinds_chain({K::V, K::H, K::M})));
  CHECK(w5.workflow_class == WorkflowClass::W5);
  CHECK(w5.level->level == VisLevel::V_M);
  CHECK(w5.level->complexity_class == "O(k^n) / O(n!)");

  auto w6 = classify(WorkflowGraph(kinds_chain({K::H, K::M, K::V, K::H})));
  CHECK(w6.workflow_class == WorkflowClass::W6);

  auto odd = kinds_chain({K::M, K::M, K::M});
  auto none = classify(WorkflowGraph(odd));
  CHECK_FALSE(none.workflow_class.has_value());
  CHECK_FALSE(none.level.has_value());
  odd.level_tag = VisLevel::V_A;
  auto tagged = classify(WorkflowGraph(odd));
  CHECK_FALSE(tagged.workflow_class.has_value());
  CHECK(tagged.level->level == VisLevel::V_A);

  // deterministic and idempotent
  WorkflowGraph g(w4);
  auto first = classify(g);
  auto second = classify(g);
  CHECK(first.workflow_class == second.workflow_class);
  CHECK(first.level->level == second.level->level);
}

TEST_CASE("enum names round-trip") {
  for (auto c : {WorkflowClass::W1, WorkflowClass::W2, WorkflowClass::W3, WorkflowClass::W4, WorkflowClass::W5,
                 WorkflowClass::W6}) {
    CHECK(parse_workflow_class(to_string(c)) == c);
  }
  for (auto l : {VisLevel::V_D, VisLevel::V_O, VisLevel::V_A, VisLevel::V_M}) CHECK(parse_vis_level(to_string(l)) == l);
  CHECK(parse_cost_merge("max_parallel") == CostMerge::max_parallel);
  CHECK_FALSE(parse_cost_merge("min").has_value());
}

TEST_CASE("dot export") {
  WorkflowGraph g(halving_chain({1, 1, 1}, std::vector<double>(8, 0.125)));
  auto dot = to_dot(g, EntropyMode::actual);
  CHECK(dot.rfind("digraph", 0) == 0);
  for (const char* name : {"\"Z1\"", "\"Z2\"", "\"Z3\"", "\"Z4\""}) CHECK(dot.find(name) != std::string::npos);
  CHECK(dot.find("doubleoctagon") != std::string::npos);
  CHECK(dot.find("ACR") != std::string::npos);
  CHECK(std::count(dot.begin(), dot.end(), '\n') > 8);
}
