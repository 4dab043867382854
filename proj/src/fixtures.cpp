// Apache License, Version 2.0, refer to LICENSE.txt

#include "cbr/fixtures.hpp"

#include <cmath>

#include "cbr/error.hpp"

namespace cbr {

namespace {

AlphabetDecl symbolic(std::string name, double h, double h_max) {
  AlphabetDecl a;
  a.name = std::move(name);
  a.kind = "symbolic";
  a.entropy_bits = h;
  a.max_entropy_bits = h_max;
  return a;
}

AlphabetDecl product_of(std::string name, std::string factor, std::uint64_t count) {
  AlphabetDecl a;
  a.name = std::move(name);
  a.kind = "product";
  a.base = std::move(factor);
  a.count = count;
  return a;
}

AlphabetDecl enumerated(std::string name, const std::vector<std::string>& ids,
                        std::optional<std::vector<double>> probabilities = std::nullopt) {
  AlphabetDecl a;
  a.name = std::move(name);
  a.kind = "enumerated";
  for (const auto& id : ids) a.letters.push_back({id, ""});
  a.probabilities = std::move(probabilities);
  return a;
}

AlphabetDecl restricted(std::string name, std::string base, std::vector<std::string> subset) {
  AlphabetDecl a;
  a.name = std::move(name);
  a.kind = "restricted";
  a.base = std::move(base);
  a.subset = std::move(subset);
  return a;
}

AlphabetDecl derived(std::string name) {
  AlphabetDecl a;
  a.name = std::move(name);
  a.kind = "derived";
  return a;
}

TransformDecl declared(std::string name, std::string output, double distortion, double cost, NodeKind kind) {
  TransformDecl t;
  t.name = std::move(name);
  t.kind = "declared";
  t.output = std::move(output);
  t.distortion_bits = distortion;
  t.cost.amount = cost;
  t.node_kind = kind;
  return t;
}

TransformDecl aggregator(std::string name, std::uint64_t window, std::optional<std::uint64_t> levels,
                         std::string statistic, NodeKind kind) {
  TransformDecl t;
  t.name = std::move(name);
  t.kind = "aggregator";
  t.window = window;
  t.levels = levels;
  t.statistic = std::move(statistic);
  t.node_kind = kind;
  return t;
}

TransformDecl grouping(std::string name, std::vector<std::pair<std::string, std::string>> map, double cost,
                       NodeKind kind) {
  TransformDecl t;
  t.name = std::move(name);
  t.kind = "grouping";
  t.map = std::move(map);
  t.cost.amount = cost;
  t.node_kind = kind;
  return t;
}

EdgeDecl edge(std::string id, std::string from, std::string to, std::string transform,
              std::optional<std::string> reconstruction = std::nullopt) {
  return EdgeDecl{std::move(id), std::move(from), std::move(to), std::move(transform), std::move(reconstruction)};
}

Expectation expect(std::string metric, std::string relation, double value, double tolerance, std::string provenance,
                   std::string note = "") {
  Expectation x;
  x.metric = std::move(metric);
  x.relation = std::move(relation);
  x.value = value;
  x.tolerance = tolerance;
  x.provenance = std::move(provenance);
  x.note = std::move(note);
  return x;
}

Expectation compare(std::string metric, std::string relation, std::string other, std::string note) {
  Expectation x;
  x.metric = std::move(metric);
  x.relation = std::move(relation);
  x.other = std::move(other);
  x.provenance = "ordering";
  x.note = std::move(note);
  return x;
}

const std::string kDeclaredNote =
    "human-centric costs and distortions in this scenario are declared estimates; results are conditional on them";

// ------------------------------------------------------------ share prices

Fixture fig2_fixture() {
  Fixture f;
  f.name = "fig2_chain";
  f.description = "maximal entropy along the share-price chain for r = 1, 3, 10";
  for (std::uint64_t r : {1, 3, 10}) {
    std::string v = "r" + std::to_string(r);
    f.variants.emplace_back(v, fixture_fig2(r));
    const double rd = static_cast<double>(r);
    const double pairs = rd * (rd - 1.0);
    f.expected.push_back(expect(v + ":nodes.prices.entropy", "eq", 23040 * rd, 0, "reported", "720 x 32 bits per series"));
    f.expected.push_back(expect(v + ":nodes.minutes.entropy", "eq", 1920 * rd, 0, "reported", "60 x 32 bits per series"));
    f.expected.push_back(expect(v + ":nodes.plots.entropy", "eq", 420 * rd, 0, "reported", "60 x log2(128) per series"));
    f.expected.push_back(expect(v + ":nodes.features.entropy", "eq", 30 * rd, 0, "reported", "10 features of 8 values"));
    f.expected.push_back(expect(v + ":nodes.correlations.entropy", "eq", 15 * pairs, 0, "reported", "30 bits per pair"));
    f.expected.push_back(expect(v + ":nodes.colors.entropy", "eq", 1.16 * pairs, 0.005 * pairs, "reported",
                                "five colours per pair, rounded"));
    f.expected.push_back(
        expect(v + ":nodes.colors.entropy", "eq", std::log2(5.0) * pairs / 2, 1e-9, "computed", "log2(5) r(r-1)/2"));
    f.expected.push_back(expect(v + ":nodes.decision.entropy", "le", 2 * rd, 0, "reported", "below 2 bits per series"));
    f.expected.push_back(
        expect(v + ":nodes.decision.entropy", "eq", std::log2(3.0) * rd, 1e-9, "computed", "log2(3) per series"));
  }
  return f;
}

// ------------------------------------------------------- plot versus digits

Fixture fig4_fixture() {
  Fixture f;
  f.name = "fig4_plot_vs_binary";
  f.description = "time series plot versus binary digits view for dissemination";
  f.variants.emplace_back("plot", fixture_fig4(Fig4View::plot));
  f.variants.emplace_back("binary", fixture_fig4(Fig4View::binary));
  f.variants.emplace_back("presenter", fixture_fig4(Fig4View::presenter));

  const double features = std::log2(9.0);
  const double decision = std::log2(3.0);
  const double benefit = (420.0 - 420.0 - 0.0) + (420.0 - features - 1.83) + (features - decision - 0.5);
  const double printed = (420.0 + 0.0) / 1.0 + (features + 1.83) / 10.0 + (decision + 0.5) / 1.0;

  f.expected.push_back(expect("plot:nodes.Z_a1.entropy", "eq", 420, 0, "reported", "estimated data entropy"));
  f.expected.push_back(expect("plot:nodes.Z_a3.max_entropy", "eq", 3.17, 0.005, "reported", "two 3-valued features"));
  f.expected.push_back(expect("plot:edges.F_a2.benefit", "eq", 415, 1, "reported", "feature recognition step"));
  f.expected.push_back(compare("binary:edges.F_b2.distortion", "gt", "plot:edges.F_a2.distortion",
                               "digits are harder to read back than a plot"));
  f.expected.push_back(compare("plot:overall.cbr_mid", "gt", "binary:overall.cbr_mid", "plot is more cost-beneficial"));
  f.expected.push_back(compare("binary:overall.cost", "gt", "plot:overall.cost", "feature recognition on digits is slow"));
  f.expected.push_back(expect("plot:overall.benefit_lo", "eq", benefit, 1e-9, "computed", "sum of step benefits"));
  f.expected.push_back(expect("plot:overall.cbr_mid", "eq", benefit / 12.0, 1e-9, "computed", "benefit / 12"));
  f.expected.push_back(expect("plot:overall.cost_weighted_uncertainty", "eq", printed, 1e-9, "computed",
                              "sum of (H + D) / C, as-printed variant"));
  f.expected.push_back(expect("presenter:overall.benefit_hi", "eq", 0, 0, "reported", "the decision is already made"));
  f.expected.push_back(expect("presenter:overall.cbr_hi", "eq", 0, 0, "reported", "zero total CBR"));
  return f;
}

// -------------------------------------------------- overview and details

WorkflowSpec overview_variant(const std::string& who) {
  WorkflowSpec s;
  s.name = "overview_interaction/" + who;
  s.fixture_tag = "overview_interaction";
  s.cost_model = {CostKind::time, "s", CostMerge::sum};
  const std::vector<std::string> cells = {"c0", "c1", "c2", "c3", "c4", "c5", "c6", "c7"};
  s.alphabets.push_back(enumerated("field", cells, std::vector<double>{0.3, 0.2, 0.15, 0.1, 0.1, 0.05, 0.05, 0.05}));

  if (who == "detail") {
    s.alphabets.push_back(restricted("zoomed", "field", {"c0", "c1"}));
    s.alphabets.push_back(derived("verdict"));
    s.transforms.push_back(grouping("inspect", {{"c0", "done"}, {"c1", "done"}}, 2.0, NodeKind::I));
    s.graph.edges.push_back(edge("inspect", "zoomed", "verdict", "inspect", "exact_conditional"));
    s.notes.push_back("detail on demand: the zoomed view conditions the field on the selected cells");
    return s;
  }

  s.alphabets.push_back(derived("overview"));
  s.alphabets.push_back(derived("choice"));
  s.transforms.push_back(grouping("overview",
                                  {{"c0", "north"}, {"c1", "north"}, {"c2", "east"}, {"c3", "east"},
                                   {"c4", "south"}, {"c5", "south"}, {"c6", "west"}, {"c7", "west"}},
                                  1.0, NodeKind::M));
  const bool expert = who == "expert";
  s.transforms.push_back(grouping("explore", {{"north", "act"}, {"east", "act"}, {"south", "wait"}, {"west", "wait"}},
                                  expert ? 1.0 : 4.0, NodeKind::I));
  if (expert) {
    ReconstructionDecl prior;
    prior.name = "experience";
    prior.kind = "prior_weighted";
    prior.prior = {{"north", 0.6}, {"east", 0.2}, {"south", 0.12}, {"west", 0.08}};
    s.reconstructions.push_back(prior);
  }
  s.graph.edges.push_back(edge("overview", "field", "overview", "overview", "mutual_information"));
  s.graph.edges.push_back(edge("explore", "overview", "choice", "explore", expert ? "experience" : "uniform_preimage"));
  s.notes.push_back(expert ? "experienced viewer: prior knowledge of the field and a fast track to the detail view"
                           : "new viewer: no prior, step-by-step zoom");
  return s;
}

Fixture overview_fixture() {
  Fixture f;
  f.name = "overview_interaction";
  f.description = "overview first, details on demand, for a new and an experienced viewer";
  for (const char* who : {"novice", "expert", "detail"}) f.variants.emplace_back(who, overview_variant(who));

  const std::vector<double> p = {0.3, 0.2, 0.15, 0.1, 0.1, 0.05, 0.05, 0.05};
  const std::vector<double> q = {0.5, 0.25, 0.15, 0.1};
  auto h = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s -= x > 0 ? x * std::log2(x) : 0.0;
    return s;
  };
  f.expected.push_back(expect("novice:edges.overview.distortion", "eq", h(p) - h(q), 1e-9, "computed",
                              "machine step: H(input) - I(input; overview)"));
  f.expected.push_back(expect("novice:edges.overview.benefit", "eq", 0, 1e-12, "computed",
                              "a deterministic machine step has zero benefit"));
  f.expected.push_back(compare("expert:edges.explore.distortion", "lt", "novice:edges.explore.distortion",
                               "prior knowledge lowers the divergence"));
  f.expected.push_back(compare("expert:edges.explore.cost", "lt", "novice:edges.explore.cost",
                               "a fast track avoids step-by-step zooming"));
  f.expected.push_back(compare("expert:overall.cbr_mid", "gt", "novice:overall.cbr_mid", "expert pipeline wins"));
  f.expected.push_back(expect("detail:nodes.zoomed.entropy", "eq", h({0.6, 0.4}), 1e-9, "computed",
                              "field conditioned on cells c0 and c1"));
  return f;
}

// ------------------------------------------------------------------ sports

WorkflowSpec sports_variant(bool human_detection, bool glyphs) {
  WorkflowSpec s;
  s.name = std::string("sports_events/") + (human_detection ? "human" : "computer") + "_" + (glyphs ? "glyph" : "stats");
  s.fixture_tag = "sports_events";
  s.cost_model = {CostKind::time, "min", CostMerge::sum};
  s.alphabets.push_back(symbolic("video", 1e6, 1e7));
  s.alphabets.push_back(symbolic("events", 4000, 8000));
  s.alphabets.push_back(symbolic("stats_view", 300, 600));
  s.alphabets.push_back(symbolic("glyph_view", 2500, 4000));
  s.alphabets.push_back(symbolic("judgement", 8, 10));
  s.alphabets.push_back(derived("view"));
  s.transforms.push_back(declared("detect_computer", "events", 900000, 10, NodeKind::M));
  s.transforms.push_back(declared("detect_human", "events", 20000, 120, NodeKind::H));
  s.transforms.push_back(declared("stats", "stats_view", 3500, 1, NodeKind::V));
  s.transforms.push_back(declared("glyph", "glyph_view", 400, 1, NodeKind::V));
  s.transforms.push_back(declared("decide", "judgement", 50, 5, NodeKind::H));
  s.graph.edges.push_back(edge("F_a", "video", "events", human_detection ? "detect_human" : "detect_computer"));
  s.graph.edges.push_back(edge("F_b", "events", "view", glyphs ? "glyph" : "stats"));
  s.graph.edges.push_back(edge("F_c", "view", "judgement", "decide"));
  s.param_space = std::vector<Dimension>{
      {"F_a", "transform", {{"computer", std::string("detect_computer"), std::nullopt},
                            {"human", std::string("detect_human"), std::nullopt}}},
      {"F_b", "transform", {{"stats", std::string("stats"), std::nullopt},
                            {"glyph", std::string("glyph"), std::nullopt}}}};
  s.notes.push_back(kDeclaredNote);
  return s;
}

Fixture sports_fixture() {
  Fixture f;
  f.name = "sports_events";
  f.description = "match videos to events to a visualization to coaching decisions";
  f.variants.emplace_back("computer_stats", sports_variant(false, false));
  f.variants.emplace_back("computer_glyph", sports_variant(false, true));
  f.variants.emplace_back("human_stats", sports_variant(true, false));
  f.variants.emplace_back("human_glyph", sports_variant(true, true));
  f.expected.push_back(compare("computer_glyph:edges.F_a.distortion", "gt", "human_glyph:edges.F_a.distortion",
                               "event detection by computer is too inaccurate"));
  f.expected.push_back(compare("human_glyph:edges.F_b.distortion", "lt", "human_stats:edges.F_b.distortion",
                               "glyphs connect to episodic memory better than statistics"));
  f.expected.push_back(compare("human_glyph:overall.cbr_mid", "gt", "human_stats:overall.cbr_mid", "glyphs win"));
  f.expected.push_back(compare("human_glyph:overall.cbr_mid", "gt", "computer_glyph:overall.cbr_mid",
                               "human detection wins despite its cost"));
  f.expected.push_back(compare("human_glyph:overall.cbr_mid", "gt", "computer_stats:overall.cbr_mid",
                               "the implemented pipeline is the best of the four"));
  return f;
}

// ------------------------------------------------------------- readability

WorkflowSpec readability_variant(bool sentence_level) {
  WorkflowSpec s;
  s.name = std::string("readability/") + (sentence_level ? "sentence_level" : "document_score");
  s.fixture_tag = "readability";
  s.cost_model = {CostKind::time, "min", CostMerge::sum};
  s.alphabets.push_back(symbolic("text", 20000, 80000));
  s.alphabets.push_back(symbolic("feature_value", 6, 8));
  s.alphabets.push_back(product_of("features", "feature_value", 141));
  s.alphabets.push_back(symbolic("document_score", 5, 7));
  s.alphabets.push_back(symbolic("block_score", 3, 4));
  s.alphabets.push_back(product_of("block_scores", "block_score", 40));
  s.alphabets.push_back(derived("scores"));
  s.alphabets.push_back(derived("view"));
  s.alphabets.push_back(enumerated("verdict", {"readable", "revise"}));
  s.transforms.push_back(declared("extract", "features", 200, 10, NodeKind::M));
  if (sentence_level) {
    s.transforms.push_back(declared("aggregate", "block_scores", 60, 1, NodeKind::M));
    s.transforms.push_back(declared("show", "block_scores", 0, 1, NodeKind::V));
    s.transforms.push_back(declared("judge", "verdict", 0.2, 4, NodeKind::H));
  } else {
    s.transforms.push_back(declared("aggregate", "document_score", 600, 1, NodeKind::M));
    s.transforms.push_back(declared("show", "document_score", 0, 1, NodeKind::V));
    s.transforms.push_back(declared("judge", "verdict", 0.5, 2, NodeKind::H));
  }
  s.graph.edges.push_back(edge("extract", "text", "features", "extract"));
  s.graph.edges.push_back(edge("aggregate", "features", "scores", "aggregate"));
  s.graph.edges.push_back(edge("show", "scores", "view", "show"));
  s.graph.edges.push_back(edge("judge", "view", "verdict", "judge"));
  s.notes.push_back(kDeclaredNote);
  return s;
}

Fixture readability_fixture() {
  Fixture f;
  f.name = "readability";
  f.description = "document readability from 141 text features, scored per document or per sentence block";
  f.variants.emplace_back("document_score", readability_variant(false));
  f.variants.emplace_back("sentence_level", readability_variant(true));
  f.expected.push_back(expect("document_score:nodes.features.max_entropy", "eq", 141 * 8, 0, "reported",
                              "141 text feature variables"));
  f.expected.push_back(compare("document_score:edges.aggregate.pdr", "gt", "document_score:edges.aggregate.acr",
                               "over-aggregation: distortion outweighs compression"));
  f.expected.push_back(compare("sentence_level:edges.aggregate.pdr", "lt", "sentence_level:edges.aggregate.acr",
                               "block-level detail keeps distortion below compression"));
  f.expected.push_back(compare("sentence_level:edges.aggregate.cbr", "gt", "document_score:edges.aggregate.cbr",
                               "the aggregation step is more cost-beneficial at sentence level"));
  return f;
}

// ----------------------------------------------------------- decision tree

WorkflowSpec decision_tree_variant(bool visual) {
  WorkflowSpec s;
  s.name = std::string("decision_tree/") + (visual ? "visual" : "c45");
  s.fixture_tag = "decision_tree";
  s.cost_model = {CostKind::time, "h", CostMerge::sum};
  s.alphabets.push_back(symbolic("videos", 50000, 200000));
  s.alphabets.push_back(symbolic("series", 200, 400));
  s.alphabets.push_back(product_of("facial_series", "series", 14));
  s.alphabets.push_back(symbolic("parameter", 6, 8));
  s.alphabets.push_back(product_of("series_parameters", "parameter", 23));
  s.alphabets.push_back(product_of("variables", "series_parameters", 14));
  s.alphabets.push_back(symbolic("tree", 20, 40));
  s.transforms.push_back(declared("F_a", "facial_series", 500, 2, NodeKind::M));
  s.transforms.push_back(declared("F_b", "variables", 300, 1, NodeKind::M));
  s.graph.edges.push_back(edge("F_a", "videos", "facial_series", "F_a"));
  s.graph.edges.push_back(edge("F_b", "facial_series", "variables", "F_b"));
  if (visual) {
    s.alphabets.push_back(derived("axes"));
    s.transforms.push_back(declared("F_c1", "variables", 100, 1, NodeKind::V));
    s.transforms.push_back(declared("F_d1", "tree", 5, 6, NodeKind::H));
    s.graph.edges.push_back(edge("F_c1", "variables", "axes", "F_c1"));
    s.graph.edges.push_back(edge("F_d1", "axes", "tree", "F_d1"));
  } else {
    s.transforms.push_back(declared("F_c2", "tree", 12, 0.1, NodeKind::M));
    s.graph.edges.push_back(edge("F_c2", "variables", "tree", "F_c2"));
  }
  s.notes.push_back(kDeclaredNote);
  return s;
}

Fixture decision_tree_fixture() {
  Fixture f;
  f.name = "decision_tree";
  f.description = "expression classifier built from a parallel coordinates plot or by C4.5";
  f.variants.emplace_back("visual", decision_tree_variant(true));
  f.variants.emplace_back("c45", decision_tree_variant(false));
  f.expected.push_back(expect("visual:nodes.variables.max_entropy", "eq", 322 * 8, 0, "reported",
                              "14 facial features x 23 parameters = 322 variables"));
  f.expected.push_back(compare("c45:overall.cost", "lt", "visual:overall.cost", "C4.5 takes far less time"));
  f.expected.push_back(compare("visual:edges.F_d1.distortion", "lt", "c45:edges.F_c2.distortion",
                               "the hand-built tree is slightly more accurate"));
  return f;
}

}  // namespace

WorkflowSpec fixture_fig2(std::uint64_t r) {
  if (r == 0) throw Error(Errc::invariant_violation, "r must be at least 1");
  WorkflowSpec s;
  s.name = "fig2_chain/r" + std::to_string(r);
  s.fixture_tag = "fig2_chain";
  s.entropy_mode = EntropyMode::maximal;
  const std::uint64_t pairs = r * (r - 1) / 2;

  s.alphabets.push_back(symbolic("price", 32, 32));
  s.alphabets.push_back(product_of("prices", "price", 720 * r));
  s.alphabets.push_back(derived("minutes"));
  s.alphabets.push_back(derived("plots"));
  s.alphabets.push_back(symbolic("feature", 3, 3));
  s.alphabets.push_back(product_of("features", "feature", 10 * r));
  s.alphabets.push_back(symbolic("index", 30, 30));
  if (pairs > 0) {
    s.alphabets.push_back(product_of("correlations", "index", pairs));
    s.alphabets.push_back(derived("colors"));
  } else {
    s.alphabets.push_back(symbolic("correlations", 0, 0));
    s.alphabets.push_back(symbolic("colors", 0, 0));
  }
  s.alphabets.push_back(enumerated("choice", {"buy", "sell", "hold"}));
  s.alphabets.push_back(product_of("decision", "choice", r));

  s.transforms.push_back(aggregator("average", 12, std::nullopt, "mean", NodeKind::M));
  s.transforms.push_back(aggregator("line_plot", 1, 128, "pixel", NodeKind::V));
  s.transforms.push_back(declared("observe", "features", 0, 1, NodeKind::H));
  s.transforms.push_back(declared("correlate", "correlations", 0, 1, NodeKind::M));
  if (pairs > 0) {
    s.transforms.push_back(aggregator("colour_map", 1, 5, "colour", NodeKind::V));
  } else {
    s.transforms.push_back(declared("colour_map", "colors", 0, 1, NodeKind::V));
  }
  s.transforms.push_back(declared("decide", "decision", 0, 1, NodeKind::H));

  s.graph.edges.push_back(edge("average", "prices", "minutes", "average"));
  s.graph.edges.push_back(edge("plot", "minutes", "plots", "line_plot"));
  s.graph.edges.push_back(edge("observe", "plots", "features", "observe"));
  s.graph.edges.push_back(edge("correlate", "minutes", "correlations", "correlate"));
  s.graph.edges.push_back(edge("colour", "correlations", "colors", "colour_map"));
  s.graph.edges.push_back(edge("decide_features", "features", "decision", "decide"));
  s.graph.edges.push_back(edge("decide_colors", "colors", "decision", "decide"));
  s.graph.decisional = "decision";
  s.notes.push_back("maximal entropies only; no distortions are declared for this chain");
  return s;
}

WorkflowSpec fixture_fig4(Fig4View view) {
  WorkflowSpec s;
  s.fixture_tag = "fig4_plot_vs_binary";
  s.cost_model = {CostKind::abstract, "unit", CostMerge::sum};
  const std::vector<std::string> features = {"stable/rise",   "stable/fall",   "stable/flat",
                                             "uneven/rise",   "uneven/fall",   "uneven/flat",
                                             "volatile/rise", "volatile/fall", "volatile/flat"};
  const std::vector<std::string> choices = {"buy", "sell", "hold"};

  if (view == Fig4View::presenter) {
    s.name = "fig4_plot_vs_binary/presenter";
    s.alphabets.push_back(symbolic("Z_p1", 0, 1920));
    s.alphabets.push_back(symbolic("Z_p2", 0, 420));
    std::vector<double> known(features.size(), 0.0);
    known[0] = 1.0;
    s.alphabets.push_back(enumerated("Z_p3", features, known));
    s.alphabets.push_back(enumerated("Z_p4", {"hold"}));
    s.transforms.push_back(declared("plot", "Z_p2", 0, 1, NodeKind::V));
    s.transforms.push_back(declared("point_out", "Z_p3", 0, 1, NodeKind::H));
    s.transforms.push_back(declared("decide", "Z_p4", 0, 1, NodeKind::H));
    s.graph.edges.push_back(edge("F_p1", "Z_p1", "Z_p2", "plot"));
    s.graph.edges.push_back(edge("F_p2", "Z_p2", "Z_p3", "point_out"));
    s.graph.edges.push_back(edge("F_p3", "Z_p3", "Z_p4", "decide"));
    s.notes.push_back("presenter's perspective: the decision to hold is already made, every alphabet is certain");
    return s;
  }

  const bool plot = view == Fig4View::plot;
  const std::string p = plot ? "Z_a" : "Z_b";
  const std::string f = plot ? "F_a" : "F_b";
  s.name = std::string("fig4_plot_vs_binary/") + (plot ? "plot" : "binary");
  s.alphabets.push_back(symbolic(p + "1", 420, 1920));
  s.alphabets.push_back(symbolic(p + "2", 420, plot ? 420 : 1920));
  s.alphabets.push_back(enumerated(p + "3", features));
  s.alphabets.push_back(enumerated(p + "4", choices));
  s.transforms.push_back(declared(plot ? "time_series_plot" : "binary_digits", p + "2", 0, 1, NodeKind::V));
  s.transforms.push_back(declared("recognize_features", p + "3", plot ? 1.83 : 50.0, plot ? 10 : 100, NodeKind::H));
  s.transforms.push_back(declared("decide", p + "4", 0.5, 1, NodeKind::H));
  s.graph.edges.push_back(edge(f + "1", p + "1", p + "2", plot ? "time_series_plot" : "binary_digits"));
  s.graph.edges.push_back(edge(f + "2", p + "2", p + "3", "recognize_features"));
  s.graph.edges.push_back(edge(f + "3", p + "3", p + "4", "decide"));
  s.notes.push_back(kDeclaredNote);
  return s;
}

std::vector<std::string> fixture_names() {
  return {"fig2_chain", "fig4_plot_vs_binary", "overview_interaction", "sports_events", "readability", "decision_tree"};
}

Fixture fixture(std::string_view name) {
  if (name == "fig2_chain") return fig2_fixture();
  if (name == "fig4_plot_vs_binary") return fig4_fixture();
  if (name == "overview_interaction") return overview_fixture();
  if (name == "sports_events") return sports_fixture();
  if (name == "readability") return readability_fixture();
  if (name == "decision_tree") return decision_tree_fixture();
  throw Error(Errc::dangling_reference, "fixture '" + std::string(name) + "'");
}

}  // namespace cbr
