// Apache License, Version 2.0, refer to LICENSE.txt

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from tests/oracles.hpp and
// tests/scenarios.hpp, never from the library under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cbr/error.hpp"
#include "cbr/fixtures.hpp"
#include "cbr/metrics.hpp"
#include "cbr/optimize.hpp"
#include "cbr/reconstruction.hpp"
#include "cbr/specio.hpp"
#include "cbr/transform.hpp"
#include "cbr/workflow.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"
#include "subprocess.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = CBR_SOURCE_DIR;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool close_rel(double a, double b, double rel = 1e-9) {
  double diff = std::abs(a - b);
  return diff <= 1e-12 || diff <= rel * std::max(std::abs(a), std::abs(b));
}

std::vector<double> values(const cbr::Alphabet& a) {
  auto v = a.pmf().values();
  return {v.begin(), v.end()};
}

cbr::Alphabet enumerated(const std::vector<double>& p, const std::string& name = "X") {
  return cbr::Alphabet::enumerated(name, oracle::ids(p.size()), p);
}

cbr::Transform grouping(const std::vector<std::size_t>& image, const std::string& name = "g") {
  std::vector<std::pair<std::string, std::string>> assignment;
  for (std::size_t i = 0; i < image.size(); ++i) {
    assignment.emplace_back("x" + std::to_string(i), "y" + std::to_string(image[i]));
  }
  return cbr::Transform(name, cbr::Grouping::from_assignment(std::move(assignment)), scenario::secs(1));
}

std::vector<std::string> slurp_dir(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(kRoot / dir)) {
    if (e.path().extension() == ".json") paths.push_back(e.path().string());
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

// 1. Share-price chain alphabets for r in {1, 3, 10}.
void fig2_alphabets(Outcome& o) {
  for (std::uint64_t r : {1u, 3u, 10u}) {
    auto start = Clock::now();
    auto a = cbr::analyze(cbr::fixture_fig2(r));
    double rr = static_cast<double>(r);
    auto max_h = [&](const std::string& node) { return cbr::metric(a, "nodes." + node + ".max_entropy"); };
    std::string at = " at r=" + std::to_string(r);
    o.require(max_h("prices") == 23040 * rr, "prices" + at);
    o.require(max_h("minutes") == 1920 * rr, "minutes" + at);
    o.require(max_h("plots") == 420 * rr, "plots" + at);
    o.require(max_h("features") == 30 * rr, "features" + at);
    o.require(close_rel(max_h("correlations"), 15 * rr * (rr - 1)), "correlations" + at);
    double pairs = rr * (rr - 1);
    o.require(std::abs(max_h("colors") - 1.16 * pairs) <= 0.005 * pairs + 1e-12, "colors" + at);
    o.require(max_h("decision") <= 2 * rr, "decision" + at);
    double t = seconds_since(start);
    o.require(t < 1.0, "runtime" + at);
    o.detail << "r=" << r << " colors " << max_h("colors") << " decision " << max_h("decision") << " in " << t
             << "s; ";
  }
}

// 2. Grouping identity on random pmfs of up to 2^12 letters.
void grouping_identity(Outcome& o) {
  std::mt19937_64 rng(2);
  auto start = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng() % 4096;
    std::size_t k = 1 + rng() % n;
    auto p = oracle::random_pmf(rng, n, trial % 3 == 0);
    auto image = oracle::random_onto(rng, n, k);
    double residual = cbr::grouping_check(enumerated(p), grouping(image));

    // The same identity evaluated by the oracle.
    auto q = oracle::pushforward(p, image, k);
    std::vector<std::vector<double>> groups(k);
    for (std::size_t i = 0; i < n; ++i) groups[image[i]].push_back(p[i]);
    double within = 0.0;
    for (std::size_t y = 0; y < k; ++y) {
      if (q[y] == 0.0) continue;
      for (auto& x : groups[y]) x /= q[y];
      within += q[y] * oracle::entropy(groups[y]);
    }
    double reference = std::abs(oracle::entropy(p) - oracle::entropy(q) - within);
    worst = std::max({worst, residual, reference});
  }
  double t = seconds_since(start);
  o.require(worst <= 1e-9, "residual above 1e-9");
  o.require(t < 10.0, "runtime");
  o.detail << "1000 pairs, worst residual " << worst << ", " << t << "s";
}

// Output index of each input letter, computed from the transform's own
// tables. Empty when the transform is not a grouping or quantizer.
std::vector<std::size_t> oracle_image(const cbr::Transform& t, const cbr::Alphabet& in, std::size_t& outputs) {
  std::vector<std::size_t> image;
  if (const auto* g = t.as<cbr::Grouping>()) {
    std::map<std::string, std::size_t> out;
    for (std::size_t k = 0; k < g->output_letters.size(); ++k) out[g->output_letters[k]] = k;
    std::map<std::string, std::string> to;
    for (const auto& [x, y] : g->assignment) to[x] = y;
    for (const auto& l : in.letters()) image.push_back(out.at(to.at(l.id)));
    outputs = g->output_letters.size();
  } else if (const auto* q = t.as<cbr::Quantizer>()) {
    for (const auto& l : in.letters()) {
      double v = std::stod(l.id);
      std::size_t b = 0;
      while (b + 1 < q->bins() && v >= q->edges[b + 1]) ++b;
      image.push_back(b);
    }
    outputs = q->bins();
  }
  return image;
}

std::vector<double> oracle_impression(const cbr::Reconstruction& g, const std::vector<double>& p,
                                      const std::vector<std::size_t>& image, std::size_t outputs,
                                      const cbr::Alphabet& in) {
  std::vector<double> w(p.size(), 1.0);
  if (g.as<cbr::ExactConditional>()) w = p;
  if (const auto* prior = g.as<cbr::PriorWeighted>()) {
    std::fill(w.begin(), w.end(), 0.0);
    for (const auto& [id, mass] : prior->prior) w[*in.find(id)] = mass;
  }
  auto q = oracle::pushforward(p, image, outputs);
  auto norm = oracle::pushforward(w, image, outputs);
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[image[i]] > 0.0) out[i] = q[image[i]] * w[i] / norm[image[i]];
  }
  return out;
}

// 3. Entropy, mutual information and divergence on every enumerated
// alphabet and step of the shipped fixtures and specs.
void oracle_equivalence(Outcome& o) {
  std::vector<std::pair<std::string, cbr::WorkflowSpec>> specs;
  for (const auto& name : cbr::fixture_names()) {
    for (auto& [variant, spec] : cbr::fixture(name).variants) specs.emplace_back(name + ":" + variant, spec);
  }
  for (const auto& path : slurp_dir("specs")) {
    specs.emplace_back(fs::path(path).filename().string(), cbr::parse_spec(subprocess::slurp(path)));
  }
  std::size_t alphabets = 0, steps = 0, divergences = 0;
  for (const auto& [label, spec] : specs) {
    auto g = cbr::build_graph(spec);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      const auto& a = g.alphabet(v);
      if (!a.is_enumerated()) continue;
      ++alphabets;
      o.require(close_rel(cbr::entropy(a), oracle::entropy(values(a))), label + " entropy of " + a.name());
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& in = g.alphabet(g.source_of(e));
      const auto& edge = g.edge(e);
      if (!in.is_enumerated()) continue;
      auto p = values(in);
      std::string where = label + " step " + edge.id;
      std::size_t outputs = 0;
      auto image = oracle_image(edge.transform, in, outputs);
      std::vector<std::vector<double>> rows;
      if (!image.empty()) {
        rows = oracle::deterministic_rows(image, outputs);
      } else if (const auto* c = edge.transform.as<cbr::Channel>()) {
        rows.resize(p.size());
        for (const auto& [id, row] : c->rows) rows[*in.find(id)] = row;
      } else {
        continue;
      }
      ++steps;
      o.require(close_rel(cbr::mutual_information(edge.transform, in), oracle::mutual_information(p, rows)),
                where + " mutual information");
      std::vector<double> q(rows.front().size(), 0.0);
      for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t k = 0; k < q.size(); ++k) q[k] += p[i] * rows[i][k];
      }
      o.require(close_rel(cbr::entropy(g.alphabet(g.target_of(e))), oracle::entropy(q)), where + " output entropy");
      if (image.empty() || !edge.reconstruction) continue;
      const auto& r = *edge.reconstruction;
      if (!(r.as<cbr::ExactConditional>() || r.as<cbr::UniformPreimage>() || r.as<cbr::PriorWeighted>())) continue;
      ++divergences;
      // D(impression || input); the impression may put mass off the input's support.
      double expected = oracle::kl(oracle_impression(r, p, image, outputs, in), p);
      if (std::isnan(expected)) {
        bool raised = false;
        try {
          cbr::distortion_bits(r, edge.transform, in);
        } catch (const cbr::Error& err) {
          raised = err.code() == cbr::Errc::divergence_undefined;
        }
        o.require(raised, where + " undefined divergence not reported");
        continue;
      }
      o.require(close_rel(cbr::distortion_bits(r, edge.transform, in), expected), where + " divergence");
    }
  }
  o.require(alphabets > 0 && steps > 0 && divergences > 0, "nothing enumerated to compare");
  o.detail << alphabets << " alphabets, " << steps << " steps, " << divergences << " divergences across "
           << specs.size() << " workflows";
}

// 4. Divergence: non-negative, zero exactly on equal pmfs, asymmetric,
// undefined off the support.
void divergence_properties(Outcome& o) {
  std::mt19937_64 rng(4);
  double smallest_gap = INFINITY;
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t n = 2 + rng() % 30;
    auto p = cbr::Pmf::from(oracle::random_pmf(rng, n, true));
    auto q = cbr::Pmf::from(oracle::random_pmf(rng, n));
    double d = cbr::kl_divergence(p, q);
    o.require(d >= 0.0, "negative divergence");
    o.require(cbr::kl_divergence(p, p) == 0.0, "D(p||p) != 0");
    if (p != q) {
      o.require(d > 0.0, "zero divergence between different pmfs");
      smallest_gap = std::min(smallest_gap, d);
    }
  }
  auto half = cbr::Pmf::from({0.5, 0.5});
  auto skew = cbr::Pmf::from({0.25, 0.75});
  double forward = cbr::kl_divergence(half, skew);
  double backward = cbr::kl_divergence(skew, half);
  o.require(close_rel(forward, oracle::kl({0.5, 0.5}, {0.25, 0.75})), "witness forward");
  o.require(close_rel(backward, oracle::kl({0.25, 0.75}, {0.5, 0.5})), "witness backward");
  o.require(std::abs(forward - backward) > 1e-3, "witness symmetric");
  bool raised = false;
  try {
    cbr::kl_divergence(cbr::Pmf::from({0.5, 0.5}), cbr::Pmf::from({1.0, 0.0}));
  } catch (const cbr::Error& e) {
    raised = e.code() == cbr::Errc::divergence_undefined;
  }
  o.require(raised, "support violation not reported");
  o.detail << "10000 pairs, smallest positive " << smallest_gap << "; D(u||s) " << forward << " vs D(s||u) "
           << backward;
}

// 5. Deterministic steps never add entropy; a declared human step may.
void data_processing(Outcome& o) {
  std::mt19937_64 rng(5);
  double worst = -INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 2 + rng() % 200;
    auto x = enumerated(oracle::random_pmf(rng, n, trial % 2 == 0), "Z0");
    std::vector<double> h{cbr::entropy(x)};
    for (int s = 1; s <= 3; ++s) {
      std::size_t k = 1 + rng() % x.size();
      auto image = oracle::random_onto(rng, x.size(), k);
      std::vector<std::pair<std::string, std::string>> assignment;
      for (std::size_t i = 0; i < x.size(); ++i) {
        assignment.emplace_back(x.letters()[i].id, "x" + std::to_string(image[i]));
      }
      cbr::Transform t("s" + std::to_string(s), cbr::Grouping::from_assignment(std::move(assignment)),
                       scenario::secs(1));
      x = cbr::pushforward(t, x);
      h.push_back(cbr::entropy(x));
      worst = std::max(worst, h[s] - h[s - 1]);
    }
  }
  o.require(worst <= 1e-9, "entropy increased through a deterministic step");

  cbr::WorkflowDefinition def;
  auto low = cbr::Alphabet::symbolic("S", 1, 1);
  auto high = cbr::Alphabet::symbolic("T", 6, 6);
  def.nodes = {{"S", low, std::nullopt}, {"T", high, std::nullopt}};
  def.edges = {scenario::declared_edge("guess", "S", "T", high, 0.5, 2, cbr::NodeKind::H)};
  cbr::WorkflowGraph g(def);
  auto m = cbr::score_edges(g, cbr::EntropyMode::actual).front();
  o.require(m.h_out > m.h_in, "human counter-example lost its entropy increase");
  o.require(m.benefit_bits && *m.benefit_bits < 0.0, "human counter-example benefit not negative");
  o.detail << "1000 chains, largest step change " << worst << "; human step " << m.h_in << " -> " << m.h_out
           << " bits";
}

// 6. With the mutual-information inverse, a deterministic step's benefit
// is I - H(out), which is zero.
void machine_benefit(Outcome& o) {
  std::mt19937_64 rng(6);
  double worst = 0.0;
  std::size_t exact_zero = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 2 + rng() % 300;
    std::size_t k = 1 + rng() % n;
    auto p = oracle::random_pmf(rng, n, trial % 2 == 0);
    auto image = oracle::random_onto(rng, n, k);
    auto in = enumerated(p);
    auto t = grouping(image);
    auto out = cbr::pushforward(t, in);
    auto m = cbr::score_step(t, cbr::MutualInformationShortcut{}, in, out, cbr::EntropyMode::actual);
    auto q = oracle::pushforward(p, image, k);
    double expected = oracle::mutual_information(p, oracle::deterministic_rows(image, k)) - oracle::entropy(q);
    o.require(m.benefit_bits.has_value() && m.machine_cbr.has_value(), "missing measures");
    if (!m.benefit_bits || !m.machine_cbr) return;
    worst = std::max({worst, std::abs(*m.benefit_bits - expected), std::abs(*m.benefit_bits),
                      std::abs(*m.machine_cbr)});
    if (*m.machine_cbr == 0.0) ++exact_zero;
  }
  o.require(worst <= 1e-9, "benefit differs from I - H(out)");
  o.detail << "500 steps, worst deviation " << worst << ", " << exact_zero << " with machine CBR exactly 0";
}

// 7. Plot versus binary view, on the declared estimates.
void fig4_comparison(Outcome& o) {
  auto plot = cbr::analyze(cbr::fixture_fig4(cbr::Fig4View::plot));
  auto binary = cbr::analyze(cbr::fixture_fig4(cbr::Fig4View::binary));
  auto presenter = cbr::analyze(cbr::fixture_fig4(cbr::Fig4View::presenter));
  double step = cbr::metric(plot, "edges.F_a2.benefit");
  double plot_cbr = cbr::metric(plot, "overall.cbr_mid");
  double binary_cbr = cbr::metric(binary, "overall.cbr_mid");
  double lo = cbr::metric(presenter, "overall.benefit_lo");
  double hi = cbr::metric(presenter, "overall.benefit_hi");
  o.require(std::abs(step - 415) <= 1.0, "plot reading benefit");
  o.require(plot_cbr > binary_cbr, "plot not ahead of binary");
  o.require(lo == 0.0 && hi == 0.0, "presenter benefit not zero");
  o.detail << "reading benefit " << step << ", CBR plot " << plot_cbr << " vs binary " << binary_cbr
           << ", presenter [" << lo << ", " << hi << "] (human values are declared estimates)";
}

// 8. Exhaustive search matches an independent sweep; greedy matches it on
// one-dimensional spaces; restarts escape the two-peak trap.
void optimizer(Outcome& o) {
  std::mt19937_64 rng(8);
  std::vector<std::pair<std::string, scenario::Problem>> problems{{"quantizer", scenario::quantizer_sweep()},
                                                                  {"two-peak", scenario::two_peak()}};
  for (int i = 0; i < 200; ++i) problems.emplace_back("chain " + std::to_string(i), scenario::random_chain(rng, 10000));

  std::size_t compared = 0, budgeted = 0, single = 0;
  for (const auto& [label, p] : problems) {
    if (p.space.combinations() > 10000) continue;
    auto sweep = scenario::brute_force(p);
    auto r = cbr::exhaustive_search(p.base, p.space, p.options);
    ++compared;
    o.require(r.best_index == sweep.argmax, label + " argmax");
    o.require(close_rel(r.best_cbr.mid(), sweep.best.objective), label + " objective");
    o.require(r.evaluations == sweep.evaluated, label + " evaluation count");

    // Budget at the median reference cost.
    std::vector<double> costs;
    cbr::Assignment a(p.space.dimensions.size(), 0);
    std::function<void(std::size_t)> walk = [&](std::size_t d) {
      if (d == a.size()) {
        costs.push_back(p.reference(a).cost);
        return;
      }
      for (a[d] = 0; a[d] < p.space.dimensions[d].candidates.size(); ++a[d]) walk(d + 1);
    };
    walk(0);
    std::nth_element(costs.begin(), costs.begin() + costs.size() / 2, costs.end());
    double budget = costs[costs.size() / 2];
    auto limited = p.options;
    limited.budget = scenario::secs(budget);
    auto bounded_sweep = scenario::brute_force(p, budget);
    auto bounded = cbr::exhaustive_search(p.base, p.space, limited);
    ++budgeted;
    o.require(bounded.best_index == bounded_sweep.argmax, label + " budgeted argmax");

    if (p.space.dimensions.size() == 1) {
      ++single;
      auto greedy = cbr::greedy_search(p.base, p.space, 1, p.options);
      o.require(greedy.best_index == r.best_index, label + " greedy on one dimension");
    }
  }

  // Spaces shipped with specs, against a plain sweep of evaluate().
  std::size_t shipped = 0;
  for (const auto& path : slurp_dir("specs")) {
    auto spec = cbr::parse_spec(subprocess::slurp(path));
    if (!spec.param_space) continue;
    auto base = cbr::build_definition(spec);
    auto space = cbr::build_param_space(spec);
    cbr::SearchOptions options;
    options.merge = spec.cost_model.merge;
    std::optional<cbr::Evaluation> best;
    cbr::Assignment a(space.dimensions.size(), 0);
    std::function<void(std::size_t)> walk = [&](std::size_t d) {
      if (d == a.size()) {
        auto e = cbr::evaluate(base, space, a, options);
        if (!best || cbr::better(e, *best)) best = e;
        return;
      }
      for (a[d] = 0; a[d] < space.dimensions[d].candidates.size(); ++a[d]) walk(d + 1);
    };
    walk(0);
    auto r = cbr::exhaustive_search(base, space, options);
    ++shipped;
    o.require(best && r.best_index == best->assignment, fs::path(path).filename().string() + " argmax");
  }

  auto peak = scenario::two_peak();
  auto once = cbr::greedy_search(peak.base, peak.space, 1, peak.options);
  auto five = cbr::greedy_search(peak.base, peak.space, 5, peak.options);
  o.require(five.best_cbr.mid() > once.best_cbr.mid(), "restarts did not help on two-peak");
  o.require(close_rel(five.best_cbr.mid(), 10.0), "five restarts missed the global optimum");
  o.detail << compared << " generated spaces (" << budgeted << " also budgeted, " << single
           << " one-dimensional), " << shipped << " shipped; two-peak greedy " << once.best_cbr.mid() << " -> "
           << five.best_cbr.mid();
}

// 9. Command-line exit codes and lossless spec and fixture round trips.
void cli_contract(Outcome& o) {
  auto spec = [](const std::string& name) { return subprocess::quote((kRoot / "specs" / name).string()); };
  auto missing = subprocess::quote((subprocess::scratch() / "missing.json").string());
  struct Case {
    std::string args;
    int status;
  };
  std::vector<Case> cases{
      {"--help", 0},
      {"validate " + spec("minimal.json"), 0},
      {"analyze " + spec("fig4_plot.json") + " --json", 0},
      {"optimize " + spec("quantizer_sweep.json"), 0},
      {"optimize " + spec("sports_events.json") + " --greedy --restarts 3", 0},
      {"report " + spec("fig4_plot.json") + " --format dot", 0},
      {"fixtures", 0},
      {"validate " + missing, 1},
      {"analyze " + missing, 1},
      {"optimize " + spec("quantizer_sweep.json") + " --budget 0.5", 1},
      {"optimize " + spec("minimal.json"), 1},
      {"", 2},
      {"frobnicate", 2},
      {"analyze " + spec("minimal.json") + " --mode median", 2},
      {"optimize " + spec("quantizer_sweep.json") + " --restarts 3", 2},
      {"report " + spec("minimal.json"), 2},
      {"fixtures --name nope", 2},
  };
  for (const auto& c : cases) {
    auto r = subprocess::cbr(c.args);
    o.require(r.status == c.status, "cbr " + c.args + " exited " + std::to_string(r.status));
  }
  fs::remove_all(subprocess::scratch());

  std::size_t trips = 0;
  for (const auto& path : slurp_dir("specs")) {
    auto text = subprocess::slurp(path);
    auto parsed = cbr::parse_spec(text);
    o.require(cbr::parse_spec(cbr::emit_spec(parsed)) == parsed, path + " round trip");
    ++trips;
  }
  for (const auto& path : slurp_dir("fixtures")) {
    auto text = subprocess::slurp(path);
    auto parsed = cbr::parse_fixture(text);
    o.require(cbr::parse_fixture(cbr::emit_fixture(parsed)) == parsed, path + " round trip");
    o.require(cbr::emit_fixture(parsed) == text, path + " canonical form");
    ++trips;
    for (const auto& [variant, s] : parsed.variants) {
      o.require(cbr::parse_spec(cbr::emit_spec(s)) == s, path + " variant " + variant);
      ++trips;
    }
  }
  o.detail << cases.size() << " invocations, " << trips << " round trips";
}

struct Criterion {
  int number;
  std::string title;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "fig2 alphabet sizes", fig2_alphabets},
      {2, "grouping identity", grouping_identity},
      {3, "oracle equivalence", oracle_equivalence},
      {4, "divergence properties", divergence_properties},
      {5, "data processing", data_processing},
      {6, "machine benefit", machine_benefit},
      {7, "plot vs binary", fig4_comparison},
      {8, "optimizer", optimizer},
      {9, "cli contract", cli_contract},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Outcome o;
    auto start = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    all = all && o.pass;
    std::printf("%s %d %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", c.number, c.title.c_str(), seconds_since(start),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
