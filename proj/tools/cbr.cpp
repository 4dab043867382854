// Apache License, Version 2.0, refer to LICENSE.txt

// cbr: validate, analyze and optimize workflow spec files, and run the
// built-in fixtures.
//
// Exit status: 0 success, 1 invalid spec or failed analysis, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cbr/error.hpp"
#include "cbr/fixtures.hpp"
#include "cbr/optimize.hpp"
#include "cbr/specio.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kFailure = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cbr::Error(cbr::Errc::parse_error, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

cbr::EntropyMode mode_of(const std::string& text, const cbr::WorkflowSpec& spec) {
  if (text.empty()) return spec.entropy_mode;
  return *cbr::parse_entropy_mode(text);
}

int run_validate(const std::string& file) {
  auto spec = cbr::parse_spec(read_file(file));
  auto g = cbr::build_graph(spec);
  std::cout << "valid: " << (spec.name.empty() ? file : spec.name) << " (" << g.node_count() << " alphabets, "
            << g.edge_count() << " steps, decisional " << g.node(g.decisional()).name << ")\n";
  return 0;
}

int run_analyze(const std::string& file, const std::string& mode, bool json) {
  auto spec = cbr::parse_spec(read_file(file));
  auto analysis = cbr::analyze(spec, mode_of(mode, spec));
  std::cout << (json ? cbr::report_json(analysis) : cbr::report_table(analysis));
  return 0;
}

struct OptimizeFlags {
  std::optional<double> budget;
  bool greedy = false;
  std::size_t restarts = 1;
  std::string objective = "midpoint";
  bool json = false;
  bool csv = false;
};

cbr::OptimizeResult optimize(const cbr::WorkflowSpec& spec, const OptimizeFlags& flags) {
  cbr::SearchOptions options;
  options.merge = spec.cost_model.merge;
  options.mode = spec.entropy_mode;
  options.objective = flags.objective == "lower" ? cbr::Objective::lower_bound : cbr::Objective::midpoint;
  options.seed = cbr::seed_from_environment();
  if (flags.budget) {
    options.budget = cbr::CostRecord::make(spec.cost_model.kind, *flags.budget, spec.cost_model.unit);
  }
  auto base = cbr::build_definition(spec);
  auto space = cbr::build_param_space(spec);
  return flags.greedy ? cbr::greedy_search(base, space, flags.restarts, options)
                      : cbr::exhaustive_search(base, space, options);
}

int run_optimize(const std::string& file, const OptimizeFlags& flags) {
  auto spec = cbr::parse_spec(read_file(file));
  auto result = optimize(spec, flags);
  if (flags.csv) {
    std::cout << cbr::frontier_csv(result.frontier);
  } else {
    std::cout << (flags.json ? cbr::optimize_json(result) : cbr::optimize_table(result));
  }
  return 0;
}

int run_report(const std::string& file, const std::string& format, const std::string& mode) {
  auto spec = cbr::parse_spec(read_file(file));
  if (format == "dot") {
    std::cout << cbr::to_dot(cbr::build_graph(spec), mode_of(mode, spec));
  } else {
    std::cout << cbr::frontier_csv(optimize(spec, {}).frontier);
  }
  return 0;
}

int run_fixtures(const std::string& name, const std::string& emit) {
  std::vector<std::string> names = name.empty() ? cbr::fixture_names() : std::vector<std::string>{name};
  bool all = true;
  for (const auto& n : names) {
    auto f = cbr::fixture(n);
    if (!emit.empty()) {
      std::filesystem::create_directories(emit);
      std::ofstream out(std::filesystem::path(emit) / (n + ".json"));
      out << cbr::emit_fixture(f);
      if (!out) throw cbr::Error(cbr::Errc::parse_error, "cannot write fixture '" + n + "' to " + emit);
    }
    auto run = cbr::run_fixture(f);
    std::cout << cbr::fixture_table(run);
    all = all && run.pass();
  }
  return all ? 0 : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-benefit analysis of data analysis and visualization workflows"};
  app.require_subcommand(1);

  std::string file;
  std::string mode;
  bool json = false;

  auto* validate = app.add_subcommand("validate", "Check a workflow spec");
  validate->add_option("file", file, "Spec file (JSON)")->required();

  auto* analyze = app.add_subcommand("analyze", "Per-step and overall measures");
  analyze->add_option("file", file, "Spec file (JSON)")->required();
  analyze->add_option("--mode", mode, "Entropy mode")->check(CLI::IsMember({"actual", "maximal"}));
  analyze->add_flag("--json", json, "JSON report instead of a table");

  OptimizeFlags flags;
  auto* opt = app.add_subcommand("optimize", "Search the spec's parameter space for the best overall CBR");
  opt->add_option("file", file, "Spec file (JSON)")->required();
  opt->add_option("--budget", flags.budget, "Maximum total cost, in the spec's cost unit")->check(CLI::PositiveNumber);
  auto* greedy = opt->add_flag("--greedy", flags.greedy, "Coordinate ascent instead of exhaustive search");
  opt->add_option("--restarts", flags.restarts, "Greedy starts (seeded by CBR_SEED)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->needs(greedy);
  opt->add_option("--objective", flags.objective, "Optimize the CBR interval midpoint or its lower bound")
      ->check(CLI::IsMember({"midpoint", "lower"}));
  opt->add_flag("--json", flags.json, "JSON result");
  opt->add_flag("--csv", flags.csv, "Frontier as CSV");

  std::string format;
  auto* report = app.add_subcommand("report", "Emit the annotated graph (dot) or the cost/benefit frontier (csv)");
  report->add_option("file", file, "Spec file (JSON)")->required();
  report->add_option("--format", format, "Output format")->required()->check(CLI::IsMember({"dot", "csv"}));
  report->add_option("--mode", mode, "Entropy mode")->check(CLI::IsMember({"actual", "maximal"}));

  std::string name;
  std::string emit;
  auto names = cbr::fixture_names();
  auto* fixtures = app.add_subcommand("fixtures", "Run built-in scenarios against their expected values");
  fixtures->add_option("--name", name, "Run one fixture")->check(CLI::IsMember(names));
  fixtures->add_option("--emit", emit, "Also write the fixture files to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*validate) return run_validate(file);
    if (*analyze) return run_analyze(file, mode, json);
    if (*opt) {
      if (flags.csv && flags.json) {
        std::cerr << "--csv and --json are exclusive\n";
        return kUsage;
      }
      return run_optimize(file, flags);
    }
    if (*report) return run_report(file, format, mode);
    if (*fixtures) return run_fixtures(name, emit);
  } catch (const cbr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == cbr::Errc::parse_error && std::string_view(e.what()).find("CBR_SEED") != std::string_view::npos
               ? kUsage
               : kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
