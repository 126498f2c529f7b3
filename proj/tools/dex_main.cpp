#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "dex/errors.hpp"
#include "dex/report.hpp"

namespace {

double default_budget() {
  if (const char* env = std::getenv("DEX_BUDGET")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return dex::kDefaultBudget;
}

int emit(const dex::RunReport& report, bool json_output,
         std::chrono::steady_clock::time_point started) {
  std::cout << report.payload.dump(json_output ? -1 : 2) << '\n';
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  std::cerr << "elapsed_ms " << elapsed.count() << '\n';
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stability toolkit for discrete exchange economies"};
  app.require_subcommand(1);

  bool json_output = false;
  dex::CommandOptions opts;
  opts.budget = default_budget();
  app.add_flag("--json", json_output, "compact single-line JSON report");
  app.add_option("--budget", opts.budget, "enumeration budget (default: DEX_BUDGET or 2^20)");

  std::string path, solver, check, family = "dichotomous", out_path, example;
  int agents = 3, objects = 4;
  std::vector<int> category_sizes;
  uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "check an economy file's invariants");
  validate->add_option("path", path)->required();

  auto* solve = app.add_subcommand("solve", "run a stability solver");
  solve->add_option("solver", solver)
      ->required()
      ->check(CLI::IsMember({"weak-core", "strong-core", "pairwise-stable", "ttc",
                             "talgo", "bargaining"}));
  solve->add_option("path", path)->required();
  solve->add_option("--k", opts.k, "coalition size cap for talgo/bargaining");
  solve->add_option("--structure", opts.structure_path,
                    "bargaining: structured allocation file to test directly");

  auto* check_cmd = app.add_subcommand("check", "run a structural property check");
  check_cmd->add_option("check", check)
      ->required()
      ->check(CLI::IsMember({"injective", "monotone", "dtu", "gft", "balanced", "convex"}));
  check_cmd->add_option("path", path)->required();

  auto* gen = app.add_subcommand("gen", "generate a seeded random economy");
  gen->add_option("--family", family)
      ->check(CLI::IsMember({"dichotomous", "categorical", "housing", "additive-common",
                             "additive-free"}));
  gen->add_option("--agents", agents);
  gen->add_option("--objects", objects);
  gen->add_option("--category-sizes", category_sizes, "objects per category (categorical)");
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path)->required();

  auto* ex = app.add_subcommand("examples", "write and verify a bundled instance");
  ex->add_option("name", example)
      ->required()
      ->check(CLI::IsMember({"ex1", "ex2", "roommate", "konishi", "shoes-gft"}));
  ex->add_option("--out-dir", opts.out_dir);

  auto* round = app.add_subcommand("round", "replay a rounding run from a matrix dump");
  round->add_option("path", path)->required();

  // global flags may follow the subcommand
  for (CLI::App* sub : {validate, solve, check_cmd, gen, ex, round}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  auto started = std::chrono::steady_clock::now();

  try {
    if (validate->parsed()) return emit(dex::cmd_validate(path, opts), json_output, started);
    if (solve->parsed()) return emit(dex::cmd_solve(path, solver, opts), json_output, started);
    if (check_cmd->parsed()) return emit(dex::cmd_check(path, check, opts), json_output, started);
    if (gen->parsed()) {
      dex::InstanceSpec spec{family, agents, objects, category_sizes, seed};
      return emit(dex::cmd_gen(spec, out_path, opts), json_output, started);
    }
    if (ex->parsed()) return emit(dex::cmd_examples(example, opts), json_output, started);
    if (round->parsed()) return emit(dex::cmd_round(path, opts), json_output, started);
  } catch (const dex::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const dex::SizeRefusal& e) {
    std::cerr << "size refusal: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
