// sistab: sample, count and analyze fibers of contingency tables with
// fixed sufficient statistics.
//
// Exit codes: 0 success; 1 infeasible/empty result; 2 usage or input
// error; 3 resource budget exceeded.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sistab/sistab.hpp"

namespace {

using namespace sistab;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitEmpty = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct ProblemOptions {
  std::string model;
  std::string matrix_file;
  std::string margin;

  void attach(CLI::App* cmd, bool need_margin) {
    auto* m = cmd->add_option("--model", model,
                              "Model shorthand: indep:I,J | unilogit:I | bilogit:I,J");
    auto* f = cmd->add_option("--matrix", matrix_file, "Design matrix file (d k header)");
    m->excludes(f);
    f->excludes(m);
    auto* marg = cmd->add_option(
        "--margin", margin, "Margin vector: comma/space separated values or a file path");
    if (need_margin) marg->required();
  }

  DesignMatrix resolve_matrix() const {
    if (!model.empty()) return build_design_matrix(parse_model_spec(model));
    if (!matrix_file.empty()) return read_matrix_file(matrix_file);
    throw InvalidInput("one of --model or --matrix is required");
  }

  std::vector<Int> resolve_margin() const {
    if (margin.empty()) throw InvalidInput("--margin is required");
    if (std::filesystem::exists(margin)) return read_vector_file(margin);
    return parse_int_list(margin);
  }

  FiberSpec resolve_fiber() const {
    auto matrix = resolve_matrix();
    auto b = resolve_margin();
    return FiberSpec(std::move(matrix), std::move(b));
  }
};

BoundMethod parse_method(const std::string& text) {
  if (text == "ip") return BoundMethod::exact_ip;
  if (text == "lp") return BoundMethod::lp_relaxation;
  throw InvalidInput("--method must be 'ip' or 'lp'");
}

SamplerKind parse_sampler(const std::string& text) {
  if (text == "classical") return SamplerKind::classical;
  if (text == "free") return SamplerKind::rejection_free;
  throw InvalidInput("--sampler must be 'classical' or 'free'");
}

void print_table_line(std::ostream& out, const TableVector& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out << ' ';
    out << t[i];
  }
}

int run_bounds(const ProblemOptions& problem, const std::string& prefix_text,
               std::size_t cell_1based, const std::string& method_text) {
  const auto fiber = problem.resolve_fiber();
  std::vector<Int> prefix;
  if (!prefix_text.empty()) prefix = parse_int_list(prefix_text);
  if (cell_1based < 1 || cell_1based > fiber.cells()) {
    throw InvalidInput("--cell must be between 1 and k");
  }
  const PartialAssignment state(fiber, prefix);
  const auto cb = compute_bounds(state, cell_1based - 1, parse_method(method_text));
  if (cb.empty) {
    std::cout << "EMPTY\n";
    return kExitEmpty;
  }
  std::cout << cb.lower << ' ' << cb.upper << '\n';
  return kExitOk;
}

int run_sample(const ProblemOptions& problem, const std::string& sampler_text,
               const std::string& method_text, std::int64_t samples,
               std::uint64_t seed) {
  const auto fiber = problem.resolve_fiber();
  SISConfig config;
  config.sampler = parse_sampler(sampler_text);
  config.method = parse_method(method_text);
  config.samples = samples;
  config.seed = seed;

  detail::SamplerContext ctx(fiber, config);
  for (std::int64_t i = 0; i < samples; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const SampleDraw draw = config.sampler == SamplerKind::classical
                                ? detail::sample_classical_impl(ctx, config, rng)
                                : detail::sample_rejection_free_impl(ctx, rng);
    if (draw.completed()) {
      print_table_line(std::cout, *draw.table);
      std::cout << ' ' << draw.weight << '\n';
    } else if (*draw.rejected_at >= fiber.cells()) {
      std::cerr << "# draw " << i << " rejected at the final margin check\n";
    } else {
      std::cerr << "# draw " << i << " rejected at cell "
                << (*draw.rejected_at + 1) << " (weight so far " << draw.weight
                << ")\n";
    }
  }
  return kExitOk;
}

int run_estimate(const ProblemOptions& problem, const std::string& sampler_text,
                 const std::string& method_text, std::int64_t samples,
                 std::uint64_t seed, int workers) {
  const auto fiber = problem.resolve_fiber();
  SISConfig config;
  config.sampler = parse_sampler(sampler_text);
  config.method = parse_method(method_text);
  config.samples = samples;
  config.seed = seed;
  config.workers = workers;
  const CountEstimate est = estimate_count(fiber, config);
  json out = {
      {"estimate", est.estimate},     {"log10_estimate", est.log10_estimate},
      {"stderr", est.std_error},      {"rejections", est.rejections},
      {"N", est.samples},             {"seed", seed},
  };
  std::cout << out.dump() << '\n';
  return kExitOk;
}

int run_enumerate(const ProblemOptions& problem, std::optional<Int> cap, bool list,
                  const std::string& check_file, std::uint64_t budget) {
  const auto fiber = problem.resolve_fiber();
  if (!check_file.empty()) {
    std::ifstream in(check_file);
    if (!in) throw InvalidInput("cannot open table file: " + check_file);
    std::string line;
    bool all_ok = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      TableVector t(fiber.cells());
      for (auto& v : t) {
        if (!(ls >> v)) throw InvalidInput("table line too short: " + line);
      }
      const bool ok = in_fiber(fiber, t);  // trailing tokens (weights) ignored
      all_ok = all_ok && ok;
      std::cout << (ok ? "true" : "false") << '\n';
    }
    return all_ok ? kExitOk : kExitEmpty;
  }

  if (list && !cap) cap = 1000;
  const auto result = count_fiber(fiber, cap, budget);
  std::cout << result.count << '\n';
  if (list && result.tables) {
    for (const auto& t : *result.tables) {
      print_table_line(std::cout, t);
      std::cout << '\n';
    }
  }
  return result.count == 0 ? kExitEmpty : kExitOk;
}

int run_semigroup(const std::string& matrix_file, const std::string& model,
                  const std::string& box_text) {
  DesignMatrix matrix = !model.empty() ? build_design_matrix(parse_model_spec(model))
                                       : read_matrix_file(matrix_file);
  const auto box = parse_int_list(box_text);
  const auto analysis = holes_in_box(matrix, box);
  for (const auto& hole : analysis.holes) {
    print_table_line(std::cout, hole);
    std::cout << '\n';
  }
  std::cout << (analysis.saturated_in_box ? "SATURATED" : "NOT-SATURATED") << '\n';
  return kExitOk;
}

int run_generate(int option, double lambda, std::size_t cells,
                 const std::string& model, const std::string& matrix_file,
                 std::int64_t tables, std::uint64_t seed) {
  GeneratorConfig config;
  config.kind = option == 1 ? GeneratorKind::poisson : GeneratorKind::uniform;
  config.lambda = lambda;
  if (!model.empty()) {
    config.cells = parse_model_spec(model).cell_count();
  } else if (!matrix_file.empty()) {
    config.cells = read_matrix_file(matrix_file).cols();
  } else {
    config.cells = cells;
  }
  if (config.cells < 1) throw InvalidInput("--cells (or --model/--matrix) is required");
  for (std::int64_t t = 0; t < tables; ++t) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(t));
    const auto table = generate_table(config, rng);
    print_table_line(std::cout, table);
    std::cout << '\n';
  }
  return kExitOk;
}

int run_experiment_cmd(int option, double lambda,
                       const std::vector<std::string>& model_texts,
                       std::int64_t samples, int tables, std::uint64_t seed,
                       int workers) {
  std::vector<ModelSpec> models;
  models.reserve(model_texts.size());
  for (const auto& text : model_texts) models.push_back(parse_model_spec(text));
  const auto rows = run_experiment(option, models, samples, tables, seed, lambda, workers);
  write_experiment_csv(std::cout, rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sistab: sequential importance sampling, exact counting and semigroup\n"
      "analysis for fibers of contingency tables"};
  app.require_subcommand(1);

  // bounds
  auto* bounds_cmd = app.add_subcommand(
      "bounds", "Feasible interval for the next cell of a partial table");
  ProblemOptions bounds_problem;
  bounds_problem.attach(bounds_cmd, true);
  std::string bounds_prefix, bounds_method = "ip";
  std::size_t bounds_cell = 1;
  bounds_cmd->add_option("--prefix", bounds_prefix, "Already-fixed leading cells");
  bounds_cmd->add_option("--cell", bounds_cell, "1-based index of the next cell")
      ->required();
  bounds_cmd->add_option("--method", bounds_method, "ip | lp");

  // sample
  auto* sample_cmd =
      app.add_subcommand("sample", "Emit sampled tables, one per line, with weights");
  ProblemOptions sample_problem;
  sample_problem.attach(sample_cmd, true);
  std::string sample_sampler = "classical", sample_method = "ip";
  std::int64_t sample_n = 10;
  std::uint64_t sample_seed = kDefaultSeed;
  sample_cmd->add_option("--sampler", sample_sampler, "classical | free");
  sample_cmd->add_option("--method", sample_method, "ip | lp");
  sample_cmd->add_option("--samples", sample_n, "Number of draws");
  sample_cmd->add_option("--seed", sample_seed, "RNG seed (default 42)");

  // estimate
  auto* estimate_cmd = app.add_subcommand(
      "estimate", "Importance estimate of the number of tables, as JSON");
  ProblemOptions estimate_problem;
  estimate_problem.attach(estimate_cmd, true);
  std::string estimate_sampler = "classical", estimate_method = "ip";
  std::int64_t estimate_n = 100;
  std::uint64_t estimate_seed = kDefaultSeed;
  int estimate_workers = 1;
  estimate_cmd->add_option("--sampler", estimate_sampler, "classical | free");
  estimate_cmd->add_option("--method", estimate_method, "ip | lp");
  estimate_cmd->add_option("--samples", estimate_n, "Number of draws");
  estimate_cmd->add_option("--seed", estimate_seed, "RNG seed (default 42)");
  estimate_cmd->add_option("--workers", estimate_workers, "Worker threads");

  // enumerate
  auto* enumerate_cmd =
      app.add_subcommand("enumerate", "Exact fiber count (and tables) by search");
  ProblemOptions enumerate_problem;
  enumerate_problem.attach(enumerate_cmd, true);
  Int enumerate_cap = -1;
  bool enumerate_list = false;
  std::string enumerate_check;
  std::uint64_t enumerate_budget = FiberSearch::kDefaultNodeBudget;
  enumerate_cmd->add_option("--cap", enumerate_cap,
                            "Materialize tables when count <= cap");
  enumerate_cmd->add_flag("--list", enumerate_list, "Print the tables");
  enumerate_cmd->add_option("--check", enumerate_check,
                            "Verify the tables in this file instead of counting");
  enumerate_cmd->add_option("--budget", enumerate_budget, "Search node budget");

  // semigroup
  auto* semigroup_cmd = app.add_subcommand(
      "semigroup", "Holes of the column semigroup inside a box");
  std::string semigroup_matrix, semigroup_model, semigroup_box;
  auto* sg_matrix = semigroup_cmd->add_option("--matrix", semigroup_matrix,
                                              "Design matrix file");
  auto* sg_model = semigroup_cmd->add_option("--model", semigroup_model,
                                             "Model shorthand");
  sg_matrix->excludes(sg_model);
  sg_model->excludes(sg_matrix);
  semigroup_cmd->add_option("--box", semigroup_box, "Per-coordinate bounds b1,...,bd")
      ->required();

  // generate
  auto* generate_cmd =
      app.add_subcommand("generate", "Random test tables, one per line");
  int generate_option = 1;
  double generate_lambda = 1.0;
  std::size_t generate_cells = 0;
  std::string generate_model, generate_matrix;
  std::int64_t generate_tables = 1;
  std::uint64_t generate_seed = kDefaultSeed;
  generate_cmd->add_option("--option", generate_option,
                           "1 = poisson generator, 2 = uniform generator");
  generate_cmd->add_option("--lambda", generate_lambda, "Poisson mean (option 1)");
  generate_cmd->add_option("--cells", generate_cells, "Number of cells k");
  generate_cmd->add_option("--model", generate_model,
                           "Take k from this model instead of --cells");
  generate_cmd->add_option("--matrix", generate_matrix,
                           "Take k from this design matrix file");
  generate_cmd->add_option("--tables", generate_tables, "Number of tables");
  generate_cmd->add_option("--seed", generate_seed, "RNG seed (default 42)");

  // experiment
  auto* experiment_cmd = app.add_subcommand(
      "experiment", "Rejection-rate survey over random tables, as CSV");
  int experiment_option = 1;
  double experiment_lambda = 1.0;
  std::vector<std::string> experiment_models;
  std::int64_t experiment_samples = 100;
  int experiment_tables = 100;
  std::uint64_t experiment_seed = kDefaultSeed;
  int experiment_workers = 1;
  experiment_cmd->add_option("--option", experiment_option, "1 = poisson, 2 = uniform");
  experiment_cmd->add_option("--lambda", experiment_lambda, "Poisson mean (option 1)");
  experiment_cmd
      ->add_option("--models", experiment_models,
                   "Model shorthands, e.g. --models unilogit:5 bilogit:2,5")
      ->required()
      ->expected(-1);
  experiment_cmd->add_option("--samples", experiment_samples, "Draws per table");
  experiment_cmd->add_option("--tables", experiment_tables, "Tables per model");
  experiment_cmd->add_option("--seed", experiment_seed, "RNG seed (default 42)");
  experiment_cmd->add_option("--workers", experiment_workers, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (bounds_cmd->parsed()) {
      return run_bounds(bounds_problem, bounds_prefix, bounds_cell, bounds_method);
    }
    if (sample_cmd->parsed()) {
      return run_sample(sample_problem, sample_sampler, sample_method, sample_n,
                        sample_seed);
    }
    if (estimate_cmd->parsed()) {
      return run_estimate(estimate_problem, estimate_sampler, estimate_method,
                          estimate_n, estimate_seed, estimate_workers);
    }
    if (enumerate_cmd->parsed()) {
      return run_enumerate(enumerate_problem,
                           enumerate_cap >= 0 ? std::optional<Int>(enumerate_cap)
                                              : std::nullopt,
                           enumerate_list, enumerate_check, enumerate_budget);
    }
    if (semigroup_cmd->parsed()) {
      return run_semigroup(semigroup_matrix, semigroup_model, semigroup_box);
    }
    if (generate_cmd->parsed()) {
      return run_generate(generate_option, generate_lambda, generate_cells,
                          generate_model, generate_matrix, generate_tables,
                          generate_seed);
    }
    if (experiment_cmd->parsed()) {
      return run_experiment_cmd(experiment_option, experiment_lambda,
                                experiment_models, experiment_samples,
                                experiment_tables, experiment_seed,
                                experiment_workers);
    }
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const EmptyFiberError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEmpty;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitUsage;
  }
}
