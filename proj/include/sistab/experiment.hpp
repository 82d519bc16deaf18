#pragma once

#include <chrono>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "sistab/generator.hpp"
#include "sistab/sis.hpp"

namespace sistab {

struct ExperimentRow {
  int option = 1;  // 1 = poisson generator, 2 = uniform generator
  std::string model;
  std::string levels;
  double time_sec = 0.0;
  int reject_tables = 0;  // tables (out of `tables`) with >= 1 rejection
  int tables = 0;
};

/// Rejection-rate survey: for each model, generate `tables` random tables,
/// take each table's margin as a fiber, run the classical sampler with
/// exact-IP bounds for `samples` draws, and record how many tables saw at
/// least one rejection.  Tables are generated on per-(row, table)
/// substreams, so rows are reproducible independently of worker count.
inline std::vector<ExperimentRow> run_experiment(int option,
                                                 const std::vector<ModelSpec>& models,
                                                 std::int64_t samples, int tables,
                                                 std::uint64_t seed,
                                                 double lambda = 1.0,
                                                 int workers = 1) {
  if (option != 1 && option != 2) throw InvalidInput("run_experiment: option must be 1 or 2");
  if (samples < 1) throw InvalidInput("run_experiment: samples must be >= 1");
  if (tables < 1) throw InvalidInput("run_experiment: tables must be >= 1");

  std::vector<ExperimentRow> rows;
  rows.reserve(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    const ModelSpec& spec = models[m];
    const DesignMatrix matrix = build_design_matrix(spec);
    const std::uint64_t row_seed = derive_stream(seed, m);

    const auto started = std::chrono::steady_clock::now();
    std::vector<char> had_rejection(static_cast<std::size_t>(tables), 0);

    auto run_tables = [&](int begin, int end) {
      for (int t = begin; t < end; ++t) {
        const std::uint64_t table_seed = derive_stream(row_seed, static_cast<std::uint64_t>(t));
        GeneratorConfig gen;
        gen.kind = option == 1 ? GeneratorKind::poisson : GeneratorKind::uniform;
        gen.lambda = lambda;
        gen.cells = matrix.cols();
        Rng rng = substream(table_seed, 0);
        const TableVector observed = generate_table(gen, rng);
        const FiberSpec fiber = FiberSpec::from_observed(matrix, observed);

        SISConfig config;
        config.method = BoundMethod::exact_ip;
        config.sampler = SamplerKind::classical;
        config.samples = samples;
        config.seed = derive_stream(table_seed, 1);
        const CountEstimate est = estimate_count(fiber, config);
        had_rejection[static_cast<std::size_t>(t)] = est.rejections > 0 ? 1 : 0;
      }
    };

    const int w = std::max(1, workers);
    if (w == 1 || tables < 2 * w) {
      run_tables(0, tables);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (tables + w - 1) / w;
      for (int i = 0; i < w; ++i) {
        const int begin = i * chunk;
        const int end = std::min(tables, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(run_tables, begin, end);
      }
      for (auto& th : pool) th.join();
    }

    ExperimentRow row;
    row.option = option;
    row.model = spec.name();
    row.levels = spec.levels_label();
    row.tables = tables;
    for (char c : had_rejection) row.reject_tables += c;
    row.time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                 started)
                       .count();
    rows.push_back(std::move(row));
  }
  return rows;
}

/// CSV with header option,model,levels,time_sec,reject_tables; the levels
/// field is quoted because bivariate labels contain a comma.
inline void write_experiment_csv(std::ostream& out,
                                 const std::vector<ExperimentRow>& rows) {
  out << "option,model,levels,time_sec,reject_tables\n";
  char buf[32];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.3f", r.time_sec);
    out << r.option << ',' << r.model << ",\"" << r.levels << "\"," << buf << ','
        << r.reject_tables << '\n';
  }
}

}  // namespace sistab
