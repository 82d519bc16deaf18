#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sistab/experiment.hpp"
#include "sistab/generator.hpp"

using namespace sistab;

TEST_CASE("generated tables have the right length, nonnegative cells, and a cell > 10") {
  for (auto kind : {GeneratorKind::poisson, GeneratorKind::uniform}) {
    for (std::size_t k : {1u, 2u, 5u, 12u, 20u}) {
      GeneratorConfig config{kind, 1.0, k, 0};
      for (std::uint64_t rep = 0; rep < 200; ++rep) {
        Rng rng = substream(1000 + k, rep);
        const auto t = generate_table(config, rng);
        REQUIRE(t.size() == k);
        Int largest = 0;
        for (Int v : t) {
          REQUIRE(v >= 0);
          largest = std::max(largest, v);
        }
        REQUIRE(largest > 10);
      }
    }
  }
}

TEST_CASE("single-cell tables land in [1,1000]") {
  GeneratorConfig config{GeneratorKind::uniform, 1.0, 1, 0};
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    Rng rng = substream(9, rep);
    const auto t = generate_table(config, rng);
    REQUIRE(t[0] >= 1);
    REQUIRE(t[0] <= 1000);
  }
}

TEST_CASE("pre-fallback branch frequencies match the drawing rule") {
  const std::size_t k = 20;
  GeneratorConfig config{GeneratorKind::uniform, 1.0, k, 0};
  GeneratorStats stats;
  const std::int64_t tables = 5000;  // 100000 cells
  for (std::uint64_t rep = 0; rep < std::uint64_t(tables); ++rep) {
    Rng rng = substream(77, rep);
    generate_table(config, rng, &stats);
  }
  const double cells = double(tables) * double(k);
  const double p_big = 5.0 / std::pow(2.0, double(k));
  const double sigma_big = std::sqrt(p_big * (1 - p_big) / cells);
  CHECK(double(stats.big_branch) / cells <= p_big + 3 * sigma_big);

  const double sigma_zero = std::sqrt(0.25 / cells);
  CHECK_THAT(double(stats.zero_branch) / cells,
             Catch::Matchers::WithinAbs(0.5, 3 * sigma_zero));

  const double p_mid = 0.5 - p_big;
  const double sigma_mid = std::sqrt(p_mid * (1 - p_mid) / cells);
  CHECK_THAT(double(stats.mid_branch) / cells,
             Catch::Matchers::WithinAbs(p_mid, 3 * sigma_mid));
}

TEST_CASE("poisson sampler has the right mean") {
  Rng rng(4242);
  const double lambda = 1.0;
  const int n = 200000;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += double(poisson(rng, lambda));
  // Var(Poisson) = lambda, so 3 sigma of the mean is 3*sqrt(lambda/n).
  CHECK_THAT(sum / n, Catch::Matchers::WithinAbs(lambda, 3 * std::sqrt(lambda / n)));
}

TEST_CASE("generation is deterministic for a fixed stream") {
  GeneratorConfig config{GeneratorKind::poisson, 1.0, 20, 0};
  Rng a = substream(kDefaultSeed, 0);
  Rng b = substream(kDefaultSeed, 0);
  const auto ta = generate_table(config, a);
  const auto tb = generate_table(config, b);
  CHECK(ta == tb);

  // Golden value pinned from the first implementation run; any change to
  // the drawing rule or the RNG layering must be deliberate.
  const TableVector golden = {265, 0, 4, 0, 0, 0, 0, 0, 4, 0,
                              1,   2, 1, 0, 1, 0, 2, 0, 2, 1};
  CHECK(ta == golden);
}

TEST_CASE("generator validates its configuration") {
  Rng rng(1);
  CHECK_THROWS_AS(generate_table({GeneratorKind::poisson, 0.0, 5, 0}, rng), InvalidInput);
  CHECK_THROWS_AS(generate_table({GeneratorKind::poisson, 1.0, 0, 0}, rng), InvalidInput);
}

TEST_CASE("a one-table, one-draw survey emits a single bounded row") {
  const auto rows =
      run_experiment(2, {ModelSpec::univariate_logit(3)}, 1, 1, 77);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].option == 2);
  CHECK(rows[0].model == "univariate");
  CHECK(rows[0].levels == "3");
  CHECK(rows[0].tables == 1);
  CHECK((rows[0].reject_tables == 0 || rows[0].reject_tables == 1));
}

TEST_CASE("survey results do not depend on the worker count") {
  const std::vector<ModelSpec> models = {ModelSpec::univariate_logit(3),
                                         ModelSpec::bivariate_logit(2, 2)};
  const auto seq = run_experiment(1, models, 25, 12, 909, 1.0, 1);
  const auto par = run_experiment(1, models, 25, 12, 909, 1.0, 3);
  REQUIRE(seq.size() == par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CHECK(seq[i].reject_tables == par[i].reject_tables);
    CHECK(seq[i].model == par[i].model);
    CHECK(seq[i].levels == par[i].levels);
  }
}
