#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "olagg/core/error.h"
#include "olagg/engine/query.h"
#include "olagg/harness/bench.h"
#include "olagg/harness/experiment.h"
#include "olagg/harness/monte_carlo.h"
#include "olagg/harness/oracle.h"
#include "olagg/harness/trace.h"
#include "olagg/randomizer/generators.h"
#include "test_util.h"

using namespace olagg;
using namespace olagg::harness;
using namespace std::chrono_literals;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no olagg::Error thrown";
  return ErrorCode::kRuntime;
}

const char* kSum = R"({"f": {"col": "value"}})";

}  // namespace

TEST(Oracle, WorkedInstance) {
  Table t = tu::int_table({1, 2, 3, 4});
  auto r = brute_force(parse_plan(kSum), t);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(r[0].key.empty());
  EXPECT_EQ(r[0].values[0], 10);
  auto filtered = brute_force(parse_plan(R"({"f": {"col": "value"}, "p": {"ge": [{"col": "value"}, 3]}})"), t);
  EXPECT_EQ(filtered[0].values[0], 7);
  auto none = brute_force(parse_plan(R"({"f": {"col": "value"}, "p": false})"), t);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(none[0].values[0], 0);
  EXPECT_EQ(contributions(parse_plan(R"({"f": {"col": "value"}, "p": {"gt": [{"col": "value"}, 2]}})"), t),
            (std::vector<double>{0, 0, 3, 4}));
}

TEST(Oracle, GroupsAndPartitions) {
  Table t = tu::grouped_table({{"b", 1}, {"a", 2}, {"b", 3}, {"c", -1}});
  auto plan = parse_plan(R"({"f": {"col": "value"}, "p": {"gt": [{"col": "value"}, 0]}, "group_by": ["g"]})");
  auto r = brute_force(plan, tu::split_blocks(t, 3));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].key[0].as_string(), "a");
  EXPECT_EQ(r[0].values[0], 2);
  EXPECT_EQ(r[1].values[0], 4);
}

TEST(CompensatedSum, KeepsSmallTerms) {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  EXPECT_EQ(s.value(), 1000.0);
}

TEST(Prepare, ShufflesOntoNodes) {
  auto data = prepare(tu::int_table({1, 2, 3, 4, 5, 6, 7, 8}), 3, 1);
  EXPECT_EQ(data.partitions.size(), 3u);
  EXPECT_EQ(data.meta.total_cardinality, 8u);
  EXPECT_EQ(median({3, 1, 2}), 2);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
}

TEST(Generators, ByName) {
  EXPECT_EQ(parse_generator("zipf"), GeneratorKind::kZipf);
  EXPECT_EQ(code_of([] { parse_generator("gauss"); }), ErrorCode::kInvalidArgument);
  GeneratorSpec g;
  g.kind = GeneratorKind::kOutlier;
  g.n = 100;
  g.outliers = 1;
  g.magnitude = 500;
  auto t = generate(g, 1);
  EXPECT_EQ(brute_force(parse_plan(kSum), t)[0].values[0], 99 + 500);
  ExperimentSpec e;
  e.trials = 0;
  EXPECT_EQ(code_of([&] { e.validate(); }), ErrorCode::kInvalidArgument);
}

TEST(Trace, HealthyRunEndsExactAndNarrows) {
  auto data = prepare(randomizer::gen_uniform(200'000, 1, 100, 2), 4, 2);
  engine::EngineConfig c;
  c.chunk_capacity = 500;
  c.faults.delay_ms_per_chunk = {{0, 1}, {1, 1}, {2, 1}, {3, 1}};
  auto truth = brute_force(parse_plan(kSum), data);
  auto q = engine::Query::submit("t", parse_plan(kSum), data, c);
  auto points = run_trace(*q, 20ms, &truth);
  ASSERT_GE(points.size(), 3u);
  const auto& last = points.back();
  EXPECT_EQ(last.status, "finished");
  EXPECT_TRUE(last.available);
  EXPECT_EQ(last.relative_width, 0);
  EXPECT_EQ(last.estimator, truth[0].values[0]);
  EXPECT_TRUE(last.covered.value_or(false));
  // Widths shrink overall: the first available width exceeds the last one
  // taken before completion.
  std::vector<double> widths;
  for (const auto& p : points) {
    if (p.available && p.status == "running") widths.push_back(p.relative_width);
  }
  ASSERT_GE(widths.size(), 2u);
  EXPECT_GT(widths.front(), widths.back());
  for (std::size_t i = 1; i < points.size(); ++i) EXPECT_GE(points[i].sample_fraction, points[i - 1].sample_fraction);

  std::ostringstream csv;
  write_trace_csv(csv, points);
  std::string header;
  std::istringstream in(csv.str());
  std::getline(in, header);
  EXPECT_EQ(header,
            "time_ms,ticket,group,aggregate,available,estimator,lower,upper,relative_width,sample_fraction,covered,"
            "status,degraded");
}

TEST(Trace, DeadNodeKeepsWidth) {
  auto data = prepare(randomizer::gen_uniform(40'000, 1, 100, 3), 8, 3);
  engine::EngineConfig c;
  c.chunk_capacity = 500;
  c.faults.kill_after_fraction = {{1, 0.5}};
  auto q = engine::Query::submit("t", parse_plan(kSum), data, c);
  auto points = run_trace(*q, 5ms);
  EXPECT_TRUE(points.back().degraded);
  EXPECT_GT(points.back().relative_width, 0);
  EXPECT_EQ(code_of([&] { run_trace(*q, 0ms); }), ErrorCode::kInvalidArgument);
}

TEST(ExactCoverage, SmallPopulation) {
  // |D| = 8, k = 4: 70 samples, counted by brute force here too.
  const std::vector<double> d{3, 9, 1, 4, 12, 7, 5, 2};
  double total = 0;
  for (double x : d) total += x;
  int covered = 0, all = 0;
  for (uint32_t mask = 0; mask < 256; ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    ++all;
    estimation::Moments m;
    for (int i = 0; i < 8; ++i) {
      if (mask & (1u << i)) m.add_qualifying(d[i]);
    }
    auto e = estimation::estimate_from_moments(m, 8, 0.95);
    if (e.available() && e->contains(total)) ++covered;
  }
  EXPECT_EQ(all, 70);
  EXPECT_DOUBLE_EQ(exact_coverage(d, 4, 0.95), covered / 70.0);
  EXPECT_DOUBLE_EQ(exact_coverage(d, 8, 0.95), 1.0);
  EXPECT_DOUBLE_EQ(exact_coverage(d, 1, 0.95), 0.0);  // no bounds from one tuple
  EXPECT_EQ(code_of([&] { exact_coverage(d, 9, 0.95); }), ErrorCode::kInvalidArgument);
}

TEST(MonteCarlo, SmallRun) {
  auto data = randomizer::gen_uniform(20'000, 1, 100, 4);
  CoverageSpec spec;
  spec.nodes = 4;
  spec.trials = 20;
  spec.checkpoints = {0.1, 0.5, 0.9};
  spec.engine.chunk_capacity = 200;
  uint32_t seen = 0;
  spec.on_trial = [&](uint32_t) { ++seen; };
  auto cov = monte_carlo_coverage(parse_plan(kSum), data, spec);
  EXPECT_EQ(seen, 20u);
  ASSERT_EQ(cov.size(), 3u);
  for (std::size_t i = 0; i < cov.size(); ++i) {
    EXPECT_EQ(cov[i].trials, 20u);
    EXPECT_EQ(cov[i].unavailable, 0u);
    EXPECT_GE(cov[i].coverage(), 0.7);  // nominal 0.95; loose for 20 trials
    ASSERT_EQ(cov[i].sample_fractions.size(), 20u);
    for (double f : cov[i].sample_fractions) {
      EXPECT_GE(f, cov[i].checkpoint);
      EXPECT_LT(f, cov[i].checkpoint + 4.0 * 200 / 20'000 + 1e-12);
    }
  }
}

TEST(MonteCarlo, Rejects) {
  auto data = tu::int_table({1, 2, 3, 4});
  CoverageSpec spec;
  spec.trials = 0;
  EXPECT_EQ(code_of([&] { monte_carlo_coverage(parse_plan(kSum), data, spec); }), ErrorCode::kInvalidArgument);
  spec.trials = 1;
  EXPECT_EQ(code_of([&] { monte_carlo_coverage(parse_plan(R"({"f": {"col": "value"}, "model": "sync"})"), data, spec); }),
            ErrorCode::kInvalidArgument);
  spec.checkpoints = {1.0};
  EXPECT_EQ(code_of([&] { monte_carlo_coverage(parse_plan(kSum), data, spec); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_plan(R"({"f": {"col": "value"}, "confidence": 1.0})"); }), ErrorCode::kInvalidArgument);
}

TEST(Bench, SmallRun) {
  BenchSpec spec;
  spec.tuples = 200'000;
  spec.nodes = 2;
  spec.reps = 2;
  spec.sync_reps = 1;
  spec.period = 5ms;
  auto r = overhead_benchmark(spec);
  EXPECT_EQ(r.with_snapshots_ms.size(), 2u);
  EXPECT_EQ(r.without_ms.size(), 2u);
  EXPECT_EQ(r.sync_ms.size(), 1u);
  EXPECT_GT(r.median_without(), 0);
  EXPECT_TRUE(std::isfinite(r.overhead()));
  auto d = bench_dataset(1000, 3, 1);
  EXPECT_EQ(d.meta.total_cardinality, 1000u);
  spec.reps = 0;
  EXPECT_EQ(code_of([&] { overhead_benchmark(spec); }), ErrorCode::kInvalidArgument);
}
