#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "olagg/core/error.h"
#include "olagg/harness/oracle.h"
#include "olagg/uda/binding.h"
#include "olagg/uda/group_by_gla.h"
#include "olagg/uda/join_gla.h"
#include "olagg/uda/sum.h"
#include "olagg/uda/sum_gla.h"
#include "test_util.h"

using namespace olagg;
using namespace olagg::uda;

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

SumState state(double sum, double sum_sq, uint64_t count) {
  SumState s;
  s.moments = {sum, sum_sq, count};
  return s;
}

std::unique_ptr<Gla> gla_for(const std::string& plan, const Schema& schema,
                             std::shared_ptr<const Table> dim = nullptr) {
  return make_gla(bind_query(parse_plan(plan), schema, std::move(dim)));
}

void feed(Gla& g, const Table& t, std::size_t first = 0, std::size_t last = SIZE_MAX) {
  last = std::min(last, t.size());
  for (std::size_t i = first; i < last; ++i) g.accumulate(t.row(i));
}

// Dimension keyed by `dk` with a string attribute `region`.
std::shared_ptr<const Table> dimension(const std::vector<std::pair<int64_t, std::string>>& rows) {
  Table t(Schema({{"dk", Kind::kInt}, {"region", Kind::kString}}));
  for (const auto& [k, r] : rows) t.append(Tuple{Value::integer(k), Value::string(r)});
  return std::make_shared<const Table>(std::move(t));
}

Table fact(const std::vector<std::pair<int64_t, int64_t>>& rows) {
  Table t(Schema({{"fk", Kind::kInt}, {"value", Kind::kInt}}));
  for (const auto& [k, v] : rows) t.append(Tuple{Value::integer(k), Value::integer(v)});
  return t;
}

constexpr EstimateContext kSingle4{EstimationModel::kSingleAsync, 0.95, 4};

}  // namespace

TEST(SumState, Accumulate) {
  Schema s({{"value", Kind::kInt}});
  auto f = BoundExpr::bind(col("value"), s);
  auto yes = BoundPred::bind(Pred::always(), s);
  auto no = BoundPred::bind(!Pred::always(), s);
  SumState st;
  Tuple five{Value::integer(5)};
  sum_accumulate(st, five, f, yes);
  EXPECT_EQ(st.moments, (Moments{5, 25, 1}));
  sum_accumulate(st, five, f, no);
  EXPECT_EQ(st.moments, (Moments{5, 25, 2}));

  SumState whole;
  for (int v : {1, 2, 3, 4}) sum_accumulate(whole, Tuple{Value::integer(v)}, f, yes);
  EXPECT_EQ(whole.moments, (Moments{10, 30, 4}));
}

TEST(SumState, Merge) {
  EXPECT_EQ(sum_merge(state(3, 5, 2), state(7, 25, 4)).moments, (Moments{10, 30, 6}));
  EXPECT_EQ(sum_merge(state(3, 5, 2), SumState{}), state(3, 5, 2));
  auto a = state(1, 1, 1), b = state(2, 4, 3), c = state(9, 81, 2);
  EXPECT_EQ(sum_merge(sum_merge(a, b), c), sum_merge(a, sum_merge(b, c)));
}

TEST(SumState, SingleEstimate) {
  auto e = sum_estimate_single(state(3, 5, 2), 4, 0.95);
  ASSERT_TRUE(e.available());
  EXPECT_DOUBLE_EQ(e->estimator, 6);
  EXPECT_NEAR(e->upper - e->estimator, 1.95996398 * std::sqrt(2.0), 1e-7);
  auto exact = sum_estimate_single(state(10, 30, 4), 4, 0.95);
  EXPECT_DOUBLE_EQ(exact->lower, 10);
  EXPECT_DOUBLE_EQ(exact->upper, 10);
  EXPECT_FALSE(sum_estimate_single(state(3, 9, 1), 4, 0.95).available());
}

TEST(SumState, StratumTerminateAndMerge) {
  SumState s = state(3, 5, 2);
  sum_estimator_terminate(s, 4);
  EXPECT_EQ(s.status, StratumStatus::kDefined);
  EXPECT_DOUBLE_EQ(s.stratum.est, 6);
  EXPECT_DOUBLE_EQ(s.stratum.est_var, 2);

  SumState full = state(10, 30, 4);
  sum_estimator_terminate(full, 4);
  EXPECT_DOUBLE_EQ(full.stratum.est_var, 0);

  SumState thin = state(3, 9, 1);
  sum_estimator_terminate(thin, 4);
  EXPECT_EQ(thin.status, StratumStatus::kUndefined);

  SumState other = state(11, 61, 2);
  sum_estimator_terminate(other, 4);
  SumState both = sum_estimator_merge(s, other);
  EXPECT_DOUBLE_EQ(both.stratum.est, 28);
  EXPECT_DOUBLE_EQ(both.stratum.est_var, 4);
  EXPECT_EQ(both.moments.count, 4u);
  EXPECT_EQ(sum_estimator_merge(s, thin).status, StratumStatus::kUndefined);
  EXPECT_FALSE(sum_estimate_stratified(sum_estimator_merge(s, thin), 0.95).available());
  EXPECT_EQ(code_of([&] { sum_estimator_merge(s, state(1, 1, 1)); }), ErrorCode::kInvalidArgument);
}

TEST(SumGla, FlatSumAndSerialize) {
  Table t = tu::int_table({1, 2, 3, 4});
  auto g = gla_for(R"({"f": [{"col": "value"}, 1]})", t.schema());
  feed(*g, t, 0, 2);
  auto est = g->estimate(kSingle4);
  ASSERT_EQ(est.size(), 1u);
  EXPECT_DOUBLE_EQ(est[0].aggregates[0]->estimator, 6);
  EXPECT_DOUBLE_EQ(est[0].aggregates[1]->estimator, 4);  // COUNT
  feed(*g, t, 2);
  auto exact = g->terminate();
  EXPECT_EQ(exact[0].values, (std::vector<double>{10, 4}));

  auto bytes = serialize(*g);
  auto back = deserialize(*g, bytes);
  EXPECT_TRUE(back->equals(*g));
}

TEST(SumGla, PredicateCountsEverySampledTuple) {
  Table t = tu::int_table({1, 2, 3, 4});
  auto g = gla_for(R"({"f": {"col": "value"}, "p": {"gt": [{"col": "value"}, 2]}})", t.schema());
  feed(*g, t, 0, 2);  // neither qualifies
  EXPECT_EQ(g->tuples_seen(), 2u);
  auto e = g->estimate(kSingle4)[0].aggregates[0];
  ASSERT_TRUE(e.available());
  EXPECT_DOUBLE_EQ(e->estimator, 0);
}

TEST(GroupByGla, CreatesGroupsOnlyForQualifyingTuples) {
  Table t = tu::grouped_table({{"NF", 1}, {"NF", 2}, {"RF", 0}, {"AF", 5}});
  auto g = gla_for(R"({"f": {"col": "value"}, "p": {"gt": [{"col": "value"}, 0]}, "group_by": ["g"]})",
                   t.schema());
  g->accumulate(t.row(0));
  EXPECT_EQ(g->group_count(), 1u);
  g->accumulate(t.row(1));
  EXPECT_EQ(g->group_count(), 1u);
  g->accumulate(t.row(2));  // fails p
  EXPECT_EQ(g->group_count(), 1u);
  EXPECT_EQ(g->tuples_seen(), 3u);
  g->accumulate(t.row(3));
  auto r = g->terminate();
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].key[0].as_string(), "AF");
  EXPECT_EQ(r[1].values[0], 3);
  const auto& groups = dynamic_cast<const GroupByGla&>(*g).groups();
  EXPECT_EQ(groups.at(GroupKey{Value::string("NF")})[0].moments, (Moments{3, 5, 2}));
}

TEST(GroupByGla, MergeUnionsGroups) {
  Table t = tu::grouped_table({{"A", 1}, {"A", 2}, {"B", 3}});
  const std::string plan = R"({"f": {"col": "value"}, "group_by": ["g"]})";
  auto a = gla_for(plan, t.schema());
  auto b = a->fresh();
  auto empty = a->fresh();
  a->accumulate(t.row(0));
  b->accumulate(t.row(1));
  auto m = merge(*a, *b);
  const auto& groups = dynamic_cast<const GroupByGla&>(*m).groups();
  EXPECT_EQ(groups.at(GroupKey{Value::string("A")})[0].moments, (Moments{3, 5, 2}));
  b->accumulate(t.row(2));
  EXPECT_EQ(merge(*a, *b)->group_count(), 2u);
  EXPECT_TRUE(merge(*a, *empty)->equals(*a));
}

TEST(GroupByGla, PerGroupEstimates) {
  Table t = tu::grouped_table({{"A", 1}, {"A", 2}, {"B", 3}, {"B", 4}});
  auto g = gla_for(R"({"f": {"col": "value"}, "group_by": ["g"]})", t.schema());
  feed(*g, t, 0, 2);
  auto est = g->estimate(kSingle4);
  // B has no sampled tuple yet, so it has no group; its implied estimate is 0.
  ASSERT_EQ(est.size(), 1u);
  EXPECT_DOUBLE_EQ(est[0].aggregates[0]->estimator, 6);
  EXPECT_DOUBLE_EQ(est[0].aggregates[0]->upper - 6, 1.959963984540054 * std::sqrt(2.0));
  feed(*g, t, 2);
  est = g->estimate(kSingle4);
  ASSERT_EQ(est.size(), 2u);
  EXPECT_DOUBLE_EQ(est[1].aggregates[0]->estimator, 7);
  EXPECT_DOUBLE_EQ(est[1].aggregates[0]->lower, 7);
  EXPECT_DOUBLE_EQ(est[1].aggregates[0]->upper, 7);
}

TEST(GroupByGla, StratifiedMerge) {
  Table t = tu::grouped_table({{"A", 1}, {"A", 2}, {"A", 5}, {"A", 6}});
  auto a = gla_for(R"({"f": {"col": "value"}, "group_by": ["g"], "model": "multiple"})", t.schema());
  auto b = a->fresh();
  feed(*a, t, 0, 2);
  feed(*b, t, 2, 4);
  a->estimator_terminate(4);
  b->estimator_terminate(4);
  auto m = estimator_merge(*a, *b);
  auto e = m->estimate({EstimationModel::kMultipleStratified, 0.95, 0})[0].aggregates[0];
  ASSERT_TRUE(e.available());
  EXPECT_DOUBLE_EQ(e->estimator, 28);
  EXPECT_NEAR(e->upper - e->estimator, 1.959963984540054 * 2, 1e-9);

  auto lost = b->fresh();
  lost->mark_stratum_undefined();
  auto dead = estimator_merge(*a, *lost);
  auto u = dead->estimate({EstimationModel::kMultipleStratified, 0.95, 0})[0].aggregates[0];
  ASSERT_FALSE(u.available());
  EXPECT_EQ(u.unavailable().reason, Unavailable::Reason::kInfiniteVariance);
}

TEST(GroupByGla, SerializeThousandGroups) {
  Table t(Schema({{"k", Kind::kInt}, {"value", Kind::kReal}}));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5000; ++i) {
    t.append(Tuple{Value::integer(i % 1000), Value::real((rng() % 1000) / 7.0)});
  }
  auto g = gla_for(R"({"f": {"col": "value"}, "group_by": ["k"]})", t.schema());
  feed(*g, t);
  EXPECT_EQ(g->group_count(), 1000u);
  auto back = deserialize(*g, serialize(*g));
  EXPECT_TRUE(back->equals(*g));
  g->estimator_terminate(10000);
  back = deserialize(*g, serialize(*g));
  EXPECT_TRUE(back->equals(*g));
}

TEST(Serde, SumStateRoundTripAndErrors) {
  ByteWriter w;
  write_sum_state(w, state(3, 5, 2));
  auto bytes = w.take();
  ByteReader r(bytes);
  EXPECT_EQ(read_sum_state(r), state(3, 5, 2));
  r.expect_end();

  Table t = tu::int_table({1, 2, 3});
  auto g = gla_for(R"({"f": {"col": "value"}})", t.schema());
  feed(*g, t);
  auto good = serialize(*g);
  auto truncated = std::vector<std::byte>(good.begin(), good.end() - 1);
  EXPECT_EQ(code_of([&] { deserialize(*g, truncated); }), ErrorCode::kMalformedBytes);
  auto trailing = good;
  trailing.push_back(std::byte{0});
  EXPECT_EQ(code_of([&] { deserialize(*g, trailing); }), ErrorCode::kMalformedBytes);
  auto version = good;
  version[1] = std::byte{99};
  EXPECT_EQ(code_of([&] { deserialize(*g, version); }), ErrorCode::kVersionMismatch);
  auto tag = good;
  tag[0] = std::byte{static_cast<uint8_t>(GlaKind::kJoin)};
  EXPECT_EQ(code_of([&] { deserialize(*g, tag); }), ErrorCode::kMalformedBytes);
  EXPECT_EQ(code_of([&] { deserialize(*g, std::vector<std::byte>{}); }), ErrorCode::kMalformedBytes);
}

TEST(Serde, GroupStatesRejectCorruption) {
  Table t = tu::grouped_table({{"A", 1}, {"B", 2}});
  auto g = gla_for(R"({"f": {"col": "value"}, "group_by": ["g"]})", t.schema());
  feed(*g, t);
  auto good = serialize(*g);
  for (std::size_t cut = 0; cut < good.size(); ++cut) {
    std::vector<std::byte> part(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(cut));
    EXPECT_EQ(code_of([&] { deserialize(*g, part); }), ErrorCode::kMalformedBytes) << "cut at " << cut;
  }
}

TEST(JoinTable, Buckets) {
  auto distinct = JoinTable::build(dimension({{1, "X"}, {2, "Y"}}), "dk");
  EXPECT_EQ(distinct->bucket_count(), 2u);
  EXPECT_EQ(distinct->probe(Value::integer(1))->size(), 1u);
  auto dup = JoinTable::build(dimension({{1, "X"}, {1, "Y"}}), "dk");
  EXPECT_EQ(dup->bucket_count(), 1u);
  EXPECT_EQ(dup->probe(Value::integer(1))->size(), 2u);
  auto empty = JoinTable::build(dimension({}), "dk");
  EXPECT_EQ(empty->probe(Value::integer(1)), nullptr);
  EXPECT_EQ(code_of([] { JoinTable::build(dimension({{1, "X"}, {2, "Y"}}), "dk", 1); }),
            ErrorCode::kCapacityExceeded);
}

TEST(JoinGla, AccumulateCountsFactTuples) {
  auto dim = dimension({{1, "X"}, {2, "Y"}, {2, "Z"}});
  Table f = fact({{1, 10}, {3, 20}, {2, 30}});
  const std::string plan =
      R"({"f": {"col": "value"}, "group_by": ["region"], "dimension": {"fact_key": "fk", "dim_key": "dk"}})";
  auto g = gla_for(plan, f.schema(), dim);
  g->accumulate(f.row(0));
  EXPECT_EQ(g->tuples_seen(), 1u);
  EXPECT_EQ(g->group_count(), 1u);
  g->accumulate(f.row(1));  // no match
  EXPECT_EQ(g->tuples_seen(), 2u);
  EXPECT_EQ(g->group_count(), 1u);
  g->accumulate(f.row(2));  // matches two rows
  EXPECT_EQ(g->tuples_seen(), 3u);
  auto r = g->terminate();
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[1].values[0], 30);
  EXPECT_EQ(r[2].values[0], 30);
  auto back = deserialize(*g, serialize(*g));
  EXPECT_TRUE(back->equals(*g));
}

TEST(JoinGla, MatchesNestedLoopOracle) {
  std::mt19937_64 rng(11);
  std::vector<std::pair<int64_t, std::string>> drows;
  const char* regions[] = {"EU", "AS", "AM"};
  for (int i = 0; i < 200; ++i) drows.push_back({static_cast<int64_t>(rng() % 150), regions[rng() % 3]});
  auto dim = dimension(drows);
  std::vector<std::pair<int64_t, int64_t>> frows;
  for (int i = 0; i < 1000; ++i) frows.push_back({static_cast<int64_t>(rng() % 180), static_cast<int64_t>(rng() % 100)});
  Table f = fact(frows);
  for (const char* plan :
       {R"({"f": [{"col": "value"}, 1], "group_by": ["region"], "dimension": {"fact_key": "fk", "dim_key": "dk"}})",
        R"({"f": {"col": "value"}, "p": {"eq": [{"col": "region"}, {"str": "EU"}]},
            "dimension": {"fact_key": "fk", "dim_key": "dk"}})"}) {
    auto g = gla_for(plan, f.schema(), dim);
    feed(*g, f);
    auto got = g->terminate();
    auto want = harness::brute_force(parse_plan(plan), f, dim.get());
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].key, want[i].key);
      EXPECT_EQ(got[i].values, want[i].values);
    }
  }
}

TEST(Binding, Errors) {
  Table f = fact({{1, 1}});
  EXPECT_EQ(code_of([&] { gla_for(R"({"f": {"col": "nope"}})", f.schema()); }), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of([&] { gla_for(R"({"group_by": ["nope"]})", f.schema()); }), ErrorCode::kTypeMismatch);
  auto dim = dimension({{1, "X"}});
  // int fact key against a string dimension key
  EXPECT_EQ(code_of([&] {
              gla_for(R"({"dimension": {"fact_key": "fk", "dim_key": "region"}})", f.schema(), dim);
            }),
            ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of([&] {
              bind_query(parse_plan(R"({"dimension": {"fact_key": "fk", "dim_key": "dk"}})"), f.schema(), dim, 0);
            }),
            ErrorCode::kCapacityExceeded);
  EXPECT_EQ(code_of([&] {
              bind_query(parse_plan(R"({"dimension": {"path": "/nonexistent.csv", "fact_key": "fk", "dim_key": "dk"}})"),
                         f.schema());
            }),
            ErrorCode::kIo);
}
