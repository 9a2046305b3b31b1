#include <gtest/gtest.h>

#include <cmath>
#include <array>
#include <map>
#include <numeric>

#include "olagg/core/error.h"
#include "olagg/randomizer/generators.h"
#include "olagg/randomizer/rng.h"
#include "olagg/randomizer/shuffle.h"
#include "test_util.h"

using namespace olagg;
using namespace olagg::randomizer;

namespace {

std::vector<int64_t> column(const Table& t, std::size_t c = 0) {
  std::vector<int64_t> out;
  for (std::size_t i = 0; i < t.size(); ++i) out.push_back(t.row(i)[c].as_int());
  return out;
}

std::vector<int64_t> iota(int64_t n) {
  std::vector<int64_t> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

TEST(Rng, DeterministicAndIndependentOfOrder) {
  SeededRng a(5), b(5);
  EXPECT_EQ(a.draw(3, 100), b.draw(3, 100));
  EXPECT_NE(a.draw(3, 100), a.draw(4, 100));
  std::vector<uint64_t> seq;
  for (int i = 0; i < 5; ++i) seq.push_back(a.next());
  EXPECT_EQ(seq[3], b.draw(0, 3));
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(a.next_below(7), 7u);
    double u = a.next_unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(HashAssigner, Validates) {
  EXPECT_THROW(HashAssigner(0), Error);
  HashAssigner bad(2, [](uint64_t) { return 5u; });
  EXPECT_THROW(bad(1), Error);
  HashAssigner h(4);
  for (uint64_t d : {0ull, ~0ull, 1ull << 63}) EXPECT_LT(h(d), 4u);
}

TEST(RandomSplit, ScriptedDraws) {
  const std::vector<char> items{'a', 'b', 'c', 'd'};
  const std::vector<uint64_t> draws{0, 1, 0, 1};
  HashAssigner mod2(2, [](uint64_t d) { return static_cast<uint32_t>(d % 2); });
  auto out = random_split<char>(items, mod2, [&](std::size_t i) { return draws[i]; });
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], (std::vector<char>{'a', 'c'}));
  EXPECT_EQ(out[1], (std::vector<char>{'b', 'd'}));
}

TEST(RandomSplit, EdgeCases) {
  const std::vector<int> items{1, 2, 3};
  SeededRng rng(1);
  auto draw = [&](std::size_t i) { return rng.draw(0, i); };
  auto one = random_split<int>(items, HashAssigner(1), draw);
  EXPECT_EQ(one, (std::vector<std::vector<int>>{{1, 2, 3}}));
  auto empty = random_split<int>(std::span<const int>{}, HashAssigner(3), draw);
  ASSERT_EQ(empty.size(), 3u);
  for (const auto& f : empty) EXPECT_TRUE(f.empty());
}

TEST(RandomPermutation, ScriptedDraws) {
  const std::vector<char> items{'a', 'b', 'c'};
  const std::vector<double> r{0.9, 0.1, 0.5};
  EXPECT_EQ(random_permutation<char>(items, [&](std::size_t i) { return r[i]; }),
            (std::vector<char>{'b', 'c', 'a'}));
  const std::vector<char> single{'z'};
  EXPECT_EQ(random_permutation<char>(single, [](std::size_t) { return 0.3; }), single);
  SeededRng rng(9);
  auto u = [&](std::size_t i) { return rng.uniform(1, i); };
  const auto v = iota(50);
  EXPECT_EQ(random_permutation<int64_t>(v, u), random_permutation<int64_t>(v, u));
}

TEST(GloballyRandomize, PreservesMultisetAndMeta) {
  Table t = tu::int_table(iota(1000));
  for (bool local : {false, true}) {
    RandomizeOptions o;
    o.nodes = 4;
    o.seed = 3;
    o.local_only = local;
    auto d = globally_randomize(t, o);
    ASSERT_EQ(d.partitions.size(), 4u);
    d.meta.validate();
    EXPECT_EQ(d.meta.total_cardinality, 1000u);
    std::vector<int64_t> all;
    for (const auto& p : d.partitions) {
      auto c = column(*p);
      all.insert(all.end(), c.begin(), c.end());
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, iota(1000));
    if (local) {
      EXPECT_EQ(d.meta.partitions[0].local_cardinality, 250u);
    }
  }
  RandomizeOptions one;
  one.nodes = 1;
  auto single = globally_randomize(t, one);
  ASSERT_EQ(single.partitions.size(), 1u);
  EXPECT_NE(column(*single.partitions[0]), iota(1000));  // shuffled
  RandomizeOptions none;
  none.nodes = 0;
  EXPECT_THROW(globally_randomize(t, none), Error);
}

TEST(GloballyRandomize, Deterministic) {
  Table t = tu::int_table(iota(500));
  RandomizeOptions o;
  o.nodes = 3;
  o.seed = 77;
  auto a = globally_randomize(t, o);
  auto b = globally_randomize(t, o);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(*a.partitions[i], *b.partitions[i]);
}

// Each of 100 items lands in each of 4 partitions 250 +- 50 times over 1000
// seeds. One cell leaves that band with probability ~2.7e-4, so across 400
// cells a stray excursion is expected now and then; more than two would be
// a p < 0.001 event. A chi-square test over all cells must not reject
// uniformity either.
TEST(GloballyRandomize, UniformPlacement) {
  Table t = tu::int_table(iota(100));
  std::vector<std::array<int, 4>> counts(100, {0, 0, 0, 0});
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    RandomizeOptions o;
    o.nodes = 4;
    o.seed = seed;
    auto d = globally_randomize(t, o);
    for (int p = 0; p < 4; ++p) {
      for (int64_t v : column(*d.partitions[p])) ++counts[v][p];
    }
  }
  double chi2 = 0;
  int outside = 0;
  for (const auto& item : counts) {
    for (int c : item) {
      if (std::abs(c - 250) > 50) ++outside;
      chi2 += (c - 250.0) * (c - 250.0) / 250.0;
    }
  }
  EXPECT_LE(outside, 2);
  // 100 items x 3 free cells = 300 dof; the 0.999 quantile is about 386.
  EXPECT_LT(chi2, 386.0);
}

// The first k rows of a partition are a uniform sample of the whole dataset.
TEST(GloballyRandomize, PrefixIsUnbiasedSample) {
  Table t = tu::int_table(iota(1000));  // mean 499.5, sd ~288.7
  const int k = 20;
  const int seeds = 400;
  double sum = 0;
  for (int s = 0; s < seeds; ++s) {
    RandomizeOptions o;
    o.nodes = 4;
    o.seed = static_cast<uint64_t>(s) + 1000;
    auto d = globally_randomize(t, o);
    const auto& p = *d.partitions[s % 4];
    for (int i = 0; i < k; ++i) sum += static_cast<double>(p.row(i)[0].as_int());
  }
  const double n = static_cast<double>(k) * seeds;
  const double se = 288.675 / std::sqrt(n);
  EXPECT_NEAR(sum / n, 499.5, 3 * se);
}

TEST(Zipf, UniformAtZeroSkew) {
  const uint64_t n = 1'000'000, domain = 1000;
  auto t = gen_zipf(n, domain, 0.0, 1);
  std::vector<int> counts(domain + 1, 0);
  for (int64_t v : column(t)) {
    ASSERT_GE(v, 1);
    ASSERT_LE(v, static_cast<int64_t>(domain));
    ++counts[v];
  }
  const double mean = static_cast<double>(n) / domain;
  const double sd = std::sqrt(mean * (1 - 1.0 / domain));
  for (uint64_t v = 1; v <= domain; ++v) EXPECT_NEAR(counts[v], mean, 5 * sd);
}

TEST(Zipf, NormalizationAtSkewOne) {
  const uint64_t n = 100'000;
  auto t = gen_zipf(n, 10, 1.0, 2);
  std::map<int64_t, int> counts;
  for (int64_t v : column(t)) ++counts[v];
  int top = 0;
  for (const auto& [v, c] : counts) top = std::max(top, c);
  double h10 = 0;
  for (int k = 1; k <= 10; ++k) h10 += 1.0 / k;
  const double p = 1 / h10;
  EXPECT_NEAR(top, n * p, 3 * std::sqrt(n * p * (1 - p)));
  auto same = gen_zipf(100, 1, 1.5, 3);
  for (int64_t v : column(same)) EXPECT_EQ(v, 1);
  EXPECT_THROW(gen_zipf(10, 0, 1, 1), Error);
  EXPECT_THROW(gen_zipf(10, 5, -1, 1), Error);
}

TEST(Outlier, Sums) {
  auto sum = [](const Table& t) {
    auto c = column(t);
    return std::accumulate(c.begin(), c.end(), int64_t{0});
  };
  EXPECT_EQ(sum(gen_outlier(1000, 0, 1'000'000'000, 1)), 1000);
  EXPECT_EQ(sum(gen_outlier(1'000'000, 1, 1'000'000'000, 1)), 1'000'000 - 1 + 1'000'000'000);
  auto all = column(gen_outlier(50, 50, 7, 1));
  for (int64_t v : all) EXPECT_EQ(v, 7);
  EXPECT_THROW(gen_outlier(5, 6, 7, 1), Error);
}

TEST(Uniform, Range) {
  for (int64_t v : column(gen_uniform(10'000, -3, 4, 1))) {
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 4);
  }
  EXPECT_THROW(gen_uniform(10, 5, 4, 1), Error);
}

TEST(Lineitem, ContractAndDeterminism) {
  auto a = gen_lineitem_like(10, 4);
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(a, gen_lineitem_like(10, 4));
  EXPECT_EQ(a.schema().to_header(),
            "l_orderkey:int,l_suppkey:int,l_quantity:int,l_price:real,l_discount:real,l_tax:real,"
            "l_shipdate:date,l_returnflag:string,l_linestatus:string");

  const uint64_t n = 1'000'000;
  auto t = gen_lineitem_like(n, 5);
  const auto& s = t.schema();
  const auto disc = s.require("l_discount"), qty = s.require("l_quantity"), supp = s.require("l_suppkey");
  uint64_t ones = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto r = t.row(i);
    ASSERT_GE(r[disc].as_real(), 0.0);
    ASSERT_LE(r[disc].as_real(), 0.10 + 1e-12);
    ASSERT_GE(r[supp].as_int(), 1);
    ASSERT_LE(r[supp].as_int(), kLineitemSuppliers);
    if (r[qty].as_int() == 1) ++ones;
  }
  const double p = 1.0 / kMaxQuantity;
  EXPECT_NEAR(static_cast<double>(ones), n * p, 3 * std::sqrt(n * p * (1 - p)));
}

TEST(Supplier, Keys) {
  auto t = gen_supplier_like(100, 1);
  EXPECT_EQ(t.size(), 100u);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t.row(i)[0].as_int(), static_cast<int64_t>(i) + 1);
}
