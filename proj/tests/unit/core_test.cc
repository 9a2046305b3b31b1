#include <gtest/gtest.h>

#include <fstream>

#include "olagg/core/chunk.h"
#include "olagg/core/dataset.h"
#include "olagg/core/error.h"
#include "olagg/core/expr.h"
#include "olagg/core/plan.h"
#include "olagg/core/pred.h"
#include "test_util.h"

using namespace olagg;

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

Schema xy() { return Schema({{"x", Kind::kInt}, {"y", Kind::kInt}}); }

}  // namespace

TEST(Value, KindsAndComparison) {
  EXPECT_EQ(Value::integer(3).compare(Value::real(3.0)), 0);
  EXPECT_LT(Value::integer(2).compare(Value::real(2.5)), 0);
  EXPECT_GT(Value::string("b").compare(Value::string("a")), 0);
  EXPECT_EQ(code_of([] { Value::string("x").compare(Value::integer(1)); }), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of([] { Value::date(1).compare(Value::integer(1)); }), ErrorCode::kTypeMismatch);
  EXPECT_FALSE(Value::integer(3) == Value::real(3.0));
  EXPECT_EQ(Value::string("abcdefghijklmn").as_string(), "abcdefghijklmn");
  EXPECT_EQ(code_of([] { Value::string("abcdefghijklmno"); }), ErrorCode::kInvalidArgument);
}

TEST(Value, DatesRoundTrip) {
  EXPECT_EQ(parse_date("1970-01-01"), 0);
  EXPECT_EQ(format_date(parse_date("1995-06-17")), "1995-06-17");
  EXPECT_EQ(parse_date("2000-03-01") - parse_date("2000-02-28"), 2);  // leap year
  EXPECT_EQ(Value::parse(Kind::kDate, "1992-01-02").to_string(), "1992-01-02");
}

TEST(Value, ParseRejectsGarbage) {
  EXPECT_EQ(code_of([] { Value::parse(Kind::kInt, "12x"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { Value::parse(Kind::kReal, ""); }), ErrorCode::kParse);
  EXPECT_DOUBLE_EQ(Value::parse(Kind::kReal, "0.25").as_real(), 0.25);
}

TEST(Schema, LookupAndHeader) {
  Schema s = Schema::parse("a:int,b:real,c:date,d:string");
  EXPECT_EQ(s.arity(), 4u);
  EXPECT_EQ(s.require("c"), 2u);
  EXPECT_EQ(s.to_header(), "a:int,b:real,c:date,d:string");
  EXPECT_EQ(code_of([&] { s.require("zz"); }), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of([] { Schema({{"a", Kind::kInt}, {"a", Kind::kReal}}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(s.concat(Schema({{"e", Kind::kInt}})).arity(), 5u);
}

TEST(Table, AppendChecksRows) {
  Table t(xy());
  t.append(Tuple{Value::integer(1), Value::integer(2)});
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(code_of([&] { t.append(Tuple{Value::integer(1)}); }), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of([&] { t.append(Tuple{Value::integer(1), Value::real(2)}); }), ErrorCode::kTypeMismatch);
}

TEST(Expr, Arithmetic) {
  Table t(xy());
  t.append(Tuple{Value::integer(2), Value::integer(3)});
  EXPECT_DOUBLE_EQ(BoundExpr::bind(col("x") * col("y"), xy()).eval(t.row(0)), 6.0);
  EXPECT_DOUBLE_EQ(BoundExpr::bind(lit(1), xy()).eval(t.row(0)), 1.0);
  EXPECT_DOUBLE_EQ(BoundExpr::bind((col("x") + lit(4)) / col("y") - lit(1), xy()).eval(t.row(0)), 1.0);

  Schema ps({{"price", Kind::kReal}, {"disc", Kind::kReal}});
  Tuple row{Value::real(10), Value::real(0.1)};
  EXPECT_NEAR(BoundExpr::bind(col("price") * (lit(1) - col("disc")), ps).eval(row), 9.0, 1e-12);
}

TEST(Expr, BindErrors) {
  EXPECT_EQ(code_of([] { BoundExpr::bind(col("nope"), xy()); }), ErrorCode::kTypeMismatch);
  Schema s({{"name", Kind::kString}});
  EXPECT_EQ(code_of([&] { BoundExpr::bind(col("name"), s); }), ErrorCode::kTypeMismatch);
  Tuple zero{Value::integer(0), Value::integer(0)};
  auto e = BoundExpr::bind(lit(1) / col("x"), xy());
  EXPECT_EQ(code_of([&] { e.eval(zero); }), ErrorCode::kDivisionByZero);
  Expr deep = lit(1);
  for (int i = 0; i < 100; ++i) deep = deep + lit(1);
  EXPECT_EQ(code_of([&] { BoundExpr::bind(deep, xy()); }), ErrorCode::kInvalidArgument);
}

TEST(Pred, Semantics) {
  Schema s({{"q", Kind::kInt}});
  Tuple one{Value::integer(1)}, two{Value::integer(2)};
  EXPECT_TRUE(BoundPred::bind(Pred::always(), s).eval(two));
  auto between = BoundPred::bind(Pred::between(Term::column("q"), Term::literal(Value::integer(1)),
                                               Term::literal(Value::integer(1))),
                                 s);
  EXPECT_TRUE(between.eval(one));
  EXPECT_FALSE(between.eval(two));
  Pred a = Pred::compare(Pred::Cmp::kGe, Term::column("q"), Term::literal(Value::integer(1)));
  Pred b = Pred::compare(Pred::Cmp::kLt, Term::column("q"), Term::literal(Value::integer(1)));
  EXPECT_FALSE(BoundPred::bind(a && b, s).eval(one));
  EXPECT_TRUE(BoundPred::bind(a || b, s).eval(one));
  EXPECT_TRUE(BoundPred::bind(!b, s).eval(one));
}

TEST(Pred, TypeChecks) {
  Schema s({{"q", Kind::kInt}, {"d", Kind::kDate}, {"f", Kind::kString}});
  auto cmp = [&](Term l, Term r) { return BoundPred::bind(Pred::compare(Pred::Cmp::kEq, l, r), s); };
  EXPECT_EQ(code_of([&] { cmp(Term::column("d"), Term::literal(Value::integer(3))); }), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of([&] { cmp(Term::column("f"), Term::column("q")); }), ErrorCode::kTypeMismatch);
  EXPECT_EQ(code_of([&] { cmp(Term::column("x"), Term::column("q")); }), ErrorCode::kTypeMismatch);
  Tuple row{Value::integer(5), Value::date(parse_date("1995-01-01")), Value::string("N")};
  EXPECT_TRUE(cmp(Term::column("f"), Term::literal(Value::string("N"))).eval(row));
  EXPECT_TRUE(cmp(Term::column("q"), Term::literal(Value::real(5.0))).eval(row));
}

TEST(Chunk, Sizes) {
  auto sizes = [](std::size_t n, std::size_t cap) {
    std::vector<int64_t> v(n, 1);
    std::vector<std::size_t> out;
    for (const auto& c : chunk_stream(tu::int_table(v), cap)) out.push_back(c.size());
    return out;
  };
  EXPECT_EQ(sizes(10, 4), (std::vector<std::size_t>{4, 4, 2}));
  EXPECT_TRUE(sizes(0, 4).empty());
  EXPECT_EQ(sizes(4, 4), (std::vector<std::size_t>{4}));
  EXPECT_EQ(code_of([] { chunk_stream(tu::int_table({1}), 0); }), ErrorCode::kInvalidArgument);
}

TEST(Chunk, PreservesOrderOwnedAndBorrowed) {
  std::vector<int64_t> v;
  for (int i = 0; i < 37; ++i) v.push_back(i * 7 % 11);
  Table t = tu::int_table(v);
  for (bool borrow : {false, true}) {
    ChunkStream s(t, 5, 3);
    s.set_borrow(borrow);
    std::vector<int64_t> seen;
    uint64_t seq = 0;
    while (auto c = s.next()) {
      EXPECT_EQ(c->sequence_id(), seq++);
      EXPECT_EQ(c->origin_node(), 3u);
      for (std::size_t i = 0; i < c->size(); ++i) seen.push_back(c->row(i)[0].as_int());
    }
    EXPECT_EQ(seen, v);
    EXPECT_EQ(s.remaining(), 0u);
  }
}

TEST(Plan, ParseAndRoundTrip) {
  QueryPlan p = parse_plan(R"({"f": [{"col": "x"}, {"mul": [{"col": "x"}, {"col": "y"}]}],
                               "p": {"and": [{"gt": [{"col": "x"}, 1]}, {"between": [{"col": "y"}, 0, 9]}]},
                               "group_by": ["y"], "model": "multiple", "confidence": 0.9})");
  EXPECT_EQ(p.aggregates.size(), 2u);
  EXPECT_EQ(p.model, EstimationModel::kMultipleStratified);
  EXPECT_DOUBLE_EQ(p.confidence, 0.9);
  QueryPlan q = parse_plan(plan_to_json(p));
  EXPECT_EQ(plan_to_json(q), plan_to_json(p));
  EXPECT_EQ(q.group_by, std::vector<std::string>{"y"});
}

TEST(Plan, Defaults) {
  QueryPlan p = parse_plan("{}");
  ASSERT_EQ(p.aggregates.size(), 1u);
  EXPECT_EQ(p.aggregates[0].op(), Expr::Op::kLiteral);  // COUNT
  EXPECT_EQ(p.model, EstimationModel::kSingleAsync);
  EXPECT_DOUBLE_EQ(p.confidence, 0.95);
}

TEST(Plan, Rejects) {
  EXPECT_EQ(code_of([] { parse_plan("{"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_plan("[]"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_plan(R"({"f": {"pow": [1, 2]}})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_plan(R"({"f": []})"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_plan(R"({"confidence": 1.5})"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_plan(R"({"confidence": 0})"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_plan(R"({"confidence": 0.9999999999999})"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { parse_plan(R"({"model": "bogus"})"); }), ErrorCode::kInvalidArgument);
}

TEST(Dataset, MetaValidation) {
  DatasetMeta m{10, {{0, 4}, {1, 6}}};
  m.validate();
  EXPECT_EQ(m.local_cardinality(1), 6u);
  DatasetMeta bad{11, {{0, 4}, {1, 6}}};
  EXPECT_EQ(code_of([&] { bad.validate(); }), ErrorCode::kInvalidArgument);
  DatasetMeta dup{8, {{0, 4}, {0, 4}}};
  EXPECT_EQ(code_of([&] { dup.validate(); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(meta_from_json(meta_to_json(m)), m);
}

TEST(Dataset, CsvAndPartitionsRoundTrip) {
  tu::TempDir dir;
  Table t(Schema({{"i", Kind::kInt}, {"r", Kind::kReal}, {"d", Kind::kDate}, {"s", Kind::kString}}));
  t.append(Tuple{Value::integer(-3), Value::real(0.1), Value::date(parse_date("1994-02-03")), Value::string("AB")});
  t.append(Tuple{Value::integer(7), Value::real(1e-300), Value::date(0), Value::string("")});
  write_csv(dir.path / "t.csv", t);
  EXPECT_EQ(read_csv(dir.path / "t.csv"), t);

  PartitionedDataset data = tu::split_blocks(t, 2);
  write_partitioned(dir.path / "parts", data);
  PartitionedDataset back = load_partitioned(dir.path / "parts");
  EXPECT_EQ(back.meta, data.meta);
  ASSERT_EQ(back.partitions.size(), 2u);
  EXPECT_EQ(*back.partitions[1], *data.partitions[1]);
}

TEST(Dataset, CsvErrors) {
  tu::TempDir dir;
  EXPECT_EQ(code_of([&] { read_csv(dir.path / "missing.csv"); }), ErrorCode::kIo);
  {
    std::ofstream(dir.path / "bad.csv") << "a:int\n1\nx\n";
  }
  EXPECT_EQ(code_of([&] { read_csv(dir.path / "bad.csv"); }), ErrorCode::kParse);
  {
    std::ofstream(dir.path / "wide.csv") << "a:int\n1,2\n";
  }
  EXPECT_EQ(code_of([&] { read_csv(dir.path / "wide.csv"); }), ErrorCode::kParse);
}
