#include "olagg/harness/oracle.h"

#include <cmath>
#include <map>

#include "olagg/core/error.h"

namespace olagg::harness {

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

struct KeyLess {
  bool operator()(const uda::GroupKey& a, const uda::GroupKey& b) const { return uda::key_less(a, b); }
};

struct Bound {
  Schema row_schema;
  std::vector<BoundExpr> f;
  BoundPred p;
  std::vector<std::size_t> group;
  std::size_t fact_key = 0;
  std::size_t dim_key = 0;
};

Bound bind(const QueryPlan& plan, const Schema& fact, const Table* dimension) {
  Bound b;
  b.row_schema = fact;
  if (plan.dimension) {
    if (!dimension) raise(ErrorCode::kInvalidArgument, "join plan needs the dimension table");
    b.row_schema = fact.concat(dimension->schema());
    b.fact_key = fact.require(plan.dimension->fact_key);
    b.dim_key = dimension->schema().require(plan.dimension->dim_key);
  }
  for (const Expr& e : plan.aggregates) b.f.push_back(BoundExpr::bind(e, b.row_schema));
  b.p = BoundPred::bind(plan.predicate, b.row_schema);
  for (const auto& g : plan.group_by) b.group.push_back(b.row_schema.require(g));
  return b;
}

// Calls fn(row) for every joined row of one fact tuple.
template <typename Fn>
void for_each_joined(const QueryPlan& plan, const Bound& b, TupleView t, const Table* dimension,
                     std::vector<Value>& scratch, Fn&& fn) {
  if (!plan.dimension) {
    fn(t);
    return;
  }
  scratch.assign(t.begin(), t.end());
  scratch.resize(b.row_schema.arity());
  for (std::size_t j = 0; j < dimension->size(); ++j) {
    TupleView d = dimension->row(j);
    if (!(d[b.dim_key] == t[b.fact_key])) continue;
    std::copy(d.begin(), d.end(), scratch.begin() + static_cast<std::ptrdiff_t>(t.size()));
    fn(TupleView(scratch));
  }
}

}  // namespace

std::vector<uda::GroupValue> brute_force(const QueryPlan& plan, std::span<const Table* const> fact,
                                         const Table* dimension) {
  if (fact.empty()) raise(ErrorCode::kInvalidArgument, "no fact tables");
  const Bound b = bind(plan, fact[0]->schema(), dimension);
  std::map<uda::GroupKey, std::vector<CompensatedSum>, KeyLess> groups;
  if (plan.group_by.empty()) groups[{}].resize(b.f.size());
  std::vector<Value> scratch;
  for (const Table* table : fact) {
    for (std::size_t i = 0; i < table->size(); ++i) {
      for_each_joined(plan, b, table->row(i), dimension, scratch, [&](TupleView row) {
        if (!b.p.eval(row)) return;
        uda::GroupKey key;
        for (std::size_t c : b.group) key.push_back(row[c]);
        auto& sums = groups[key];
        sums.resize(b.f.size());
        for (std::size_t a = 0; a < b.f.size(); ++a) sums[a].add(b.f[a].eval(row));
      });
    }
  }
  std::vector<uda::GroupValue> out;
  for (const auto& [key, sums] : groups) {
    uda::GroupValue g{key, {}};
    for (const auto& s : sums) g.values.push_back(s.value());
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<uda::GroupValue> brute_force(const QueryPlan& plan, const Table& fact, const Table* dimension) {
  const Table* one[] = {&fact};
  return brute_force(plan, std::span<const Table* const>(one), dimension);
}

std::vector<uda::GroupValue> brute_force(const QueryPlan& plan, const PartitionedDataset& data,
                                         const Table* dimension) {
  std::vector<const Table*> tables;
  for (const auto& p : data.partitions) tables.push_back(p.get());
  return brute_force(plan, std::span<const Table* const>(tables), dimension);
}

std::vector<double> contributions(const QueryPlan& plan, const Table& fact, const Table* dimension) {
  if (!plan.group_by.empty()) raise(ErrorCode::kInvalidArgument, "contributions need an ungrouped plan");
  const Bound b = bind(plan, fact.schema(), dimension);
  std::vector<double> out;
  out.reserve(fact.size());
  std::vector<Value> scratch;
  for (std::size_t i = 0; i < fact.size(); ++i) {
    CompensatedSum s;
    for_each_joined(plan, b, fact.row(i), dimension, scratch, [&](TupleView row) {
      if (b.p.eval(row)) s.add(b.f[0].eval(row));
    });
    out.push_back(s.value());
  }
  return out;
}

}  // namespace olagg::harness
