#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "olagg/core/chunk.h"
#include "olagg/core/plan.h"
#include "olagg/uda/serde.h"
#include "olagg/uda/sum.h"

namespace olagg::uda {

// Values of the grouping columns, in plan order. Empty for ungrouped plans.
using GroupKey = std::vector<Value>;

struct GroupKeyHash {
  std::size_t operator()(const GroupKey& key) const {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const Value& v : key) h = (h ^ v.hash()) * 0x100000001b3ull;
    return h;
  }
};

// Lexicographic order with Value::compare.
bool key_less(const GroupKey& a, const GroupKey& b);
std::string format_key(const GroupKey& key);

enum class GlaKind : uint8_t { kSum = 1, kGroupBy = 2, kJoin = 3 };
inline constexpr uint8_t kStateVersion = 1;

// Exact aggregate values for one group, one entry per aggregate expression.
struct GroupValue {
  GroupKey key;
  std::vector<double> values;
};

struct GroupEstimate {
  GroupKey key;
  std::vector<Outcome<Estimate>> aggregates;
};

struct EstimateContext {
  EstimationModel model = EstimationModel::kSingleAsync;
  double confidence = 0.95;
  uint64_t population = 0;  // global |D|; unused by the stratified model
};

struct BoundQuery;

// Aggregate state with the extended interface: the classical
// init/accumulate/merge/terminate plus transfer and estimation hooks.
// One writer at a time.
class Gla {
 public:
  virtual ~Gla() = default;

  virtual GlaKind kind() const = 0;
  virtual const BoundQuery& query() const = 0;

  // Resets to the empty state.
  virtual void init() = 0;
  virtual void accumulate(TupleView t) = 0;
  virtual void accumulate_chunk(const Chunk& chunk) {
    for (std::size_t i = 0; i < chunk.size(); ++i) accumulate(chunk.row(i));
  }
  // this <- this (+) other. Both must come from the same binding.
  virtual void merge(const Gla& other) = 0;
  // Exact values over everything accumulated, sorted by key.
  virtual std::vector<GroupValue> terminate() const = 0;

  virtual void serialize(ByteWriter& w) const = 0;
  // Replaces this state. Throws kMalformedBytes / kVersionMismatch.
  virtual void deserialize(ByteReader& r) = 0;

  // Stratified support: fix the local estimator with |D_i|, then combine
  // terminated states. A lost stratum is marked undefined.
  virtual void estimator_terminate(uint64_t local_cardinality) = 0;
  virtual void estimator_merge(const Gla& other) = 0;
  virtual void mark_stratum_undefined() = 0;

  // Per-group estimates, sorted by key.
  virtual std::vector<GroupEstimate> estimate(const EstimateContext& ctx) const = 0;

  // |S|: sampling units (fact tuples) consumed.
  virtual uint64_t tuples_seen() const = 0;
  virtual std::size_t group_count() const = 0;

  virtual std::unique_ptr<Gla> clone() const = 0;
  // Empty state with the same binding.
  virtual std::unique_ptr<Gla> fresh() const = 0;

  virtual bool equals(const Gla& other) const = 0;
};

std::unique_ptr<Gla> merge(const Gla& a, const Gla& b);
std::unique_ptr<Gla> estimator_merge(const Gla& a, const Gla& b);

std::vector<std::byte> serialize(const Gla& gla);
// Decodes bytes into a fresh state built from `prototype`'s binding. The whole
// buffer must be consumed.
std::unique_ptr<Gla> deserialize(const Gla& prototype, std::span<const std::byte> bytes);

// Reads and checks the tag and version byte.
void read_header(ByteReader& r, GlaKind expected);
void write_header(ByteWriter& w, GlaKind kind);

}  // namespace olagg::uda
