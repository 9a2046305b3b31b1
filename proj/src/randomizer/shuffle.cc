#include "olagg/randomizer/shuffle.h"

#include "olagg/core/error.h"

namespace olagg::randomizer {

namespace {

// Streams of the counter-based generator. Split draws and permutation draws
// never share a stream, so a node does not reuse the origin's values.
constexpr uint64_t kSplitStream = 0x5eed0000ull;
constexpr uint64_t kPermuteStream = 0x9e77000000ull;

}  // namespace

std::vector<std::vector<std::size_t>> split_indices(std::size_t n, const HashAssigner& assigner, const DrawFn& draw) {
  std::vector<std::vector<std::size_t>> out(assigner.buckets());
  for (std::size_t i = 0; i < n; ++i) out[assigner(draw(i))].push_back(i);
  return out;
}

std::vector<std::size_t> permutation_order(std::size_t n, const UnitDrawFn& draw) {
  std::vector<std::pair<double, std::size_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) keyed[i] = {draw(i), i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = keyed[i].second;
  return out;
}

std::vector<Table> random_split(const Table& local, const HashAssigner& assigner, const DrawFn& draw) {
  auto idx = split_indices(local.size(), assigner, draw);
  std::vector<Table> out;
  out.reserve(idx.size());
  for (const auto& frag : idx) {
    Table t(local.schema());
    t.reserve(frag.size());
    for (std::size_t i : frag) t.append_unchecked(local.row(i));
    out.push_back(std::move(t));
  }
  return out;
}

Table random_permutation(std::span<const Table> fragments, const UnitDrawFn& draw) {
  if (fragments.empty()) return Table();
  const Schema& schema = fragments[0].schema();
  std::vector<TupleView> rows;
  for (const Table& f : fragments) {
    if (!(f.schema() == schema)) raise(ErrorCode::kTypeMismatch, "fragments disagree on schema");
    for (std::size_t i = 0; i < f.size(); ++i) rows.push_back(f.row(i));
  }
  Table out(schema);
  out.reserve(rows.size());
  for (std::size_t i : permutation_order(rows.size(), draw)) out.append_unchecked(rows[i]);
  return out;
}

PartitionedDataset globally_randomize(const Table& data, const RandomizeOptions& options) {
  if (options.nodes < 1) raise(ErrorCode::kInvalidArgument, "need at least one node");
  const uint32_t nodes = options.nodes;
  const uint32_t sources = options.source_nodes ? options.source_nodes : nodes;
  if (options.local_only && sources != nodes) {
    raise(ErrorCode::kInvalidArgument, "local-only randomization keeps one partition per origin node");
  }
  const SeededRng rng(options.seed);
  const std::size_t n = data.size();
  auto block_begin = [&](uint32_t s) { return n * s / sources; };

  // Stage 1: each origin splits its block; fragment k goes to node k.
  std::vector<std::vector<Table>> received(nodes);
  for (uint32_t s = 0; s < sources; ++s) {
    Table block(data.schema());
    const std::size_t lo = block_begin(s), hi = block_begin(s + 1);
    block.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) block.append_unchecked(data.row(i));
    if (options.local_only) {
      received[s].push_back(std::move(block));
      continue;
    }
    HashAssigner assigner(nodes);
    auto fragments = random_split(block, assigner, [&](std::size_t i) { return rng.draw(kSplitStream + s, i); });
    for (uint32_t k = 0; k < nodes; ++k) received[k].push_back(std::move(fragments[k]));
  }

  // Stage 2: every node sorts what it received by a fresh draw.
  PartitionedDataset out;
  for (uint32_t k = 0; k < nodes; ++k) {
    Table part = random_permutation(received[k], [&](std::size_t i) { return rng.uniform(kPermuteStream + k, i); });
    if (part.schema().arity() == 0) part = Table(data.schema());
    received[k].clear();
    out.partitions.push_back(std::make_shared<const Table>(std::move(part)));
  }
  out.meta = meta_for(out.partitions);
  return out;
}

}  // namespace olagg::randomizer
