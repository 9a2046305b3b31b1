#include "olagg/core/chunk.h"

#include <algorithm>

#include "olagg/core/error.h"

namespace olagg {

ChunkStream::ChunkStream(const Table& table, std::size_t capacity, NodeId node)
    : table_(&table), capacity_(capacity), node_(node) {
  if (capacity < 1) raise(ErrorCode::kInvalidArgument, "chunk capacity must be >= 1");
}

std::optional<Chunk> ChunkStream::next() {
  if (position_ >= table_->size()) return std::nullopt;
  std::size_t n = std::min(capacity_, table_->size() - position_);
  if (borrow_) {
    Chunk chunk = Chunk::borrow(*table_, position_, n, next_sequence_++, node_);
    position_ += n;
    return chunk;
  }
  Chunk chunk(table_->schema().arity(), next_sequence_++, node_);
  chunk.reserve(n);
  for (std::size_t i = 0; i < n; ++i) chunk.append(table_->row(position_ + i));
  position_ += n;
  return chunk;
}

std::vector<Chunk> chunk_stream(const Table& table, std::size_t capacity, NodeId node) {
  ChunkStream stream(table, capacity, node);
  std::vector<Chunk> out;
  while (auto c = stream.next()) out.push_back(std::move(*c));
  return out;
}

}  // namespace olagg
