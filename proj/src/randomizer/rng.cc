#include "olagg/randomizer/rng.h"

#include <string>

#include "olagg/core/error.h"

namespace olagg::randomizer {

HashAssigner::HashAssigner(uint32_t buckets) : buckets_(buckets) {
  if (buckets < 1) raise(ErrorCode::kInvalidArgument, "need at least one node");
}

HashAssigner::HashAssigner(uint32_t buckets, Function fn) : buckets_(buckets), fn_(std::move(fn)) {
  if (buckets < 1) raise(ErrorCode::kInvalidArgument, "need at least one node");
}

uint32_t HashAssigner::operator()(uint64_t draw) const {
  if (!fn_) return static_cast<uint32_t>(to_range(draw, buckets_));
  uint32_t b = fn_(draw);
  if (b >= buckets_) {
    raise(ErrorCode::kInvalidArgument, "assigner returned bucket " + std::to_string(b) + " of " +
                                           std::to_string(buckets_));
  }
  return b;
}

}  // namespace olagg::randomizer
