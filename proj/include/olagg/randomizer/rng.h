#pragma once

#include <cstdint>
#include <functional>

namespace olagg::randomizer {

// splitmix64 finalizer.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// 53 high bits to [0, 1).
inline double to_unit(uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n) by multiply-shift.
inline uint64_t to_range(uint64_t x, uint64_t n) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(x) * n) >> 64);
}

// Counter-based generator: draw(stream, index) is a pure function of the
// seed, so any item's value can be computed independently of the others and
// per-node work splits without coordination. The sequential interface walks
// stream 0.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : seed_(seed) {}

  uint64_t seed() const { return seed_; }

  uint64_t draw(uint64_t stream, uint64_t index) const {
    return mix64(mix64(seed_ ^ mix64(stream)) + index * 0xd1342543de82ef95ull);
  }
  double uniform(uint64_t stream, uint64_t index) const { return to_unit(draw(stream, index)); }

  uint64_t next() { return draw(0, counter_++); }
  double next_unit() { return to_unit(next()); }
  uint64_t next_below(uint64_t n) { return to_range(next(), n); }

  // Independent child generator.
  SeededRng split(uint64_t stream) const { return SeededRng(draw(0xa5a5a5a5ull, stream)); }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

// Maps a per-item 64-bit draw to a bucket in [0, N).
class HashAssigner {
 public:
  using Function = std::function<uint32_t(uint64_t)>;

  // Multiply-shift: uniform buckets for uniform draws. Throws kInvalidArgument
  // when buckets < 1.
  explicit HashAssigner(uint32_t buckets);
  // Caller-supplied mapping, e.g. draw mod 2 in tests. Results outside
  // [0, buckets) throw kInvalidArgument at use.
  HashAssigner(uint32_t buckets, Function fn);

  uint32_t buckets() const { return buckets_; }
  uint32_t operator()(uint64_t draw) const;

 private:
  uint32_t buckets_;
  Function fn_;
};

}  // namespace olagg::randomizer
