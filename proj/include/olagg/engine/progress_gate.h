#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <limits>
#include <mutex>

namespace olagg::engine {

// Global tuple budget shared by the readers of one query. Readers acquire a
// chunk's worth before pushing it; workers report completion. Experiments use
// it to stop every node at a common sample size, take a snapshot, then
// advance. A grant never splits a chunk, so the budget can be overshot by
// less than one chunk per reader.
class ProgressGate {
 public:
  static constexpr uint64_t kUnlimited = std::numeric_limits<uint64_t>::max();

  explicit ProgressGate(uint64_t budget = 0) : budget_(budget) {}

  void advance_to(uint64_t budget);
  void open() { advance_to(kUnlimited); }

  // Blocks until the budget admits more tuples. False when `cancel` is set.
  bool acquire(uint64_t tuples, const std::atomic<bool>& cancel);
  void complete(uint64_t tuples);

  void register_reader();
  void retire_reader();

  // Waits until every granted tuple was processed and no reader can take
  // more under the current budget.
  void wait_quiescent();

  void wake();

  uint64_t granted() const;
  uint64_t completed() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  uint64_t budget_;
  uint64_t granted_ = 0;
  uint64_t completed_ = 0;
  int readers_ = 0;
};

}  // namespace olagg::engine
