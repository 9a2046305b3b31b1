#include "olagg/engine/sync_ticket.h"

#include <algorithm>
#include <limits>

namespace olagg::engine {

SyncTicket::SyncTicket(std::vector<uint64_t> local_cardinalities, uint64_t slack_tuples)
    : cardinality_(std::move(local_cardinalities)),
      read_(cardinality_.size(), 0),
      active_(cardinality_.size(), true),
      slack_(slack_tuples) {
  for (std::size_t i = 0; i < cardinality_.size(); ++i) {
    if (cardinality_[i] == 0) active_[i] = false;
  }
}

double SyncTicket::min_active_fraction() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < read_.size(); ++i) {
    if (!active_[i]) continue;
    m = std::min(m, static_cast<double>(read_[i]) / static_cast<double>(cardinality_[i]));
  }
  return m;
}

bool SyncTicket::wait_turn(NodeId node, uint64_t read, const std::atomic<bool>& cancel) {
  std::unique_lock lk(mu_);
  read_[node] = read;
  const double d = static_cast<double>(cardinality_[node]);
  cv_.wait(lk, [&] {
    if (cancel.load()) return true;
    // The slowest node always passes, so somebody can always move.
    return static_cast<double>(read) <= (min_active_fraction() * d) + static_cast<double>(slack_);
  });
  return !cancel.load();
}

void SyncTicket::report(NodeId node, uint64_t read) {
  std::lock_guard lk(mu_);
  read_[node] = read;
  cv_.notify_all();
}

void SyncTicket::retire(NodeId node) {
  std::lock_guard lk(mu_);
  active_[node] = false;
  cv_.notify_all();
}

void SyncTicket::wake() {
  std::lock_guard lk(mu_);
  cv_.notify_all();
}

}  // namespace olagg::engine
