#include "olagg/engine/progress_gate.h"

namespace olagg::engine {

void ProgressGate::advance_to(uint64_t budget) {
  std::lock_guard lk(mu_);
  if (budget > budget_) budget_ = budget;
  cv_.notify_all();
}

bool ProgressGate::acquire(uint64_t tuples, const std::atomic<bool>& cancel) {
  std::unique_lock lk(mu_);
  cv_.wait(lk, [&] { return cancel.load() || granted_ < budget_; });
  if (cancel.load()) return false;
  granted_ += tuples;
  return true;
}

void ProgressGate::complete(uint64_t tuples) {
  std::lock_guard lk(mu_);
  completed_ += tuples;
  cv_.notify_all();
}

void ProgressGate::register_reader() {
  std::lock_guard lk(mu_);
  ++readers_;
}

void ProgressGate::retire_reader() {
  std::lock_guard lk(mu_);
  --readers_;
  cv_.notify_all();
}

void ProgressGate::wait_quiescent() {
  std::unique_lock lk(mu_);
  cv_.wait(lk, [&] { return completed_ >= granted_ && (granted_ >= budget_ || readers_ == 0); });
}

void ProgressGate::wake() {
  std::lock_guard lk(mu_);
  cv_.notify_all();
}

uint64_t ProgressGate::granted() const {
  std::lock_guard lk(mu_);
  return granted_;
}

uint64_t ProgressGate::completed() const {
  std::lock_guard lk(mu_);
  return completed_;
}

}  // namespace olagg::engine
