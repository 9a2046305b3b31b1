#include "olagg/engine/worker_node.h"

#include <chrono>
#include <cmath>

#include "olagg/core/error.h"

namespace olagg::engine {

const char* node_status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::kLoading: return "loading";
    case NodeStatus::kRunning: return "running";
    case NodeStatus::kMergingFinal: return "merging_final";
    case NodeStatus::kFinished: return "finished";
    case NodeStatus::kDead: return "dead";
  }
  return "?";
}

WorkerNode::WorkerNode(NodeOptions options, std::shared_ptr<const Table> partition,
                       std::unique_ptr<uda::Gla> prototype)
    : options_(std::move(options)),
      partition_(std::move(partition)),
      prototype_(std::move(prototype)),
      queue_(options_.queue_depth) {
  if (options_.threads < 1) raise(ErrorCode::kInvalidArgument, "a node needs at least one worker thread");
  prototype_->init();
  final_future_ = final_promise_.get_future().share();
}

WorkerNode::~WorkerNode() {
  stop();
  join();
}

void WorkerNode::start() {
  if (started_) return;
  started_ = true;
  status_ = NodeStatus::kRunning;
  active_workers_ = static_cast<int>(options_.threads);
  if (options_.gate) options_.gate->register_reader();
  reader_ = std::thread([this] { reader_loop(); });
  for (uint32_t i = 0; i < options_.threads; ++i) workers_.emplace_back([this] { worker_loop(); });
}

void WorkerNode::stop() {
  {
    std::lock_guard lk(stop_mu_);
    stop_ = true;
  }
  stop_cv_.notify_all();
  queue_.close();
  if (options_.sync) options_.sync->wake();
  if (options_.gate) options_.gate->wake();
}

void WorkerNode::join() {
  if (reader_.joinable()) reader_.join();
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
  if (!started_) {
    // Never started: still owe a terminal reply.
    std::lock_guard lk(mu_);
    if (status_ != NodeStatus::kFinished && status_ != NodeStatus::kDead) {
      started_ = true;
      status_ = NodeStatus::kFinished;
      final_promise_.set_value(reply_for(prototype_.get(), 0, true));
    }
  }
}

std::string WorkerNode::failure() const {
  std::lock_guard lk(mu_);
  return failure_;
}

void WorkerNode::die() {
  dead_ = true;
  queue_.close();
}

void WorkerNode::reader_loop() {
  const uint64_t cardinality = partition_->size();
  const bool killable = options_.kill_after_fraction.has_value();
  const uint64_t kill_at =
      killable ? static_cast<uint64_t>(std::ceil(options_.kill_after_fraction.value_or(0) * cardinality)) : 0;
  ChunkStream stream(*partition_, options_.chunk_capacity, options_.id);
  stream.set_borrow(true);
  uint64_t read = 0;
  while (!stop_ && !dead_) {
    if (killable && read >= kill_at && (kill_at < cardinality || cardinality == 0)) {
      die();
      break;
    }
    auto chunk = stream.next();
    if (!chunk) break;
    const uint64_t n = chunk->size();
    if (options_.sync && !options_.sync->wait_turn(options_.id, read, stop_)) break;
    if (options_.gate && !options_.gate->acquire(n, stop_)) break;
    if (!queue_.push(std::move(*chunk))) {
      if (options_.gate) options_.gate->complete(n);
      break;
    }
    read += n;
    if (options_.sync) options_.sync->report(options_.id, read);
  }
  // A kill fraction of 1 fires after the last chunk.
  if (killable && !stop_ && read >= kill_at && read == cardinality && cardinality > 0) die();
  queue_.close();
  if (options_.sync) options_.sync->retire(options_.id);
  if (options_.gate) options_.gate->retire_reader();
}

WorkerNode::Checkout WorkerNode::checkout() {
  std::lock_guard lk(mu_);
  Checkout c;
  if (idle_.empty()) {
    c.state = prototype_->fresh();
  } else {
    c.state = std::move(idle_.back());
    idle_.pop_back();
  }
  c.generation = generation_;
  ++checked_out_;
  return c;
}

void WorkerNode::give_back(Checkout c) {
  std::lock_guard lk(mu_);
  if (c.generation == generation_) {
    --checked_out_;
    if (retained_) {
      c.state->merge(*retained_);
      retained_.reset();
    }
    idle_.push_back(std::move(c.state));
    return;
  }
  // Checked out before the pending snapshot started: it belongs to it.
  pending_->collected.push_back(std::move(c.state));
  if (--pending_->awaiting == 0) finish_snapshot_locked();
}

SnapshotReplyMsg WorkerNode::reply_for(const uda::Gla* state, uint64_t ticket, bool final) const {
  SnapshotReplyMsg r;
  r.query_id = options_.query_id;
  r.ticket = ticket;
  r.node = options_.id;
  r.final = final;
  if (dead_ || !state) {
    r.status = NodeStatus::kDead;
    return r;
  }
  r.status = final ? NodeStatus::kFinished : status_.load();
  r.tuples = state->tuples_seen();
  r.state = uda::serialize(*state);
  return r;
}

std::shared_future<SnapshotReplyMsg> WorkerNode::request_snapshot(const SnapshotRequestMsg& request) {
  std::lock_guard lk(mu_);
  const NodeStatus s = status_.load();
  if (s == NodeStatus::kMergingFinal || is_terminal(s)) return final_future_;
  if (dead_) {
    std::promise<SnapshotReplyMsg> p;
    p.set_value(reply_for(nullptr, request.ticket, false));
    return p.get_future().share();
  }
  if (pending_) return pending_->future;

  pending_.emplace();
  pending_->ticket = request.ticket;
  pending_->future = pending_->promise.get_future().share();
  pending_->collected = std::move(idle_);
  idle_.clear();
  pending_->awaiting = checked_out_;
  checked_out_ = 0;
  ++generation_;
  auto future = pending_->future;
  if (pending_->awaiting == 0) finish_snapshot_locked();
  return future;
}

void WorkerNode::finish_snapshot_locked() {
  PendingSnapshot snap = std::move(*pending_);
  pending_.reset();

  std::unique_ptr<uda::Gla> merged = retained_ ? std::move(retained_) : prototype_->fresh();
  for (auto& s : snap.collected) {
    merged->merge(*s);
    s->init();
  }
  SnapshotReplyMsg reply = reply_for(merged.get(), snap.ticket, false);
  retained_ = std::move(merged);
  // Emptied states go back to the list; at most one per worker is kept.
  for (auto& s : snap.collected) {
    if (idle_.size() < options_.threads) idle_.push_back(std::move(s));
  }
  snap.promise.set_value(std::move(reply));
}

void WorkerNode::worker_loop() {
  const auto delay = std::chrono::duration<double, std::milli>(options_.delay_ms_per_chunk);
  while (auto chunk = queue_.pop()) {
    const uint64_t n = chunk->size();
    if (stop_ || dead_) {
      if (options_.gate) options_.gate->complete(n);
      continue;
    }
    Checkout c = checkout();
    try {
      if (options_.sync) {
        for (std::size_t i = 0; i < n; ++i) {
          options_.sync->take();
          c.state->accumulate(chunk->row(i));
        }
      } else {
        c.state->accumulate_chunk(*chunk);
      }
    } catch (const std::exception& e) {
      {
        std::lock_guard lk(mu_);
        if (failure_.empty()) failure_ = e.what();
      }
      die();
    }
    give_back(std::move(c));
    consumed_ += n;
    if (options_.gate) options_.gate->complete(n);
    if (options_.delay_ms_per_chunk > 0 && !dead_) {
      std::unique_lock lk(stop_mu_);
      stop_cv_.wait_for(lk, delay, [&] { return stop_.load(); });
    }
  }
  if (--active_workers_ == 0) finalize();
}

void WorkerNode::finalize() {
  std::lock_guard lk(mu_);
  if (dead_) {
    status_ = NodeStatus::kDead;
    idle_.clear();
    retained_.reset();
    final_promise_.set_value(reply_for(nullptr, 0, true));
    return;
  }
  status_ = NodeStatus::kMergingFinal;
  std::unique_ptr<uda::Gla> final_state = retained_ ? std::move(retained_) : prototype_->fresh();
  for (auto& s : idle_) final_state->merge(*s);
  idle_.clear();
  SnapshotReplyMsg reply = reply_for(final_state.get(), 0, true);
  status_ = NodeStatus::kFinished;
  final_promise_.set_value(std::move(reply));
}

}  // namespace olagg::engine
