#include "olagg/engine/config.h"

#include <charconv>
#include <cmath>
#include <string>

#include "olagg/core/error.h"

namespace olagg::engine {

void FaultPlan::validate(std::size_t nodes) const {
  for (const auto& [node, ms] : delay_ms_per_chunk) {
    if (node >= nodes) raise(ErrorCode::kInvalidArgument, "delay for unknown node " + std::to_string(node));
    if (!(ms >= 0) || !std::isfinite(ms)) raise(ErrorCode::kInvalidArgument, "chunk delay must be >= 0");
  }
  for (const auto& [node, frac] : kill_after_fraction) {
    if (node >= nodes) raise(ErrorCode::kInvalidArgument, "kill for unknown node " + std::to_string(node));
    if (!(frac >= 0 && frac <= 1)) raise(ErrorCode::kInvalidArgument, "kill fraction must lie in [0, 1]");
  }
}

namespace {

std::pair<NodeId, double> parse_pair(std::string_view text, const char* what) {
  auto colon = text.find(':');
  auto bad = [&] {
    raise(ErrorCode::kInvalidArgument, std::string("expected ") + what + ", got '" + std::string(text) + "'");
  };
  if (colon == std::string_view::npos) bad();
  NodeId node = 0;
  double value = 0;
  auto id = text.substr(0, colon);
  auto rest = text.substr(colon + 1);
  auto r1 = std::from_chars(id.data(), id.data() + id.size(), node);
  auto r2 = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (r1.ec != std::errc() || r1.ptr != id.data() + id.size() || r2.ec != std::errc() ||
      r2.ptr != rest.data() + rest.size()) {
    bad();
  }
  return {node, value};
}

}  // namespace

void parse_delay(std::string_view text, FaultPlan& plan) {
  auto [node, ms] = parse_pair(text, "node:milliseconds");
  plan.delay_ms_per_chunk[node] = ms;
}

void parse_kill(std::string_view text, FaultPlan& plan) {
  auto [node, frac] = parse_pair(text, "node:fraction");
  plan.kill_after_fraction[node] = frac;
}

void EngineConfig::validate(std::size_t nodes) const {
  if (threads_per_node < 1) raise(ErrorCode::kInvalidArgument, "threads per node must be >= 1");
  if (chunk_capacity < 1) raise(ErrorCode::kInvalidArgument, "chunk capacity must be >= 1");
  if (queue_depth < 1) raise(ErrorCode::kInvalidArgument, "queue depth must be >= 1");
  if (snapshot_timeout.count() < 0) raise(ErrorCode::kInvalidArgument, "snapshot timeout must be >= 0");
  faults.validate(nodes);
}

}  // namespace olagg::engine
