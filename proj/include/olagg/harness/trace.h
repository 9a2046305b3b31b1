#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "olagg/engine/query.h"

namespace olagg::harness {

// One row per (snapshot, group, aggregate).
struct TracePoint {
  int64_t time_ms = 0;  // since query start
  uint64_t ticket = 0;
  std::string group;
  std::size_t aggregate = 0;
  bool available = false;
  double estimator = 0;
  double lower = 0;
  double upper = 0;
  double relative_width = 0;
  double sample_fraction = 0;
  std::optional<bool> covered;  // set when the truth is known
  std::string status;           // running | stopped | finished
  bool degraded = false;
};

// Points of one snapshot. `truth`, when given, is the exact per-group result;
// groups are matched by key.
std::vector<TracePoint> trace_points(const engine::Snapshot& snap, int64_t started_at_millis,
                                     const std::vector<uda::GroupValue>* truth);

// Snapshots the query every `period` until it terminates; the terminal
// snapshot is the last batch of points.
std::vector<TracePoint> run_trace(engine::Query& query, std::chrono::milliseconds period,
                                  const std::vector<uda::GroupValue>* truth = nullptr);

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& points);

}  // namespace olagg::harness
