#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "olagg/engine/query.h"

namespace olagg::service {

struct GroupEvent {
  std::string key;  // group values joined with '|'; empty for ungrouped plans
  std::vector<estimation::Outcome<estimation::Estimate>> aggregates;
};

// One message on a query's stream. Numbers are sent as decimal strings.
struct EstimateEvent {
  std::string query_id;
  uint64_t sequence = 0;
  std::vector<GroupEvent> groups;
  std::vector<engine::NodeReport> nodes;
  double sample_fraction = 0;
  uint64_t tuples = 0;
  std::string status;  // running | degraded | stopped | finished
  bool degraded = false;
  bool terminal = false;
  int64_t at_millis = 0;
};

// Running snapshots of a degraded query report "degraded"; terminal ones
// keep finished/stopped and set `degraded`.
EstimateEvent make_event(const std::string& query_id, const engine::Snapshot& snap, uint64_t sequence);

std::string decimal(double v);  // shortest round-trip; "nan", "inf", "-inf"

nlohmann::json to_json(const EstimateEvent& event);

}  // namespace olagg::service
