#include "olagg/service/events.h"

#include <charconv>
#include <cmath>

namespace olagg::service {

EstimateEvent make_event(const std::string& query_id, const engine::Snapshot& snap, uint64_t sequence) {
  EstimateEvent e;
  e.query_id = query_id;
  e.sequence = sequence;
  e.sample_fraction = snap.sample_fraction;
  e.tuples = snap.tuples_merged;
  e.degraded = snap.degraded;
  e.terminal = snap.terminal;
  e.at_millis = snap.at_millis;
  e.status = (snap.degraded && !snap.terminal) ? "degraded" : engine::query_status_name(snap.status);
  for (const auto& g : snap.groups) e.groups.push_back({uda::format_key(g.key), g.aggregates});
  e.nodes = snap.nodes;
  return e;
}

std::string decimal(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

nlohmann::json to_json(const EstimateEvent& event) {
  using nlohmann::json;
  json groups = json::array();
  for (const auto& g : event.groups) {
    json aggs = json::array();
    for (const auto& a : g.aggregates) {
      if (a.available()) {
        aggs.push_back({{"available", true},
                        {"estimator", decimal(a->estimator)},
                        {"lower", decimal(a->lower)},
                        {"upper", decimal(a->upper)}});
      } else {
        aggs.push_back({{"available", false},
                        {"reason", estimation::reason_name(a.unavailable().reason)},
                        {"detail", a.unavailable().detail}});
      }
    }
    groups.push_back({{"key", g.key}, {"aggregates", std::move(aggs)}});
  }
  json nodes = json::array();
  for (const auto& n : event.nodes) {
    nodes.push_back({{"id", std::to_string(n.id)},
                     {"status", engine::node_status_name(n.status)},
                     {"consumed", std::to_string(n.consumed)},
                     {"stale", n.stale}});
  }
  return {{"type", "estimate"},
          {"query_id", event.query_id},
          {"sequence", std::to_string(event.sequence)},
          {"status", event.status},
          {"terminal", event.terminal},
          {"degraded", event.degraded},
          {"sample_fraction", decimal(event.sample_fraction)},
          {"tuples", std::to_string(event.tuples)},
          {"at_millis", std::to_string(event.at_millis)},
          {"groups", std::move(groups)},
          {"nodes", std::move(nodes)}};
}

}  // namespace olagg::service
