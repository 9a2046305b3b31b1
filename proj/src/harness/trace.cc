#include "olagg/harness/trace.h"

#include <charconv>
#include <cmath>
#include <limits>

#include "olagg/core/error.h"

namespace olagg::harness {

namespace {

const uda::GroupValue* find_truth(const std::vector<uda::GroupValue>& truth, const uda::GroupKey& key) {
  for (const auto& g : truth) {
    if (g.key == key) return &g;
  }
  return nullptr;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::vector<TracePoint> trace_points(const engine::Snapshot& snap, int64_t started_at_millis,
                                     const std::vector<uda::GroupValue>* truth) {
  std::vector<TracePoint> out;
  for (const auto& g : snap.groups) {
    const uda::GroupValue* t = truth ? find_truth(*truth, g.key) : nullptr;
    for (std::size_t a = 0; a < g.aggregates.size(); ++a) {
      TracePoint p;
      p.time_ms = snap.at_millis - started_at_millis;
      p.ticket = snap.ticket;
      p.group = uda::format_key(g.key);
      p.aggregate = a;
      p.sample_fraction = snap.sample_fraction;
      p.status = engine::query_status_name(snap.status);
      p.degraded = snap.degraded;
      const auto& o = g.aggregates[a];
      p.available = o.available();
      if (p.available) {
        p.estimator = o->estimator;
        p.lower = o->lower;
        p.upper = o->upper;
        p.relative_width = o->relative_width();
      } else {
        p.estimator = p.lower = p.upper = std::nan("");
        p.relative_width = std::numeric_limits<double>::infinity();
      }
      if (truth) {
        // A group the truth lacks has true value 0.
        const double v = t ? t->values.at(a) : 0.0;
        p.covered = p.available && o->contains(v);
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<TracePoint> run_trace(engine::Query& query, std::chrono::milliseconds period,
                                  const std::vector<uda::GroupValue>* truth) {
  if (period.count() <= 0) raise(ErrorCode::kInvalidArgument, "snapshot period must be > 0");
  std::vector<TracePoint> out;
  while (!query.wait_for(period)) {
    engine::Snapshot s = query.request_partial();
    if (s.terminal) break;
    auto pts = trace_points(s, query.started_at_millis(), truth);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  auto pts = trace_points(query.wait(), query.started_at_millis(), truth);
  out.insert(out.end(), pts.begin(), pts.end());
  return out;
}

void write_trace_csv(std::ostream& out, const std::vector<TracePoint>& points) {
  out << "time_ms,ticket,group,aggregate,available,estimator,lower,upper,relative_width,sample_fraction,covered,"
         "status,degraded\n";
  for (const auto& p : points) {
    out << p.time_ms << ',' << p.ticket << ',' << p.group << ',' << p.aggregate << ',' << (p.available ? 1 : 0)
        << ',' << num(p.estimator) << ',' << num(p.lower) << ',' << num(p.upper) << ',' << num(p.relative_width)
        << ',' << num(p.sample_fraction) << ',' << (p.covered ? (*p.covered ? "1" : "0") : "") << ',' << p.status
        << ',' << (p.degraded ? 1 : 0) << '\n';
  }
}

}  // namespace olagg::harness
