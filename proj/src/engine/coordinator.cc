#include "olagg/engine/coordinator.h"

#include "olagg/core/error.h"

namespace olagg::engine {

std::shared_ptr<Query> Coordinator::submit(std::string id, const QueryPlan& plan, const PartitionedDataset& data,
                                           EngineConfig config, std::shared_ptr<const Table> dimension) {
  std::lock_guard lk(mu_);
  if (id.empty()) {
    do {
      id = "q-" + std::to_string(next_id_++);
    } while (queries_.count(id));
  } else if (queries_.count(id)) {
    raise(ErrorCode::kAlreadyExists, "query id '" + id + "' is taken");
  }
  auto q = Query::submit(id, plan, data, std::move(config), std::move(dimension));
  queries_.emplace(id, q);
  return q;
}

std::shared_ptr<Query> Coordinator::find(const std::string& id) const {
  std::lock_guard lk(mu_);
  auto it = queries_.find(id);
  if (it == queries_.end()) raise(ErrorCode::kNotFound, "no query '" + id + "'");
  return it->second;
}

std::vector<std::string> Coordinator::ids() const {
  std::lock_guard lk(mu_);
  std::vector<std::string> out;
  for (const auto& [id, q] : queries_) out.push_back(id);
  return out;
}

}  // namespace olagg::engine
