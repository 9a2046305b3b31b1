#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "olagg/engine/query.h"

namespace olagg::engine {

// Registry of queries by id.
class Coordinator {
 public:
  // An empty id gets a generated one ("q-1", "q-2", ...). Throws
  // kAlreadyExists for a taken id, plus everything Query::submit throws.
  std::shared_ptr<Query> submit(std::string id, const QueryPlan& plan, const PartitionedDataset& data,
                                EngineConfig config = {}, std::shared_ptr<const Table> dimension = nullptr);

  // Throws kNotFound.
  std::shared_ptr<Query> find(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Query>> queries_;
  uint64_t next_id_ = 1;
};

}  // namespace olagg::engine
