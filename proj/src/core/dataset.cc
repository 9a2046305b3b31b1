#include "olagg/core/dataset.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "olagg/core/error.h"

namespace olagg {

using nlohmann::json;

void DatasetMeta::validate() const {
  uint64_t sum = 0;
  std::set<NodeId> ids;
  for (const auto& p : partitions) {
    sum += p.local_cardinality;
    if (!ids.insert(p.node_id).second) {
      raise(ErrorCode::kInvalidArgument, "duplicate partition for node " + std::to_string(p.node_id));
    }
  }
  if (sum != total_cardinality) {
    raise(ErrorCode::kInvalidArgument, "total cardinality " + std::to_string(total_cardinality) +
                                           " differs from the sum of partition cardinalities " + std::to_string(sum));
  }
}

uint64_t DatasetMeta::local_cardinality(NodeId node) const {
  for (const auto& p : partitions) {
    if (p.node_id == node) return p.local_cardinality;
  }
  raise(ErrorCode::kNotFound, "no partition for node " + std::to_string(node));
}

DatasetMeta meta_for(const std::vector<std::shared_ptr<const Table>>& partitions) {
  DatasetMeta meta;
  for (std::size_t i = 0; i < partitions.size(); ++i) {
    meta.partitions.push_back({static_cast<NodeId>(i), partitions[i]->size()});
    meta.total_cardinality += partitions[i]->size();
  }
  return meta;
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::kParse, path.string() + ": missing schema header");
  Table table(Schema::parse(line));
  const Schema& schema = table.schema();
  std::vector<Value> row(schema.arity());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < schema.arity(); ++c) {
      std::size_t end = line.find(',', pos);
      bool last = c + 1 == schema.arity();
      if ((end == std::string::npos) != last) {
        raise(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(schema.arity()) + " fields");
      }
      if (last) end = line.size();
      try {
        row[c] = Value::parse(schema.column(c).kind, std::string_view(line).substr(pos, end - pos));
      } catch (const Error& e) {
        raise(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
      pos = end + 1;
    }
    table.append_unchecked(row);
  }
  return table;
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::kIo, "cannot write " + path.string());
  out << table.schema().to_header() << '\n';
  std::string line;
  for (std::size_t r = 0; r < table.size(); ++r) {
    line.clear();
    TupleView row = table.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += ',';
      line += row[c].to_string();
    }
    line += '\n';
    out << line;
  }
  if (!out) raise(ErrorCode::kIo, "write failed for " + path.string());
}

std::string meta_to_json(const DatasetMeta& meta) {
  json parts = json::array();
  for (const auto& p : meta.partitions) {
    parts.push_back({{"node_id", p.node_id}, {"local_cardinality", p.local_cardinality}});
  }
  return json{{"total_cardinality", meta.total_cardinality}, {"partitions", parts}}.dump(2);
}

DatasetMeta meta_from_json(const std::string& text) {
  DatasetMeta meta;
  try {
    json doc = json::parse(text);
    meta.total_cardinality = doc.at("total_cardinality").get<uint64_t>();
    for (const auto& p : doc.at("partitions")) {
      meta.partitions.push_back({p.at("node_id").get<NodeId>(), p.at("local_cardinality").get<uint64_t>()});
    }
  } catch (const json::exception& e) {
    raise(ErrorCode::kParse, std::string("malformed meta.json: ") + e.what());
  }
  meta.validate();
  return meta;
}

void write_partitioned(const std::filesystem::path& dir, const PartitionedDataset& data) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < data.partitions.size(); ++i) {
    write_csv(dir / ("part-" + std::to_string(data.meta.partitions[i].node_id) + ".csv"), *data.partitions[i]);
  }
  std::ofstream out(dir / "meta.json");
  if (!out) raise(ErrorCode::kIo, "cannot write " + (dir / "meta.json").string());
  out << meta_to_json(data.meta) << '\n';
}

PartitionedDataset load_partitioned(const std::filesystem::path& dir) {
  std::ifstream in(dir / "meta.json");
  if (!in) raise(ErrorCode::kNotFound, "missing " + (dir / "meta.json").string());
  std::stringstream buf;
  buf << in.rdbuf();
  PartitionedDataset data;
  data.meta = meta_from_json(buf.str());
  for (const auto& p : data.meta.partitions) {
    auto path = dir / ("part-" + std::to_string(p.node_id) + ".csv");
    if (!std::filesystem::exists(path)) raise(ErrorCode::kNotFound, "missing partition " + path.string());
    auto table = std::make_shared<Table>(read_csv(path));
    if (table->size() != p.local_cardinality) {
      raise(ErrorCode::kInvalidArgument, path.string() + " holds " + std::to_string(table->size()) +
                                             " rows but meta.json records " + std::to_string(p.local_cardinality));
    }
    if (!data.partitions.empty() && !(table->schema() == data.partitions.front()->schema())) {
      raise(ErrorCode::kInvalidArgument, path.string() + " has a different schema");
    }
    data.partitions.push_back(std::move(table));
  }
  if (data.partitions.empty()) raise(ErrorCode::kInvalidArgument, "dataset has no partitions");
  return data;
}

}  // namespace olagg
