#include "olagg/core/schema.h"

#include <unordered_set>

#include "olagg/core/error.h"

namespace olagg {

Schema::Schema(std::vector<Column> columns) : columns_(std::move(columns)) {
  std::unordered_set<std::string> seen;
  for (const auto& c : columns_) {
    if (c.name.empty()) raise(ErrorCode::kInvalidArgument, "empty column name");
    if (!seen.insert(c.name).second) raise(ErrorCode::kInvalidArgument, "duplicate column '" + c.name + "'");
  }
}

Schema Schema::parse(std::string_view header) {
  while (!header.empty() && (header.back() == '\r' || header.back() == '\n')) header.remove_suffix(1);
  std::vector<Column> cols;
  std::size_t pos = 0;
  while (pos <= header.size()) {
    std::size_t end = header.find(',', pos);
    if (end == std::string_view::npos) end = header.size();
    std::string_view field = header.substr(pos, end - pos);
    std::size_t colon = field.find(':');
    if (colon == std::string_view::npos) {
      raise(ErrorCode::kParse, "schema field '" + std::string(field) + "' is not name:kind");
    }
    cols.push_back({std::string(field.substr(0, colon)), parse_kind(field.substr(colon + 1))});
    pos = end + 1;
  }
  return Schema(std::move(cols));
}

std::string Schema::to_header() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i].name;
    out += ':';
    out += kind_name(columns_[i].kind);
  }
  return out;
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Schema::require(std::string_view name) const {
  auto idx = index_of(name);
  if (!idx) raise(ErrorCode::kTypeMismatch, "unknown column '" + std::string(name) + "'");
  return *idx;
}

Schema Schema::concat(const Schema& other) const {
  std::vector<Column> cols = columns_;
  cols.insert(cols.end(), other.columns_.begin(), other.columns_.end());
  return Schema(std::move(cols));
}

}  // namespace olagg
