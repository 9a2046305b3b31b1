#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "olagg/core/expr.h"
#include "olagg/core/pred.h"

namespace olagg {

enum class EstimationModel {
  kSingleAsync,         // one estimator over the union of node samples
  kMultipleStratified,  // one estimator per partition, summed
  kSingleSynchronized,  // single estimator with lock-step sampling across nodes
};

const char* model_name(EstimationModel model);  // "single" | "multiple" | "sync"
EstimationModel parse_model(std::string_view name);

// Replicated in-memory dimension table joined on equality of one column.
struct DimensionSpec {
  std::string path;  // CSV file; may be empty when the caller supplies the table
  std::string fact_key;
  std::string dim_key;
};

// SELECT group_by, SUM(f_1), ..., SUM(f_k) FROM fact [JOIN dimension] WHERE p GROUP BY group_by
struct QueryPlan {
  std::vector<Expr> aggregates{Expr::literal(1)};
  Pred predicate = Pred::always();
  std::vector<std::string> group_by;
  std::optional<DimensionSpec> dimension;
  EstimationModel model = EstimationModel::kSingleAsync;
  double confidence = 0.95;
};

// JSON plan document: fields f, p, group_by, dimension, model, confidence.
// Throws kParse on malformed documents and kInvalidArgument on bad values.
QueryPlan parse_plan(std::string_view json_text);
std::string plan_to_json(const QueryPlan& plan);

// Accepts confidence strictly inside (0, 1) and below kMaxConfidence, where
// the normal quantile is still finite in double precision.
inline constexpr double kMaxConfidence = 1.0 - 1e-12;
void validate_confidence(double confidence);

}  // namespace olagg
