#include "olagg/core/plan.h"

#include <cmath>

#include "json.hpp"
#include "olagg/core/error.h"

namespace olagg {

using nlohmann::json;

const char* model_name(EstimationModel model) {
  switch (model) {
    case EstimationModel::kSingleAsync: return "single";
    case EstimationModel::kMultipleStratified: return "multiple";
    case EstimationModel::kSingleSynchronized: return "sync";
  }
  return "?";
}

EstimationModel parse_model(std::string_view name) {
  if (name == "single") return EstimationModel::kSingleAsync;
  if (name == "multiple") return EstimationModel::kMultipleStratified;
  if (name == "sync") return EstimationModel::kSingleSynchronized;
  raise(ErrorCode::kInvalidArgument, "model must be single, multiple or sync; got '" + std::string(name) + "'");
}

void validate_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence <= kMaxConfidence)) {
    raise(ErrorCode::kInvalidArgument, "confidence must lie in (0, 1), got " + std::to_string(confidence));
  }
}

namespace {

[[noreturn]] void bad(const std::string& what, const json& j) {
  raise(ErrorCode::kParse, what + ": " + j.dump());
}

std::optional<Expr::Op> arith_op(const std::string& key) {
  if (key == "add" || key == "+") return Expr::Op::kAdd;
  if (key == "sub" || key == "-") return Expr::Op::kSub;
  if (key == "mul" || key == "*") return Expr::Op::kMul;
  if (key == "div" || key == "/") return Expr::Op::kDiv;
  return std::nullopt;
}

Expr parse_expr(const json& j) {
  if (j.is_number()) return Expr::literal(j.get<double>());
  if (!j.is_object() || j.size() != 1) bad("expression must be a number or a one-key object", j);
  const std::string key = j.begin().key();
  const json& arg = j.begin().value();
  if (key == "col") {
    if (!arg.is_string()) bad("col expects a column name", j);
    return Expr::column(arg.get<std::string>());
  }
  auto op = arith_op(key);
  if (!op) bad("unknown expression operator '" + key + "'", j);
  if (!arg.is_array() || arg.size() < 2) bad("arithmetic operators take an array of >= 2 operands", j);
  Expr acc = parse_expr(arg[0]);
  for (std::size_t i = 1; i < arg.size(); ++i) acc = Expr::binary(*op, std::move(acc), parse_expr(arg[i]));
  return acc;
}

json expr_to_json(const Expr& e) {
  switch (e.op()) {
    case Expr::Op::kColumn: return {{"col", e.column_name()}};
    case Expr::Op::kLiteral: return e.literal_value();
    case Expr::Op::kAdd: return {{"add", {expr_to_json(e.lhs()), expr_to_json(e.rhs())}}};
    case Expr::Op::kSub: return {{"sub", {expr_to_json(e.lhs()), expr_to_json(e.rhs())}}};
    case Expr::Op::kMul: return {{"mul", {expr_to_json(e.lhs()), expr_to_json(e.rhs())}}};
    case Expr::Op::kDiv: return {{"div", {expr_to_json(e.lhs()), expr_to_json(e.rhs())}}};
  }
  return nullptr;
}

Term parse_term(const json& j) {
  if (j.is_number_integer()) return Term::literal(Value::integer(j.get<int64_t>()));
  if (j.is_number()) return Term::literal(Value::real(j.get<double>()));
  if (j.is_object() && j.size() == 1) {
    const std::string key = j.begin().key();
    const json& arg = j.begin().value();
    if (key == "col") {
      if (!arg.is_string()) bad("col expects a column name", j);
      return Term::column(arg.get<std::string>());
    }
    if (key == "date") {
      if (!arg.is_string()) bad("date expects YYYY-MM-DD", j);
      return Term::literal(Value::date(parse_date(arg.get<std::string>())));
    }
    if (key == "str") {
      if (!arg.is_string()) bad("str expects a string", j);
      return Term::literal(Value::string(arg.get<std::string>()));
    }
    if (arith_op(key)) return Term::expr(parse_expr(j));
  }
  bad("unrecognised comparison operand", j);
}

json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Kind::kInt: return v.as_int();
    case Kind::kReal: return v.as_real();
    case Kind::kDate: return {{"date", format_date(v.as_date())}};
    case Kind::kString: return {{"str", std::string(v.as_string())}};
  }
  return nullptr;
}

json term_to_json(const Term& t) {
  const auto& repr = t.repr();
  if (auto* c = std::get_if<Term::ColumnRef>(&repr)) return {{"col", c->name}};
  if (auto* v = std::get_if<Value>(&repr)) return value_to_json(*v);
  return expr_to_json(std::get<Expr>(repr));
}

std::optional<Pred::Cmp> cmp_op(const std::string& key) {
  if (key == "eq" || key == "=") return Pred::Cmp::kEq;
  if (key == "lt" || key == "<") return Pred::Cmp::kLt;
  if (key == "le" || key == "<=") return Pred::Cmp::kLe;
  if (key == "gt" || key == ">") return Pred::Cmp::kGt;
  if (key == "ge" || key == ">=") return Pred::Cmp::kGe;
  return std::nullopt;
}

Pred parse_pred(const json& j) {
  if (j.is_boolean()) {
    if (j.get<bool>()) return Pred::always();
    return Pred::negation(Pred::always());
  }
  if (!j.is_object() || j.size() != 1) bad("predicate must be true/false or a one-key object", j);
  const std::string key = j.begin().key();
  const json& arg = j.begin().value();
  if (key == "and" || key == "or") {
    if (!arg.is_array() || arg.empty()) bad(key + " expects a non-empty array", j);
    std::vector<Pred> parts;
    for (const auto& p : arg) parts.push_back(parse_pred(p));
    return key == "and" ? Pred::conjunction(std::move(parts)) : Pred::disjunction(std::move(parts));
  }
  if (key == "not") return Pred::negation(parse_pred(arg));
  if (key == "between") {
    if (!arg.is_array() || arg.size() != 3) bad("between expects [value, lo, hi]", j);
    return Pred::between(parse_term(arg[0]), parse_term(arg[1]), parse_term(arg[2]));
  }
  if (auto cmp = cmp_op(key)) {
    if (!arg.is_array() || arg.size() != 2) bad(key + " expects [lhs, rhs]", j);
    return Pred::compare(*cmp, parse_term(arg[0]), parse_term(arg[1]));
  }
  bad("unknown predicate operator '" + key + "'", j);
}

json pred_to_json(const Pred& p) {
  static const char* kCmp[] = {"eq", "lt", "le", "gt", "ge"};
  switch (p.op()) {
    case Pred::Op::kTrue: return true;
    case Pred::Op::kCompare:
      return {{kCmp[static_cast<int>(p.cmp())], {term_to_json(p.terms()[0]), term_to_json(p.terms()[1])}}};
    case Pred::Op::kBetween:
      return {{"between",
               {term_to_json(p.terms()[0]), term_to_json(p.terms()[1]), term_to_json(p.terms()[2])}}};
    case Pred::Op::kNot: return {{"not", pred_to_json(p.children()[0])}};
    case Pred::Op::kAnd:
    case Pred::Op::kOr: {
      json parts = json::array();
      for (const auto& c : p.children()) parts.push_back(pred_to_json(c));
      return {{p.op() == Pred::Op::kAnd ? "and" : "or", parts}};
    }
  }
  return nullptr;
}

}  // namespace

QueryPlan parse_plan(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::kParse, std::string("plan is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) raise(ErrorCode::kParse, "plan must be a JSON object");

  QueryPlan plan;
  try {
    if (doc.contains("f")) {
      const json& f = doc["f"];
      plan.aggregates.clear();
      if (f.is_array()) {
        for (const auto& e : f) plan.aggregates.push_back(parse_expr(e));
      } else {
        plan.aggregates.push_back(parse_expr(f));
      }
      if (plan.aggregates.empty()) raise(ErrorCode::kInvalidArgument, "plan needs at least one aggregate in f");
    }
    if (doc.contains("p")) plan.predicate = parse_pred(doc["p"]);
    if (doc.contains("group_by")) {
      for (const auto& g : doc["group_by"]) plan.group_by.push_back(g.get<std::string>());
    }
    if (doc.contains("dimension") && !doc["dimension"].is_null()) {
      const json& d = doc["dimension"];
      DimensionSpec dim;
      dim.path = d.value("path", "");
      dim.fact_key = d.at("fact_key").get<std::string>();
      dim.dim_key = d.at("dim_key").get<std::string>();
      plan.dimension = dim;
    }
    if (doc.contains("model")) plan.model = parse_model(doc["model"].get<std::string>());
    if (doc.contains("confidence")) plan.confidence = doc["confidence"].get<double>();
  } catch (const json::exception& e) {
    raise(ErrorCode::kParse, std::string("malformed plan field: ") + e.what());
  }
  validate_confidence(plan.confidence);
  return plan;
}

std::string plan_to_json(const QueryPlan& plan) {
  json doc;
  json f = json::array();
  for (const auto& e : plan.aggregates) f.push_back(expr_to_json(e));
  doc["f"] = f;
  doc["p"] = pred_to_json(plan.predicate);
  doc["group_by"] = plan.group_by;
  if (plan.dimension) {
    doc["dimension"] = {{"path", plan.dimension->path},
                        {"fact_key", plan.dimension->fact_key},
                        {"dim_key", plan.dimension->dim_key}};
  }
  doc["model"] = model_name(plan.model);
  doc["confidence"] = plan.confidence;
  return doc.dump();
}

}  // namespace olagg
