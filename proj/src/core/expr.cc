#include "olagg/core/expr.h"

#include <array>
#include <charconv>

#include "olagg/core/error.h"

namespace olagg {

Expr Expr::column(std::string name) {
  auto node = std::make_shared<Node>();
  node->op = Op::kColumn;
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::literal(double value) {
  auto node = std::make_shared<Node>();
  node->op = Op::kLiteral;
  node->literal = value;
  return Expr(std::move(node));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (op == Op::kColumn || op == Op::kLiteral) raise(ErrorCode::kInvalidArgument, "not a binary operator");
  auto node = std::make_shared<Node>();
  node->op = op;
  node->lhs = std::make_shared<const Expr>(std::move(lhs));
  node->rhs = std::make_shared<const Expr>(std::move(rhs));
  return Expr(std::move(node));
}

std::string Expr::to_string() const {
  switch (op()) {
    case Op::kColumn: return column_name();
    case Op::kLiteral: {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), literal_value());
      return std::string(buf, ptr);
    }
    default: break;
  }
  const char* sym = op() == Op::kAdd ? " + " : op() == Op::kSub ? " - " : op() == Op::kMul ? " * " : " / ";
  return "(" + lhs().to_string() + sym + rhs().to_string() + ")";
}

namespace {

void compile(const Expr& e, const Schema& schema, std::vector<Expr::Op>& ops, std::vector<uint32_t>& cols,
             std::vector<double>& lits, std::size_t depth, std::size_t& max_stack, std::size_t& stack) {
  if (depth > BoundExpr::kMaxDepth) raise(ErrorCode::kInvalidArgument, "expression nested too deeply");
  switch (e.op()) {
    case Expr::Op::kColumn: {
      std::size_t idx = schema.require(e.column_name());
      Kind kind = schema.column(idx).kind;
      if (!is_numeric(kind)) {
        raise(ErrorCode::kTypeMismatch,
              "column '" + e.column_name() + "' is " + kind_name(kind) + "; aggregate expressions need numbers");
      }
      ops.push_back(e.op());
      cols.push_back(static_cast<uint32_t>(idx));
      lits.push_back(0);
      max_stack = std::max(max_stack, ++stack);
      return;
    }
    case Expr::Op::kLiteral:
      ops.push_back(e.op());
      cols.push_back(0);
      lits.push_back(e.literal_value());
      max_stack = std::max(max_stack, ++stack);
      return;
    default:
      compile(e.lhs(), schema, ops, cols, lits, depth + 1, max_stack, stack);
      compile(e.rhs(), schema, ops, cols, lits, depth + 1, max_stack, stack);
      ops.push_back(e.op());
      cols.push_back(0);
      lits.push_back(0);
      --stack;
  }
}

}  // namespace

BoundExpr BoundExpr::bind(const Expr& expr, const Schema& schema) {
  std::vector<Expr::Op> ops;
  std::vector<uint32_t> cols;
  std::vector<double> lits;
  std::size_t max_stack = 0, stack = 0;
  compile(expr, schema, ops, cols, lits, 0, max_stack, stack);
  BoundExpr out;
  out.text_ = expr.to_string();
  for (std::size_t i = 0; i < ops.size(); ++i) out.program_.push_back({ops[i], cols[i], lits[i]});
  out.single_column_ = out.program_.size() == 1 && out.program_[0].op == Expr::Op::kColumn;
  return out;
}

double BoundExpr::eval_program(TupleView t) const {
  std::array<double, kMaxDepth + 2> stack;
  std::size_t top = 0;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Expr::Op::kColumn: stack[top++] = t[in.column].to_double(); break;
      case Expr::Op::kLiteral: stack[top++] = in.literal; break;
      case Expr::Op::kAdd: --top; stack[top - 1] += stack[top]; break;
      case Expr::Op::kSub: --top; stack[top - 1] -= stack[top]; break;
      case Expr::Op::kMul: --top; stack[top - 1] *= stack[top]; break;
      case Expr::Op::kDiv:
        --top;
        if (stack[top] == 0) raise(ErrorCode::kDivisionByZero, "division by zero in " + text_);
        stack[top - 1] /= stack[top];
        break;
    }
  }
  return stack[0];
}

}  // namespace olagg
