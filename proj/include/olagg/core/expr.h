#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "olagg/core/schema.h"
#include "olagg/core/table.h"

namespace olagg {

// Aggregate expression f: column references, numeric literals and + - * /.
// Immutable; copies share the tree.
class Expr {
 public:
  enum class Op : uint8_t { kColumn, kLiteral, kAdd, kSub, kMul, kDiv };

  static Expr column(std::string name);
  static Expr literal(double value);
  static Expr binary(Op op, Expr lhs, Expr rhs);

  Op op() const { return node_->op; }
  const std::string& column_name() const { return node_->name; }
  double literal_value() const { return node_->literal; }
  const Expr& lhs() const { return *node_->lhs; }
  const Expr& rhs() const { return *node_->rhs; }

  std::string to_string() const;

 private:
  struct Node {
    Op op;
    std::string name;
    double literal = 0;
    std::shared_ptr<const Expr> lhs, rhs;
  };
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

inline Expr col(std::string name) { return Expr::column(std::move(name)); }
inline Expr lit(double v) { return Expr::literal(v); }
inline Expr operator+(Expr a, Expr b) { return Expr::binary(Expr::Op::kAdd, std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::binary(Expr::Op::kSub, std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::binary(Expr::Op::kMul, std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::binary(Expr::Op::kDiv, std::move(a), std::move(b)); }

// An expression resolved against a schema, compiled to a postfix program.
class BoundExpr {
 public:
  static constexpr std::size_t kMaxDepth = 64;

  BoundExpr() = default;

  // Throws kTypeMismatch for unknown or non-numeric columns, and
  // kInvalidArgument for trees deeper than kMaxDepth.
  static BoundExpr bind(const Expr& expr, const Schema& schema);

  // Throws kDivisionByZero.
  double eval(TupleView t) const {
    if (single_column_) return t[program_[0].column].to_double();
    return eval_program(t);
  }

  // Source text, for messages.
  const std::string& text() const { return text_; }

 private:
  struct Instr {
    Expr::Op op;
    uint32_t column = 0;
    double literal = 0;
  };
  double eval_program(TupleView t) const;

  std::vector<Instr> program_;
  bool single_column_ = false;
  std::string text_;
};

inline double eval_expr(const BoundExpr& e, TupleView t) { return e.eval(t); }

}  // namespace olagg
