#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "olagg/core/expr.h"

namespace olagg {

// Comparison operand: a column of any kind, a literal of any kind, or a
// numeric expression.
class Term {
 public:
  static Term column(std::string name) { return Term(ColumnRef{std::move(name)}); }
  static Term literal(Value v) { return Term(v); }
  static Term expr(Expr e) { return Term(std::move(e)); }

  struct ColumnRef {
    std::string name;
  };
  using Repr = std::variant<ColumnRef, Value, Expr>;
  const Repr& repr() const { return repr_; }

  std::string to_string() const;

 private:
  explicit Term(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

// Selection predicate P.
class Pred {
 public:
  enum class Op : uint8_t { kTrue, kCompare, kBetween, kAnd, kOr, kNot };
  enum class Cmp : uint8_t { kEq, kLt, kLe, kGt, kGe };

  static Pred always();
  static Pred compare(Cmp cmp, Term lhs, Term rhs);
  // Inclusive on both ends.
  static Pred between(Term value, Term lo, Term hi);
  static Pred conjunction(std::vector<Pred> parts);
  static Pred disjunction(std::vector<Pred> parts);
  static Pred negation(Pred inner);

  Op op() const { return node_->op; }
  Cmp cmp() const { return node_->cmp; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const std::vector<Pred>& children() const { return node_->children; }

  std::string to_string() const;

 private:
  struct Node {
    Op op = Op::kTrue;
    Cmp cmp = Cmp::kEq;
    std::vector<Term> terms;
    std::vector<Pred> children;
  };
  explicit Pred(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

Pred operator&&(Pred a, Pred b);
Pred operator||(Pred a, Pred b);
Pred operator!(Pred a);

class BoundPred {
 public:
  BoundPred() = default;

  // Resolves columns and checks that compared operands have compatible kinds
  // (numeric with numeric, otherwise same kind). Throws kTypeMismatch.
  static BoundPred bind(const Pred& pred, const Schema& schema);

  bool eval(TupleView t) const { return always_ || eval_node(0, t); }
  bool always_true() const { return always_; }
  const std::string& text() const { return text_; }

 private:
  struct BoundTerm {
    enum class Source : uint8_t { kColumn, kLiteral, kExpr } source;
    uint32_t column = 0;
    Value literal;
    std::shared_ptr<const BoundExpr> expr;
    Kind kind;

    Value get(TupleView t) const {
      switch (source) {
        case Source::kColumn: return t[column];
        case Source::kLiteral: return literal;
        case Source::kExpr: return Value::real(expr->eval(t));
      }
      return literal;
    }
  };
  struct BoundNode {
    Pred::Op op;
    Pred::Cmp cmp;
    std::vector<BoundTerm> terms;
    std::vector<uint32_t> children;
  };

  uint32_t add(const Pred& p, const Schema& schema);
  bool eval_node(uint32_t idx, TupleView t) const;

  std::vector<BoundNode> nodes_;
  bool always_ = true;
  std::string text_ = "TRUE";
};

inline bool eval_pred(const BoundPred& p, TupleView t) { return p.eval(t); }

}  // namespace olagg
