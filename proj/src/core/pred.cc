#include "olagg/core/pred.h"

#include "olagg/core/error.h"

namespace olagg {

std::string Term::to_string() const {
  if (auto* c = std::get_if<ColumnRef>(&repr_)) return c->name;
  if (auto* v = std::get_if<Value>(&repr_)) {
    if (v->kind() == Kind::kString) return "'" + v->to_string() + "'";
    if (v->kind() == Kind::kDate) return "DATE '" + v->to_string() + "'";
    return v->to_string();
  }
  return std::get<Expr>(repr_).to_string();
}

Pred Pred::always() { return Pred(std::make_shared<Node>()); }

Pred Pred::compare(Cmp cmp, Term lhs, Term rhs) {
  auto node = std::make_shared<Node>();
  node->op = Op::kCompare;
  node->cmp = cmp;
  node->terms = {std::move(lhs), std::move(rhs)};
  return Pred(std::move(node));
}

Pred Pred::between(Term value, Term lo, Term hi) {
  auto node = std::make_shared<Node>();
  node->op = Op::kBetween;
  node->terms = {std::move(value), std::move(lo), std::move(hi)};
  return Pred(std::move(node));
}

Pred Pred::conjunction(std::vector<Pred> parts) {
  if (parts.empty()) raise(ErrorCode::kInvalidArgument, "AND needs at least one operand");
  auto node = std::make_shared<Node>();
  node->op = Op::kAnd;
  node->children = std::move(parts);
  return Pred(std::move(node));
}

Pred Pred::disjunction(std::vector<Pred> parts) {
  if (parts.empty()) raise(ErrorCode::kInvalidArgument, "OR needs at least one operand");
  auto node = std::make_shared<Node>();
  node->op = Op::kOr;
  node->children = std::move(parts);
  return Pred(std::move(node));
}

Pred Pred::negation(Pred inner) {
  auto node = std::make_shared<Node>();
  node->op = Op::kNot;
  node->children = {std::move(inner)};
  return Pred(std::move(node));
}

Pred operator&&(Pred a, Pred b) { return Pred::conjunction({std::move(a), std::move(b)}); }
Pred operator||(Pred a, Pred b) { return Pred::disjunction({std::move(a), std::move(b)}); }
Pred operator!(Pred a) { return Pred::negation(std::move(a)); }

std::string Pred::to_string() const {
  static const char* kCmp[] = {" = ", " < ", " <= ", " > ", " >= "};
  switch (op()) {
    case Op::kTrue: return "TRUE";
    case Op::kCompare:
      return terms()[0].to_string() + kCmp[static_cast<int>(cmp())] + terms()[1].to_string();
    case Op::kBetween:
      return terms()[0].to_string() + " BETWEEN " + terms()[1].to_string() + " AND " + terms()[2].to_string();
    case Op::kNot: return "NOT (" + children()[0].to_string() + ")";
    case Op::kAnd:
    case Op::kOr: {
      std::string out = "(";
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) out += op() == Op::kAnd ? " AND " : " OR ";
        out += children()[i].to_string();
      }
      return out + ")";
    }
  }
  return {};
}

namespace {

bool comparable(Kind a, Kind b) { return (is_numeric(a) && is_numeric(b)) || a == b; }

}  // namespace

BoundPred BoundPred::bind(const Pred& pred, const Schema& schema) {
  BoundPred out;
  out.text_ = pred.to_string();
  if (pred.op() == Pred::Op::kTrue) return out;
  out.always_ = false;
  out.add(pred, schema);
  return out;
}

uint32_t BoundPred::add(const Pred& p, const Schema& schema) {
  uint32_t idx = static_cast<uint32_t>(nodes_.size());
  nodes_.push_back({p.op(), p.cmp(), {}, {}});
  std::vector<BoundTerm> terms;
  for (const Term& term : p.terms()) {
    BoundTerm bt{};
    const auto& repr = term.repr();
    if (auto* c = std::get_if<Term::ColumnRef>(&repr)) {
      bt.source = BoundTerm::Source::kColumn;
      bt.column = static_cast<uint32_t>(schema.require(c->name));
      bt.kind = schema.column(bt.column).kind;
    } else if (auto* v = std::get_if<Value>(&repr)) {
      bt.source = BoundTerm::Source::kLiteral;
      bt.literal = *v;
      bt.kind = v->kind();
    } else {
      bt.source = BoundTerm::Source::kExpr;
      bt.expr = std::make_shared<const BoundExpr>(BoundExpr::bind(std::get<Expr>(repr), schema));
      bt.kind = Kind::kReal;
    }
    terms.push_back(std::move(bt));
  }
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (!comparable(terms[0].kind, terms[i].kind)) {
      raise(ErrorCode::kTypeMismatch, "cannot compare " + p.terms()[0].to_string() + " (" +
                                          kind_name(terms[0].kind) + ") with " + p.terms()[i].to_string() + " (" +
                                          kind_name(terms[i].kind) + ")");
    }
  }
  if (p.op() == Pred::Op::kBetween && terms[0].kind == Kind::kString) {
    raise(ErrorCode::kTypeMismatch, "BETWEEN applies to numeric and date operands");
  }
  std::vector<uint32_t> children;
  for (const Pred& child : p.children()) children.push_back(add(child, schema));
  nodes_[idx].terms = std::move(terms);
  nodes_[idx].children = std::move(children);
  return idx;
}

bool BoundPred::eval_node(uint32_t idx, TupleView t) const {
  const BoundNode& n = nodes_[idx];
  switch (n.op) {
    case Pred::Op::kTrue: return true;
    case Pred::Op::kCompare: {
      int c = n.terms[0].get(t).compare(n.terms[1].get(t));
      switch (n.cmp) {
        case Pred::Cmp::kEq: return c == 0;
        case Pred::Cmp::kLt: return c < 0;
        case Pred::Cmp::kLe: return c <= 0;
        case Pred::Cmp::kGt: return c > 0;
        case Pred::Cmp::kGe: return c >= 0;
      }
      return false;
    }
    case Pred::Op::kBetween: {
      Value v = n.terms[0].get(t);
      return v.compare(n.terms[1].get(t)) >= 0 && v.compare(n.terms[2].get(t)) <= 0;
    }
    case Pred::Op::kAnd:
      for (uint32_t c : n.children) {
        if (!eval_node(c, t)) return false;
      }
      return true;
    case Pred::Op::kOr:
      for (uint32_t c : n.children) {
        if (eval_node(c, t)) return true;
      }
      return false;
    case Pred::Op::kNot: return !eval_node(n.children[0], t);
  }
  return false;
}

}  // namespace olagg
