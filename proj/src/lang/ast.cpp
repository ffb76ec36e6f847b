#include "agv/lang/ast.hpp"

namespace agv::lang {

std::string Type::to_string() const {
  switch (kind) {
    case TypeKind::Bool: return "bool";
    case TypeKind::Int: return "int";
    case TypeKind::Real: return "real";
    case TypeKind::Record: return record;
    case TypeKind::Error: return "<error>";
  }
  return "?";
}

ScalarType to_scalar(const Type& t) {
  switch (t.kind) {
    case TypeKind::Int: return ScalarType::Int;
    case TypeKind::Real: return ScalarType::Real;
    default: return ScalarType::Bool;
  }
}

std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "<>";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
    case BinOp::Implies: return "=>";
    case BinOp::Arrow: return "->";
  }
  return "?";
}

bool is_relation(BinOp op) {
  return op == BinOp::Lt || op == BinOp::Le || op == BinOp::Gt || op == BinOp::Ge || op == BinOp::Eq ||
         op == BinOp::Ne;
}

bool is_arithmetic(BinOp op) {
  return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul || op == BinOp::Div;
}

bool is_connective(BinOp op) { return op == BinOp::And || op == BinOp::Or || op == BinOp::Implies; }

namespace {

std::shared_ptr<Expr> node(ExprKind kind, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->span = span;
  return e;
}

}  // namespace

ExprPtr make_bool(bool v, SourceSpan span) {
  auto e = node(ExprKind::BoolLit, span);
  e->text = v ? "true" : "false";
  e->value = v ? 1 : 0;
  e->type = Type::boolean();
  return e;
}

ExprPtr make_int(std::string text, SourceSpan span) {
  auto e = node(ExprKind::IntLit, span);
  e->value = Rational(Integer(text));
  e->text = std::move(text);
  return e;
}

ExprPtr make_real(std::string text, SourceSpan span) {
  auto e = node(ExprKind::RealLit, span);
  e->value = parse_decimal(text);
  e->text = std::move(text);
  e->type = Type::real();
  return e;
}

ExprPtr make_id(std::vector<std::string> path, SourceSpan span) {
  auto e = node(ExprKind::Id, span);
  e->path = std::move(path);
  return e;
}

ExprPtr make_unary(UnOp op, ExprPtr arg, SourceSpan span) {
  auto e = node(ExprKind::Unary, span);
  e->unop = op;
  e->args = {std::move(arg)};
  return e;
}

ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  auto e = node(ExprKind::Binary, span);
  e->binop = op;
  e->args = {std::move(lhs), std::move(rhs)};
  return e;
}

ExprPtr make_ite(ExprPtr c, ExprPtr t, ExprPtr f, SourceSpan span) {
  auto e = node(ExprKind::Ite, span);
  e->args = {std::move(c), std::move(t), std::move(f)};
  return e;
}

ExprPtr make_pre(ExprPtr arg, SourceSpan span) {
  auto e = node(ExprKind::Pre, span);
  e->args = {std::move(arg)};
  return e;
}

ExprPtr make_floor(ExprPtr arg, SourceSpan span) {
  auto e = node(ExprKind::Floor, span);
  e->args = {std::move(arg)};
  return e;
}

ExprPtr make_to_real(ExprPtr arg, SourceSpan span) {
  auto e = node(ExprKind::ToReal, span);
  e->args = {std::move(arg)};
  return e;
}

ExprPtr make_record_update(ExprPtr base, std::string field, ExprPtr value, SourceSpan span) {
  auto e = node(ExprKind::RecordUpdate, span);
  e->field = std::move(field);
  e->args = {std::move(base), std::move(value)};
  return e;
}

ExprPtr make_call(std::string name, std::vector<ExprPtr> args, SourceSpan span) {
  auto e = node(ExprKind::Call, span);
  e->text = std::move(name);
  e->args = std::move(args);
  return e;
}

bool same_shape(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case ExprKind::BoolLit:
    case ExprKind::IntLit:
    case ExprKind::RealLit:
      if (a.value != b.value) return false;
      break;
    case ExprKind::Id:
      if (a.path != b.path) return false;
      break;
    case ExprKind::Unary:
      if (a.unop != b.unop) return false;
      break;
    case ExprKind::Binary:
      if (a.binop != b.binop) return false;
      break;
    case ExprKind::RecordUpdate:
      if (a.field != b.field) return false;
      break;
    case ExprKind::Call:
      if (a.text != b.text) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_shape(*a.args[i], *b.args[i])) return false;
  return true;
}

}  // namespace agv::lang
