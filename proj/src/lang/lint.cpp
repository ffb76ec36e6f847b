#include "agv/lang/lint.hpp"

#include "agv/lang/printer.hpp"

namespace agv::lang {

bool is_constant(const Expr& e) {
  if (e.kind == ExprKind::Id || e.kind == ExprKind::Call || e.kind == ExprKind::Pre) return false;
  for (const auto& a : e.args)
    if (!is_constant(*a)) return false;
  return true;
}

void lint_linearity(const Expr& e, const std::string& file, Diagnostics& diags) {
  if (e.kind == ExprKind::Binary && (e.binop == BinOp::Mul || e.binop == BinOp::Div)) {
    if (!is_constant(*e.args[0]) && !is_constant(*e.args[1])) {
      diags.warning(file, e.span, "expression '" + print(e) + "' is not linear");
    }
  }
  for (const auto& a : e.args) lint_linearity(*a, file, diags);
}

namespace {

void pre_guard(const Expr& e, bool guarded, const std::string& file, Diagnostics& diags) {
  if (e.kind == ExprKind::Pre) {
    if (!guarded) {
      diags.error(file, e.span,
                  "'" + print(e) + "' is undefined at the first step; guard it with an arrow (e.g. init -> pre(...))");
    }
    pre_guard(*e.args[0], false, file, diags);
    return;
  }
  if (e.kind == ExprKind::Binary && e.binop == BinOp::Arrow) {
    pre_guard(*e.args[0], guarded, file, diags);
    pre_guard(*e.args[1], true, file, diags);
    return;
  }
  for (const auto& a : e.args) pre_guard(*a, guarded, file, diags);
}

}  // namespace

void lint_pre_guard(const Expr& e, const std::string& file, Diagnostics& diags) {
  pre_guard(e, false, file, diags);
}

}  // namespace agv::lang
