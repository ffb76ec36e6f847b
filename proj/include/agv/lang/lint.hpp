#pragma once

#include "agv/diagnostics.hpp"
#include "agv/lang/ast.hpp"

#include <string>

namespace agv::lang {

/// Warns on `*` and `/` whose operands both mention variables.
void lint_linearity(const Expr& e, const std::string& file, Diagnostics& diags);

/// Errors on any `pre` that may be evaluated at the first step, i.e. one not
/// reached through the right-hand side of an arrow. Entering `pre` shifts
/// evaluation one step back, so its argument needs its own guard.
void lint_pre_guard(const Expr& e, const std::string& file, Diagnostics& diags);

/// True if `e` reads no variable (literals and operators only).
bool is_constant(const Expr& e);

}  // namespace agv::lang
