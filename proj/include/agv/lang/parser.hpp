#pragma once

#include "agv/diagnostics.hpp"
#include "agv/lang/ast.hpp"
#include "agv/lang/token.hpp"

#include <span>
#include <string>
#include <string_view>

namespace agv::lang {

/// Parses one complete expression. On a syntax error the result is null and
/// `diags` holds a positioned message naming the expected tokens.
ExprPtr parse_expr(std::span<const Token> tokens, Diagnostics& diags, const std::string& file = {});

/// Convenience overload that tokenizes first.
ExprPtr parse_expr(std::string_view source, Diagnostics& diags, const std::string& file = {});

/// Parses a system description file. Syntax errors are recorded in `diags`
/// and the parser resynchronises at the next statement or block.
FileAst parse_file(std::string_view source, const std::string& file, Diagnostics& diags);

}  // namespace agv::lang
