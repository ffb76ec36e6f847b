#pragma once

#include "agv/lang/ast.hpp"

#include <string>

namespace agv::lang {

/// Prints an expression with the minimum parentheses needed to reparse to
/// the same tree.
std::string print(const Expr& e);

/// Canonical text of a whole file: records, nodes, components, then
/// implementations, each in declaration order.
std::string print(const FileAst& file);

std::string print(const NodeDef& node, const std::string& indent = "");

}  // namespace agv::lang
