#pragma once

#include "agv/diagnostics.hpp"
#include "agv/lang/ast.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace agv::lang {

class RecordTable {
 public:
  void add(RecordDecl decl) { records_[decl.name] = std::move(decl); }
  const RecordDecl* find(const std::string& name) const;
  /// Type of `fields` below a value of type `t`; nullopt if a field is missing.
  std::optional<Type> field_type(Type t, const std::vector<std::string>& fields) const;

  /// Scalar leaves of a record type in declaration order: (field path, type).
  std::vector<std::pair<std::vector<std::string>, Type>> leaves(const Type& t) const;

  const std::map<std::string, RecordDecl>& all() const { return records_; }

 private:
  std::map<std::string, RecordDecl> records_;
};

/// Visible node definitions. Call-graph cycles are detected by `check_nodes`.
class NodeTable {
 public:
  void add(const NodeDef* def) { nodes_[def->name] = def; }
  const NodeDef* find(const std::string& name) const;
  bool is_recursive(const std::string& name) const { return recursive_.count(name) != 0; }
  void mark_recursive(const std::string& name) { recursive_.insert(name); }
  const std::map<std::string, const NodeDef*>& all() const { return nodes_; }

 private:
  std::map<std::string, const NodeDef*> nodes_;
  std::set<std::string> recursive_;
};

/// Identifier environment for one scope: variables (possibly dotted, e.g.
/// `fcc1.act` for subcomponent ports), subcomponent names, records, nodes.
struct TypeEnv {
  std::map<std::string, Type> vars;
  std::set<std::string> subcomponents;
  const RecordTable* records = nullptr;
  const NodeTable* nodes = nullptr;
};

struct CheckContext {
  const TypeEnv& env;
  Diagnostics& diags;
  std::string file;
};

/// Type checks `e`, returning an annotated copy (every node carries its
/// type, identifiers carry their resolution). Integer-literal subterms used
/// where a real is expected are coerced to real literals. Returns null if any
/// error was reported.
ExprPtr typecheck(const ExprPtr& e, const CheckContext& ctx);

/// As above, additionally requiring the result to have type `expected`.
ExprPtr typecheck(const ExprPtr& e, const Type& expected, const CheckContext& ctx);

/// For `eq a, b : t = f(...)`: checks a call to a multi-output node and
/// returns it annotated, or checks an ordinary expression when `arity == 1`.
ExprPtr typecheck_definition(const ExprPtr& e, const std::vector<Type>& targets, const CheckContext& ctx);

struct NodeSite {
  NodeDef* def;
  std::string file;
};

/// Marks recursive nodes in `table`, then checks each node body; typed
/// bodies replace the originals in place.
void check_nodes(const std::vector<NodeSite>& sites, NodeTable& table, const RecordTable& records,
                 Diagnostics& diags);

/// Output types of a node call target.
std::vector<Type> node_output_types(const NodeDef& def);

}  // namespace agv::lang
