#pragma once

#include "agv/diagnostics.hpp"
#include "agv/lang/ast.hpp"
#include "agv/lang/typecheck.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace agv::model {

using lang::ExprPtr;
using lang::Type;

struct Port {
  std::string name;
  lang::Direction dir = lang::Direction::In;
  Type type;
  SourceSpan span;
};

/// `eq a, b : t [= e]` after type checking. `def` is null for implicit
/// variables.
struct Equation {
  std::vector<std::string> names;
  Type type;
  ExprPtr def;
  SourceSpan span;
};

struct Property {
  std::string label;
  ExprPtr expr;
  SourceSpan span;
};

struct ComponentType {
  std::string name;
  std::string file;
  SourceSpan span;
  std::vector<Port> ports;
  std::vector<Equation> eqs;
  std::vector<Property> assumptions;
  std::vector<Property> guarantees;
  std::shared_ptr<lang::NodeTable> nodes;

  const Port* port(const std::string& name) const;
  /// Type of a port or eq variable.
  std::optional<Type> var_type(const std::string& name) const;
  std::vector<std::string> inputs() const;
  std::vector<std::string> outputs() const;
};

struct Subcomponent {
  std::string name;
  std::string type_name;
  SourceSpan span;
};

/// `source -> target`, each endpoint a parent port (`p`) or a child port
/// (`sub.p`), stored in that dotted form.
struct Connection {
  std::string source;
  std::string target;
  Type type;
  SourceSpan span;
};

struct ComponentImpl {
  std::string type_name;
  std::string file;
  SourceSpan span;
  std::vector<Subcomponent> subcomponents;
  std::vector<Connection> connections;
  std::vector<Equation> eqs;
  std::vector<Property> assertions;
  std::vector<Property> lemmas;
  std::shared_ptr<lang::NodeTable> nodes;

  const Subcomponent* subcomponent(const std::string& name) const;
};

/// All declarations of a set of files, cross-referenced and type checked.
class Library {
 public:
  const lang::RecordTable& records() const { return records_; }
  const ComponentType* component(const std::string& name) const;
  const ComponentImpl* implementation(const std::string& type_name) const;
  const std::vector<std::string>& component_names() const { return component_order_; }
  const std::vector<std::string>& files() const { return files_; }

  /// Components never used as a subcomponent, in declaration order.
  std::vector<std::string> roots() const;

  /// Canonical text of all loaded files.
  const std::vector<std::unique_ptr<lang::FileAst>>& asts() const { return asts_; }

 private:
  friend std::optional<Library> load_library(const std::vector<std::string>&, Diagnostics&);
  friend std::optional<Library> load_library_text(const std::vector<std::pair<std::string, std::string>>&,
                                                  Diagnostics&);

  std::vector<std::string> files_;
  std::vector<std::unique_ptr<lang::FileAst>> asts_;
  lang::RecordTable records_;
  std::shared_ptr<lang::NodeTable> global_nodes_;
  std::map<std::string, ComponentType> components_;
  std::vector<std::string> component_order_;
  std::map<std::string, ComponentImpl> impls_;
};

/// Loads files (or every `*.agv` directly inside a directory argument, in
/// name order). Returns nullopt if any error was reported; warnings (such as
/// linearity findings) are kept in `diags` either way.
std::optional<Library> load_library(const std::vector<std::string>& paths, Diagnostics& diags);

/// Same, from in-memory (file name, source) pairs.
std::optional<Library> load_library_text(const std::vector<std::pair<std::string, std::string>>& sources,
                                         Diagnostics& diags);

/// Accepts `Name` or `Name.impl`. Empty `root` picks the unique top-level
/// component. Reports an error and returns empty on failure.
std::string resolve_root(const Library& lib, const std::string& root, Diagnostics& diags);

}  // namespace agv::model
