#pragma once

#include "agv/diagnostics.hpp"
#include "agv/value.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace agv::lang {

enum class TypeKind : std::uint8_t { Bool, Int, Real, Record, Error };

struct Type {
  TypeKind kind = TypeKind::Error;
  std::string record;  // record name when kind == Record

  static Type boolean() { return {TypeKind::Bool, {}}; }
  static Type integer() { return {TypeKind::Int, {}}; }
  static Type real() { return {TypeKind::Real, {}}; }
  static Type record_of(std::string name) { return {TypeKind::Record, std::move(name)}; }
  static Type error() { return {TypeKind::Error, {}}; }

  bool is_numeric() const { return kind == TypeKind::Int || kind == TypeKind::Real; }
  bool is_error() const { return kind == TypeKind::Error; }
  std::string to_string() const;

  friend bool operator==(const Type& a, const Type& b) { return a.kind == b.kind && a.record == b.record; }
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
};

ScalarType to_scalar(const Type& t);

enum class ExprKind : std::uint8_t {
  BoolLit, IntLit, RealLit, Id, Unary, Binary, Ite, Pre, Floor, ToReal, RecordUpdate, Call,
};

enum class UnOp : std::uint8_t { Neg, Not };

enum class BinOp : std::uint8_t {
  Add, Sub, Mul, Div, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Implies, Arrow,
};

std::string_view to_string(BinOp op);
bool is_relation(BinOp op);
bool is_arithmetic(BinOp op);
bool is_connective(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Where an identifier points after type checking: a variable of the
/// enclosing scope plus an optional record field path below it.
struct Resolution {
  std::string var;
  std::vector<std::string> fields;
};

struct Expr {
  ExprKind kind = ExprKind::BoolLit;
  SourceSpan span;

  std::string text;                // literal lexeme, node name for calls
  std::vector<std::string> path;   // identifier path (a.b.c)
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  std::string field;               // record update member
  std::vector<ExprPtr> args;

  // Filled in by the type checker.
  Type type;
  Rational value;                  // exact value of literals
  std::optional<Resolution> resolved;

  bool is_literal() const {
    return kind == ExprKind::BoolLit || kind == ExprKind::IntLit || kind == ExprKind::RealLit;
  }
};

ExprPtr make_bool(bool v, SourceSpan span = {});
ExprPtr make_int(std::string text, SourceSpan span = {});
ExprPtr make_real(std::string text, SourceSpan span = {});
ExprPtr make_id(std::vector<std::string> path, SourceSpan span = {});
ExprPtr make_unary(UnOp op, ExprPtr arg, SourceSpan span = {});
ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
ExprPtr make_ite(ExprPtr c, ExprPtr t, ExprPtr e, SourceSpan span = {});
ExprPtr make_pre(ExprPtr arg, SourceSpan span = {});
ExprPtr make_floor(ExprPtr arg, SourceSpan span = {});
ExprPtr make_to_real(ExprPtr arg, SourceSpan span = {});
ExprPtr make_record_update(ExprPtr base, std::string field, ExprPtr value, SourceSpan span = {});
ExprPtr make_call(std::string name, std::vector<ExprPtr> args, SourceSpan span = {});

/// Structural equality, ignoring spans and type annotations.
bool same_shape(const Expr& a, const Expr& b);

// ---------------------------------------------------------------------------
// Declarations

enum class Direction : std::uint8_t { In, Out };

struct PortDecl {
  Direction dir = Direction::In;
  std::string name;
  Type type;
  SourceSpan span;
};

struct LabeledExpr {
  std::string label;
  ExprPtr expr;
  SourceSpan span;
};

/// `eq a, b : t [= e];` -- without a definition the variables are implicit.
struct EqDecl {
  std::vector<std::string> names;
  Type type;
  ExprPtr def;
  SourceSpan span;
};

struct Param {
  std::string name;
  Type type;
  SourceSpan span;
};

struct NodeEquation {
  std::vector<std::string> lhs;
  ExprPtr rhs;
  SourceSpan span;
};

struct NodeDef {
  std::string name;
  std::vector<Param> inputs;
  std::vector<Param> outputs;
  std::vector<Param> locals;
  std::vector<NodeEquation> body;
  SourceSpan span;
};

struct RecordField {
  std::string name;
  Type type;
};

struct RecordDecl {
  std::string name;
  std::vector<RecordField> fields;
  SourceSpan span;
};

/// One statement of a component or implementation block, before placement
/// rules are applied.
enum class StatementKind : std::uint8_t { Port, Assume, Guarantee, Assert, Lemma, Eq, Node };

struct ComponentDecl {
  std::string name;
  std::vector<PortDecl> ports;
  std::vector<LabeledExpr> assumptions;
  std::vector<LabeledExpr> guarantees;
  std::vector<EqDecl> eqs;
  std::vector<NodeDef> nodes;
  SourceSpan span;
};

struct SubcomponentDecl {
  std::string name;
  std::string type_name;
  SourceSpan span;
};

struct ConnectionDecl {
  std::vector<std::string> source;
  std::vector<std::string> target;
  SourceSpan span;
};

struct ImplDecl {
  std::string type_name;  // declared as `implementation <type_name>.impl`
  std::vector<SubcomponentDecl> subcomponents;
  std::vector<ConnectionDecl> connections;
  std::vector<LabeledExpr> assertions;  // label is empty
  std::vector<LabeledExpr> lemmas;
  std::vector<EqDecl> eqs;
  std::vector<NodeDef> nodes;
  SourceSpan span;
};

struct FileAst {
  std::string file;
  std::vector<RecordDecl> records;
  std::vector<NodeDef> nodes;
  std::vector<ComponentDecl> components;
  std::vector<ImplDecl> impls;
};

}  // namespace agv::lang
