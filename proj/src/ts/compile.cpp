#include "agv/ts/compile.hpp"

#include <stdexcept>

namespace agv::ts {

using lang::BinOp;
using lang::Expr;
using lang::ExprKind;
using lang::Type;
using lang::TypeKind;
using Leaves = std::vector<TermPtr>;

namespace {

struct CompileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Scope {
  std::string prefix;
  const lang::NodeTable* nodes = nullptr;
  std::map<std::string, std::pair<Type, Leaves>> bindings;  // inlined node inputs
};

class Lowerer {
 public:
  Lowerer(TransitionSystem& ts, const lang::RecordTable& records) : ts_(ts), records_(records) {}

  std::vector<std::vector<std::string>> field_paths(const Type& t) const {
    std::vector<std::vector<std::string>> out;
    for (auto& [path, ty] : records_.leaves(t)) out.push_back(path);
    return out;
  }

  static std::string join(const std::string& base, const std::vector<std::string>& path) {
    std::string s = base;
    for (const auto& p : path) s += "." + p;
    return s;
  }

  /// Declares one TS variable per scalar leaf of `t`.
  void declare(const std::string& name, const Type& t, VarRole role, bool input = false, bool generated = false) {
    types_[name] = t;
    for (auto& [path, ty] : records_.leaves(t)) {
      const int i = ts_.add_var(join(name, path), lang::to_scalar(ty), role);
      ts_.vars[i].input = input;
      ts_.vars[i].generated = generated;
    }
  }

  Leaves var_leaves(const std::string& name) const {
    auto it = types_.find(name);
    if (it == types_.end()) throw CompileError("undeclared variable " + name);
    Leaves out;
    for (auto& path : field_paths(it->second)) out.push_back(ts_.var(ts_.find(join(name, path))));
    return out;
  }

  void define(const std::string& name, const Leaves& def) {
    Leaves vs = var_leaves(name);
    if (vs.size() != def.size()) throw CompileError("arity mismatch defining " + name);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      Variable& v = ts_.vars[vs[i]->var];
      v.role = VarRole::Defined;
      v.def = def[i];
    }
  }

  // Leaves of the sub-record at `fields` below a value of type `t`.
  Leaves project(const Type& t, const Leaves& all, const std::vector<std::string>& fields) const {
    if (fields.empty()) return all;
    Leaves out;
    auto paths = field_paths(t);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (paths[i].size() >= fields.size() && std::equal(fields.begin(), fields.end(), paths[i].begin()))
        out.push_back(all[i]);
    }
    return out;
  }

  TermPtr scalar(const Expr& e, const Scope& s) {
    Leaves l = lower(e, s);
    if (l.size() != 1) throw CompileError("expected a scalar expression");
    return l.front();
  }

  Leaves lower(const Expr& e, const Scope& s) {
    switch (e.kind) {
      case ExprKind::BoolLit: return {mk_bool(e.value != 0)};
      case ExprKind::IntLit: return {mk_const(Value::integer(boost::multiprecision::numerator(e.value)))};
      case ExprKind::RealLit: return {mk_const(Value::real(e.value))};
      case ExprKind::Id: {
        if (!e.resolved) throw CompileError("unresolved identifier");
        const auto& r = *e.resolved;
        if (auto it = s.bindings.find(r.var); it != s.bindings.end())
          return project(it->second.first, it->second.second, r.fields);
        const std::string full = s.prefix + r.var;
        auto t = types_.find(full);
        if (t == types_.end()) throw CompileError("undeclared variable " + full);
        return project(t->second, var_leaves(full), r.fields);
      }
      case ExprKind::Unary: {
        TermPtr a = scalar(*e.args[0], s);
        return {e.unop == lang::UnOp::Not ? mk_not(a) : mk(Op::Neg, {a})};
      }
      case ExprKind::Binary: return lower_binary(e, s);
      case ExprKind::Ite: {
        TermPtr c = scalar(*e.args[0], s);
        Leaves a = lower(*e.args[1], s);
        Leaves b = lower(*e.args[2], s);
        Leaves out;
        for (std::size_t i = 0; i < a.size(); ++i) out.push_back(mk_ite(c, a[i], b[i]));
        return out;
      }
      case ExprKind::Pre: {
        Leaves a = lower(*e.args[0], s);
        Leaves out;
        for (const auto& x : a) out.push_back(ts_.pre(x));
        return out;
      }
      case ExprKind::Floor: return {ts_.floor(scalar(*e.args[0], s))};
      case ExprKind::ToReal: return {mk(Op::ToReal, {scalar(*e.args[0], s)})};
      case ExprKind::RecordUpdate: {
        Leaves base = lower(*e.args[0], s);
        Leaves v = lower(*e.args[1], s);
        auto paths = field_paths(e.type);
        std::size_t j = 0;
        for (std::size_t i = 0; i < paths.size(); ++i)
          if (!paths[i].empty() && paths[i][0] == e.field) base[i] = v.at(j++);
        return base;
      }
      case ExprKind::Call: return call(e, s).front();
    }
    throw CompileError("bad expression");
  }

  Leaves lower_binary(const Expr& e, const Scope& s) {
    const BinOp op = e.binop;
    if (op == BinOp::Arrow) {
      Leaves a = lower(*e.args[0], s);
      Leaves b = lower(*e.args[1], s);
      TermPtr init = ts_.init();
      Leaves out;
      for (std::size_t i = 0; i < a.size(); ++i) out.push_back(mk_ite(init, a[i], b[i]));
      return out;
    }
    if (op == BinOp::Eq || op == BinOp::Ne) {
      Leaves a = lower(*e.args[0], s);
      Leaves b = lower(*e.args[1], s);
      Leaves eqs;
      for (std::size_t i = 0; i < a.size(); ++i) eqs.push_back(mk(Op::Eq, {a[i], b[i]}));
      if (a.size() == 1) return {op == BinOp::Eq ? eqs[0] : mk(Op::Ne, {a[0], b[0]})};
      TermPtr all = mk_and(eqs);
      return {op == BinOp::Eq ? all : mk_not(all)};
    }
    TermPtr a = scalar(*e.args[0], s);
    TermPtr b = scalar(*e.args[1], s);
    switch (op) {
      case BinOp::Add: return {mk(Op::Add, {a, b})};
      case BinOp::Sub: return {mk(Op::Sub, {a, b})};
      case BinOp::Mul: return {mk(Op::Mul, {a, b})};
      case BinOp::Div: return {mk(Op::Div, {a, b})};
      case BinOp::Lt: return {mk(Op::Lt, {a, b})};
      case BinOp::Le: return {mk(Op::Le, {a, b})};
      case BinOp::Gt: return {mk(Op::Gt, {a, b})};
      case BinOp::Ge: return {mk(Op::Ge, {a, b})};
      case BinOp::And: return {mk_and({a, b})};
      case BinOp::Or: return {mk_or({a, b})};
      case BinOp::Implies: return {mk_implies(a, b)};
      default: break;
    }
    throw CompileError("bad binary operator");
  }

  /// Inlines a node call; returns the leaves of every output.
  std::vector<Leaves> call(const Expr& e, const Scope& s) {
    const lang::NodeDef* def = s.nodes ? s.nodes->find(e.text) : nullptr;
    if (!def) throw CompileError("unknown node " + e.text);
    if (s.nodes->is_recursive(e.text) || ++depth_ > 64) throw CompileError("node " + e.text + " is not inlinable");
    Scope inner;
    inner.prefix = ts_.fresh(e.text + "~") + ".";
    inner.nodes = s.nodes;
    for (std::size_t i = 0; i < def->inputs.size(); ++i)
      inner.bindings[def->inputs[i].name] = {def->inputs[i].type, lower(*e.args[i], s)};
    for (const auto& p : def->outputs) declare(inner.prefix + p.name, p.type, VarRole::Free, false, true);
    for (const auto& p : def->locals) declare(inner.prefix + p.name, p.type, VarRole::Free, false, true);
    for (const auto& eq : def->body) define_all(eq.lhs, *eq.rhs, inner);
    std::vector<Leaves> out;
    for (const auto& p : def->outputs) out.push_back(var_leaves(inner.prefix + p.name));
    --depth_;
    return out;
  }

  /// `names = rhs` where rhs may be a multi-output call.
  void define_all(const std::vector<std::string>& names, const Expr& rhs, const Scope& s) {
    if (names.size() == 1) {
      define(s.prefix + names[0], lower(rhs, s));
      return;
    }
    auto outs = call(rhs, s);
    for (std::size_t i = 0; i < names.size(); ++i) define(s.prefix + names[i], outs.at(i));
  }

  TransitionSystem& ts_;
  const lang::RecordTable& records_;
  std::map<std::string, Type> types_;
  int depth_ = 0;
};

void add_streams(TransitionSystem& ts, Lowerer& low, const std::vector<model::Property>& props, StreamKind kind,
                 const std::string& owner, const Scope& scope, const std::string& file) {
  for (const auto& p : props) {
    Stream s;
    s.kind = kind;
    s.owner = owner;
    s.label = p.label;
    s.file = file;
    s.span = p.span;
    std::string what(to_string(kind));
    if (kind == StreamKind::SubAssumption) what = "assumption";
    if (kind == StreamKind::SubGuarantee) what = "guarantee";
    s.name = (owner.empty() ? "" : owner + " ") + what + (p.label.empty() ? "" : " \"" + p.label + "\"");
    s.term = low.scalar(*p.expr, scope);
    if (kind == StreamKind::Assertion)
      ts.constraints.push_back(std::move(s));
    else
      ts.streams.push_back(std::move(s));
  }
}

void declare_component(Lowerer& low, const model::ComponentType& t, const std::string& prefix, bool mark_inputs) {
  for (const auto& p : t.ports)
    low.declare(prefix + p.name, p.type, VarRole::Free, mark_inputs && p.dir == lang::Direction::In);
  for (const auto& eq : t.eqs)
    for (const auto& n : eq.names) low.declare(prefix + n, eq.type, VarRole::Free);
}

void define_eqs(Lowerer& low, const std::vector<model::Equation>& eqs, const Scope& scope) {
  for (const auto& eq : eqs)
    if (eq.def) low.define_all(eq.names, *eq.def, scope);
}

bool finish(TransitionSystem& ts, const std::string& file, SourceSpan span, Diagnostics& diags) {
  std::string cycle;
  if (!ts.definition_order(&cycle)) {
    diags.error(file, span, "instantaneous dependency cycle: " + cycle);
    return false;
  }
  return true;
}

}  // namespace

TermPtr conjunction(const TransitionSystem& ts, StreamKind kind, const std::string& owner) {
  std::vector<TermPtr> parts;
  for (const Stream* s : ts.streams_of(kind, owner)) parts.push_back(s->term);
  return mk_and(std::move(parts));
}

std::optional<Layer> compile_layer(const model::Library& lib, const model::ComponentImpl& impl, Diagnostics& diags) {
  const model::ComponentType* type = lib.component(impl.type_name);
  Layer layer;
  layer.ts = std::make_shared<TransitionSystem>();
  layer.type = type;
  layer.impl = &impl;
  TransitionSystem& ts = *layer.ts;
  ts.name = impl.type_name + ".impl";
  Lowerer low(ts, lib.records());
  try {
    ts.init();
    declare_component(low, *type, "", false);
    for (const auto& eq : impl.eqs)
      for (const auto& n : eq.names) low.declare(n, eq.type, VarRole::Free);
    for (const auto& sub : impl.subcomponents) {
      layer.children.push_back(sub.name);
      declare_component(low, *lib.component(sub.type_name), sub.name + ".", false);
    }

    Scope parent{"", type->nodes.get(), {}};
    Scope impl_scope{"", impl.nodes.get(), {}};
    define_eqs(low, type->eqs, parent);
    define_eqs(low, impl.eqs, impl_scope);
    for (const auto& sub : impl.subcomponents) {
      const model::ComponentType* ct = lib.component(sub.type_name);
      define_eqs(low, ct->eqs, Scope{sub.name + ".", ct->nodes.get(), {}});
    }

    for (const auto& c : impl.connections) {
      Leaves src = low.var_leaves(c.source);
      Leaves dst = low.var_leaves(c.target);
      std::vector<TermPtr> eqs;
      for (std::size_t i = 0; i < src.size(); ++i) eqs.push_back(mk(Op::Eq, {dst[i], src[i]}));
      Stream s;
      s.name = "connection " + c.source + " -> " + c.target;
      s.kind = StreamKind::Connection;
      s.term = mk_and(eqs);
      s.file = impl.file;
      s.span = c.span;
      ts.constraints.push_back(std::move(s));
    }
    add_streams(ts, low, impl.assertions, StreamKind::Assertion, "", impl_scope, impl.file);
    add_streams(ts, low, type->assumptions, StreamKind::Assumption, "", parent, type->file);
    add_streams(ts, low, type->guarantees, StreamKind::Guarantee, "", parent, type->file);
    add_streams(ts, low, impl.lemmas, StreamKind::Lemma, "", impl_scope, impl.file);
    for (const auto& sub : impl.subcomponents) {
      const model::ComponentType* ct = lib.component(sub.type_name);
      Scope cs{sub.name + ".", ct->nodes.get(), {}};
      add_streams(ts, low, ct->assumptions, StreamKind::SubAssumption, sub.name, cs, ct->file);
      add_streams(ts, low, ct->guarantees, StreamKind::SubGuarantee, sub.name, cs, ct->file);
    }
  } catch (const CompileError& e) {
    diags.error(impl.file, impl.span, std::string("cannot compile layer: ") + e.what());
    return std::nullopt;
  }
  if (!finish(ts, impl.file, impl.span, diags)) return std::nullopt;
  layer.order = model::order_subcomponents(impl);
  return layer;
}

std::optional<Layer> compile_component(const model::Library& lib, const model::ComponentType& type,
                                       Diagnostics& diags, bool with_impl) {
  Layer layer;
  layer.ts = std::make_shared<TransitionSystem>();
  layer.type = &type;
  TransitionSystem& ts = *layer.ts;
  ts.name = type.name;
  Lowerer low(ts, lib.records());
  const model::ComponentImpl* impl = lib.implementation(type.name);
  if (!with_impl || (impl && !impl->subcomponents.empty())) impl = nullptr;
  layer.impl = impl;
  try {
    ts.init();
    declare_component(low, type, "", true);
    if (impl)
      for (const auto& eq : impl->eqs)
        for (const auto& n : eq.names) low.declare(n, eq.type, VarRole::Free);
    Scope scope{"", type.nodes.get(), {}};
    define_eqs(low, type.eqs, scope);
    if (impl) {
      Scope is{"", impl->nodes.get(), {}};
      define_eqs(low, impl->eqs, is);
      add_streams(ts, low, impl->assertions, StreamKind::Assertion, "", is, impl->file);
    }
    add_streams(ts, low, type.assumptions, StreamKind::Assumption, "", scope, type.file);
    add_streams(ts, low, type.guarantees, StreamKind::Guarantee, "", scope, type.file);
  } catch (const CompileError& e) {
    diags.error(type.file, type.span, std::string("cannot compile component: ") + e.what());
    return std::nullopt;
  }
  if (!finish(ts, type.file, type.span, diags)) return std::nullopt;
  return layer;
}

}  // namespace agv::ts
