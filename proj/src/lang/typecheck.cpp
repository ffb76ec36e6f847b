#include "agv/lang/typecheck.hpp"

#include "agv/lang/printer.hpp"

#include <functional>

namespace agv::lang {

const RecordDecl* RecordTable::find(const std::string& name) const {
  auto it = records_.find(name);
  return it == records_.end() ? nullptr : &it->second;
}

std::optional<Type> RecordTable::field_type(Type t, const std::vector<std::string>& fields) const {
  for (const auto& f : fields) {
    if (t.kind != TypeKind::Record) return std::nullopt;
    const RecordDecl* r = find(t.record);
    if (!r) return std::nullopt;
    bool found = false;
    for (const auto& rf : r->fields) {
      if (rf.name == f) {
        t = rf.type;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  return t;
}

std::vector<std::pair<std::vector<std::string>, Type>> RecordTable::leaves(const Type& t) const {
  std::vector<std::pair<std::vector<std::string>, Type>> out;
  std::vector<std::string> prefix;
  std::function<void(const Type&)> walk = [&](const Type& ty) {
    if (ty.kind != TypeKind::Record) {
      out.emplace_back(prefix, ty);
      return;
    }
    const RecordDecl* r = find(ty.record);
    if (!r) return;
    for (const auto& f : r->fields) {
      prefix.push_back(f.name);
      walk(f.type);
      prefix.pop_back();
    }
  };
  walk(t);
  return out;
}

const NodeDef* NodeTable::find(const std::string& name) const {
  auto it = nodes_.find(name);
  return it == nodes_.end() ? nullptr : it->second;
}

std::vector<Type> node_output_types(const NodeDef& def) {
  std::vector<Type> out;
  for (const auto& p : def.outputs) out.push_back(p.type);
  return out;
}

namespace {

struct Inferred {
  std::shared_ptr<Expr> e;
  Type type = Type::error();
  bool poly = false;  // integer-literal-only subterm, type still open
  Rational value;
  bool inexact = false;  // a literal division did not divide evenly

  bool failed() const { return type.is_error() && !poly; }

  static Inferred of(std::shared_ptr<Expr> e, Type t) {
    Inferred r;
    r.e = std::move(e);
    r.type = std::move(t);
    return r;
  }
};

std::shared_ptr<Expr> copy_of(const Expr& e) { return std::make_shared<Expr>(e); }

class Checker {
 public:
  explicit Checker(const CheckContext& ctx) : ctx_(ctx) {}

  bool had_error() const { return errors_ > 0; }

  void error(const SourceSpan& span, std::string msg) {
    ++errors_;
    ctx_.diags.error(ctx_.file, span, std::move(msg));
  }

  Inferred infer(const Expr& e) {
    switch (e.kind) {
      case ExprKind::BoolLit: return typed(e, Type::boolean());
      case ExprKind::RealLit: return typed(e, Type::real());
      case ExprKind::IntLit: {
        Inferred r;
        r.e = copy_of(e);
        r.poly = true;
        r.value = e.value;
        return r;
      }
      case ExprKind::Id: return infer_id(e);
      case ExprKind::Unary: return infer_unary(e);
      case ExprKind::Binary: return infer_binary(e);
      case ExprKind::Ite: return infer_ite(e);
      case ExprKind::Pre: {
        Inferred a = settle_default(infer(*e.args[0]));
        if (a.failed()) return a;
        return rebuild(e, {a.e}, a.type);
      }
      case ExprKind::Floor: {
        Inferred a = settle(infer(*e.args[0]), Type::real(), e.args[0]->span, "floor argument");
        if (a.failed()) return a;
        return rebuild(e, {a.e}, Type::integer());
      }
      case ExprKind::ToReal: {
        Inferred a = settle(infer(*e.args[0]), Type::integer(), e.args[0]->span, "real() argument");
        if (a.failed()) return a;
        return rebuild(e, {a.e}, Type::real());
      }
      case ExprKind::RecordUpdate: return infer_update(e);
      case ExprKind::Call: return infer_call(e, 1);
    }
    return {};
  }

  Inferred settle(Inferred in, const Type& target, const SourceSpan& span, std::string_view what) {
    if (in.failed() || target.is_error()) return Inferred{};
    if (in.poly) {
      if (target.kind == TypeKind::Real) {
        auto lit = std::make_shared<Expr>();
        lit->kind = ExprKind::RealLit;
        lit->span = in.e->span;
        lit->value = in.value;
        lit->text = rational_to_string(in.value);
        lit->type = Type::real();
        return Inferred::of(lit, Type::real());
      }
      if (target.kind == TypeKind::Int) return settle_int(std::move(in));
      error(span, std::string(what) + " has type int but " + target.to_string() + " is expected");
      return Inferred{};
    }
    if (in.type != target) {
      error(span, std::string(what) + " has type " + in.type.to_string() + " but " + target.to_string() +
                      " is expected");
      return Inferred{};
    }
    return in;
  }

  Inferred settle_default(Inferred in) {
    if (in.poly) return settle_int(std::move(in));
    return in;
  }

  Inferred infer_call(const Expr& e, std::size_t arity) {
    const NodeDef* def = ctx_.env.nodes ? ctx_.env.nodes->find(e.text) : nullptr;
    if (!def) {
      error(e.span, "unknown node '" + e.text + "'");
      return Inferred{};
    }
    if (ctx_.env.nodes->is_recursive(e.text)) {
      error(e.span, "recursive node call to '" + e.text + "'");
      return Inferred{};
    }
    if (def->inputs.size() != e.args.size()) {
      error(e.span, "node '" + e.text + "' expects " + std::to_string(def->inputs.size()) + " arguments, got " +
                        std::to_string(e.args.size()));
      return Inferred{};
    }
    if (def->outputs.size() != arity) {
      error(e.span, "node '" + e.text + "' returns " + std::to_string(def->outputs.size()) +
                        " values where " + std::to_string(arity) + " are expected");
      return Inferred{};
    }
    std::vector<ExprPtr> args;
    bool ok = true;
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      Inferred a = settle(infer(*e.args[i]), def->inputs[i].type, e.args[i]->span,
                          "argument '" + def->inputs[i].name + "'");
      if (a.failed()) {
        ok = false;
        continue;
      }
      args.push_back(a.e);
    }
    if (!ok) return Inferred{};
    return rebuild(e, std::move(args), def->outputs.front().type);
  }

 private:
  Inferred typed(const Expr& e, Type t) {
    auto c = copy_of(e);
    c->type = t;
    return Inferred::of(c, t);
  }

  Inferred rebuild(const Expr& e, std::vector<ExprPtr> args, Type t) {
    auto c = copy_of(e);
    c->args = std::move(args);
    c->type = t;
    return Inferred::of(c, t);
  }

  Inferred settle_int(Inferred in) {
    const bool integral = boost::multiprecision::denominator(in.value) == 1;
    if (in.inexact || !integral) {
      error(in.e->span, "integer division of literals '" + print(*in.e) +
                            "' does not divide evenly; use real literals (e.g. 4.0/3.0) or a real-typed context");
      return Inferred{};
    }
    auto lit = std::make_shared<Expr>();
    lit->kind = ExprKind::IntLit;
    lit->span = in.e->span;
    lit->value = in.value;
    lit->text = rational_to_string(in.value);
    lit->type = Type::integer();
    return Inferred::of(lit, Type::integer());
  }

  Inferred infer_id(const Expr& e) {
    const auto& p = e.path;
    const auto& vars = ctx_.env.vars;
    std::optional<Resolution> as_record;
    std::optional<Type> record_type;
    std::optional<Resolution> as_sub;
    std::optional<Type> sub_type;

    auto field_type = [&](const Type& base, std::vector<std::string> fields) -> std::optional<Type> {
      if (fields.empty()) return base;
      if (!ctx_.env.records) return std::nullopt;
      return ctx_.env.records->field_type(base, fields);
    };

    if (auto it = vars.find(p[0]); it != vars.end()) {
      std::vector<std::string> fields(p.begin() + 1, p.end());
      if (auto t = field_type(it->second, fields)) {
        as_record = Resolution{p[0], fields};
        record_type = t;
      }
    }
    if (p.size() >= 2 && ctx_.env.subcomponents.count(p[0])) {
      const std::string name = p[0] + "." + p[1];
      if (auto it = vars.find(name); it != vars.end()) {
        std::vector<std::string> fields(p.begin() + 2, p.end());
        if (auto t = field_type(it->second, fields)) {
          as_sub = Resolution{name, fields};
          sub_type = t;
        }
      }
    }

    std::string full;
    for (std::size_t i = 0; i < p.size(); ++i) full += (i ? "." : "") + p[i];
    if (as_record && as_sub) {
      error(e.span, "ambiguous identifier '" + full + "': both a record field and a subcomponent variable");
      return Inferred{};
    }
    if (!as_record && !as_sub) {
      if (vars.count(p[0]) && p.size() > 1)
        error(e.span, "'" + full + "' does not name a field of '" + p[0] + "'");
      else
        error(e.span, "unresolved identifier '" + full + "'");
      return Inferred{};
    }
    auto c = copy_of(e);
    c->resolved = as_record ? *as_record : *as_sub;
    c->type = as_record ? *record_type : *sub_type;
    return Inferred::of(c, c->type);
  }

  Inferred infer_unary(const Expr& e) {
    Inferred a = infer(*e.args[0]);
    if (a.failed()) return a;
    if (e.unop == UnOp::Not) {
      a = settle(std::move(a), Type::boolean(), e.args[0]->span, "operand of 'not'");
      if (a.failed()) return a;
      return rebuild(e, {a.e}, Type::boolean());
    }
    if (a.poly) {
      Inferred r;
      r.e = copy_of(e);
      std::const_pointer_cast<Expr>(ExprPtr(r.e))->args = {a.e};
      r.poly = true;
      r.value = -a.value;
      r.inexact = a.inexact;
      return r;
    }
    if (!a.type.is_numeric()) {
      error(e.span, "unary minus applied to " + a.type.to_string());
      return Inferred{};
    }
    return rebuild(e, {a.e}, a.type);
  }

  // Brings two operands to a common type. Returns false on error.
  // Literal coercion to real happens only when `coerce` is set; arithmetic
  // never mixes an int literal with a real operand.
  bool unify(Inferred& l, Inferred& r, const Expr& e, bool coerce = true) {
    if (l.failed() || r.failed()) return false;
    if (!coerce && (l.poly != r.poly) && (l.poly ? r.type : l.type).kind == TypeKind::Real) {
      error(e.span, "mixed int/real operands to '" + std::string(to_string(e.binop)) +
                        "'; write real literals (e.g. 2.0) or convert with real(...)");
      return false;
    }
    if (l.poly && r.poly) {
      l = settle_int(std::move(l));
      r = settle_int(std::move(r));
      return !l.failed() && !r.failed();
    }
    if (l.poly) {
      l = settle(std::move(l), r.type, e.args[0]->span, "left operand of '" + std::string(to_string(e.binop)) + "'");
      return !l.failed();
    }
    if (r.poly) {
      r = settle(std::move(r), l.type, e.args[1]->span, "right operand of '" + std::string(to_string(e.binop)) + "'");
      return !r.failed();
    }
    if (l.type != r.type) {
      if (l.type.is_numeric() && r.type.is_numeric()) {
        error(e.span, "mixed int/real operands to '" + std::string(to_string(e.binop)) +
                          "'; convert explicitly with real(...) or floor(...)");
      } else {
        error(e.span, "operands of '" + std::string(to_string(e.binop)) + "' have different types (" +
                          l.type.to_string() + " and " + r.type.to_string() + ")");
      }
      return false;
    }
    return true;
  }

  Inferred infer_binary(const Expr& e) {
    Inferred l = infer(*e.args[0]);
    Inferred r = infer(*e.args[1]);
    if (l.failed() || r.failed()) return Inferred{};
    const BinOp op = e.binop;

    if (is_arithmetic(op)) {
      if (l.poly && r.poly) {
        Inferred out;
        out.e = copy_of(e);
        std::const_pointer_cast<Expr>(ExprPtr(out.e))->args = {l.e, r.e};
        out.poly = true;
        out.inexact = l.inexact || r.inexact;
        switch (op) {
          case BinOp::Add: out.value = l.value + r.value; break;
          case BinOp::Sub: out.value = l.value - r.value; break;
          case BinOp::Mul: out.value = l.value * r.value; break;
          default:
            if (r.value == 0) {
              error(e.span, "division by zero");
              return Inferred{};
            }
            out.value = l.value / r.value;
            if (boost::multiprecision::denominator(out.value) != 1) out.inexact = true;
            break;
        }
        return out;
      }
      if (!unify(l, r, e, false)) return Inferred{};
      if (!l.type.is_numeric()) {
        error(e.span, "arithmetic operator '" + std::string(to_string(op)) + "' applied to " + l.type.to_string());
        return Inferred{};
      }
      if (op == BinOp::Div && l.type.kind == TypeKind::Int) {
        error(e.span, "integer division is only supported between literals; use real operands");
        return Inferred{};
      }
      if (op == BinOp::Div && r.e->kind == ExprKind::RealLit && r.e->value == 0) {
        error(e.span, "division by zero");
        return Inferred{};
      }
      return rebuild(e, {l.e, r.e}, l.type);
    }

    if (is_relation(op)) {
      if (!unify(l, r, e)) return Inferred{};
      const bool equality = op == BinOp::Eq || op == BinOp::Ne;
      if (!l.type.is_numeric() && !equality) {
        error(e.span, "relation '" + std::string(to_string(op)) + "' requires numeric operands, got " +
                          l.type.to_string());
        return Inferred{};
      }
      return rebuild(e, {l.e, r.e}, Type::boolean());
    }

    if (is_connective(op)) {
      l = settle(std::move(l), Type::boolean(), e.args[0]->span, "left operand of '" + std::string(to_string(op)) + "'");
      r = settle(std::move(r), Type::boolean(), e.args[1]->span, "right operand of '" + std::string(to_string(op)) + "'");
      if (l.failed() || r.failed()) return Inferred{};
      return rebuild(e, {l.e, r.e}, Type::boolean());
    }

    // Arrow
    if (!unify(l, r, e)) return Inferred{};
    return rebuild(e, {l.e, r.e}, l.type);
  }

  Inferred infer_ite(const Expr& e) {
    Inferred c = settle(infer(*e.args[0]), Type::boolean(), e.args[0]->span, "if condition");
    Inferred t = infer(*e.args[1]);
    Inferred f = infer(*e.args[2]);
    if (c.failed() || t.failed() || f.failed()) return Inferred{};
    if (t.poly && f.poly) {
      t = settle_int(std::move(t));
      f = settle_int(std::move(f));
    } else if (t.poly) {
      t = settle(std::move(t), f.type, e.args[1]->span, "then branch");
    } else if (f.poly) {
      f = settle(std::move(f), t.type, e.args[2]->span, "else branch");
    }
    if (t.failed() || f.failed()) return Inferred{};
    if (t.type != f.type) {
      error(e.span, "if branches have different types (" + t.type.to_string() + " and " + f.type.to_string() + ")");
      return Inferred{};
    }
    return rebuild(e, {c.e, t.e, f.e}, t.type);
  }

  Inferred infer_update(const Expr& e) {
    Inferred base = infer(*e.args[0]);
    if (base.failed()) return base;
    if (base.poly || base.type.kind != TypeKind::Record) {
      error(e.span, "record update applied to a non-record value");
      return Inferred{};
    }
    std::optional<Type> ft;
    if (ctx_.env.records) ft = ctx_.env.records->field_type(base.type, {e.field});
    if (!ft) {
      error(e.span, "record type " + base.type.to_string() + " has no field '" + e.field + "'");
      return Inferred{};
    }
    Inferred v = settle(infer(*e.args[1]), *ft, e.args[1]->span, "field '" + e.field + "'");
    if (v.failed()) return v;
    return rebuild(e, {base.e, v.e}, base.type);
  }

  const CheckContext& ctx_;
  int errors_ = 0;
};

void collect_calls(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::Call) out.insert(e.text);
  for (const auto& a : e.args) collect_calls(*a, out);
}

}  // namespace

ExprPtr typecheck(const ExprPtr& e, const CheckContext& ctx) {
  Checker c(ctx);
  Inferred r = c.settle_default(c.infer(*e));
  if (c.had_error() || r.failed()) return nullptr;
  return r.e;
}

ExprPtr typecheck(const ExprPtr& e, const Type& expected, const CheckContext& ctx) {
  Checker c(ctx);
  Inferred r = c.settle(c.infer(*e), expected, e->span, "expression");
  if (c.had_error() || r.failed()) return nullptr;
  return r.e;
}

ExprPtr typecheck_definition(const ExprPtr& e, const std::vector<Type>& targets, const CheckContext& ctx) {
  if (targets.size() == 1) return typecheck(e, targets.front(), ctx);
  Checker c(ctx);
  if (e->kind != ExprKind::Call) {
    c.error(e->span, "defining several variables at once requires a node call");
    return nullptr;
  }
  Inferred r = c.infer_call(*e, targets.size());
  if (c.had_error() || r.failed()) return nullptr;
  const NodeDef* def = ctx.env.nodes->find(e->text);
  const auto outs = node_output_types(*def);
  for (std::size_t i = 0; i < outs.size(); ++i) {
    if (outs[i] != targets[i]) {
      c.error(e->span, "output " + std::to_string(i + 1) + " of node '" + e->text + "' has type " +
                           outs[i].to_string() + " but " + targets[i].to_string() + " is declared");
      return nullptr;
    }
  }
  return r.e;
}

void check_nodes(const std::vector<NodeSite>& sites, NodeTable& table, const RecordTable& records,
                 Diagnostics& diags) {
  // Call graph over the visible nodes; any node on a cycle is recursive.
  std::map<std::string, std::set<std::string>> calls;
  for (const auto& [name, def] : table.all()) {
    std::set<std::string> callees;
    for (const auto& eq : def->body)
      if (eq.rhs) collect_calls(*eq.rhs, callees);
    calls[name] = std::move(callees);
  }
  std::map<std::string, int> state;  // 0 unvisited, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::function<void(const std::string&)> dfs = [&](const std::string& n) {
    state[n] = 1;
    stack.push_back(n);
    for (const auto& m : calls[n]) {
      if (!table.find(m)) continue;
      if (state[m] == 1) {
        for (auto it = std::find(stack.begin(), stack.end(), m); it != stack.end(); ++it) table.mark_recursive(*it);
      } else if (state[m] == 0) {
        dfs(m);
      }
    }
    stack.pop_back();
    state[n] = 2;
  };
  for (const auto& [name, def] : table.all())
    if (state[name] == 0) dfs(name);

  for (const auto& site : sites) {
    NodeDef& def = *site.def;
    if (table.is_recursive(def.name)) {
      diags.error(site.file, def.span, "node '" + def.name + "' is recursive (directly or mutually)");
      continue;
    }
    TypeEnv env;
    env.records = &records;
    env.nodes = &table;
    std::set<std::string> definable;
    auto declare = [&](const Param& p, bool is_definable) {
      if (p.type.kind == TypeKind::Record && !records.find(p.type.record)) {
        diags.error(site.file, p.span, "unknown type '" + p.type.record + "'");
      }
      if (!env.vars.emplace(p.name, p.type).second) {
        diags.error(site.file, p.span, "duplicate name '" + p.name + "' in node '" + def.name + "'");
      }
      if (is_definable) definable.insert(p.name);
    };
    for (const auto& p : def.inputs) declare(p, false);
    for (const auto& p : def.outputs) declare(p, true);
    for (const auto& p : def.locals) declare(p, true);

    CheckContext ctx{env, diags, site.file};
    std::set<std::string> defined;
    for (auto& eq : def.body) {
      std::vector<Type> targets;
      bool ok = true;
      for (const auto& v : eq.lhs) {
        if (!definable.count(v)) {
          diags.error(site.file, eq.span, "'" + v + "' is not an output or local of node '" + def.name + "'");
          ok = false;
          continue;
        }
        if (!defined.insert(v).second) {
          diags.error(site.file, eq.span, "'" + v + "' is defined more than once in node '" + def.name + "'");
          ok = false;
        }
        targets.push_back(env.vars.at(v));
      }
      if (!ok) continue;
      if (ExprPtr typed = typecheck_definition(eq.rhs, targets, ctx)) eq.rhs = typed;
    }
    for (const auto& v : definable)
      if (!defined.count(v))
        diags.error(site.file, def.span, "'" + v + "' is never defined in node '" + def.name + "'");
  }
}

}  // namespace agv::lang
