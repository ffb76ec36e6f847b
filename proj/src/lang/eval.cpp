#include "agv/lang/eval.hpp"

#include <algorithm>

namespace agv::lang {

const StreamValue* StreamValue::member(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return &members[i];
  return nullptr;
}

bool operator==(const StreamValue& a, const StreamValue& b) {
  if (a.is_record() != b.is_record()) return false;
  if (!a.is_record()) return a.scalar == b.scalar;
  return a.names == b.names && a.members == b.members;
}

StreamValue zero_value(const Type& t, const RecordTable* records) {
  StreamValue v;
  if (t.kind == TypeKind::Record) {
    const RecordDecl* r = records ? records->find(t.record) : nullptr;
    if (!r) throw EvalError("unknown record type " + t.record);
    for (const auto& f : r->fields) {
      v.names.push_back(f.name);
      v.members.push_back(zero_value(f.type, records));
    }
    return v;
  }
  v.scalar = Value::zero(to_scalar(t));
  return v;
}

namespace {

StreamValue scalar(Value v) {
  StreamValue s;
  s.scalar = std::move(v);
  return s;
}

Value make_numeric(const Type& t, Rational r) {
  if (t.kind == TypeKind::Int) return Value::integer(boost::multiprecision::numerator(r));
  return Value::real(std::move(r));
}

}  // namespace

StreamProgram::StreamProgram(std::map<std::string, StreamDef> defs, Inputs inputs, const NodeTable* nodes)
    : defs_(std::move(defs)), inputs_(std::move(inputs)), nodes_(nodes) {}

StreamProgram::~StreamProgram() = default;

StreamValue StreamProgram::value(const std::string& var, int step) {
  if (step < 0) throw EvalError("'" + var + "' read before the first step");
  const auto key = std::make_pair(var, step);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  auto def = defs_.find(var);
  if (def == defs_.end()) {
    StreamValue v = inputs_(var, step);
    memo_.emplace(key, v);
    return v;
  }
  if (std::find(active_.begin(), active_.end(), key) != active_.end())
    throw EvalError("instantaneous dependency cycle through '" + var + "'");
  active_.push_back(key);
  StreamValue v;
  try {
    const Expr& e = *def->second.expr;
    if (e.kind == ExprKind::Call)
      v = call(e, def->second.index, step);
    else
      v = eval(e, step);
  } catch (...) {
    active_.pop_back();
    throw;
  }
  active_.pop_back();
  memo_.emplace(key, v);
  return v;
}

StreamValue StreamProgram::call(const Expr& e, std::size_t index, int step) {
  auto& sub = calls_[&e];
  const NodeDef* def = nodes_ ? nodes_->find(e.text) : nullptr;
  if (!def) throw EvalError("unknown node '" + e.text + "'");
  if (!sub) {
    std::map<std::string, StreamDef> body;
    for (const auto& eq : def->body)
      for (std::size_t i = 0; i < eq.lhs.size(); ++i) body[eq.lhs[i]] = StreamDef{eq.rhs, i};
    std::map<std::string, std::size_t> param_index;
    for (std::size_t i = 0; i < def->inputs.size(); ++i) param_index[def->inputs[i].name] = i;
    const Expr* site = &e;
    sub = std::make_unique<StreamProgram>(
        std::move(body),
        [this, site, param_index](const std::string& var, int s) -> StreamValue {
          auto it = param_index.find(var);
          if (it == param_index.end()) throw EvalError("undefined node variable '" + var + "'");
          return eval(*site->args[it->second], s);
        },
        nodes_);
  }
  return sub->value(def->outputs.at(index).name, step);
}

StreamValue StreamProgram::eval(const Expr& e, int step) {
  switch (e.kind) {
    case ExprKind::BoolLit: return scalar(Value::boolean(e.value != 0));
    case ExprKind::IntLit: return scalar(Value::integer(boost::multiprecision::numerator(e.value)));
    case ExprKind::RealLit: return scalar(Value::real(e.value));
    case ExprKind::Id: {
      if (!e.resolved) throw EvalError("unresolved identifier");
      StreamValue v = value(e.resolved->var, step);
      for (const auto& f : e.resolved->fields) {
        const StreamValue* m = v.member(f);
        if (!m) throw EvalError("missing field '" + f + "'");
        StreamValue copy = *m;
        v = std::move(copy);
      }
      return v;
    }
    case ExprKind::Unary: {
      StreamValue a = eval(*e.args[0], step);
      if (e.unop == UnOp::Not) return scalar(Value::boolean(!a.scalar.as_bool()));
      return scalar(make_numeric(e.type, -a.scalar.as_rational()));
    }
    case ExprKind::Binary: {
      const BinOp op = e.binop;
      if (op == BinOp::Arrow) return step == 0 ? eval(*e.args[0], step) : eval(*e.args[1], step);
      if (op == BinOp::And) {
        if (!eval(*e.args[0], step).scalar.as_bool()) return scalar(Value::boolean(false));
        return scalar(Value::boolean(eval(*e.args[1], step).scalar.as_bool()));
      }
      if (op == BinOp::Or) {
        if (eval(*e.args[0], step).scalar.as_bool()) return scalar(Value::boolean(true));
        return scalar(Value::boolean(eval(*e.args[1], step).scalar.as_bool()));
      }
      if (op == BinOp::Implies) {
        if (!eval(*e.args[0], step).scalar.as_bool()) return scalar(Value::boolean(true));
        return scalar(Value::boolean(eval(*e.args[1], step).scalar.as_bool()));
      }
      StreamValue l = eval(*e.args[0], step);
      StreamValue r = eval(*e.args[1], step);
      if (op == BinOp::Eq) return scalar(Value::boolean(l == r));
      if (op == BinOp::Ne) return scalar(Value::boolean(!(l == r)));
      const Rational& a = l.scalar.as_rational();
      const Rational& b = r.scalar.as_rational();
      switch (op) {
        case BinOp::Add: return scalar(make_numeric(e.type, a + b));
        case BinOp::Sub: return scalar(make_numeric(e.type, a - b));
        case BinOp::Mul: return scalar(make_numeric(e.type, a * b));
        case BinOp::Div: return scalar(make_numeric(e.type, b == 0 ? Rational(0) : a / b));
        case BinOp::Lt: return scalar(Value::boolean(a < b));
        case BinOp::Le: return scalar(Value::boolean(a <= b));
        case BinOp::Gt: return scalar(Value::boolean(a > b));
        case BinOp::Ge: return scalar(Value::boolean(a >= b));
        default: break;
      }
      throw EvalError("bad binary operator");
    }
    case ExprKind::Ite:
      return eval(*e.args[0], step).scalar.as_bool() ? eval(*e.args[1], step) : eval(*e.args[2], step);
    case ExprKind::Pre:
      if (step == 0) throw EvalError("pre evaluated at the first step");
      return eval(*e.args[0], step - 1);
    case ExprKind::Floor:
      return scalar(Value::integer(floor_div(eval(*e.args[0], step).scalar.as_rational())));
    case ExprKind::ToReal: return scalar(Value::real(eval(*e.args[0], step).scalar.as_rational()));
    case ExprKind::RecordUpdate: {
      StreamValue base = eval(*e.args[0], step);
      StreamValue v = eval(*e.args[1], step);
      for (std::size_t i = 0; i < base.names.size(); ++i)
        if (base.names[i] == e.field) base.members[i] = v;
      return base;
    }
    case ExprKind::Call: return call(e, 0, step);
  }
  throw EvalError("bad expression");
}

}  // namespace agv::lang
