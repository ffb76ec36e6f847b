#pragma once

#include "agv/lang/ast.hpp"
#include "agv/lang/typecheck.hpp"
#include "agv/value.hpp"

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace agv::lang {

/// A runtime value: a scalar, or a record with named members.
struct StreamValue {
  Value scalar;
  std::vector<std::string> names;
  std::vector<StreamValue> members;

  bool is_record() const { return !names.empty(); }
  const StreamValue* member(const std::string& name) const;

  friend bool operator==(const StreamValue& a, const StreamValue& b);
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// How one variable is defined: by an expression, or as output `index` of
/// a multi-output node call.
struct StreamDef {
  ExprPtr expr;
  std::size_t index = 0;
};

/// Direct interpreter of typed expressions under synchronous stream
/// semantics. Variables with a definition are computed from it; all others
/// come from `inputs`. Results are memoised per (variable, step).
///
/// `x / 0` evaluates to 0 (matching the solver encoding). `pre` at step 0
/// throws EvalError.
class StreamProgram {
 public:
  using Inputs = std::function<StreamValue(const std::string& var, int step)>;

  StreamProgram(std::map<std::string, StreamDef> defs, Inputs inputs, const NodeTable* nodes);
  ~StreamProgram();
  StreamProgram(const StreamProgram&) = delete;
  StreamProgram& operator=(const StreamProgram&) = delete;

  StreamValue value(const std::string& var, int step);
  StreamValue eval(const Expr& e, int step);

 private:
  StreamValue call(const Expr& e, std::size_t index, int step);

  std::map<std::string, StreamDef> defs_;
  Inputs inputs_;
  const NodeTable* nodes_;
  std::map<std::pair<std::string, int>, StreamValue> memo_;
  std::map<const Expr*, std::unique_ptr<StreamProgram>> calls_;
  std::vector<std::pair<std::string, int>> active_;
};

/// Default (all-zero / false) value of a type.
StreamValue zero_value(const Type& t, const RecordTable* records);

}  // namespace agv::lang
