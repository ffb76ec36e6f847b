#pragma once

#include "agv/engine/sexpr.hpp"

#include <chrono>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace agv::engine {

/// Raised on spawn failure, timeout, solver error replies, or any reply
/// that does not fit the protocol. The session is unusable afterwards.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SatResult : std::uint8_t { Sat, Unsat, Unknown };

using Clock = std::chrono::steady_clock;

/// An SMT-LIB v2 solver child process driven over its standard streams.
/// Commands are buffered and flushed by the next call that needs a reply.
/// If AGV_SMT_LOG names a directory, each session appends its commands to
/// a file there.
class SolverSession {
 public:
  /// `command` is split on whitespace, e.g. "z3 -in".
  explicit SolverSession(const std::string& command, std::optional<Clock::time_point> deadline = std::nullopt);
  ~SolverSession();
  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  void command(std::string_view text);
  void push() { command("(push 1)"); }
  void pop() { command("(pop 1)"); }

  /// Flushes pending commands and waits until the solver has processed them.
  void sync();
  /// `how` may name a solver-specific variant such as `(check-sat-using ...)`.
  SatResult check_sat(std::string_view how = "(check-sat)");
  /// Reason reported after an `unknown` answer.
  std::string reason_unknown();
  /// Values of the given terms in the last model, in request order.
  std::vector<SExpr> get_value(const std::vector<std::string>& terms);

  /// Full transcript of commands sent (for `dump-smt` and debugging).
  const std::string& transcript() const { return transcript_; }
  void keep_transcript(bool on) { keep_ = on; }

 private:
  SExpr read_reply();
  void write_pending();
  [[noreturn]] void fail(const std::string& why);

  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
  std::string inbuf_;
  std::string transcript_;
  bool keep_ = false;
  bool dead_ = false;
  std::optional<Clock::time_point> deadline_;
  std::unique_ptr<std::ofstream> log_;  // AGV_SMT_LOG
};

}  // namespace agv::engine
