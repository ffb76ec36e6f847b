#include "agv/engine/session.hpp"

#include <atomic>
#include <cstdlib>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace agv::engine {

namespace {

constexpr const char* kSync = "agv-sync";

void ignore_sigpipe() {
  static const bool done = [] {
    std::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

}  // namespace

SolverSession::SolverSession(const std::string& command, std::optional<Clock::time_point> deadline)
    : deadline_(deadline) {
  ignore_sigpipe();
  if (const char* dir = std::getenv("AGV_SMT_LOG"); dir && *dir) {
    static std::atomic<int> counter{0};
    const std::string path = std::string(dir) + "/session-" + std::to_string(::getpid()) + "-" +
                             std::to_string(counter++) + ".smt2";
    log_ = std::make_unique<std::ofstream>(path);
  }
  std::vector<std::string> argv_s;
  std::istringstream in(command);
  for (std::string w; in >> w;) argv_s.push_back(w);
  if (argv_s.empty()) throw SolverError("empty solver command");
  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());
  argv.push_back(nullptr);

  int in_pipe[2];
  int out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0)
    throw SolverError(std::string("pipe: ") + std::strerror(errno));

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], 0);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], 1);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], 2);
  pid_t pid = -1;
  const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  close(in_pipe[0]);
  close(out_pipe[1]);
  if (rc != 0) {
    close(in_pipe[1]);
    close(out_pipe[0]);
    throw SolverError("cannot start solver '" + argv_s[0] + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  this->command("(set-option :print-success false)");
  this->command("(set-option :produce-models true)");
  try {
    sync();
  } catch (const SolverError& e) {
    throw SolverError(std::string("solver '") + argv_s[0] + "' did not respond: " + e.what());
  }
}

SolverSession::~SolverSession() {
  if (to_child_ >= 0) {
    if (!dead_) {
      const char bye[] = "(exit)\n";
      [[maybe_unused]] auto n = write(to_child_, bye, sizeof bye - 1);
    }
    close(to_child_);
  }
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    // Give the solver a moment to exit on its own, then make sure.
    for (int i = 0; i < 20; ++i) {
      if (waitpid(pid_, &status, WNOHANG) == pid_) return;
      usleep(1000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
  }
}

void SolverSession::fail(const std::string& why) {
  dead_ = true;
  if (pid_ > 0) kill(pid_, SIGKILL);
  throw SolverError(why);
}

void SolverSession::command(std::string_view text) {
  if (dead_) throw SolverError("solver session is closed");
  pending_.append(text);
  pending_ += '\n';
  if (keep_) {
    transcript_.append(text);
    transcript_ += '\n';
  }
  if (log_) *log_ << text << '\n';
}

void SolverSession::write_pending() {
  std::size_t off = 0;
  while (off < pending_.size()) {
    const ssize_t n = write(to_child_, pending_.data() + off, pending_.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(std::string("write to solver failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
  pending_.clear();
}

SExpr SolverSession::read_reply() {
  while (true) {
    std::size_t pos = 0;
    if (auto e = parse_sexpr(inbuf_, pos)) {
      inbuf_.erase(0, pos);
      return *e;
    }
    int timeout_ms = -1;
    if (deadline_) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(*deadline_ - Clock::now()).count();
      if (left <= 0) fail("timeout");
      timeout_ms = static_cast<int>(std::min<long long>(left, 1 << 30));
    }
    pollfd p{from_child_, POLLIN, 0};
    const int r = poll(&p, 1, timeout_ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      fail(std::string("poll failed: ") + std::strerror(errno));
    }
    if (r == 0) fail("timeout");
    char buf[65536];
    const ssize_t n = read(from_child_, buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(std::string("read from solver failed: ") + std::strerror(errno));
    }
    if (n == 0) {
      // Flush a trailing bare atom, if any.
      if (!inbuf_.empty() && inbuf_.back() != '\n') {
        inbuf_ += '\n';
        continue;
      }
      fail("solver exited unexpectedly" + (inbuf_.empty() ? std::string() : ": " + inbuf_));
    }
    inbuf_.append(buf, static_cast<std::size_t>(n));
  }
}

namespace {

bool is_error(const SExpr& e) { return e.is_list && !e.list.empty() && e.list[0].atom == "error"; }

std::string error_text(const SExpr& e) { return e.list.size() > 1 ? e.list[1].atom : e.to_string(); }

}  // namespace

void SolverSession::sync() {
  command(std::string("(echo \"") + kSync + "\")");
  write_pending();
  while (true) {
    SExpr e = read_reply();
    if (!e.is_list && e.atom == kSync) return;
    if (is_error(e)) fail("solver error: " + error_text(e));
    fail("unexpected solver output: " + e.to_string());
  }
}

SatResult SolverSession::check_sat(std::string_view how) {
  command(how);
  write_pending();
  SExpr e = read_reply();
  if (is_error(e)) fail("solver error: " + error_text(e));
  if (e.is_list) fail("unexpected reply to check-sat: " + e.to_string());
  if (e.atom == "sat") return SatResult::Sat;
  if (e.atom == "unsat") return SatResult::Unsat;
  if (e.atom == "unknown") return SatResult::Unknown;
  fail("unexpected reply to check-sat: " + e.atom);
}

std::string SolverSession::reason_unknown() {
  command("(get-info :reason-unknown)");
  write_pending();
  SExpr e = read_reply();
  if (is_error(e)) return "unknown";
  if (e.is_list && e.list.size() == 2) return e.list[1].atom;
  return e.to_string();
}

std::vector<SExpr> SolverSession::get_value(const std::vector<std::string>& terms) {
  std::vector<SExpr> out;
  // Chunked to keep individual replies small.
  const std::size_t chunk = 256;
  for (std::size_t i = 0; i < terms.size(); i += chunk) {
    std::string cmd = "(get-value (";
    for (std::size_t j = i; j < std::min(terms.size(), i + chunk); ++j) cmd += (j > i ? " " : "") + terms[j];
    cmd += "))";
    command(cmd);
    write_pending();
    SExpr e = read_reply();
    if (is_error(e)) fail("solver error: " + error_text(e));
    if (!e.is_list) fail("unexpected reply to get-value: " + e.to_string());
    for (auto& pair : e.list) {
      if (!pair.is_list || pair.list.size() != 2) fail("malformed get-value entry: " + pair.to_string());
      out.push_back(std::move(pair.list[1]));
    }
  }
  if (out.size() != terms.size()) fail("get-value returned the wrong number of entries");
  return out;
}

}  // namespace agv::engine
