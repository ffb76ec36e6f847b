#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace agv {

struct SourceSpan {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_col = 0;
};

enum class Severity : std::uint8_t { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string file;
  SourceSpan span;
  std::string message;
};

/// Ordered collection of diagnostics; formats as `file:line:col: severity: message`.
class Diagnostics {
 public:
  void error(std::string file, SourceSpan span, std::string message);
  void warning(std::string file, SourceSpan span, std::string message);
  void add(Diagnostic d) { items_.push_back(std::move(d)); }
  void append(const Diagnostics& other);

  bool has_errors() const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool empty() const { return items_.empty(); }
  const std::vector<Diagnostic>& items() const { return items_; }

 private:
  std::vector<Diagnostic> items_;
};

std::string format(const Diagnostic& d);
std::ostream& operator<<(std::ostream& os, const Diagnostics& ds);

}  // namespace agv
