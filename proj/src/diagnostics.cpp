#include "agv/diagnostics.hpp"

#include <algorithm>

namespace agv {

void Diagnostics::error(std::string file, SourceSpan span, std::string message) {
  items_.push_back({Severity::Error, std::move(file), span, std::move(message)});
}

void Diagnostics::warning(std::string file, SourceSpan span, std::string message) {
  items_.push_back({Severity::Warning, std::move(file), span, std::move(message)});
}

void Diagnostics::append(const Diagnostics& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

bool Diagnostics::has_errors() const { return error_count() > 0; }

std::size_t Diagnostics::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      items_.begin(), items_.end(), [](const Diagnostic& d) { return d.severity == Severity::Error; }));
}

std::size_t Diagnostics::warning_count() const {
  return static_cast<std::size_t>(std::count_if(
      items_.begin(), items_.end(), [](const Diagnostic& d) { return d.severity == Severity::Warning; }));
}

std::string format(const Diagnostic& d) {
  std::string out = d.file.empty() ? std::string("<input>") : d.file;
  out += ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ": ";
  switch (d.severity) {
    case Severity::Error: out += "error: "; break;
    case Severity::Warning: out += "warning: "; break;
    case Severity::Note: out += "note: "; break;
  }
  out += d.message;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Diagnostics& ds) {
  for (const auto& d : ds.items()) os << format(d) << '\n';
  return os;
}

}  // namespace agv
