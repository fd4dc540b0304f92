#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rsm {

struct SourcePos {
  int line = 0;
  int col = 0;
};

enum class Severity { Error, Warning };

/// One parser/validator finding. Rendered as `file:line:col: severity: message`.
struct Diagnostic {
  Severity severity = Severity::Error;
  SourcePos pos;
  std::string message;

  std::string render(const std::string& file) const {
    std::string sev = severity == Severity::Error ? "error" : "warning";
    return file + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.col) +
           ": " + sev + ": " + message;
  }
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics& ds) {
  for (const auto& d : ds)
    if (d.severity == Severity::Error) return true;
  return false;
}

inline std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  return os << d.render("<model>");
}

}  // namespace rsm
