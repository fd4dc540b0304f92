#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rsmkit/diagnostics.hpp"
#include "rsmkit/model.hpp"

namespace rsm {

struct ParseResult {
  std::optional<SystemModel> model;  // present only when no errors
  Diagnostics diagnostics;

  bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

/// Parse model-language source. Total: any byte sequence yields either a
/// validated model or a diagnostic list with line/column positions.
ParseResult parse_model(std::string_view text);

ParseResult parse_model_file(const std::string& path);

}  // namespace rsm
