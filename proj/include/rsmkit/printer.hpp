#pragma once

#include <string>

#include "rsmkit/model.hpp"

namespace rsm {

/// Canonical source form. Reparsing the result yields a structurally
/// identical model, and two models are structurally identical iff their
/// printed forms match byte for byte.
std::string print_model(const SystemModel& m);

std::string print_expr(const Expr& e);
std::string print_block(const Block& b, int indent);

}  // namespace rsm
