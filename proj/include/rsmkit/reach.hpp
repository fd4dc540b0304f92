#pragma once

#include "rsmkit/lp.hpp"
#include "rsmkit/petri.hpp"

namespace rsm {

enum class ReachVerdict { ProvenUnreachable, Unknown };

/// State-equation relaxation: decides feasibility of
///   m = m0 + C x,  m >= 0,  x >= 0,  target(m),
/// tightened by structural firing bounds and, for literal-bounded loops, the
/// exactly-n coupling rows. Infeasible proves the target unreachable; a
/// feasible relaxation proves nothing.
ReachVerdict check_unreachable(const PetriNet& net, const MarkingConstraint& target);

struct FifoBound {
  bool bounded = false;
  Tokens bound = 0;  // valid when bounded
};

/// Sound upper bound on a channel's occupancy: maximize the item place over
/// the same constraint system.
FifoBound fifo_bound(const PetriNet& net, const std::string& channel);

/// The LP instance both verdicts solve (exposed for inspection/tests).
LPProblem build_state_equation_lp(const PetriNet& net, const MarkingConstraint* target);

}  // namespace rsm
