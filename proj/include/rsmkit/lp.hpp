#pragma once

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rsm {

/// Exact rational scalar: every verdict on the proof path is computed
/// without floating point.
using Rational = boost::multiprecision::cpp_rational;

struct LinearRow {
  enum class Rel { Eq, Le, Ge };
  std::vector<std::pair<int, Rational>> coeffs;  // sparse (var, coefficient)
  Rel rel = Rel::Eq;
  Rational rhs = 0;
};

/// max c.x subject to rows, 0 <= x_j <= upper_j (upper optional).
struct LPProblem {
  int num_vars = 0;
  std::vector<LinearRow> rows;
  std::vector<Rational> objective;               // empty = feasibility only
  std::vector<std::optional<Rational>> upper;    // per-variable upper bounds
};

enum class LPStatus { Infeasible, Optimal, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Rational objective_value = 0;
  std::vector<Rational> solution;
  long long pivots = 0;
};

/// Exact interval propagation over the rows. Returns false when some row is
/// proven unsatisfiable (a sound, incomplete infeasibility test).
bool presolve_feasible(const LPProblem& p, int rounds = 40);

/// Two-phase primal simplex with Bland's rule on exact rationals.
LPResult lp_solve(const LPProblem& p);

}  // namespace rsm
