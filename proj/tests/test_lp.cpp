#include <algorithm>
#include <random>

#include "doctest.h"
#include "rsmkit/lp.hpp"

using namespace rsm;

namespace {

LPProblem make(int nvars) {
  LPProblem p;
  p.num_vars = nvars;
  p.upper.assign(static_cast<size_t>(nvars), std::nullopt);
  p.objective.assign(static_cast<size_t>(nvars), 0);
  return p;
}

void add_row(LPProblem& p, std::vector<std::pair<int, Rational>> coeffs, LinearRow::Rel rel,
             Rational rhs) {
  p.rows.push_back({std::move(coeffs), rel, std::move(rhs)});
}

}  // namespace

TEST_CASE("maximize under a single bound") {
  LPProblem p = make(1);
  p.objective[0] = 1;
  add_row(p, {{0, 1}}, LinearRow::Rel::Le, 3);
  LPResult r = lp_solve(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.objective_value == 3);
  CHECK(r.solution[0] == 3);
}

TEST_CASE("contradictory bounds are infeasible") {
  LPProblem p = make(1);
  add_row(p, {{0, 1}}, LinearRow::Rel::Ge, 2);
  add_row(p, {{0, 1}}, LinearRow::Rel::Le, 1);
  CHECK(lp_solve(p).status == LPStatus::Infeasible);
  CHECK(!presolve_feasible(p));
}

TEST_CASE("an uncapped objective is unbounded") {
  LPProblem p = make(2);
  p.objective[0] = 1;
  add_row(p, {{1, 1}}, LinearRow::Rel::Le, 5);
  CHECK(lp_solve(p).status == LPStatus::Unbounded);
}

TEST_CASE("equality system pins the solution") {
  LPProblem p = make(2);
  p.objective[1] = 1;
  add_row(p, {{0, 1}, {1, 1}}, LinearRow::Rel::Eq, 4);
  add_row(p, {{0, 1}, {1, -1}}, LinearRow::Rel::Eq, 2);
  LPResult r = lp_solve(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.solution[0] == 3);
  CHECK(r.solution[1] == 1);
}

TEST_CASE("exact rational arithmetic: thirds stay thirds") {
  LPProblem p = make(1);
  p.objective[0] = 1;
  add_row(p, {{0, Rational(3)}}, LinearRow::Rel::Le, 1);
  LPResult r = lp_solve(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.objective_value == Rational(1) / 3);
}

TEST_CASE("variable upper bounds participate") {
  LPProblem p = make(2);
  p.objective[0] = 1;
  p.objective[1] = 1;
  p.upper[0] = 2;
  p.upper[1] = Rational(7) / 2;
  LPResult r = lp_solve(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.objective_value == Rational(11) / 2);
}

TEST_CASE("row and column permutations preserve verdict and optimum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    LPProblem p = make(4);
    for (int j = 0; j < 4; ++j)
      p.objective[static_cast<size_t>(j)] = static_cast<int>(rng() % 5) - 2;
    int nrows = 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < nrows; ++i) {
      std::vector<std::pair<int, Rational>> coeffs;
      for (int j = 0; j < 4; ++j) {
        int c = static_cast<int>(rng() % 7) - 3;
        if (c != 0) coeffs.push_back({j, c});
      }
      if (coeffs.empty()) coeffs.push_back({0, 1});
      auto rel = static_cast<LinearRow::Rel>(rng() % 3);
      add_row(p, std::move(coeffs), rel, static_cast<int>(rng() % 9) - 2);
    }
    // cap everything so the trial cannot be unbounded
    for (int j = 0; j < 4; ++j) p.upper[static_cast<size_t>(j)] = 20;

    LPResult a = lp_solve(p);
    LPProblem q = p;
    std::shuffle(q.rows.begin(), q.rows.end(), rng);
    LPResult b = lp_solve(q);
    CHECK(a.status == b.status);
    if (a.status == LPStatus::Optimal) CHECK(a.objective_value == b.objective_value);
  }
}

TEST_CASE("Bland's rule survives a classic degenerate instance") {
  // Beale's cycling example (degenerate under naive pivoting)
  LPProblem p = make(4);
  p.objective = {Rational(3) / 4, -150, Rational(1) / 50, -6};
  add_row(p, {{0, Rational(1) / 4}, {1, -60}, {2, Rational(-1) / 25}, {3, 9}},
          LinearRow::Rel::Le, 0);
  add_row(p, {{0, Rational(1) / 2}, {1, -90}, {2, Rational(-1) / 50}, {3, 3}},
          LinearRow::Rel::Le, 0);
  add_row(p, {{2, 1}}, LinearRow::Rel::Le, 1);
  LPResult r = lp_solve(p);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.objective_value == Rational(1) / 20);
  CHECK(r.pivots < 100);
}

TEST_CASE("presolve is sound: never calls a feasible system infeasible") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    LPProblem p = make(3);
    for (int i = 0; i < 3; ++i) {
      std::vector<std::pair<int, Rational>> coeffs;
      for (int j = 0; j < 3; ++j) {
        int c = static_cast<int>(rng() % 5) - 2;
        if (c != 0) coeffs.push_back({j, c});
      }
      if (coeffs.empty()) continue;
      add_row(p, std::move(coeffs), static_cast<LinearRow::Rel>(rng() % 3),
              static_cast<int>(rng() % 7) - 3);
    }
    for (int j = 0; j < 3; ++j)
      if (rng() % 2) p.upper[static_cast<size_t>(j)] = static_cast<int>(rng() % 6);
    bool pre = presolve_feasible(p);
    LPStatus full = lp_solve(p).status;
    if (!pre) CHECK(full == LPStatus::Infeasible);
  }
}
