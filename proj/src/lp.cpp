#include "rsmkit/lp.hpp"

#include <limits>
#include <stdexcept>

namespace rsm {
namespace {

struct Bound {
  Rational lo = 0;
  std::optional<Rational> hi;
};

}  // namespace

bool presolve_feasible(const LPProblem& p, int rounds) {
  std::vector<Bound> b(static_cast<size_t>(p.num_vars));
  for (int j = 0; j < p.num_vars; ++j)
    b[static_cast<size_t>(j)].hi = p.upper[static_cast<size_t>(j)];

  for (int round = 0; round < rounds; ++round) {
    bool changed = false;
    for (const auto& row : p.rows) {
      // row activity interval [min, max] over current bounds
      bool min_inf = false, max_inf = false;
      Rational amin = 0, amax = 0;
      for (const auto& [j, c] : row.coeffs) {
        const Bound& bj = b[static_cast<size_t>(j)];
        if (c > 0) {
          amin += c * bj.lo;
          if (bj.hi)
            amax += c * *bj.hi;
          else
            max_inf = true;
        } else if (c < 0) {
          amax += c * bj.lo;
          if (bj.hi)
            amin += c * *bj.hi;
          else
            min_inf = true;
        }
      }
      if (row.rel == LinearRow::Rel::Le || row.rel == LinearRow::Rel::Eq) {
        if (!min_inf && amin > row.rhs) return false;
      }
      if (row.rel == LinearRow::Rel::Ge || row.rel == LinearRow::Rel::Eq) {
        if (!max_inf && amax < row.rhs) return false;
      }
      // bound tightening from each usable side of the row
      auto tighten = [&](bool upper_side) {
        for (const auto& [j, c] : row.coeffs) {
          Bound& bj = b[static_cast<size_t>(j)];
          bool rest_inf = false;
          Rational rest = 0;
          for (const auto& [k, ck] : row.coeffs) {
            if (k == j) continue;
            const Bound& bk = b[static_cast<size_t>(k)];
            if (upper_side) {  // others at their minimum activity
              if (ck > 0) {
                rest += ck * bk.lo;
              } else if (bk.hi) {
                rest += ck * *bk.hi;
              } else {
                rest_inf = true;
              }
            } else {  // others at their maximum activity
              if (ck > 0) {
                if (bk.hi)
                  rest += ck * *bk.hi;
                else
                  rest_inf = true;
              } else {
                rest += ck * bk.lo;
              }
            }
            if (rest_inf) break;
          }
          if (rest_inf) continue;
          Rational budget = row.rhs - rest;
          if (upper_side) {
            // c * xj <= budget
            if (c > 0) {
              Rational nh = budget / c;
              if (!bj.hi || nh < *bj.hi) {
                bj.hi = nh;
                changed = true;
              }
            } else if (c < 0) {
              Rational nl = budget / c;
              if (nl > bj.lo) {
                bj.lo = nl;
                changed = true;
              }
            }
          } else {
            // c * xj >= budget
            if (c > 0) {
              Rational nl = budget / c;
              if (nl > bj.lo) {
                bj.lo = nl;
                changed = true;
              }
            } else if (c < 0) {
              Rational nh = budget / c;
              if (!bj.hi || nh < *bj.hi) {
                bj.hi = nh;
                changed = true;
              }
            }
          }
          if (bj.hi && bj.lo > *bj.hi) return false;
        }
        return true;
      };
      if (row.rel == LinearRow::Rel::Le || row.rel == LinearRow::Rel::Eq)
        if (!tighten(true)) return false;
      if (row.rel == LinearRow::Rel::Ge || row.rel == LinearRow::Rel::Eq)
        if (!tighten(false)) return false;
    }
    if (!changed) break;
  }
  return true;
}

namespace {

// Dense two-phase tableau simplex. Columns: structurals, slacks (rows and
// upper bounds), artificials. Bland's rule throughout.
class Simplex {
 public:
  explicit Simplex(const LPProblem& p) : p_(p) { build(); }

  LPResult solve() {
    LPResult r;
    if (!phase1()) {
      r.status = LPStatus::Infeasible;
      r.pivots = pivots_;
      return r;
    }
    int ph2 = phase2();
    r.pivots = pivots_;
    if (ph2 < 0) {
      r.status = LPStatus::Unbounded;
      return r;
    }
    r.status = LPStatus::Optimal;
    r.solution.assign(static_cast<size_t>(p_.num_vars), 0);
    for (size_t i = 0; i < basis_.size(); ++i) {
      int v = basis_[i];
      if (v < p_.num_vars)
        r.solution[static_cast<size_t>(v)] = tab_[i][static_cast<size_t>(cols_)];
    }
    for (int j = 0; j < p_.num_vars && j < static_cast<int>(obj_.size()); ++j)
      r.objective_value += obj_[static_cast<size_t>(j)] * r.solution[static_cast<size_t>(j)];
    return r;
  }

 private:
  void build() {
    n_struct_ = p_.num_vars;
    int bound_rows = 0;
    for (int j = 0; j < p_.num_vars; ++j)
      if (p_.upper[static_cast<size_t>(j)]) ++bound_rows;
    rows_ = static_cast<int>(p_.rows.size()) + bound_rows;

    int slack_count = bound_rows;
    for (const auto& row : p_.rows)
      if (row.rel != LinearRow::Rel::Eq) ++slack_count;

    cols_ = n_struct_ + slack_count + rows_;
    tab_.assign(static_cast<size_t>(rows_),
                std::vector<Rational>(static_cast<size_t>(cols_) + 1, Rational(0)));
    basis_.assign(static_cast<size_t>(rows_), -1);
    obj_.assign(static_cast<size_t>(n_struct_), Rational(0));
    for (size_t j = 0; j < p_.objective.size() && j < obj_.size(); ++j) obj_[j] = p_.objective[j];

    int r = 0;
    int next_slack = n_struct_;
    art_base_ = n_struct_ + slack_count;
    for (const auto& row : p_.rows) {
      for (const auto& [j, c] : row.coeffs)
        tab_[static_cast<size_t>(r)][static_cast<size_t>(j)] += c;
      tab_[static_cast<size_t>(r)][static_cast<size_t>(cols_)] = row.rhs;
      if (row.rel == LinearRow::Rel::Le)
        tab_[static_cast<size_t>(r)][static_cast<size_t>(next_slack++)] = 1;
      else if (row.rel == LinearRow::Rel::Ge)
        tab_[static_cast<size_t>(r)][static_cast<size_t>(next_slack++)] = -1;
      ++r;
    }
    for (int j = 0; j < p_.num_vars; ++j) {
      if (!p_.upper[static_cast<size_t>(j)]) continue;
      tab_[static_cast<size_t>(r)][static_cast<size_t>(j)] = 1;
      tab_[static_cast<size_t>(r)][static_cast<size_t>(next_slack++)] = 1;
      tab_[static_cast<size_t>(r)][static_cast<size_t>(cols_)] =
          *p_.upper[static_cast<size_t>(j)];
      ++r;
    }
    for (int i = 0; i < rows_; ++i) {
      auto& row = tab_[static_cast<size_t>(i)];
      if (row[static_cast<size_t>(cols_)] < 0)
        for (auto& v : row) v = -v;
      row[static_cast<size_t>(art_base_ + i)] = 1;
      basis_[static_cast<size_t>(i)] = art_base_ + i;
    }
  }

  bool phase1() {
    // minimize the artificial sum: price = sum of all rows
    std::vector<Rational> price(static_cast<size_t>(cols_) + 1, Rational(0));
    for (int i = 0; i < rows_; ++i) {
      const auto& row = tab_[static_cast<size_t>(i)];
      for (int j = 0; j <= cols_; ++j)
        price[static_cast<size_t>(j)] += row[static_cast<size_t>(j)];
    }
    for (int j = art_base_; j < cols_; ++j) price[static_cast<size_t>(j)] = 0;
    for (auto& v : price) v = -v;  // z-row: price[j] = z_j - c_j, price[end] = z0
    run(price, art_base_);
    if (price[static_cast<size_t>(cols_)] != 0) return false;
    // drive leftover artificials out of the basis
    for (int i = 0; i < rows_; ++i) {
      if (basis_[static_cast<size_t>(i)] < art_base_) continue;
      int enter = -1;
      for (int j = 0; j < art_base_; ++j) {
        if (tab_[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) pivot(i, enter);
    }
    return true;
  }

  int phase2() {
    std::vector<Rational> price(static_cast<size_t>(cols_) + 1, Rational(0));
    for (int j = 0; j < n_struct_; ++j)
      price[static_cast<size_t>(j)] = -obj_[static_cast<size_t>(j)];
    for (int i = 0; i < rows_; ++i) {
      int bvar = basis_[static_cast<size_t>(i)];
      Rational c = price[static_cast<size_t>(bvar)];
      if (c == 0) continue;
      const auto& row = tab_[static_cast<size_t>(i)];
      for (int j = 0; j <= cols_; ++j)
        price[static_cast<size_t>(j)] -= c * row[static_cast<size_t>(j)];
    }
    return run(price, art_base_);
  }

  // Bland: entering = lowest-index negative reduced cost among columns
  // [0, limit); leaving = min ratio, ties by lowest basic variable index.
  // Returns -1 when an unbounded direction appears.
  int run(std::vector<Rational>& price, int limit) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (price[static_cast<size_t>(j)] < 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return 0;
      int leave = -1;
      Rational best;
      for (int i = 0; i < rows_; ++i) {
        const Rational& a = tab_[static_cast<size_t>(i)][static_cast<size_t>(enter)];
        if (a <= 0) continue;
        Rational ratio = tab_[static_cast<size_t>(i)][static_cast<size_t>(cols_)] / a;
        if (leave < 0 || ratio < best ||
            (ratio == best &&
             basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return -1;
      pivot(leave, enter);
      // the pivot row is normalized now; eliminate the entering column
      Rational factor = price[static_cast<size_t>(enter)];
      const auto& prow = tab_[static_cast<size_t>(leave)];
      for (int j = 0; j <= cols_; ++j)
        price[static_cast<size_t>(j)] -= factor * prow[static_cast<size_t>(j)];
      if (++pivots_ > 2000000) throw std::logic_error("simplex pivot budget exceeded");
    }
  }

  void pivot(int row, int col) {
    auto& prow = tab_[static_cast<size_t>(row)];
    Rational d = prow[static_cast<size_t>(col)];
    for (auto& v : prow) v /= d;
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      auto& r = tab_[static_cast<size_t>(i)];
      Rational f = r[static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int j = 0; j <= cols_; ++j)
        r[static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
    }
    basis_[static_cast<size_t>(row)] = col;
  }

  const LPProblem& p_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<int> basis_;
  std::vector<Rational> obj_;
  int rows_ = 0, cols_ = 0, n_struct_ = 0, art_base_ = 0;
  long long pivots_ = 0;
};

}  // namespace

LPResult lp_solve(const LPProblem& p) {
  Simplex s(p);
  return s.solve();
}

}  // namespace rsm
