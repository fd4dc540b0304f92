#include "rsmkit/reach.hpp"

#include <map>
#include <stdexcept>

namespace rsm {

LPProblem build_state_equation_lp(const PetriNet& net, const MarkingConstraint* target) {
  // variables are the firing counts x; markings are substituted away via
  // m = m0 + C x, so every place contributes one row m0_p + (Cx)_p >= 0 and
  // target terms become rows over x with shifted right-hand sides
  const int np = static_cast<int>(net.places.size());
  const int nt = static_cast<int>(net.transitions.size());
  LPProblem p;
  p.num_vars = nt;
  p.upper.assign(static_cast<size_t>(nt), std::nullopt);
  p.objective.assign(static_cast<size_t>(nt), 0);
  for (int t = 0; t < nt; ++t) {
    Tokens b = net.transitions[static_cast<size_t>(t)].upper_bound;
    if (b >= 0) p.upper[static_cast<size_t>(t)] = Rational(b);
  }

  std::vector<std::vector<std::pair<int, Tokens>>> row_of_place(static_cast<size_t>(np));
  for (int t = 0; t < nt; ++t) {
    std::map<int, Tokens> delta;
    for (const auto& a : net.transitions[static_cast<size_t>(t)].pre)
      delta[a.place] -= a.weight;
    for (const auto& a : net.transitions[static_cast<size_t>(t)].post)
      delta[a.place] += a.weight;
    for (const auto& [pl, c] : delta)
      if (c != 0) row_of_place[static_cast<size_t>(pl)].push_back({t, c});
  }

  // non-negativity of every marking: (Cx)_p >= -m0_p
  for (int pl = 0; pl < np; ++pl) {
    LinearRow row;
    row.rel = LinearRow::Rel::Ge;
    row.rhs = Rational(-net.places[static_cast<size_t>(pl)].initial);
    for (const auto& [t, c] : row_of_place[static_cast<size_t>(pl)])
      row.coeffs.push_back({t, Rational(c)});
    if (!row.coeffs.empty()) p.rows.push_back(std::move(row));
  }

  // exactly-n loop coupling: each activation runs the body its literal count
  for (const auto& loop : net.loops) {
    Rational n1 = Rational(loop.count - 1);
    auto sum_terms = [&](const std::vector<int>& ts, const Rational& coef, LinearRow& row) {
      for (int t : ts) row.coeffs.push_back({t, coef});
    };
    {
      LinearRow row;  // backs >= (n-1) * exits
      sum_terms(loop.back_ts, 1, row);
      sum_terms(loop.exit_ts, -n1, row);
      row.rel = LinearRow::Rel::Ge;
      row.rhs = 0;
      p.rows.push_back(std::move(row));
    }
    {
      LinearRow row;  // backs <= (n-1) * exits + (n-1): one partial activation
      sum_terms(loop.back_ts, 1, row);
      sum_terms(loop.exit_ts, -n1, row);
      row.rel = LinearRow::Rel::Le;
      row.rhs = n1;
      p.rows.push_back(std::move(row));
    }
    {
      LinearRow row;  // exits >= enters - 1
      sum_terms(loop.exit_ts, 1, row);
      sum_terms(loop.enter_ts, -1, row);
      row.rel = LinearRow::Rel::Ge;
      row.rhs = -1;
      p.rows.push_back(std::move(row));
    }
    {
      LinearRow row;  // exits <= enters
      sum_terms(loop.exit_ts, 1, row);
      sum_terms(loop.enter_ts, -1, row);
      row.rel = LinearRow::Rel::Le;
      row.rhs = 0;
      p.rows.push_back(std::move(row));
    }
  }

  if (target) {
    for (const auto& term : target->terms) {
      LinearRow row;
      row.rhs = Rational(term.value - net.places[static_cast<size_t>(term.place)].initial);
      for (const auto& [t, c] : row_of_place[static_cast<size_t>(term.place)])
        row.coeffs.push_back({t, Rational(c)});
      switch (term.op) {
        case MarkingConstraint::Term::Op::Eq: row.rel = LinearRow::Rel::Eq; break;
        case MarkingConstraint::Term::Op::Le: row.rel = LinearRow::Rel::Le; break;
        case MarkingConstraint::Term::Op::Ge: row.rel = LinearRow::Rel::Ge; break;
      }
      // a constant-zero left side decides immediately or is redundant; keep
      // the row (the solver handles it) unless it is trivially false with no
      // coefficients, which the empty-row convention below encodes
      p.rows.push_back(std::move(row));
    }
  }
  return p;
}

ReachVerdict check_unreachable(const PetriNet& net, const MarkingConstraint& target) {
  LPProblem p = build_state_equation_lp(net, &target);
  for (const auto& row : p.rows) {
    if (!row.coeffs.empty()) continue;
    bool ok = true;
    switch (row.rel) {
      case LinearRow::Rel::Eq: ok = row.rhs == 0; break;
      case LinearRow::Rel::Le: ok = row.rhs >= 0; break;
      case LinearRow::Rel::Ge: ok = row.rhs <= 0; break;
    }
    if (!ok) return ReachVerdict::ProvenUnreachable;
  }
  if (!presolve_feasible(p)) return ReachVerdict::ProvenUnreachable;
  LPResult r = lp_solve(p);
  return r.status == LPStatus::Infeasible ? ReachVerdict::ProvenUnreachable
                                          : ReachVerdict::Unknown;
}

FifoBound fifo_bound(const PetriNet& net, const std::string& channel) {
  int item = net.item_place(channel);
  if (item < 0) throw std::invalid_argument("unknown channel: " + channel);
  LPProblem p = build_state_equation_lp(net, nullptr);
  // maximize m_item = m0_item + (Cx)_item
  Rational base = Rational(net.places[static_cast<size_t>(item)].initial);
  for (size_t t = 0; t < net.transitions.size(); ++t) {
    Tokens c = 0;
    for (const auto& a : net.transitions[t].pre)
      if (a.place == item) c -= a.weight;
    for (const auto& a : net.transitions[t].post)
      if (a.place == item) c += a.weight;
    if (c != 0) p.objective[t] = Rational(c);
  }
  LPResult r = lp_solve(p);
  r.objective_value += base;
  FifoBound out;
  if (r.status == LPStatus::Unbounded) return out;
  if (r.status != LPStatus::Optimal)
    throw std::logic_error("state equation must be feasible at x = 0");
  out.bounded = true;
  // the LP optimum may be fractional; occupancy is integral
  Rational v = r.objective_value;
  out.bound = static_cast<Tokens>(boost::multiprecision::numerator(v) /
                                  boost::multiprecision::denominator(v));
  return out;
}

}  // namespace rsm
