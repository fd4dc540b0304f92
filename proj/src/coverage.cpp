#include "rsmkit/coverage.hpp"

#include <algorithm>
#include <random>
#include <thread>

#include "rsmkit/ast_walk.hpp"

namespace rsm {
namespace {

struct Instrumentation {
  std::vector<std::vector<std::uint8_t>> stmt_hit, branch_then, branch_else, cond_true,
      cond_false;

  explicit Instrumentation(const CompiledModel& cm) {
    for (const auto& p : cm.programs) {
      stmt_hit.emplace_back(static_cast<size_t>(p.num_stmts), 0);
      branch_then.emplace_back(static_cast<size_t>(p.num_stmts), 0);
      branch_else.emplace_back(static_cast<size_t>(p.num_stmts), 0);
      cond_true.emplace_back(static_cast<size_t>(p.num_conditions), 0);
      cond_false.emplace_back(static_cast<size_t>(p.num_conditions), 0);
    }
  }

  std::vector<ExecHooks> hooks() {
    std::vector<ExecHooks> out(stmt_hit.size());
    for (size_t i = 0; i < out.size(); ++i) {
      out[i].stmt_hit = &stmt_hit[i];
      out[i].branch_then = &branch_then[i];
      out[i].branch_else = &branch_else[i];
      out[i].cond_true = &cond_true[i];
      out[i].cond_false = &cond_false[i];
    }
    return out;
  }
};

bool traces_differ(const Trace& a, const Trace& b) {
  if (a.deadlocked != b.deadlocked) return true;
  return compare_traces(a, b).has_value();
}

// One faulted untimed run; traps count as observable deviations only through
// the (truncated) trace they leave behind.
Trace faulty_run(const CompiledModel& cm, const Stimulus& stim, const FaultSite& site) {
  std::vector<ExecHooks> hooks(cm.programs.size());
  hooks[static_cast<size_t>(site.module_idx)].fault_slot = site.var_slot;
  hooks[static_cast<size_t>(site.module_idx)].fault_mask =
      static_cast<Value>(1u << site.bit_index);
  hooks[static_cast<size_t>(site.module_idx)].fault_stuck1 = site.stuck1;
  try {
    return simulate_untimed(cm, stim, &hooks);
  } catch (const RuntimeTrap&) {
    Trace t;
    t.deadlocked = true;  // aborted: observably different from any clean run
    return t;
  }
}

}  // namespace

std::vector<FaultSite> enumerate_fault_sites(const CompiledModel& cm) {
  std::vector<FaultSite> out;
  for (size_t mi = 0; mi < cm.programs.size(); ++mi) {
    const ElaboratedProgram& p = cm.programs[mi];
    for (size_t slot = 0; slot < p.vars.size(); ++slot) {
      for (int bit = 0; bit < 32; ++bit) {
        for (int pol = 0; pol < 2; ++pol) {
          FaultSite s;
          s.module = cm.model.modules[mi].name;
          s.variable = p.vars[slot];
          s.bit_index = bit;
          s.stuck1 = pol == 1;
          s.module_idx = static_cast<int>(mi);
          s.var_slot = static_cast<int>(slot);
          out.push_back(std::move(s));
        }
      }
    }
  }
  return out;
}

CoverageReport measure_coverage(const CompiledModel& cm, const std::vector<Stimulus>& testbench,
                                bool with_faults, int jobs) {
  CoverageReport rep;
  Instrumentation inst(cm);
  std::vector<Trace> golden;
  {
    auto hooks = inst.hooks();
    for (const auto& stim : testbench) golden.push_back(simulate_untimed(cm, stim, &hooks));
  }

  for (size_t mi = 0; mi < cm.programs.size(); ++mi) {
    const ElaboratedProgram& p = cm.programs[mi];
    rep.statements_total += p.num_stmts;
    rep.conditions_total += 2LL * p.num_conditions;
    for_each_stmt(p.body, [&](const Stmt& s) {
      size_t id = static_cast<size_t>(s.id);
      if (inst.stmt_hit[mi][id])
        ++rep.statements_hit;
      else
        rep.uncovered_statements.push_back(cm.model.modules[mi].name + ":" +
                                           std::to_string(s.pos.line));
      if (s.kind == Stmt::Kind::If) {
        rep.branches_total += 2;
        if (inst.branch_then[mi][id])
          ++rep.branches_hit;
        else
          rep.uncovered_branches.push_back(cm.model.modules[mi].name + ":" +
                                           std::to_string(s.pos.line) + ":then");
        if (inst.branch_else[mi][id])
          ++rep.branches_hit;
        else
          rep.uncovered_branches.push_back(cm.model.modules[mi].name + ":" +
                                           std::to_string(s.pos.line) + ":else");
      }
    });
    for (int c = 0; c < p.num_conditions; ++c) {
      if (inst.cond_true[mi][static_cast<size_t>(c)])
        ++rep.conditions_hit;
      else
        rep.uncovered_conditions.push_back(cm.model.modules[mi].name + ":cond" +
                                           std::to_string(c) + ":true");
      if (inst.cond_false[mi][static_cast<size_t>(c)])
        ++rep.conditions_hit;
      else
        rep.uncovered_conditions.push_back(cm.model.modules[mi].name + ":cond" +
                                           std::to_string(c) + ":false");
    }
  }
  rep.statement_pct = rep.statements_total
                          ? static_cast<double>(rep.statements_hit) /
                                static_cast<double>(rep.statements_total)
                          : 1.0;
  rep.branch_pct = rep.branches_total ? static_cast<double>(rep.branches_hit) /
                                            static_cast<double>(rep.branches_total)
                                      : 1.0;
  rep.condition_pct = rep.conditions_total
                          ? static_cast<double>(rep.conditions_hit) /
                                static_cast<double>(rep.conditions_total)
                          : 1.0;

  if (with_faults) {
    auto sites = enumerate_fault_sites(cm);
    rep.faults_total = static_cast<std::int64_t>(sites.size());
    std::vector<std::uint8_t> detected(sites.size(), 0);
    int nthreads = std::max(1, jobs);
    auto worker = [&](size_t lo, size_t hi) {
      for (size_t i = lo; i < hi; ++i) {
        for (size_t k = 0; k < testbench.size(); ++k) {
          Trace t = faulty_run(cm, testbench[k], sites[i]);
          if (traces_differ(t, golden[k])) {
            detected[i] = 1;
            break;
          }
        }
      }
    };
    if (nthreads == 1 || sites.size() < 64) {
      worker(0, sites.size());
    } else {
      std::vector<std::thread> pool;
      size_t chunk = (sites.size() + static_cast<size_t>(nthreads) - 1) /
                     static_cast<size_t>(nthreads);
      for (int t = 0; t < nthreads; ++t) {
        size_t lo = static_cast<size_t>(t) * chunk;
        size_t hi = std::min(sites.size(), lo + chunk);
        if (lo < hi) pool.emplace_back(worker, lo, hi);
      }
      for (auto& th : pool) th.join();
    }
    for (size_t i = 0; i < sites.size(); ++i) {
      if (detected[i])
        ++rep.faults_detected;
      else
        rep.undetected_faults.push_back(sites[i]);
    }
    rep.bit_pct = rep.faults_total ? static_cast<double>(rep.faults_detected) /
                                         static_cast<double>(rep.faults_total)
                                   : 1.0;
  }
  return rep;
}

Stimulus random_stimulus(const CompiledModel& cm, std::uint64_t seed) {
  Stimulus stim;
  stim.seed = seed;
  std::mt19937_64 rng(seed);
  for (const auto& [port, demand] : env_read_demand(cm)) {
    auto& vals = stim.inputs[port];
    vals.reserve(static_cast<size_t>(demand));
    for (std::int64_t i = 0; i < demand; ++i) {
      std::uint64_t r = rng();
      // mix tiny values (branch guards) with a wider spread
      Value v;
      switch (r % 4) {
        case 0: v = static_cast<Value>((r >> 2) % 2); break;
        case 1: v = static_cast<Value>((r >> 2) % 16); break;
        case 2: v = static_cast<Value>((r >> 2) % 256); break;
        default: v = static_cast<Value>((r >> 2) % 65536); break;
      }
      vals.push_back(v);
    }
  }
  return stim;
}

namespace {

double metric_value(const CoverageReport& r, Metric m) {
  switch (m) {
    case Metric::Statement: return r.statement_pct;
    case Metric::Branch: return r.branch_pct;
    case Metric::Condition: return r.condition_pct;
    case Metric::Bit: return r.bit_pct;
  }
  return 0;
}

}  // namespace

GenerateResult generate_tests(const CompiledModel& cm, Metric metric, int budget,
                              std::uint64_t seed) {
  GenerateResult out;
  bool bit = metric == Metric::Bit;
  double best = metric_value(measure_coverage(cm, out.stimuli, bit), metric);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < budget; ++i) {
    ++out.runs;
    Stimulus cand = random_stimulus(cm, rng());
    auto trial = out.stimuli;
    trial.push_back(cand);
    double v = metric_value(measure_coverage(cm, trial, bit), metric);
    if (v > best) {
      best = v;
      out.stimuli.push_back(std::move(cand));
      if (best >= 1.0) break;
    }
  }
  out.achieved = measure_coverage(cm, out.stimuli, true);
  return out;
}

}  // namespace rsm
