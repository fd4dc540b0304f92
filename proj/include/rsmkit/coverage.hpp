#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsmkit/sim.hpp"

namespace rsm {

/// Whole-run stuck-at fault on one bit of one variable's read value.
struct FaultSite {
  std::string module;
  std::string variable;
  int bit_index = 0;  // 0..31
  bool stuck1 = false;
  int module_idx = -1;
  int var_slot = -1;

  std::string label() const {
    return module + "." + variable + ".bit" + std::to_string(bit_index) +
           (stuck1 ? ".stuck1" : ".stuck0");
  }
};

/// Deterministic enumeration: modules in declaration order, variables in
/// first-occurrence order, bits ascending, stuck-at-0 before stuck-at-1.
/// Exactly 64 sites per variable.
std::vector<FaultSite> enumerate_fault_sites(const CompiledModel& cm);

struct CoverageReport {
  double statement_pct = 0, branch_pct = 0, condition_pct = 0, bit_pct = 0;
  std::int64_t statements_total = 0, statements_hit = 0;
  std::int64_t branches_total = 0, branches_hit = 0;
  std::int64_t conditions_total = 0, conditions_hit = 0;
  std::int64_t faults_total = 0, faults_detected = 0;
  std::vector<std::string> uncovered_statements;  // "module:line"
  std::vector<std::string> uncovered_branches;
  std::vector<std::string> uncovered_conditions;
  std::vector<FaultSite> undetected_faults;
};

/// Statement/branch/condition coverage from instrumented untimed runs over
/// the whole testbench, plus bit coverage: the fraction of fault sites whose
/// injection changes the observable trace on at least one stimulus.
/// `with_faults` can be disabled to skip the (quadratic) injection campaign.
CoverageReport measure_coverage(const CompiledModel& cm, const std::vector<Stimulus>& testbench,
                                bool with_faults = true, int jobs = 1);

enum class Metric { Statement, Branch, Condition, Bit };

struct GenerateResult {
  std::vector<Stimulus> stimuli;
  CoverageReport achieved;
  int runs = 0;
};

/// Greedy random-retention generation: seeded random stimuli are kept only
/// when they strictly increase the chosen metric. Deterministic given seed.
GenerateResult generate_tests(const CompiledModel& cm, Metric metric, int budget,
                              std::uint64_t seed);

/// Random stimulus sized by the model's worst-case environment demand.
Stimulus random_stimulus(const CompiledModel& cm, std::uint64_t seed);

}  // namespace rsm
