#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rsmkit/model.hpp"

namespace rsm {

/// A module behavior after elaboration: kernel calls inlined, repeat-1 loops
/// unwrapped, statement/condition ids and variable slots assigned.
struct ElaboratedProgram {
  std::string owner;
  Block body;
  std::vector<std::string> vars;  // slot -> name, first-occurrence order
  int num_stmts = 0;
  int num_ifs = 0;
  int num_conditions = 0;
};

/// A kernel after inlining nested calls; params occupy the first slots.
struct ElaboratedKernel {
  std::string name;
  size_t num_params = 0;
  Block body;  // ends with Return
  std::vector<std::string> vars;
};

struct CompiledModel {
  SystemModel model;
  std::vector<ElaboratedProgram> programs;  // by module index
  std::vector<ElaboratedKernel> kernels;
  std::map<std::string, int> kernel_index;
  std::map<std::string, int> module_index;
  std::map<std::string, int> channel_index;
  // per module: port name -> channel index, -1 = environment port
  std::vector<std::map<std::string, int>> in_port_channel;
  std::vector<std::map<std::string, int>> out_port_channel;

  const ElaboratedProgram& program(const std::string& module) const;
  const ElaboratedKernel* kernel(const std::string& name) const;
};

/// Precondition: validate(m, 1) has no errors.
CompiledModel compile(const SystemModel& m);

/// Worst-case number of reads each environment port can perform in one run
/// (keys are "MODULE.port"). Used to size generated stimuli.
std::map<std::string, std::int64_t> env_read_demand(const CompiledModel& cm);

}  // namespace rsm
