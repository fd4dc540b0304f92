// rsmkit: model, simulate and verify reconfigurable HW/SW systems.
//
// Subcommands mirror the four-level flow: sim (levels 1-3), check-deadlock
// (level 1+), check-reconfig (level 3), verify-properties (level 4),
// transform (architecture rewrites), coverage and atpg (testbench quality).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsmkit/cfg.hpp"
#include "rsmkit/coverage.hpp"
#include "rsmkit/deadline.hpp"
#include "rsmkit/elaborate.hpp"
#include "rsmkit/io.hpp"
#include "rsmkit/parser.hpp"
#include "rsmkit/petri.hpp"
#include "rsmkit/printer.hpp"
#include "rsmkit/properties.hpp"
#include "rsmkit/reach.hpp"
#include "rsmkit/reconfig.hpp"
#include "rsmkit/sim.hpp"
#include "rsmkit/transform.hpp"
#include "rsmkit/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 3;

struct Common {
  std::string model_path;
  std::string out_dir;
  bool print_json = false;
};

rsm::CompiledModel load_model(const std::string& path, int level) {
  rsm::ParseResult r = rsm::parse_model_file(path);
  for (const auto& d : r.diagnostics) std::cerr << d.render(path) << "\n";
  if (!r.ok()) throw CLI::RuntimeError(kExitUsage);
  rsm::Diagnostics diags = rsm::validate(*r.model, level);
  for (const auto& d : diags) std::cerr << d.render(path) << "\n";
  if (rsm::has_errors(diags)) throw CLI::RuntimeError(kExitUsage);
  return rsm::compile(*r.model);
}

void write_file(const std::string& dir, const std::string& name, const std::string& content,
                bool echo_json, bool is_json) {
  if (!dir.empty()) {
    fs::create_directories(dir);
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << content;
  }
  if (echo_json && is_json) std::cout << content;
}

json verdict_json(const rsm::ModelVerdict& mv, const rsm::CFG* cfg, bool with_states) {
  json j;
  j["task_module"] = mv.task_module;
  bool cert = mv.verdict.kind == rsm::Verdict::Kind::Certificate;
  j["kind"] = cert ? "CERTIFICATE" : "COUNTEREXAMPLE";
  if (!cert) {
    j["offending_fn"] = mv.verdict.offending_fn;
    j["offending_context"] =
        mv.verdict.offending_context.empty() ? "<none>" : mv.verdict.offending_context;
    j["missing_in"] = mv.verdict.missing_in;
    j["may_be_infeasible"] = mv.verdict.may_be_infeasible;
    json path = json::array();
    for (int node : mv.verdict.path) {
      json step;
      step["node"] = node;
      if (cfg) {
        const auto& n = cfg->nodes[static_cast<size_t>(node)];
        if (n.kind == rsm::CFG::Node::Kind::Entry) {
          step["at"] = "entry";
        } else if (n.kind == rsm::CFG::Node::Kind::Exit) {
          step["at"] = "exit";
        } else {
          step["line"] = n.stmt->pos.line;
          step["col"] = n.stmt->pos.col;
        }
      }
      path.push_back(step);
    }
    j["path"] = path;
  }
  if (with_states) {
    json states = json::array();
    for (const auto& s : mv.verdict.node_states) {
      json entry = json::array();
      for (const auto& c : s) entry.push_back(c.empty() ? "<none>" : c);
      states.push_back(entry);
    }
    j["node_states"] = states;
  }
  return j;
}

json coverage_json(const rsm::CoverageReport& r) {
  json j;
  j["statement_pct"] = r.statement_pct;
  j["branch_pct"] = r.branch_pct;
  j["condition_pct"] = r.condition_pct;
  j["bit_pct"] = r.bit_pct;
  j["statements"] = {{"hit", r.statements_hit}, {"total", r.statements_total}};
  j["branches"] = {{"hit", r.branches_hit}, {"total", r.branches_total}};
  j["conditions"] = {{"hit", r.conditions_hit}, {"total", r.conditions_total}};
  j["faults"] = {{"detected", r.faults_detected}, {"total", r.faults_total}};
  j["uncovered"] = {{"statements", r.uncovered_statements},
                    {"branches", r.uncovered_branches},
                    {"conditions", r.uncovered_conditions}};
  json und = json::array();
  for (const auto& f : r.undetected_faults) und.push_back(f.label());
  j["undetected_faults"] = und;
  return j;
}

std::string coverage_text(const rsm::CoverageReport& r) {
  std::ostringstream os;
  os << "statement: " << r.statements_hit << "/" << r.statements_total << " ("
     << r.statement_pct << ")\n";
  os << "branch:    " << r.branches_hit << "/" << r.branches_total << " (" << r.branch_pct
     << ")\n";
  os << "condition: " << r.conditions_hit << "/" << r.conditions_total << " ("
     << r.condition_pct << ")\n";
  if (r.faults_total)
    os << "bit:       " << r.faults_detected << "/" << r.faults_total << " (" << r.bit_pct
       << ")\n";
  return os.str();
}

// ---- sim ----------------------------------------------------------------

int cmd_sim(const Common& c, int level, const std::string& stim_path,
            const std::string& props_path, rsm::Cycle livelock_cap) {
  if (level < 1 || level > 3) {
    std::cerr << "sim: --level must be 1, 2 or 3\n";
    return kExitUsage;
  }
  rsm::CompiledModel cm = load_model(c.model_path, level);
  rsm::Stimulus stim;
  if (!stim_path.empty()) stim = rsm::read_stimulus_file(stim_path);

  std::vector<rsm::Property> props;
  if (!props_path.empty()) {
    rsm::Diagnostics pd;
    props = rsm::parse_property_file(props_path, pd);
    for (const auto& d : pd) std::cerr << d.render(props_path) << "\n";
    if (rsm::has_errors(pd)) return kExitUsage;
    rsm::validate_properties(cm, props);
  }

  try {
    if (level == 1) {
      rsm::Trace t = rsm::simulate_untimed(cm, stim);
      std::string trace_text;
      {
        std::ostringstream os;
        if (t.deadlocked) os << "# deadlocked\n";
        for (const auto& rec : t.records)
          os << rec.channel << " " << rec.seq << " " << rec.value << "\n";
        trace_text = os.str();
      }
      write_file(c.out_dir, "trace.txt", trace_text, false, false);
      std::cout << "level 1: " << t.records.size() << " records"
                << (t.deadlocked ? ", DEADLOCKED" : "") << "\n";
      return t.deadlocked ? kExitViolation : kExitOk;
    }
    rsm::SimLimits limits;
    limits.max_cycles = livelock_cap;
    auto [t, stats] = rsm::simulate_timed(cm, stim, level, rsm::deadline_specs(props), limits);
    std::ostringstream os;
    if (t.deadlocked) os << "# deadlocked\n";
    for (const auto& rec : t.records)
      os << rec.channel << " " << rec.seq << " " << rec.value << "\n";
    write_file(c.out_dir, "trace.txt", os.str(), false, false);
    write_file(c.out_dir, "stats.txt", rsm::stats_to_text(stats), false, false);
    write_file(c.out_dir, "stats.json", rsm::stats_to_json_string(stats), c.print_json, true);
    std::cout << "level " << level << ": " << stats.total_cycles << " cycles, bus utilization "
              << stats.bus_utilization << ", " << stats.reconfig_count << " reconfigurations"
              << (t.deadlocked ? ", DEADLOCKED" : "") << "\n";
    return t.deadlocked ? kExitViolation : kExitOk;
  } catch (const rsm::ReconfigViolation& e) {
    json j;
    j["error"] = "ReconfigViolation";
    j["fn"] = e.fn;
    j["loaded_context"] = e.loaded_context.empty() ? "<none>" : e.loaded_context;
    j["cycle"] = e.cycle;
    j["module"] = e.module;
    j["line"] = e.pos.line;
    write_file(c.out_dir, "violation.json", j.dump(2) + "\n", c.print_json, true);
    std::cerr << "reconfiguration violation: " << e.what() << "\n";
    return kExitViolation;
  }
}

// ---- check-reconfig -------------------------------------------------------

int cmd_check_reconfig(const Common& c, bool report_states, std::uint64_t seed,
                       int replay_budget) {
  rsm::CompiledModel cm = load_model(c.model_path, 3);
  if (!cm.model.has_config_map()) {
    std::cerr << "check-reconfig: model has no configuration map\n";
    return kExitUsage;
  }
  rsm::ModelVerdict mv = rsm::analyze_model(cm);
  std::optional<rsm::CFG> cfg;
  if (!mv.task_module.empty()) cfg = rsm::build_cfg(cm.program(mv.task_module).body);

  if (mv.verdict.kind == rsm::Verdict::Kind::Certificate) {
    json j = verdict_json(mv, cfg ? &*cfg : nullptr, report_states);
    write_file(c.out_dir, "verdict.json", j.dump(2) + "\n", c.print_json, true);
    std::cout << "CERTIFICATE";
    if (!mv.task_module.empty()) std::cout << " (task " << mv.task_module << ")";
    std::cout << "\n";
    if (report_states && cfg) {
      for (size_t n = 0; n < mv.verdict.node_states.size(); ++n) {
        std::cout << "  node " << n << ": {";
        bool first = true;
        for (const auto& s : mv.verdict.node_states[n]) {
          std::cout << (first ? "" : ", ") << (s.empty() ? "<none>" : s);
          first = false;
        }
        std::cout << "}\n";
      }
    }
    return kExitOk;
  }

  std::cout << "COUNTEREXAMPLE: " << mv.verdict.offending_fn << " callable under context '"
            << (mv.verdict.offending_context.empty() ? "<none>" : mv.verdict.offending_context)
            << "' which does not provide it\n";
  if (cfg) {
    for (int node : mv.verdict.path) {
      const auto& n = cfg->nodes[static_cast<size_t>(node)];
      if (n.kind == rsm::CFG::Node::Kind::Entry)
        std::cout << "  entry\n";
      else if (n.kind == rsm::CFG::Node::Kind::Exit)
        std::cout << "  exit\n";
      else
        std::cout << "  " << c.model_path << ":" << n.stmt->pos.line << ":" << n.stmt->pos.col
                  << "\n";
    }
  }
  if (mv.verdict.may_be_infeasible) std::cout << "  (path may be infeasible)\n";

  rsm::ReplayOutcome ro = rsm::replay_counterexample(cm, mv.verdict, seed, replay_budget);
  json j = verdict_json(mv, cfg ? &*cfg : nullptr, report_states);
  j["replay"] = ro.kind == rsm::ReplayOutcome::Kind::Confirmed ? "CONFIRMED" : "NOT_TRIGGERED";
  j["replay_attempts"] = ro.attempts;
  if (ro.kind == rsm::ReplayOutcome::Kind::Confirmed) {
    json stim;
    for (const auto& [port, vals] : ro.witness.inputs) stim[port] = vals;
    j["witness_stimulus"] = stim;
  }
  write_file(c.out_dir, "verdict.json", j.dump(2) + "\n", c.print_json, true);
  if (ro.kind == rsm::ReplayOutcome::Kind::Confirmed) {
    std::cout << "replay: CONFIRMED after " << ro.attempts << " attempt(s)\n";
    return kExitViolation;
  }
  std::cout << "replay: NOT_TRIGGERED within " << ro.attempts << " attempt(s)\n";
  return kExitUnknown;
}

// ---- check-deadlock --------------------------------------------------------

int cmd_check_deadlock(const Common& c, std::int64_t state_cap, std::uint64_t target_cap) {
  rsm::CompiledModel cm = load_model(c.model_path, 1);
  rsm::PetriNet net = rsm::extract_net(cm);
  write_file(c.out_dir, "net.txt", rsm::export_net(net), false, false);

  std::vector<rsm::MarkingConstraint> targets;
  try {
    targets = rsm::deadlock_targets(net, target_cap);
  } catch (const rsm::CombinatorialLimitError& e) {
    std::cerr << "check-deadlock: " << e.what() << " (raise --target-cap to continue)\n";
    return kExitUsage;
  }

  int proven = 0, witnessed = 0, unknown = 0;
  json results = json::array();
  for (const auto& target : targets) {
    json entry;
    entry["target"] = target.description;
    if (rsm::check_unreachable(net, target) == rsm::ReachVerdict::ProvenUnreachable) {
      ++proven;
      entry["verdict"] = "PROVEN_UNREACHABLE";
    } else {
      auto w = rsm::find_witness(net, target, state_cap);
      if (w) {
        ++witnessed;
        entry["verdict"] = "WITNESSED";
        json seq = json::array();
        for (int t : w->transitions)
          seq.push_back(net.transitions[static_cast<size_t>(t)].name);
        entry["witness"] = seq;
      } else {
        ++unknown;
        entry["verdict"] = "UNKNOWN";
      }
    }
    results.push_back(entry);
  }
  json j;
  j["targets"] = static_cast<std::int64_t>(targets.size());
  j["proven_unreachable"] = proven;
  j["witnessed"] = witnessed;
  j["unknown"] = unknown;
  j["results"] = results;
  write_file(c.out_dir, "deadlock.json", j.dump(2) + "\n", c.print_json, true);
  std::cout << targets.size() << " deadlock candidates: " << proven << " proven unreachable, "
            << witnessed << " witnessed, " << unknown << " unknown\n";
  if (witnessed) return kExitViolation;
  if (unknown) return kExitUnknown;
  return kExitOk;
}

// ---- verify-properties ------------------------------------------------------

int cmd_verify_properties(const Common& c, int level, const std::string& stim_path,
                          const std::string& props_path, double threshold, int jobs) {
  rsm::CompiledModel cm = load_model(c.model_path, std::min(level, 3));
  rsm::Stimulus stim;
  if (!stim_path.empty()) stim = rsm::read_stimulus_file(stim_path);
  rsm::Diagnostics pd;
  std::vector<rsm::Property> props = rsm::parse_property_file(props_path, pd);
  for (const auto& d : pd) std::cerr << d.render(props_path) << "\n";
  if (rsm::has_errors(pd)) return kExitUsage;
  try {
    rsm::validate_properties(cm, props);
  } catch (const rsm::UnknownChannelError& e) {
    std::cerr << "verify-properties: " << e.what() << "\n";
    return kExitUsage;
  }

  // fresh simulation at the model's refinement (timed when placed)
  rsm::Trace trace;
  rsm::StatsReport stats;
  bool timed = rsm::infer_level(cm.model) >= 2;
  if (timed) {
    auto [t, s] = rsm::simulate_timed(cm, stim, rsm::infer_level(cm.model),
                                      rsm::deadline_specs(props));
    trace = std::move(t);
    stats = std::move(s);
  } else {
    trace = rsm::simulate_untimed(cm, stim);
  }
  auto results = rsm::check_properties(trace, timed ? &stats : nullptr, props);
  bool any_fail = false;
  json jprops = json::array();
  for (const auto& r : results) {
    json e;
    e["id"] = r.id;
    e["pass"] = r.pass;
    if (!r.pass) {
      any_fail = true;
      if (r.violation_index >= 0) e["violation_index"] = r.violation_index;
      if (r.observed >= 0) e["observed"] = r.observed;
      e["detail"] = r.detail;
    }
    jprops.push_back(e);
    std::cout << r.id << ": " << (r.pass ? "PASS" : "FAIL") << (r.pass ? "" : " " + r.detail)
              << "\n";
  }

  json j;
  j["properties"] = jprops;
  if (any_fail) {
    write_file(c.out_dir, "properties.json", j.dump(2) + "\n", c.print_json, true);
    return kExitViolation;
  }

  rsm::PropertyCoverageReport pr = rsm::pcc(cm, props, {stim}, jobs);
  j["property_coverage_pct"] = pr.property_coverage_pct;
  j["faults_total"] = pr.faults_total;
  j["faults_detected"] = pr.faults_detected;
  json und = json::array();
  for (const auto& f : pr.undetected) und.push_back(f.label());
  j["undetected_faults"] = und;
  write_file(c.out_dir, "properties.json", j.dump(2) + "\n", c.print_json, true);

  std::cout << "property coverage: " << pr.faults_detected << "/" << pr.faults_total << " ("
            << pr.property_coverage_pct << ")\n";
  if (!pr.undetected.empty()) {
    std::cout << "undetected faults (extend the property set to observe them):\n";
    size_t shown = 0;
    for (const auto& f : pr.undetected) {
      if (++shown > 10) {
        std::cout << "  ... " << pr.undetected.size() - 10 << " more\n";
        break;
      }
      std::cout << "  " << f.label() << "\n";
    }
  }
  return pr.property_coverage_pct < threshold ? kExitUnknown : kExitOk;
}

// ---- transform ---------------------------------------------------------------

int cmd_transform(const Common& c, const std::string& op, const std::string& modules_csv,
                  const std::string& module, const std::string& to, const std::string& bus_spec,
                  const std::string& out_model) {
  rsm::CompiledModel cm = load_model(c.model_path, 1);
  rsm::SystemModel result;
  try {
    if (op == "group-sw") {
      std::set<std::string> group;
      std::string cur;
      for (char ch : modules_csv + ",") {
        if (ch == ',') {
          if (!cur.empty()) group.insert(cur);
          cur.clear();
        } else {
          cur.push_back(ch);
        }
      }
      if (group.empty()) {
        std::cerr << "transform: --modules must name at least one module\n";
        return kExitUsage;
      }
      std::optional<rsm::BusDef> bus;
      if (!bus_spec.empty()) {
        rsm::BusDef b;
        auto colon = bus_spec.find(':');
        b.name = bus_spec.substr(0, colon);
        if (colon != std::string::npos)
          b.cycles_per_word = std::stoi(bus_spec.substr(colon + 1));
        bus = b;
      }
      result = rsm::transform_group_sw(cm.model, group, bus);
    } else if (op == "move") {
      rsm::MoveDirection dir;
      if (to == "hw") {
        dir = rsm::MoveDirection::to_hw();
      } else if (to == "sw") {
        dir = rsm::MoveDirection::to_sw();
      } else if (to.rfind("fpga:", 0) == 0) {
        dir = rsm::MoveDirection::to_fpga(to.substr(5));
      } else {
        std::cerr << "transform: --to must be hw, sw or fpga:<context>\n";
        return kExitUsage;
      }
      result = rsm::transform_move_module(cm.model, module, dir);
    } else {
      std::cerr << "transform: --op must be group-sw or move\n";
      return kExitUsage;
    }
  } catch (const rsm::UnknownModuleError& e) {
    std::cerr << "transform: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rsm::UnknownContextError& e) {
    std::cerr << "transform: " << e.what() << "\n";
    return kExitUsage;
  }

  int level = rsm::infer_level(result);
  rsm::Diagnostics diags = rsm::validate(result, level);
  for (const auto& d : diags) std::cerr << d.render(out_model) << "\n";
  std::string printed = rsm::print_model(result);
  {
    std::ofstream out(out_model, std::ios::binary);
    if (!out) {
      std::cerr << "transform: cannot write " << out_model << "\n";
      return kExitUsage;
    }
    out << printed;
  }
  std::cout << "wrote " << out_model << " (level " << level << ", "
            << (rsm::has_errors(diags) ? "INVALID" : "valid") << ")\n";
  return rsm::has_errors(diags) ? kExitViolation : kExitOk;
}

// ---- coverage / atpg ------------------------------------------------------------

int cmd_coverage(const Common& c, const std::vector<std::string>& stim_paths, int jobs,
                 bool skip_faults) {
  rsm::CompiledModel cm = load_model(c.model_path, 1);
  std::vector<rsm::Stimulus> bench;
  for (const auto& p : stim_paths) bench.push_back(rsm::read_stimulus_file(p));
  rsm::CoverageReport r = rsm::measure_coverage(cm, bench, !skip_faults, jobs);
  write_file(c.out_dir, "coverage.txt", coverage_text(r), false, false);
  write_file(c.out_dir, "coverage.json", coverage_json(r).dump(2) + "\n", c.print_json, true);
  std::cout << coverage_text(r);
  return kExitOk;
}

int cmd_atpg(const Common& c, const std::string& metric_name, int budget, std::uint64_t seed) {
  rsm::CompiledModel cm = load_model(c.model_path, 1);
  rsm::Metric metric;
  if (metric_name == "statement") metric = rsm::Metric::Statement;
  else if (metric_name == "branch") metric = rsm::Metric::Branch;
  else if (metric_name == "condition") metric = rsm::Metric::Condition;
  else if (metric_name == "bit") metric = rsm::Metric::Bit;
  else {
    std::cerr << "atpg: --metric must be statement, branch, condition or bit\n";
    return kExitUsage;
  }
  rsm::GenerateResult g = rsm::generate_tests(cm, metric, budget, seed);
  if (!c.out_dir.empty()) {
    fs::create_directories(c.out_dir);
    for (size_t i = 0; i < g.stimuli.size(); ++i) {
      char name[32];
      snprintf(name, sizeof name, "stim_%03zu.stim", i);
      rsm::write_stimulus_file(g.stimuli[i], (fs::path(c.out_dir) / name).string());
    }
  }
  json j = coverage_json(g.achieved);
  j["retained_stimuli"] = g.stimuli.size();
  j["runs"] = g.runs;
  j["seed"] = seed;
  write_file(c.out_dir, "atpg.json", j.dump(2) + "\n", c.print_json, true);
  std::cout << "retained " << g.stimuli.size() << " stimuli after " << g.runs << " runs\n"
            << coverage_text(g.achieved);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modeling, simulation and verification for reconfigurable HW/SW systems"};
  app.require_subcommand(1);

  Common c;
  int level = 1;
  std::uint64_t seed = 1;
  std::string stim_path, props_path;

  auto add_common = [&](CLI::App* sub, bool with_level) {
    sub->add_option("--model", c.model_path, "model file (.rsm)")->required();
    sub->add_option("--out", c.out_dir, "output directory for report files");
    sub->add_flag("--json", c.print_json, "echo machine-readable output to stdout");
    if (with_level) sub->add_option("--level", level, "refinement level");
    sub->add_option("--seed", seed, "seed for randomized steps");
  };

  // sim
  auto* sim = app.add_subcommand("sim", "simulate at a refinement level");
  rsm::Cycle livelock_cap = 100000000;
  add_common(sim, true);
  sim->add_option("--stim", stim_path, "stimulus file");
  sim->add_option("--props", props_path, "property file (deadline observation)");
  sim->add_option("--livelock-cap", livelock_cap, "cycle cap before aborting");

  // check-reconfig
  auto* reconfig = app.add_subcommand("check-reconfig", "prove reconfiguration consistency");
  bool report_states = false;
  int replay_budget = 200;
  add_common(reconfig, false);
  reconfig->add_flag("--report-states", report_states, "print per-node abstract states");
  reconfig->add_option("--replay-budget", replay_budget, "stimuli tried to confirm");

  // check-deadlock
  auto* deadlock = app.add_subcommand("check-deadlock", "prove deadlock candidates unreachable");
  std::int64_t state_cap = 100000;
  std::uint64_t target_cap = 10000;
  add_common(deadlock, false);
  deadlock->add_option("--state-cap", state_cap, "BFS state budget per witness search");
  deadlock->add_option("--target-cap", target_cap, "deadlock candidate cap");

  // verify-properties
  auto* verify = app.add_subcommand("verify-properties", "check properties, then their coverage");
  double threshold = 0.9;
  int jobs = 1;
  add_common(verify, true);
  verify->add_option("--stim", stim_path, "stimulus file");
  verify->add_option("--props", props_path, "property file")->required();
  verify->add_option("--threshold", threshold, "minimum property coverage (default 0.9)");
  verify->add_option("--jobs", jobs, "parallel fault simulations");

  // transform
  auto* transform = app.add_subcommand("transform", "rewrite the architecture");
  std::string op, modules_csv, module, to, bus_spec, out_model;
  add_common(transform, false);
  transform->add_option("--op", op, "group-sw or move")->required();
  transform->add_option("--modules", modules_csv, "comma-separated modules (group-sw)");
  transform->add_option("--module", module, "module to move (move)");
  transform->add_option("--to", to, "hw, sw or fpga:<context> (move)");
  transform->add_option("--bus", bus_spec, "bus name[:cycles_per_word] when adding one");
  transform->add_option("--out-model", out_model, "rewritten model file")->required();

  // coverage
  auto* coverage = app.add_subcommand("coverage", "measure testbench coverage");
  std::vector<std::string> stim_paths;
  bool skip_faults = false;
  add_common(coverage, false);
  coverage->add_option("--stim", stim_paths, "stimulus file(s)")->required();
  coverage->add_option("--jobs", jobs, "parallel fault simulations");
  coverage->add_flag("--no-faults", skip_faults, "skip the bit-fault campaign");

  // atpg
  auto* atpg = app.add_subcommand("atpg", "generate tests by greedy random retention");
  std::string metric = "statement";
  int budget = 100;
  add_common(atpg, false);
  atpg->add_option("--metric", metric, "statement|branch|condition|bit");
  atpg->add_option("--budget", budget, "candidate stimuli to try");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_sim(c, level, stim_path, props_path, livelock_cap);
    if (reconfig->parsed()) return cmd_check_reconfig(c, report_states, seed, replay_budget);
    if (deadlock->parsed()) return cmd_check_deadlock(c, state_cap, target_cap);
    if (verify->parsed())
      return cmd_verify_properties(c, level, stim_path, props_path, threshold, jobs);
    if (transform->parsed())
      return cmd_transform(c, op, modules_csv, module, to, bus_spec, out_model);
    if (coverage->parsed()) return cmd_coverage(c, stim_paths, jobs, skip_faults);
    if (atpg->parsed()) return cmd_atpg(c, metric, budget, seed);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const rsm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rsm::RuntimeTrap& e) {
    std::cerr << "runtime trap: " << e.what() << "\n";
    return kExitViolation;
  } catch (const rsm::LivelockGuardError& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
