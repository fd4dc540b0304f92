#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

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

namespace py = pybind11;
using namespace rsm;

namespace {

Stimulus stimulus_from(const py::dict& inputs, std::uint64_t seed) {
  Stimulus s;
  s.seed = seed;
  for (auto item : inputs) {
    std::string port = py::cast<std::string>(item.first);
    s.inputs[port] = py::cast<std::vector<Value>>(item.second);
  }
  return s;
}

py::dict stats_dict(const StatsReport& s) {
  py::dict d;
  d["total_cycles"] = s.total_cycles;
  d["bus_busy_cycles"] = s.bus_busy_cycles;
  d["bus_utilization"] = s.bus_utilization;
  d["reconfig_count"] = s.reconfig_count;
  d["bitstream_words_total"] = s.bitstream_words_total;
  d["max_occupancy"] = s.max_occupancy;
  d["busy_cycles"] = s.busy_cycles;
  py::list dl;
  for (const auto& r : s.deadline_results) {
    py::dict e;
    e["property_id"] = r.property_id;
    e["observed"] = r.observed;
    e["bound"] = r.bound;
    e["pass"] = r.pass;
    dl.append(e);
  }
  d["deadline_results"] = dl;
  py::list tx;
  for (const auto& t : s.transactions) {
    py::dict e;
    e["kind"] = t.kind == Transaction::Kind::Data ? "DATA" : "BITSTREAM";
    e["initiator"] = t.initiator;
    e["words"] = t.words;
    e["start_cycle"] = t.start_cycle;
    e["end_cycle"] = t.end_cycle;
    if (!t.channel.empty()) e["channel"] = t.channel;
    if (!t.context.empty()) e["context"] = t.context;
    tx.append(e);
  }
  d["transactions"] = tx;
  return d;
}

struct PyModel {
  CompiledModel cm;

  explicit PyModel(const std::string& text) {
    ParseResult r = parse_model(text);
    if (!r.ok()) {
      std::ostringstream os;
      for (const auto& d : r.diagnostics) os << d.render("<model>") << "\n";
      throw py::value_error(os.str());
    }
    cm = compile(*r.model);
  }

  std::vector<std::string> validate_at(int level) const {
    std::vector<std::string> out;
    for (const auto& d : rsm::validate(cm.model, level)) out.push_back(d.render("<model>"));
    return out;
  }
};

py::dict trace_dict(const Trace& t) {
  py::dict d;
  py::list recs;
  for (const auto& r : t.records) recs.append(py::make_tuple(r.channel, r.seq, r.value));
  d["records"] = recs;
  d["deadlocked"] = t.deadlocked;
  py::dict by;
  for (const auto& [ch, vals] : t.by_channel()) by[py::str(ch)] = vals;
  d["by_channel"] = by;
  if (!t.commit_cycles.empty()) d["commit_cycles"] = t.commit_cycles;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "transaction-level simulation and verification for reconfigurable systems";

  py::register_exception<RuntimeTrap>(m, "RuntimeTrap");
  py::register_exception<ReconfigViolation>(m, "ReconfigViolation");
  py::register_exception<LivelockGuardError>(m, "LivelockGuard");
  py::register_exception<UnknownChannelError>(m, "UnknownChannel");
  py::register_exception<PropertyFailsOnGoldenModel>(m, "PropertyFailsOnGoldenModel");
  py::register_exception<CombinatorialLimitError>(m, "CombinatorialLimit");

  py::class_<PyModel>(m, "Model")
      .def(py::init<const std::string&>(), py::arg("source"))
      .def_static(
          "from_file",
          [](const std::string& path) {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw py::value_error("cannot open " + path);
            std::ostringstream ss;
            ss << in.rdbuf();
            return std::make_unique<PyModel>(ss.str());
          },
          py::arg("path"))
      .def_property_readonly("name", [](const PyModel& pm) { return pm.cm.model.name; })
      .def_property_readonly("modules",
                             [](const PyModel& pm) {
                               std::vector<std::string> out;
                               for (const auto& mod : pm.cm.model.modules)
                                 out.push_back(mod.name);
                               return out;
                             })
      .def_property_readonly("channels",
                             [](const PyModel& pm) {
                               std::vector<std::string> out;
                               for (const auto& ch : pm.cm.model.channels)
                                 out.push_back(ch.name);
                               return out;
                             })
      .def_property_readonly("contexts",
                             [](const PyModel& pm) {
                               py::dict out;
                               for (const auto& c : pm.cm.model.contexts) {
                                 py::list fns;
                                 for (const auto& f : c.functions) fns.append(f.name);
                                 out[py::str(c.name)] = fns;
                               }
                               return out;
                             })
      .def("validate", &PyModel::validate_at, py::arg("level") = 1)
      .def("infer_level", [](const PyModel& pm) { return infer_level(pm.cm.model); })
      .def("pretty", [](const PyModel& pm) { return print_model(pm.cm.model); })
      .def("cfg_summary",
           [](const PyModel& pm, const std::string& module) {
             CFG g = build_cfg(pm.cm.program(module).body);
             py::dict d;
             d["nodes"] = g.nodes.size();
             d["edges"] = g.edges.size();
             d["back_edges"] = g.back_edges.size();
             return d;
           },
           py::arg("module"))
      .def(
          "simulate_untimed",
          [](const PyModel& pm, const py::dict& inputs, std::uint64_t seed) {
            return trace_dict(simulate_untimed(pm.cm, stimulus_from(inputs, seed)));
          },
          py::arg("inputs") = py::dict(), py::arg("seed") = 0)
      .def(
          "simulate_timed",
          [](const PyModel& pm, const py::dict& inputs, int level, std::uint64_t seed,
             Cycle livelock_cap) {
            SimLimits limits;
            limits.max_cycles = livelock_cap;
            auto [t, s] = simulate_timed(pm.cm, stimulus_from(inputs, seed), level, {}, limits);
            return py::make_tuple(trace_dict(t), stats_dict(s));
          },
          py::arg("inputs") = py::dict(), py::arg("level") = 2, py::arg("seed") = 0,
          py::arg("livelock_cap") = 100000000)
      .def(
          "check_reconfig",
          [](const PyModel& pm, std::uint64_t seed, int replay_budget) {
            ModelVerdict mv = analyze_model(pm.cm);
            py::dict d;
            d["task_module"] = mv.task_module;
            bool cert = mv.verdict.kind == Verdict::Kind::Certificate;
            d["kind"] = cert ? "CERTIFICATE" : "COUNTEREXAMPLE";
            if (!cert) {
              d["offending_fn"] = mv.verdict.offending_fn;
              d["offending_context"] = mv.verdict.offending_context;
              d["may_be_infeasible"] = mv.verdict.may_be_infeasible;
              d["path"] = mv.verdict.path;
              ReplayOutcome ro = replay_counterexample(pm.cm, mv.verdict, seed, replay_budget);
              d["replay"] =
                  ro.kind == ReplayOutcome::Kind::Confirmed ? "CONFIRMED" : "NOT_TRIGGERED";
            }
            return d;
          },
          py::arg("seed") = 1, py::arg("replay_budget") = 200)
      .def(
          "check_deadlock",
          [](const PyModel& pm, std::int64_t state_cap, std::uint64_t target_cap) {
            PetriNet net = extract_net(pm.cm);
            auto targets = deadlock_targets(net, target_cap);
            int proven = 0, witnessed = 0, unknown = 0;
            for (const auto& target : targets) {
              if (check_unreachable(net, target) == ReachVerdict::ProvenUnreachable) {
                ++proven;
              } else if (find_witness(net, target, state_cap)) {
                ++witnessed;
              } else {
                ++unknown;
              }
            }
            py::dict d;
            d["targets"] = targets.size();
            d["proven_unreachable"] = proven;
            d["witnessed"] = witnessed;
            d["unknown"] = unknown;
            return d;
          },
          py::arg("state_cap") = 100000, py::arg("target_cap") = 10000)
      .def(
          "fifo_bound",
          [](const PyModel& pm, const std::string& channel) -> py::object {
            PetriNet net = extract_net(pm.cm);
            FifoBound b = fifo_bound(net, channel);
            if (!b.bounded) return py::none();
            return py::int_(b.bound);
          },
          py::arg("channel"))
      .def("export_net",
           [](const PyModel& pm) { return export_net(extract_net(pm.cm)); })
      .def(
          "deadline_check",
          [](const PyModel& pm, const std::string& module, Cycle bound,
             const std::optional<std::string>& src, const std::optional<std::string>& sink) {
            DeadlineOutcome o = deadline_check(pm.cm, module, bound, src, sink);
            return py::make_tuple(o.wcet, o.pass);
          },
          py::arg("module"), py::arg("bound"), py::arg("src") = py::none(),
          py::arg("sink") = py::none())
      .def(
          "measure_coverage",
          [](const PyModel& pm, const py::list& bench, bool with_faults,
             int jobs) {
            std::vector<Stimulus> stims;
            for (auto b : bench) stims.push_back(stimulus_from(py::cast<py::dict>(b), 0));
            CoverageReport r = measure_coverage(pm.cm, stims, with_faults, jobs);
            py::dict d;
            d["statement_pct"] = r.statement_pct;
            d["branch_pct"] = r.branch_pct;
            d["condition_pct"] = r.condition_pct;
            d["bit_pct"] = r.bit_pct;
            d["faults_total"] = r.faults_total;
            d["faults_detected"] = r.faults_detected;
            return d;
          },
          py::arg("testbench"), py::arg("with_faults") = true, py::arg("jobs") = 1)
      .def(
          "generate_tests",
          [](const PyModel& pm, const std::string& metric, int budget, std::uint64_t seed) {
            Metric mt = metric == "branch"      ? Metric::Branch
                        : metric == "condition" ? Metric::Condition
                        : metric == "bit"       ? Metric::Bit
                                                : Metric::Statement;
            GenerateResult g = generate_tests(pm.cm, mt, budget, seed);
            py::list stims;
            for (const auto& s : g.stimuli) {
              py::dict ds;
              for (const auto& [port, vals] : s.inputs) ds[py::str(port)] = vals;
              stims.append(ds);
            }
            py::dict d;
            d["stimuli"] = stims;
            d["statement_pct"] = g.achieved.statement_pct;
            d["branch_pct"] = g.achieved.branch_pct;
            d["condition_pct"] = g.achieved.condition_pct;
            d["bit_pct"] = g.achieved.bit_pct;
            return d;
          },
          py::arg("metric"), py::arg("budget"), py::arg("seed") = 1)
      .def(
          "check_properties",
          [](const PyModel& pm, const std::string& props_text, const py::dict& inputs,
             int level) {
            Diagnostics diags;
            auto props = parse_properties(props_text, diags);
            if (has_errors(diags)) {
              std::ostringstream os;
              for (const auto& d : diags) os << d.render("<props>") << "\n";
              throw py::value_error(os.str());
            }
            validate_properties(pm.cm, props);
            Stimulus stim = stimulus_from(inputs, 0);
            Trace trace;
            StatsReport stats;
            bool timed = level >= 2;
            if (timed) {
              auto [t, s] = simulate_timed(pm.cm, stim, level, deadline_specs(props));
              trace = std::move(t);
              stats = std::move(s);
            } else {
              trace = simulate_untimed(pm.cm, stim);
            }
            py::list out;
            for (const auto& r : check_properties(trace, timed ? &stats : nullptr, props)) {
              py::dict e;
              e["id"] = r.id;
              e["pass"] = r.pass;
              if (!r.pass) e["detail"] = r.detail;
              if (r.violation_index >= 0) e["violation_index"] = r.violation_index;
              if (r.observed >= 0) e["observed"] = r.observed;
              out.append(e);
            }
            return out;
          },
          py::arg("properties"), py::arg("inputs") = py::dict(), py::arg("level") = 1)
      .def(
          "pcc",
          [](const PyModel& pm, const std::string& props_text, const py::list& bench,
             int jobs) {
            Diagnostics diags;
            auto props = parse_properties(props_text, diags);
            if (has_errors(diags)) throw py::value_error("malformed properties");
            validate_properties(pm.cm, props);
            std::vector<Stimulus> stims;
            for (auto b : bench) stims.push_back(stimulus_from(py::cast<py::dict>(b), 0));
            PropertyCoverageReport r = pcc(pm.cm, props, stims, jobs);
            py::dict d;
            d["property_coverage_pct"] = r.property_coverage_pct;
            d["faults_total"] = r.faults_total;
            d["faults_detected"] = r.faults_detected;
            py::list und;
            for (const auto& f : r.undetected) und.append(f.label());
            d["undetected"] = und;
            return d;
          },
          py::arg("properties"), py::arg("testbench"), py::arg("jobs") = 1)
      .def(
          "group_sw",
          [](const PyModel& pm, const std::vector<std::string>& modules) {
            std::set<std::string> group(modules.begin(), modules.end());
            SystemModel out = transform_group_sw(pm.cm.model, group);
            return std::make_unique<PyModel>(print_model(out));
          },
          py::arg("modules"))
      .def(
          "move_module",
          [](const PyModel& pm, const std::string& module, const std::string& to) {
            MoveDirection dir;
            if (to == "hw") {
              dir = MoveDirection::to_hw();
            } else if (to == "sw") {
              dir = MoveDirection::to_sw();
            } else if (to.rfind("fpga:", 0) == 0) {
              dir = MoveDirection::to_fpga(to.substr(5));
            } else {
              throw py::value_error("to must be 'hw', 'sw' or 'fpga:<context>'");
            }
            SystemModel out = transform_move_module(pm.cm.model, module, dir);
            return std::make_unique<PyModel>(print_model(out));
          },
          py::arg("module"), py::arg("to"));

  m.def(
      "compare_traces",
      [](const py::dict& a, const py::dict& b) -> py::object {
        auto to_trace = [](const py::dict& d) {
          Trace t;
          for (auto item : py::cast<py::list>(d["records"])) {
            auto tup = py::cast<py::tuple>(item);
            t.records.push_back({py::cast<std::string>(tup[0]), py::cast<std::int64_t>(tup[1]),
                                 py::cast<Value>(tup[2])});
          }
          return t;
        };
        auto div = compare_traces(to_trace(a), to_trace(b));
        if (!div) return py::none();
        py::dict d;
        d["channel"] = div->channel;
        d["index"] = div->index;
        if (div->value_a) d["value_a"] = *div->value_a;
        if (div->value_b) d["value_b"] = *div->value_b;
        return d;
      },
      py::arg("a"), py::arg("b"),
      "None when per-channel sequences match; the first divergence otherwise");
}
