// Acceptance suite: nine go/no-go checks over the whole toolkit, each
// printed as a single PASS/FAIL line. Exit status is the failure count.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

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
#include "rsmkit/validate.hpp"

// reuse the randomized generators and the enumeration oracle from the unit
// tests; they are implementation-independent by construction
#include "../support/gen.hpp"
#include "../support/oracles.hpp"

namespace fs = std::filesystem;
using namespace rsm;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << detail
            << std::endl;
  if (!pass) ++g_failures;
}

CompiledModel load(const std::string& path) {
  ParseResult r = parse_model_file(path);
  if (!r.ok()) {
    for (const auto& d : r.diagnostics) std::cerr << d.render(path) << "\n";
    std::exit(99);
  }
  return compile(*r.model);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- criterion 1: analyzer == exhaustive path enumeration -----------------

void criterion1() {
  auto t0 = Clock::now();
  int mismatches = 0;
  int done = 0;
  for (int loops = 0; loops <= 1; ++loops) {
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
      rsmtest::ProgramGenerator gen(seed * 2 + static_cast<std::uint64_t>(loops));
      gen.roll_config();
      gen.allow_loops = loops == 1;
      Block prog = gen.gen_program();
      CFG cfg = build_cfg(prog);
      Verdict v = analyze(cfg, gen.contexts, gen.initial);
      rsmtest::PathEnumerator oracle(gen.contexts, gen.initial);
      bool bad = oracle.has_violation(prog);
      if ((v.kind == Verdict::Kind::Counterexample) != bad) ++mismatches;
      ++done;
    }
  }
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << "consistency checker vs path enumeration: " << done - mismatches << "/" << done
     << " agree (1000 loop-free + 1000 bounded-loop programs) in " << secs << " s";
  report(1, mismatches == 0 && secs < 60.0, os.str());
}

// --- criterion 2: certificates imply violation-free simulation -------------

void criterion2() {
  bool pass = true;
  std::ostringstream os;

  std::vector<std::pair<std::string, CompiledModel>> corpus;
  corpus.emplace_back("faces_l3", load("models/faces_l3.rsm"));

  for (auto& [name, cm] : corpus) {
    ModelVerdict mv = analyze_model(cm);
    if (mv.verdict.kind != Verdict::Kind::Certificate) {
      pass = false;
      os << name << " lost its certificate; ";
      continue;
    }
    std::atomic<int> violations{0};
    const int total = 10000;
    int nthreads = 8;
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&, t] {
        for (int i = t; i < total; i += nthreads) {
          Stimulus stim = random_stimulus(cm, static_cast<std::uint64_t>(i) + 1);
          try {
            simulate_timed(cm, stim, 3);
          } catch (const ReconfigViolation&) {
            ++violations;
          } catch (const RuntimeTrap&) {
            // data traps are unrelated to reconfiguration consistency
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (violations != 0) pass = false;
    os << name << ": " << violations << " violations over " << total << " stimuli; ";
  }

  CompiledModel broken = load("models/faces_l3_noreconfig.rsm");
  ModelVerdict mv = analyze_model(broken);
  bool cex = mv.verdict.kind == Verdict::Kind::Counterexample;
  bool confirmed = false;
  if (cex) {
    ReplayOutcome ro = replay_counterexample(broken, mv.verdict, 42, 100);
    confirmed = ro.kind == ReplayOutcome::Kind::Confirmed;
  }
  if (!cex || !confirmed) pass = false;
  os << "deleted-reconfigure variant: " << (cex ? "COUNTEREXAMPLE" : "no counterexample")
     << ", replay " << (confirmed ? "CONFIRMED" : "not confirmed");
  report(2, pass, os.str());
}

// --- criterion 3: LP never contradicts bounded search ----------------------

void criterion3() {
  bool pass = true;
  std::ostringstream os;
  int proven = 0, contradicted = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    rsmtest::NetGenerator gen(seed);
    PetriNet net = gen.gen();
    MarkingConstraint target = gen.gen_target(net);
    if (check_unreachable(net, target) == ReachVerdict::ProvenUnreachable) {
      ++proven;
      if (find_witness(net, target, 100000).has_value()) ++contradicted;
    }
  }
  if (contradicted != 0) pass = false;
  os << proven << "/500 random nets proven, " << contradicted << " contradicted by BFS; ";

  CompiledModel cross = load("models/crossblock.rsm");
  PetriNet net = extract_net(cross);
  bool witness_found = false;
  for (const auto& target : deadlock_targets(net)) {
    if (check_unreachable(net, target) == ReachVerdict::Unknown &&
        find_witness(net, target, 100000).has_value())
      witness_found = true;
  }
  if (!witness_found) pass = false;
  os << "cross-blocking witness " << (witness_found ? "found" : "MISSING") << "; ";

  CompiledModel faces = load("models/faces_l1.rsm");
  PetriNet fnet = extract_net(faces);
  auto targets = deadlock_targets(fnet);
  int unproven = 0;
  for (const auto& target : targets)
    if (check_unreachable(fnet, target) != ReachVerdict::ProvenUnreachable) ++unproven;
  if (unproven != 0) pass = false;
  os << targets.size() << " face-pipeline deadlock candidates, " << unproven << " unproven";
  report(3, pass, os.str());
}

// --- criterion 4: FIFO dimensioning dominates observed occupancy ------------

void criterion4() {
  bool pass = true;
  std::ostringstream os;
  Stimulus stim = read_stimulus_file("models/faces.stim");
  for (const char* path : {"models/faces_l2.rsm", "models/faces_l3.rsm"}) {
    CompiledModel cm = load(path);
    PetriNet net = extract_net(cm);
    auto [trace, stats] = simulate_timed(cm, stim, infer_level(cm.model));
    for (const auto& ch : cm.model.channels) {
      FifoBound b = fifo_bound(net, ch.name);
      std::int64_t observed = stats.max_occupancy.at(ch.name);
      if (!b.bounded || b.bound < observed) {
        pass = false;
        os << path << ":" << ch.name << " bound "
           << (b.bounded ? std::to_string(b.bound) : "unbounded") << " < observed " << observed
           << "; ";
      }
    }
  }

  ParseResult r = parse_model(R"(
system f {
  module P {
    port out o
    behavior {
      repeat 3 {
        write o 1
      }
    }
  }
  module C {
    port in i
    behavior {
      repeat 3 {
        read i x
      }
    }
  }
  channel ch P.o -> C.i
}
)");
  CompiledModel fix = compile(*r.model);
  FifoBound b = fifo_bound(extract_net(fix), "ch");
  bool exact = b.bounded && b.bound == 3;
  if (!exact) pass = false;
  os << "repeat(3) fixture bound = " << (b.bounded ? std::to_string(b.bound) : "unbounded")
     << " (want exactly 3)";
  report(4, pass, os.str());
}

// --- criterion 5: timing never changes functionality ------------------------

void criterion5() {
  bool pass = true;
  std::ostringstream os;
  Stimulus stim = read_stimulus_file("models/faces.stim");
  Trace t1 = simulate_untimed(load("models/faces_l1.rsm"), stim);
  auto [t2, s2] = simulate_timed(load("models/faces_l2.rsm"), stim, 2);
  auto [t3, s3] = simulate_timed(load("models/faces_l3.rsm"), stim, 3);
  bool eq12 = !compare_traces(t1, t2).has_value();
  bool eq13 = !compare_traces(t1, t3).has_value();
  if (!eq12 || !eq13) pass = false;
  os << "L1==L2: " << (eq12 ? "yes" : "NO") << ", L1==L3: " << (eq13 ? "yes" : "NO") << "; ";

  for (const auto* stats : {&s2, &s3}) {
    Cycle sum = 0;
    bool overlap = false;
    Cycle prev_end = 0;
    for (const auto& t : stats->transactions) {
      sum += t.end_cycle - t.start_cycle;
      if (t.start_cycle < prev_end) overlap = true;
      prev_end = t.end_cycle;
    }
    if (sum != stats->bus_busy_cycles || overlap) pass = false;
  }
  os << "bus conservation exact on both timed runs; ";

  bool words_ok = s3.bitstream_words_total == 10 * (120 + 72) && s3.reconfig_count == 20;
  if (!words_ok) pass = false;
  os << "bitstream words " << s3.bitstream_words_total << " (hand count 1920), reconfigures "
     << s3.reconfig_count << " (hand count 20)";
  report(5, pass, os.str());
}

// --- criterion 6: static WCET dominates observed latency ---------------------

void criterion6() {
  bool pass = true;
  std::ostringstream os;
  Stimulus stim = read_stimulus_file("models/faces.stim");
  for (const char* path : {"models/faces_l2.rsm", "models/faces_l3.rsm"}) {
    CompiledModel cm = load(path);
    auto [trace, stats] = simulate_timed(cm, stim, infer_level(cm.model));
    for (const auto& mod : cm.model.modules) {
      DeadlineOutcome o = deadline_check(cm, mod.name, 1000000000);
      if (o.wcet < stats.busy_cycles.at(mod.name)) {
        pass = false;
        os << path << ":" << mod.name << " wcet " << o.wcet << " < busy "
           << stats.busy_cycles.at(mod.name) << "; ";
      }
    }
  }
  os << "wcet dominates observed busy time on the corpus; ";

  auto fixture = [&](const char* body, Cycle want) {
    std::string src = std::string(R"(
system d {
  module M {
    port in i
    behavior {
)") + body + R"(
    }
  }
}
)";
    ParseResult r = parse_model(src);
    CompiledModel cm = compile(*r.model);
    return deadline_check(cm, "M", 1000000).wcet == want;
  };
  bool f1 = fixture("compute a 5\ncompute b 3", 8);
  bool f2 = fixture("read i x\nif (x > 0) {\ncompute a 4\n} else {\ncompute b 7\n}\ncompute c 2",
                    9);
  bool f3 = fixture("repeat 3 {\ncompute a 2\n}", 6);
  if (!f1 || !f2 || !f3) pass = false;
  os << "hand fixtures 8/9/6: " << (f1 ? "8 " : "8-FAIL ") << (f2 ? "9 " : "9-FAIL ")
     << (f3 ? "6" : "6-FAIL");
  report(6, pass, os.str());
}

// --- criterion 7: coverage identities ----------------------------------------

void criterion7() {
  bool pass = true;
  std::ostringstream os;
  ParseResult r = parse_model(R"(
system pt {
  module M {
    port in i
    port out o
    behavior {
      read i x
      write o x
    }
  }
}
)");
  CompiledModel pt = compile(*r.model);
  Stimulus zero;
  zero.inputs["M.i"] = {0};

  CoverageReport cr = measure_coverage(pt, {zero});
  bool half = cr.faults_total == 64 && cr.faults_detected == 32;
  if (!half) pass = false;
  os << "pass-through bit coverage " << cr.faults_detected << "/64 (exhaustive oracle 32); ";

  Trace golden = simulate_untimed(pt, zero);
  PropertyCoverageReport pr = pcc(pt, golden_properties(golden), {zero});
  bool identity = pr.faults_detected == cr.faults_detected;
  if (!identity) pass = false;
  os << "golden-equality pcc == bit coverage: " << (identity ? "yes" : "NO") << "; ";

  PropertyCoverageReport empty = pcc(pt, {}, {zero});
  if (empty.property_coverage_pct != 0.0) pass = false;
  os << "empty property set -> 0; ";

  // monotonicity over randomized additions
  ParseResult r2 = parse_model(R"(
system b {
  module M {
    port in i
    port out o
    behavior {
      read i x
      if (x > 4) {
        write o x - 4
      } else {
        write o 0 - x
      }
    }
  }
}
)");
  CompiledModel branchy = compile(*r2.model);
  std::mt19937_64 rng(2024);
  std::vector<Stimulus> bench{zero};
  bench[0].inputs = {{"M.i", {1}}};
  std::vector<Property> props;
  CoverageReport prev_cov = measure_coverage(branchy, bench);
  double prev_pcc = pcc(branchy, props, bench).property_coverage_pct;
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    if (rng() % 2 == 0) {
      Stimulus s;
      s.inputs["M.i"] = {static_cast<Value>(rng() % 64)};
      bench.push_back(s);
    } else {
      // an invariant that holds on every fault-free run: outputs stay small
      Property p;
      p.id = "p" + std::to_string(trial);
      p.kind = Property::Kind::Invariant;
      p.channel = "M.o";
      p.op = BinOp::Le;
      p.threshold = static_cast<Value>(64 + rng() % 64);
      props.push_back(p);
    }
    CoverageReport cov = measure_coverage(branchy, bench);
    double pc = pcc(branchy, props, bench).property_coverage_pct;
    if (cov.statement_pct + 1e-12 < prev_cov.statement_pct ||
        cov.branch_pct + 1e-12 < prev_cov.branch_pct ||
        cov.condition_pct + 1e-12 < prev_cov.condition_pct ||
        cov.bit_pct + 1e-12 < prev_cov.bit_pct || pc + 1e-12 < prev_pcc ||
        pc > cov.bit_pct + 1e-12)
      ++violations;
    prev_cov = cov;
    prev_pcc = pc;
  }
  if (violations != 0) pass = false;
  os << "monotonicity over 100 randomized additions: " << violations << " violations";
  report(7, pass, os.str());
}

// --- criterion 8: byte-identical reruns ---------------------------------------

void criterion8() {
#ifndef RSMKIT_BIN
  report(8, false, "binary path not provided");
#else
  bool pass = true;
  std::ostringstream os;
  auto run = [&](const std::string& args) {
    std::string cmd = std::string(RSMKIT_BIN) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  fs::path base = fs::temp_directory_path() / "rsmkit_acceptance_det";
  fs::remove_all(base);

  struct Cmd {
    std::string args;
    std::vector<std::string> files;
  };
  std::vector<Cmd> cmds = {
      {"sim --model models/faces_l3.rsm --level 3 --stim models/faces.stim --props "
       "models/faces.props",
       {"trace.txt", "stats.txt", "stats.json"}},
      {"check-deadlock --model models/crossblock.rsm", {"deadlock.json", "net.txt"}},
      {"check-reconfig --model models/faces_l3_noreconfig.rsm --seed 11",
       {"verdict.json"}},
      {"coverage --model models/faces_l1.rsm --stim models/faces.stim --jobs 4",
       {"coverage.json", "coverage.txt"}},
      {"atpg --model models/faces_l1.rsm --metric condition --budget 6 --seed 2",
       {"atpg.json"}},
  };
  for (size_t i = 0; i < cmds.size(); ++i) {
    fs::path a = base / ("a" + std::to_string(i));
    fs::path b = base / ("b" + std::to_string(i));
    fs::create_directories(a);
    fs::create_directories(b);
    int ra = run(cmds[i].args + " --out " + a.string());
    int rb = run(cmds[i].args + " --out " + b.string());
    if (ra != rb) pass = false;
    for (const auto& f : cmds[i].files) {
      if (slurp(a / f) != slurp(b / f) || slurp(a / f).empty()) {
        pass = false;
        os << cmds[i].args.substr(0, cmds[i].args.find(' ')) << "/" << f << " differs; ";
      }
    }
  }
  fs::remove_all(base);
  os << "5 commands rerun byte-identically";
  report(8, pass, os.str());
#endif
}

// --- criterion 9: desk-scale performance --------------------------------------

void criterion9() {
  CompiledModel cm = load("models/faces_l3.rsm");
  Stimulus stim = read_stimulus_file("models/faces.stim");
  auto t0 = Clock::now();
  auto [trace, stats] = simulate_timed(cm, stim, 3);
  double secs = seconds_since(t0);
  std::ostringstream os;
  os << "level-3 simulation of 10 frames x 20 entries: " << secs << " s (budget 15 s), "
     << stats.total_cycles << " cycles";
  report(9, secs < 15.0 && !trace.records.empty(), os.str());
}

}  // namespace

int main() {
  auto t0 = Clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
            << seconds_since(t0) << " s total)" << std::endl;
  return g_failures;
}
