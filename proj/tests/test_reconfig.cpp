#include "doctest.h"
#include "rsmkit/cfg.hpp"
#include "rsmkit/reconfig.hpp"
#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace rsm;

TEST_CASE("load-call-load-call earns a certificate") {
  CompiledModel cm = rsmtest::compile_src(rsmtest::kLevel3Task);
  ModelVerdict mv = analyze_model(cm);
  CHECK(mv.task_module == "SWT");
  CHECK(mv.verdict.kind == Verdict::Kind::Certificate);
}

TEST_CASE("a program without fabric calls is vacuously consistent") {
  CompiledModel cm = rsmtest::compile_src(rsmtest::kProducerConsumer);
  ModelVerdict mv = analyze_model(cm);
  CHECK(mv.task_module.empty());
  CHECK(mv.verdict.kind == Verdict::Kind::Certificate);
}

TEST_CASE("branch loading different contexts: counterexample through the bad arm") {
  CompiledModel cm = rsmtest::compile_src(R"(
system r3 {
  kernel DISTANCE(a) {
    return a
  }
  module SWT {
    port in i
    port out o
    behavior {
      read i b
      if (b > 0) {
        reconfigure config1
      } else {
        reconfigure config2
      }
      callfpga DISTANCE d (1)
      write o d
    }
  }
  bus bus0
  place SWT sw
  context config1 {
    fn DISTANCE latency 5
    bitstream 10
  }
  context config2 {
    bitstream 10
  }
}
)");
  ModelVerdict mv = analyze_model(cm);
  REQUIRE(mv.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(mv.verdict.offending_fn == "DISTANCE");
  CHECK(mv.verdict.offending_context == "config2");
  CHECK(mv.verdict.may_be_infeasible);  // data-dependent branch on the path

  // the path must start at entry, end at the offending call, and replaying
  // its reconfigures must produce the offending context
  CFG cfg = build_cfg(cm.program("SWT").body);
  REQUIRE(!mv.verdict.path.empty());
  CHECK(mv.verdict.path.front() == cfg.entry());
  CHECK(mv.verdict.path.back() == mv.verdict.offending_node);
  std::string loaded;
  for (int node : mv.verdict.path) {
    const CFG::Node& n = cfg.nodes[static_cast<size_t>(node)];
    if (n.kind == CFG::Node::Kind::Statement && n.stmt->kind == Stmt::Kind::Reconfigure &&
        node != mv.verdict.path.back())
      loaded = n.stmt->context;
  }
  CHECK(loaded == "config2");

  // oracle agreement
  rsmtest::PathEnumerator oracle(cm.model.contexts, cm.model.initial_context);
  CHECK(oracle.has_violation(cm.program("SWT").body));
}

TEST_CASE("entry state is NONE: calling before any load is flagged") {
  CompiledModel cm = rsmtest::compile_src(R"(
system r4 {
  kernel F(a) {
    return a
  }
  module SWT {
    port out o
    behavior {
      callfpga F x (1)
      write o x
    }
  }
  bus b
  place SWT sw
  context c1 {
    fn F latency 1
    bitstream 4
  }
}
)");
  ModelVerdict mv = analyze_model(cm);
  REQUIRE(mv.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(mv.verdict.offending_context.empty());  // nothing loaded
  CHECK(!mv.verdict.may_be_infeasible);         // straight-line path
}

TEST_CASE("monotonicity: removing a function never turns a counterexample into a certificate") {
  rsmtest::ProgramGenerator gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    gen.roll_config();
    gen.allow_loops = trial % 2 == 1;
    Block prog = gen.gen_program();
    CFG cfg = build_cfg(prog);
    Verdict before = analyze(cfg, gen.contexts, gen.initial);
    if (gen.contexts.empty()) continue;
    auto mutated = gen.contexts;
    bool removed = false;
    for (auto& c : mutated) {
      if (!c.functions.empty()) {
        c.functions.erase(c.functions.begin());
        removed = true;
        break;
      }
    }
    if (!removed) continue;
    Verdict after = analyze(cfg, mutated, gen.initial);
    if (before.kind == Verdict::Kind::Counterexample)
      CHECK(after.kind == Verdict::Kind::Counterexample);
  }
}

TEST_CASE("analyze agrees with exhaustive path enumeration (sampled)") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    rsmtest::ProgramGenerator gen(seed);
    gen.roll_config();
    gen.allow_loops = seed % 2 == 0;
    Block prog = gen.gen_program();
    CFG cfg = build_cfg(prog);
    Verdict v = analyze(cfg, gen.contexts, gen.initial);
    rsmtest::PathEnumerator oracle(gen.contexts, gen.initial);
    bool bad = oracle.has_violation(prog);
    INFO("seed ", seed);
    CHECK((v.kind == Verdict::Kind::Counterexample) == bad);
    ++checked;
  }
  CHECK(checked == 300);
  // fixpoint effort stays within |nodes| * (|contexts|+1)
  rsmtest::ProgramGenerator gen(1234);
  gen.roll_config();
  Block prog = gen.gen_program();
  CFG cfg = build_cfg(prog);
  Verdict v = analyze(cfg, gen.contexts, gen.initial);
  CHECK(v.iterations <=
        static_cast<int>(cfg.nodes.size()) * (static_cast<int>(gen.contexts.size()) + 1));
}

TEST_CASE("replay confirms an unconditional violation") {
  CompiledModel cm = rsmtest::compile_src(rsmtest::kLevel3TaskBroken);
  ModelVerdict mv = analyze_model(cm);
  REQUIRE(mv.verdict.kind == Verdict::Kind::Counterexample);
  CHECK(mv.verdict.offending_fn == "ROOT");
  ReplayOutcome ro = replay_counterexample(cm, mv.verdict, 42, 50);
  CHECK(ro.kind == ReplayOutcome::Kind::Confirmed);
}

TEST_CASE("replay reports NOT_TRIGGERED for an infeasible constant-guard path") {
  CompiledModel cm = rsmtest::compile_src(R"(
system inf {
  kernel F(a) {
    return a
  }
  module SWT {
    port out o
    behavior {
      reconfigure c1
      let b = 0
      if (b > 0) {
        reconfigure c2
      }
      callfpga F x (1)
      write o x
    }
  }
  bus bus0
  place SWT sw
  context c1 {
    fn F latency 1
    bitstream 4
  }
  context c2 {
    bitstream 4
  }
}
)");
  ModelVerdict mv = analyze_model(cm);
  // path-insensitive: the checker sees the c2 arm even though b is always 0
  REQUIRE(mv.verdict.kind == Verdict::Kind::Counterexample);
  ReplayOutcome ro = replay_counterexample(cm, mv.verdict, 7, 30);
  CHECK(ro.kind == ReplayOutcome::Kind::NotTriggered);
}
