#include <limits>

#include "doctest.h"
#include "rsmkit/sim.hpp"
#include "support/fixtures.hpp"

using namespace rsm;

TEST_CASE("identity pipeline: producer 1,2,3 copied to the output channel") {
  CompiledModel cm = rsmtest::compile_src(rsmtest::kProducerConsumer);
  Trace t = simulate_untimed(cm, {});
  CHECK(!t.deadlocked);
  auto by = t.by_channel();
  CHECK(by["ch"] == std::vector<Value>{1, 2, 3});
  CHECK(by["C.o"] == std::vector<Value>{1, 2, 3});
}

TEST_CASE("cross-blocking modules deadlock with an empty trace") {
  CompiledModel cm = rsmtest::compile_src(rsmtest::kCrossBlocking);
  Trace t = simulate_untimed(cm, {});
  CHECK(t.deadlocked);
  CHECK(t.records.empty());
}

TEST_CASE("environment ports feed from the stimulus and collect outputs") {
  CompiledModel cm = rsmtest::compile_src(R"(
system env {
  module M {
    port in i
    port out o
    behavior {
      repeat 4 {
        read i x
        write o x * x
      }
    }
  }
}
)");
  Stimulus stim;
  stim.inputs["M.i"] = {1, 2, 3, 4};
  Trace t = simulate_untimed(cm, stim);
  CHECK(!t.deadlocked);
  CHECK(t.by_channel()["M.o"] == std::vector<Value>{1, 4, 9, 16});
}

TEST_CASE("exhausted stimulus leaves the reader permanently blocked") {
  CompiledModel cm = rsmtest::compile_src(R"(
system env {
  module M {
    port in i
    port out o
    behavior {
      repeat 3 {
        read i x
        write o x
      }
    }
  }
}
)");
  Stimulus stim;
  stim.inputs["M.i"] = {5};
  Trace t = simulate_untimed(cm, stim);
  CHECK(t.deadlocked);
  CHECK(t.by_channel()["M.o"] == std::vector<Value>{5});
}

TEST_CASE("divide by zero traps with module attribution") {
  CompiledModel cm = rsmtest::compile_src(R"(
system z {
  module M {
    port in i
    port out o
    behavior {
      read i x
      write o 10 / x
    }
  }
}
)");
  Stimulus stim;
  stim.inputs["M.i"] = {0};
  CHECK_THROWS_AS(simulate_untimed(cm, stim), RuntimeTrap);
  try {
    simulate_untimed(cm, stim);
  } catch (const RuntimeTrap& e) {
    CHECK(e.module == "M");
    CHECK(e.pos.line > 0);
  }
}

TEST_CASE("wrapping arithmetic is two's complement") {
  CompiledModel cm = rsmtest::compile_src(R"(
system w {
  module M {
    port out o
    behavior {
      let big = 2147483647
      write o big + 1
      write o big * 2
      let m = 0 - 2147483647 - 1
      write o m / -1
    }
  }
}
)");
  Trace t = simulate_untimed(cm, {});
  auto v = t.by_channel()["M.o"];
  REQUIRE(v.size() == 3);
  CHECK(v[0] == std::numeric_limits<Value>::min());
  CHECK(v[1] == -2);
  CHECK(v[2] == std::numeric_limits<Value>::min());
}

TEST_CASE("kernels evaluate the same inline and through callfpga") {
  const char* tmpl = R"(
system k {
  kernel SQ(a, b) {
    let d = a - b
    return d * d
  }
  module M {
    port out o
    behavior {
      %s
      write o v
    }
  }
  %s
}
)";
  char call_src[1024], fpga_src[1024];
  snprintf(call_src, sizeof call_src, tmpl, "call SQ v (7, 3)", "");
  snprintf(fpga_src, sizeof fpga_src, tmpl, "callfpga SQ v (7, 3)",
           "context c1 { fn SQ latency 2 bitstream 8 }");
  Trace t1 = simulate_untimed(rsmtest::compile_src(call_src), {});
  Trace t2 = simulate_untimed(rsmtest::compile_src(fpga_src), {});
  CHECK(t1.by_channel()["M.o"] == std::vector<Value>{16});
  CHECK(!compare_traces(t1, t2).has_value());
}

TEST_CASE("repeated runs are bit-identical") {
  CompiledModel cm = rsmtest::compile_src(rsmtest::kProducerConsumer);
  Trace a = simulate_untimed(cm, {});
  Trace b = simulate_untimed(cm, {});
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].channel == b.records[i].channel);
    CHECK(a.records[i].seq == b.records[i].seq);
    CHECK(a.records[i].value == b.records[i].value);
  }
}

TEST_CASE("compare_traces finds the first divergence in channel order") {
  Trace a, b;
  a.records = {{"out", 0, 1}, {"out", 1, 2}, {"out", 2, 3}};
  b.records = {{"out", 0, 1}, {"out", 1, 9}, {"out", 2, 3}};
  CHECK(!compare_traces(a, a).has_value());
  auto d = compare_traces(a, b);
  REQUIRE(d.has_value());
  CHECK(d->channel == "out");
  CHECK(d->index == 1);
  CHECK(*d->value_a == 2);
  CHECK(*d->value_b == 9);

  // missing channel = empty sequence
  Trace c;
  auto d2 = compare_traces(a, c);
  REQUIRE(d2.has_value());
  CHECK(d2->channel == "out");
  CHECK(d2->index == 0);
  CHECK(d2->value_a.has_value());
  CHECK(!d2->value_b.has_value());
}
