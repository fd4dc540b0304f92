#include "doctest.h"
#include "rsmkit/validate.hpp"
#include "support/fixtures.hpp"

using namespace rsm;

TEST_CASE("level-1 model with no placements is clean") {
  SystemModel m = rsmtest::parse_ok(rsmtest::kProducerConsumer);
  CHECK(validate(m, 1).empty());
}

TEST_CASE("level-2 model missing one placement names the module") {
  SystemModel m = rsmtest::parse_ok(rsmtest::kTimedPipeline);
  m.placements.erase("C");
  Diagnostics d = validate(m, 2);
  REQUIRE(d.size() == 1);
  CHECK(d[0].message.find("'C'") != std::string::npos);
  CHECK(d[0].message.find("placement") != std::string::npos);
}

TEST_CASE("level-3 catches a fabric function missing from every context") {
  SystemModel m = rsmtest::parse_ok(rsmtest::kLevel3Task);
  // delete ROOT from config2
  for (auto& c : m.contexts) {
    if (c.name != "config2") continue;
    c.functions.clear();
  }
  Diagnostics d3 = validate(m, 3);
  REQUIRE(!d3.empty());
  bool names_root = false;
  for (const auto& d : d3)
    if (d.message.find("'ROOT'") != std::string::npos) names_root = true;
  CHECK(names_root);
}

TEST_CASE("validation rule sets are cumulative across levels") {
  // a model clean at level 3 is clean at levels 1 and 2
  SystemModel m = rsmtest::parse_ok(rsmtest::kLevel3Task);
  CHECK(validate(m, 3).empty());
  CHECK(validate(m, 2).empty());
  CHECK(validate(m, 1).empty());

  // and diagnostics only grow with the level
  SystemModel broken = rsmtest::parse_ok(rsmtest::kTimedPipeline);
  broken.placements.erase("C");
  CHECK(validate(broken, 1).size() <= validate(broken, 2).size());
  CHECK(validate(broken, 2).size() <= validate(broken, 3).size());
}

TEST_CASE("unannotated compute is flagged at level 2 but not level 1") {
  SystemModel m = rsmtest::parse_ok(R"(
system s {
  module M {
    behavior {
      compute work
    }
  }
  module N {
    behavior {
      compute idle
    }
    annotate idle 4
  }
  bus b
  place M sw
  place N sw
}
)");
  CHECK(validate(m, 1).empty());
  Diagnostics d = validate(m, 2);
  REQUIRE(d.size() == 1);
  CHECK(d[0].message.find("'work'") != std::string::npos);
}

TEST_CASE("reconfigure and callfpga must live in one SW task at level 3") {
  SystemModel m = rsmtest::parse_ok(R"(
system s {
  kernel F(a) {
    return a
  }
  module A {
    port out o
    behavior {
      reconfigure c1
      callfpga F x (1)
      write o x
    }
  }
  module B {
    port out o
    behavior {
      callfpga F y (2)
      write o y
    }
  }
  bus bus0
  place A sw
  place B sw
  context c1 {
    fn F latency 1
    bitstream 4
  }
}
)");
  Diagnostics d = validate(m, 3);
  REQUIRE(!d.empty());
  bool single_task = false;
  for (const auto& diag : d)
    if (diag.message.find("single software task") != std::string::npos) single_task = true;
  CHECK(single_task);

  // placing the task on hardware is also rejected
  SystemModel m2 = rsmtest::parse_ok(rsmtest::kLevel3Task);
  m2.placements["SWT"] = Placement::HW;
  bool not_sw = false;
  for (const auto& diag : validate(m2, 3))
    if (diag.message.find("not placed SW") != std::string::npos) not_sw = true;
  CHECK(not_sw);
}

TEST_CASE("infer_level follows placements and configuration") {
  CHECK(infer_level(rsmtest::parse_ok(rsmtest::kProducerConsumer)) == 1);
  CHECK(infer_level(rsmtest::parse_ok(rsmtest::kTimedPipeline)) == 2);
  CHECK(infer_level(rsmtest::parse_ok(rsmtest::kLevel3Task)) == 3);
}
