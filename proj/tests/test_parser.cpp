#include <random>

#include "doctest.h"
#include "rsmkit/parser.hpp"
#include "rsmkit/printer.hpp"
#include "support/fixtures.hpp"

using namespace rsm;

TEST_CASE("producer/consumer parses to two modules, one channel, no bus") {
  SystemModel m = rsmtest::parse_ok(rsmtest::kProducerConsumer);
  CHECK(m.modules.size() == 2);
  CHECK(m.channels.size() == 1);
  CHECK(!m.bus.has_value());
  CHECK(m.modules[0].name == "P");
  CHECK(m.channels[0].src.str() == "P.o");
  CHECK(m.channels[0].dst.str() == "C.i");
}

TEST_CASE("FPGA placement without a configuration map is a semantic error") {
  ParseResult r = parse_model(R"(
system bad {
  module M {
    port in i
    behavior {
      read i x
    }
  }
  bus b
  place M fpga
}
)");
  REQUIRE(!r.ok());
  bool found = false;
  for (const auto& d : r.diagnostics)
    if (d.message.find("FPGA placement requires configuration map") != std::string::npos)
      found = true;
  CHECK(found);
}

TEST_CASE("diagnostics carry line and column positions") {
  ParseResult r = parse_model("system s {\n  module M {\n    port in\n  }\n}\n");
  REQUIRE(!r.ok());
  REQUIRE(!r.diagnostics.empty());
  CHECK(r.diagnostics[0].pos.line >= 3);
  CHECK(r.diagnostics[0].render("f.rsm").find("f.rsm:") == 0);
}

TEST_CASE("unknown names are reported") {
  ParseResult r = parse_model(R"(
system s {
  module M {
    port out o
    behavior {
      write o x
    }
  }
  channel c M.o -> N.i
}
)");
  REQUIRE(!r.ok());
  bool unknown_module = false, unassigned = false;
  for (const auto& d : r.diagnostics) {
    if (d.message.find("unknown module 'N'") != std::string::npos) unknown_module = true;
    if (d.message.find("used before assignment") != std::string::npos) unassigned = true;
  }
  CHECK(unknown_module);
  CHECK(unassigned);
}

TEST_CASE("parse is total on arbitrary byte soup") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "system module{}()->=<>!&|abc 019\n\t#\"\\.,+-*/";
  for (int trial = 0; trial < 200; ++trial) {
    std::string junk;
    size_t len = rng() % 400;
    for (size_t i = 0; i < len; ++i) junk.push_back(alphabet[rng() % alphabet.size()]);
    ParseResult r = parse_model(junk);  // must not crash or hang
    if (r.ok()) CHECK(r.model.has_value());
  }
  // raw bytes, including non-ASCII
  for (int trial = 0; trial < 50; ++trial) {
    std::string junk;
    size_t len = rng() % 200;
    for (size_t i = 0; i < len; ++i) junk.push_back(static_cast<char>(rng() & 0xff));
    parse_model(junk);
  }
}

TEST_CASE("print/parse round-trip is structurally identical") {
  for (const char* src : {rsmtest::kProducerConsumer, rsmtest::kCrossBlocking,
                          rsmtest::kTimedPipeline, rsmtest::kLevel3Task}) {
    SystemModel m = rsmtest::parse_ok(src);
    std::string printed = print_model(m);
    SystemModel m2 = rsmtest::parse_ok(printed);
    CHECK(print_model(m2) == printed);
  }
}

TEST_CASE("expression precedence and parentheses survive a round-trip") {
  SystemModel m = rsmtest::parse_ok(R"(
system e {
  module M {
    port in i
    port out o
    behavior {
      read i a
      let b = (a + 1) * 2 - a / 4
      let c = a < 3 && b >= 2 || !(a == 0)
      if (c) {
        write o -b
      } else {
        write o (a + 2) * (b + 3)
      }
    }
  }
}
)");
  std::string printed = print_model(m);
  SystemModel m2 = rsmtest::parse_ok(printed);
  CHECK(print_model(m2) == printed);
}

TEST_CASE("recursive kernels are rejected") {
  ParseResult r = parse_model(R"(
system k {
  kernel A(x) {
    call B y (x)
    return y
  }
  kernel B(x) {
    call A y (x)
    return y
  }
  module M {
    port out o
    behavior {
      call A v (1)
      write o v
    }
  }
}
)");
  REQUIRE(!r.ok());
  bool recursive = false;
  for (const auto& d : r.diagnostics)
    if (d.message.find("recursive") != std::string::npos) recursive = true;
  CHECK(recursive);
}
