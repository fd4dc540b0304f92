#pragma once

#include <string>

#include "doctest.h"
#include "rsmkit/elaborate.hpp"
#include "rsmkit/parser.hpp"

namespace rsmtest {

inline rsm::SystemModel parse_ok(const std::string& src) {
  rsm::ParseResult r = rsm::parse_model(src);
  for (const auto& d : r.diagnostics) INFO(d.render("<fixture>"));
  REQUIRE(r.ok());
  return std::move(*r.model);
}

inline rsm::CompiledModel compile_src(const std::string& src) {
  return rsm::compile(parse_ok(src));
}

inline const char* kProducerConsumer = R"(
system pc {
  module P {
    port out o
    behavior {
      write o 1
      write o 2
      write o 3
    }
  }
  module C {
    port in i
    port out o
    behavior {
      repeat 3 {
        read i x
        write o x
      }
    }
  }
  channel ch P.o -> C.i
}
)";

inline const char* kCrossBlocking = R"(
system xb {
  module A {
    port in i
    port out o
    behavior {
      read i x
      write o 1
    }
  }
  module B {
    port in i
    port out o
    behavior {
      read i x
      write o 1
    }
  }
  channel ab A.o -> B.i
  channel ba B.o -> A.i
}
)";

// SW producer -> 1-word bus write -> HW consumer (hand event schedule:
// compute 5, transfer [5,6), compute [6,9) => 9 cycles, 1 busy).
inline const char* kTimedPipeline = R"(
system t1 {
  module P {
    port out o
    behavior {
      compute work 5
      write o 7
    }
  }
  module C {
    port in i
    behavior {
      read i x
      compute crunch 3
    }
  }
  channel ch P.o -> C.i
  bus b cycles_per_word 1
  place P sw
  place C hw
}
)";

// Spec-style level-3 software task: two context loads and two fabric calls.
inline const char* kLevel3Task = R"(
system t3 {
  kernel DISTANCE(a) {
    return a + 1
  }
  kernel ROOT(a) {
    return a * 2
  }
  module SWT {
    port out o
    behavior {
      reconfigure config1
      callfpga DISTANCE d (1)
      reconfigure config2
      callfpga ROOT r (d)
      write o r
    }
  }
  bus b cycles_per_word 1
  place SWT sw
  context config1 {
    fn DISTANCE latency 50
    bitstream 100
  }
  context config2 {
    fn ROOT latency 20
    bitstream 80
  }
}
)";

// Same task with the second reconfigure deleted: ROOT is called under
// config1.
inline const char* kLevel3TaskBroken = R"(
system t3b {
  kernel DISTANCE(a) {
    return a + 1
  }
  kernel ROOT(a) {
    return a * 2
  }
  module SWT {
    port out o
    behavior {
      reconfigure config1
      callfpga DISTANCE d (1)
      callfpga ROOT r (d)
      write o r
    }
  }
  bus b cycles_per_word 1
  place SWT sw
  context config1 {
    fn DISTANCE latency 50
    bitstream 100
  }
  context config2 {
    fn ROOT latency 20
    bitstream 80
  }
}
)";

}  // namespace rsmtest
