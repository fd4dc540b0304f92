#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsmkit/elaborate.hpp"

namespace rsm {

using Tokens = std::int64_t;
using Marking = std::vector<Tokens>;

/// Place/transition net abstracting a model's communication structure.
/// Control places mirror each module's CFG nodes; channels contribute an
/// item place and, when bounded, a slot place primed with capacity tokens.
/// Loop metadata carries the literal iteration counts used for firing-count
/// constraints and for the bounded reachability search.
struct PetriNet {
  struct Place {
    enum class Kind { Control, Item, Slot };
    std::string name;
    Kind kind = Kind::Control;
    Tokens initial = 0;
    int module = -1;   // control places
    int channel = -1;  // item/slot places
  };

  struct Arc {
    int place = 0;
    Tokens weight = 1;
  };

  struct Transition {
    std::string name;
    std::vector<Arc> pre, post;
    Tokens upper_bound = -1;  // -1 = no structural bound
  };

  /// One literal-bounded loop: fires `enter` once per activation, then the
  /// body exactly `count` times (count-1 back edges, one exit).
  struct LoopInfo {
    Tokens count = 0;
    std::vector<int> enter_ts, back_ts, exit_ts;  // transition indices
  };

  /// Control place that can be disabled by missing tokens: a channel read
  /// (needs an item) or a bounded-channel write (needs a slot).
  struct BlockInfo {
    int control_place = -1;
    std::vector<int> zero_places;
  };

  struct ModuleNet {
    std::string name;
    int entry_place = -1;
    int exit_place = -1;
    std::vector<BlockInfo> blockables;
  };

  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::vector<LoopInfo> loops;
  std::vector<ModuleNet> modules;

  Marking initial_marking() const;
  /// Incidence matrix C = post - pre, places x transitions.
  std::vector<std::vector<Tokens>> incidence() const;
  int find_place(const std::string& name) const;
  /// Item place of a channel by channel name, -1 if absent.
  int item_place(const std::string& channel) const;
};

struct MarkingConstraint {
  struct Term {
    int place = 0;
    enum class Op { Eq, Le, Ge } op = Op::Eq;
    Tokens value = 0;
  };
  std::vector<Term> terms;  // conjunction
  std::string description;

  bool satisfied(const Marking& m) const;
};

/// Communication abstraction of a validated model (data values and timing
/// erased; branches become nondeterministic choices).
PetriNet extract_net(const CompiledModel& cm);

struct CombinatorialLimitError : std::runtime_error {
  CombinatorialLimitError(std::uint64_t candidates, std::uint64_t cap)
      : std::runtime_error("deadlock candidate set of " + std::to_string(candidates) +
                           " markings exceeds the cap of " + std::to_string(cap)),
        candidates(candidates),
        cap(cap) {}
  std::uint64_t candidates;
  std::uint64_t cap;
};

/// All-blocked candidate markings: one choice per module (a blockable place
/// or the exit), excluding the all-terminal combination.
std::vector<MarkingConstraint> deadlock_targets(const PetriNet& net, std::uint64_t cap = 10000);

struct FiringSequence {
  std::vector<int> transitions;
};

/// Breadth-first search of the (loop-bounded) reachability graph, up to
/// state_cap distinct states. Returns a shortest target-satisfying firing
/// sequence or nothing.
std::optional<FiringSequence> find_witness(const PetriNet& net, const MarkingConstraint& target,
                                           std::int64_t state_cap);

/// Textual export: `place <name> <tokens>` and `trans <name> | pre | post`.
std::string export_net(const PetriNet& net);

}  // namespace rsm
