#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mpst/types.hpp"

namespace mpst {

struct FsmTransition {
    Action action;
    std::size_t target = 0;
};

/// A communicating finite-state machine: the operational form the subtype
/// checker and the execution oracle run on. All transitions out of one state
/// share the same direction and peer (directed choice) with pairwise
/// distinct labels; every state is reachable from `initial`; a terminal
/// state has no outgoing transitions.
struct Fsm {
    Role role;  // owner; may be empty for machines read from bare DOT
    std::size_t initial = 0;
    std::vector<std::vector<FsmTransition>> states;

    std::size_t size() const { return states.size(); }
    bool terminal(std::size_t state) const { return states[state].empty(); }
    const std::vector<FsmTransition>& out(std::size_t state) const { return states[state]; }
};

/// Checks all Fsm invariants; each violation is reported as a message.
/// An empty result means the machine is well formed.
std::vector<std::string> validate_fsm(const Fsm& fsm);

}  // namespace mpst
