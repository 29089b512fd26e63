#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mpst/fsm.hpp"
#include "mpst/parse.hpp"
#include "mpst/types.hpp"

namespace mpst {

/// A closed system of communicating machines over per-ordered-pair FIFO
/// channels. Role names are pairwise distinct and every transition's peer
/// must be a declared role.
struct SystemConfig {
    std::vector<std::pair<Role, Fsm>> machines;
    std::size_t channel_bound = 4;       // max queued messages per ordered role pair
    std::size_t max_configs = 1'000'000; // exploration budget
};

struct FiredTransition {
    Role role;
    Action action;

    std::string to_string() const { return role.name + ": " + action.to_string(); }
};

/// Result of the bounded exhaustive execution. A Deadlock trace replays from
/// the initial configuration to a stuck, non-final configuration.
struct OracleResult {
    enum class Kind { DeadlockFree, Deadlock, BoundExceeded };

    Kind kind = Kind::DeadlockFree;
    std::vector<FiredTransition> trace;
    std::size_t explored = 0;
};

std::string to_string(OracleResult::Kind kind);

/// Breadth-first exploration of every reachable configuration. A send fires
/// when the target queue has room, a receive when the matching queue's head
/// carries the expected label. A configuration is final when all machines
/// are terminal and all queues empty; any other configuration without an
/// enabled transition is a deadlock. Exploration order is canonical, so
/// results are reproducible bit for bit.
OracleResult run_bounded(const SystemConfig& config);

/// Projects every declared role of the protocol and swaps in the listed
/// replacement machines.
SystemConfig compose_system(const GlobalProtocol& protocol,
                            const std::map<Role, Fsm>& replacements, std::size_t channel_bound = 4,
                            std::size_t max_configs = 1'000'000);

}  // namespace mpst
