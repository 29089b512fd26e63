#pragma once

#include <stdexcept>
#include <string>

#include "mpst/fsm.hpp"
#include "mpst/types.hpp"

namespace mpst {

class ProjectionError : public std::runtime_error {
public:
    enum class Reason { UnmergeableBranches, NonParticipant };

    ProjectionError(Role role, std::string path, Reason reason)
        : std::runtime_error("cannot project onto '" + role.name + "' at '" + path + "': " +
                             (reason == Reason::UnmergeableBranches
                                  ? "third-party branch projections differ"
                                  : "role does not occur in the protocol")),
          role(std::move(role)),
          path(std::move(path)),
          reason(reason) {}

    Role role;
    std::string path;  // '/'-joined branch labels from the root
    Reason reason;
};

/// Projects a global type onto one role. Message exchanges become Select for
/// the sender, Branch for the receiver, and the plain merge of the branch
/// projections for everyone else (all branches must project identically).
/// A recursion whose projected body is just its own variable collapses to
/// end. Projecting a role that never occurs yields end; callers that want a
/// warning can test with occurs() first.
LocalRef project(const GlobalRef& global, const Role& role);

/// Builds the machine whose states are the distinct subterms of the type
/// reachable under recursion unfolding. end becomes the unique terminal
/// state; each choice becomes one state with a transition per label.
Fsm local_to_fsm(const LocalRef& type, Role owner = {});

}  // namespace mpst
