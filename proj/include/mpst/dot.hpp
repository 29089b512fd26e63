#pragma once

#include <string>
#include <string_view>

#include "mpst/fsm.hpp"
#include "mpst/parse.hpp"

namespace mpst {

/// Reads an FSM from a DOT digraph. Node ids are non-negative integers and
/// node `0` is the initial state; edge `label` attributes follow the
/// `ROLE(!|?)LABEL` grammar with an optional `(SORT)` suffix; an optional
/// graph attribute `role="R"` names the machine's owner. The parsed machine
/// must satisfy every Fsm invariant.
Fsm parse_fsm_dot(std::string_view text);

/// Writes the machine in the same DOT dialect; reading it back yields an
/// isomorphic machine.
std::string write_fsm_dot(const Fsm& fsm);

}  // namespace mpst
