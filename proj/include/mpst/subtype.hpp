#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpst/fsm.hpp"
#include "mpst/prefix.hpp"
#include "mpst/types.hpp"

namespace mpst {

enum class VerdictKind { Proven, Refuted, Unknown };
enum class RefuteReason { None, FailEarly, StructuralMismatch, TerminalMismatch };

/// One rule application on the accepting derivation, in preorder.
struct TraceStep {
    std::string rule;       // oi | oo | ii | io | sub | asm | end
    std::size_t sub_state;
    std::size_t sup_state;
    std::string detail;     // paired labels, reduction letters or windows
};

/// Tri-state result. Proven carries the replayable derivation; a failed
/// search is Refuted only when every explored path died on a structurally
/// hopeless leaf, and Unknown (bound exhausted) otherwise.
struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    RefuteReason refute_reason = RefuteReason::None;
    std::vector<TraceStep> trace;

    bool proven() const { return kind == VerdictKind::Proven; }
};

std::string to_string(VerdictKind kind);
std::string to_string(RefuteReason reason);

struct CheckerConfig {
    /// Per-state-pair visit budget; defaults to |sub| + |sup| + 1.
    std::optional<std::size_t> visits;
    SortTable sorts;
    /// Record the accepting derivation on Proven verdicts. Benchmarks turn
    /// this off to time the bare decision procedure.
    bool record_trace = true;
};

struct CheckStats {
    std::uint64_t nodes = 0;           // visit() entries
    std::uint64_t reductions = 0;      // applied reduction steps
    std::uint64_t assumption_hits = 0; // accepted coinductive closures
    std::size_t peak_sub_prefix = 0;   // live actions, subtype side
    std::size_t peak_sup_prefix = 0;
    /// Would-be failures of the action-set superset form of the assumption
    /// check; the window-equality form in use is expected to imply it, so
    /// this stays zero.
    std::uint64_t act_superset_violations = 0;
};

/// Decides, soundly and with bounded search, whether the behaviour of `sub`
/// may replace that of `sup` under asynchronous message reordering. Both
/// machines must be well formed. Throws std::invalid_argument when the visit
/// budget is zero.
Verdict check_subtype(const Fsm& sub, const Fsm& sup, const CheckerConfig& config = {},
                      CheckStats* stats = nullptr);

/// Chains checks through user-supplied intermediate machines: proven iff
/// every adjacent pair in sub::mids::sup is proven. `mids` must be
/// non-empty.
Verdict check_with_chain(const Fsm& sub, const std::vector<Fsm>& mids, const Fsm& sup,
                         const CheckerConfig& config = {}, CheckStats* stats = nullptr);

/// The assumption check in isolation: both live windows must equal the
/// windows delimited by the snapshots taken when the assumption was stored.
bool check_assumption(const Prefix& sub_prefix, const Snapshot& sub_snap,
                      const Prefix& sup_prefix, const Snapshot& sup_snap);

std::string format_trace(const std::vector<TraceStep>& trace);

}  // namespace mpst
