#pragma once

#include <optional>
#include <vector>

#include "mpst/prefix.hpp"
#include "mpst/types.hpp"

namespace mpst {

/// The paired prefixes of a candidate subtype (sub) and its supertype (sup).
struct PrefixPair {
    Prefix sub;
    Prefix sup;
};

enum class RedRule { I, O, A, B };

char rule_letter(RedRule rule);

/// One applied reduction. For A/B, `sup_index` is the raw index of the
/// matched supertype action and `skipped` how many live actions were
/// reordered past; both are zero for I/O.
struct ReductionStep {
    RedRule rule;
    std::size_t sup_index = 0;
    std::size_t skipped = 0;
};

/// Applies one reduction if any rule matches: identical heads are consumed
/// directly (I/O); otherwise the earliest supertype occurrence of the
/// subtype's head is matched provided every action skipped over may be
/// reordered with it (receives from other peers for a receive head; receives
/// from anyone plus sends to other peers for a send head). Sort payloads
/// must be coercible, supertype-to-subtype for receives and
/// subtype-to-supertype for sends.
std::optional<ReductionStep> reduce_step(PrefixPair& pair, const SortTable& sorts);

/// Reduces until no rule applies. The step count never exceeds
/// min(terms_count(sub), terms_count(sup)) since every step consumes exactly
/// one action from each side.
std::vector<ReductionStep> reduce_full(PrefixPair& pair, const SortTable& sorts);

/// After reduce_step failed: true iff the subtype's head can never be
/// matched by any extension of the supertype prefix, because an action
/// standing before any possible match violates the reordering
/// side-condition permanently.
bool fail_early(const PrefixPair& pair, const SortTable& sorts);

/// Memo of an earlier unsuccessful scan: supertype entries below `pos` hold
/// no match for `head` and every live one may be reordered with it. Valid
/// only while the supertype window below `pos` is unchanged (appends are
/// fine, and so are removals, which only shrink the region). The checker
/// threads one of these down its search by value; restoring prefixes to the
/// state the cache was computed against keeps it accurate.
struct ScanCache {
    bool valid = false;
    Action head;
    std::size_t pos = 0;
};

struct ReduceOutcome {
    std::size_t steps = 0;
    bool blocked = false;   // fail-early: the head can never be matched
    std::string letters;    // applied rules, e.g. "B,i,i,o"
};

/// reduce_full with an incremental scan: repeated stuck scans for the same
/// head value resume where they left off instead of rescanning the window.
ReduceOutcome reduce_full_cached(PrefixPair& pair, const SortTable& sorts, ScanCache& cache);

}  // namespace mpst
