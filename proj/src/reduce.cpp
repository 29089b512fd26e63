#include "mpst/reduce.hpp"

#include <cassert>

namespace mpst {

namespace {

struct Scan {
    enum class Outcome { Match, Exhausted, Blocked } outcome;
    std::size_t sup_index = 0;
    std::size_t skipped = 0;
};

bool sorts_match(const Action& head, const Action& candidate, const SortTable& sorts) {
    // Receives take the supertype's payload, sends provide the subtype's.
    return head.dir == Dir::Receive ? sorts.coercible(candidate.sort, head.sort)
                                    : sorts.coercible(head.sort, candidate.sort);
}

bool skippable(const Action& head, const Action& over) {
    if (head.dir == Dir::Receive)  // receives may be anticipated over receives from other peers
        return over.dir == Dir::Receive && over.peer != head.peer;
    // Sends may be anticipated over receives from anyone and sends to other peers.
    return over.dir == Dir::Receive || over.peer != head.peer;
}

Scan scan_for_match(const Prefix& sup, const Action& head, const SortTable& sorts) {
    std::size_t skipped = 0;
    for (std::size_t i = sup.next_live(sup.start()); i < sup.raw_size(); i = sup.next_live(i + 1)) {
        const Action& candidate = sup.raw(i).action;
        if (candidate.dir == head.dir && candidate.peer == head.peer &&
            candidate.label == head.label && sorts_match(head, candidate, sorts)) {
            return {Scan::Outcome::Match, i, skipped};
        }
        if (!skippable(head, candidate)) return {Scan::Outcome::Blocked, i, skipped};
        ++skipped;
    }
    return {Scan::Outcome::Exhausted, sup.raw_size(), skipped};
}

}  // namespace

char rule_letter(RedRule rule) {
    switch (rule) {
        case RedRule::I: return 'i';
        case RedRule::O: return 'o';
        case RedRule::A: return 'A';
        case RedRule::B: return 'B';
    }
    return '?';
}

std::optional<ReductionStep> reduce_step(PrefixPair& pair, const SortTable& sorts) {
    if (pair.sub.empty() || pair.sup.empty()) return std::nullopt;
    const Action head = pair.sub.head();
    Scan scan = scan_for_match(pair.sup, head, sorts);
    if (scan.outcome != Scan::Outcome::Match) return std::nullopt;

    ReductionStep step;
    if (scan.skipped == 0) {
        step.rule = head.dir == Dir::Receive ? RedRule::I : RedRule::O;
    } else {
        step.rule = head.dir == Dir::Receive ? RedRule::A : RedRule::B;
        step.sup_index = scan.sup_index;
        step.skipped = scan.skipped;
    }
    pair.sub.consume_head();
    pair.sup.remove_at(scan.sup_index);
    return step;
}

std::vector<ReductionStep> reduce_full(PrefixPair& pair, const SortTable& sorts) {
    std::vector<ReductionStep> steps;
#ifndef NDEBUG
    const std::size_t bound = std::min(pair.sub.live_count(), pair.sup.live_count());
#endif
    while (auto step = reduce_step(pair, sorts)) {
        steps.push_back(*step);
        assert(steps.size() <= bound);
    }
    return steps;
}

bool fail_early(const PrefixPair& pair, const SortTable& sorts) {
    if (pair.sub.empty()) return false;
    return scan_for_match(pair.sup, pair.sub.head(), sorts).outcome == Scan::Outcome::Blocked;
}

ReduceOutcome reduce_full_cached(PrefixPair& pair, const SortTable& sorts, ScanCache& cache) {
    ReduceOutcome outcome;
    for (;;) {
        if (pair.sub.empty() || pair.sup.empty()) {
            cache.valid = false;
            return outcome;
        }
        const Action& head = pair.sub.head();

        std::size_t from = pair.sup.start();
        if (cache.valid && cache.head == head) from = std::max(from, cache.pos);

        // Inline scan from the resume point; entries below it were already
        // verified against this head value.
        std::size_t match = pair.sup.raw_size();
        bool blocked = false;
        for (std::size_t i = pair.sup.next_live(from); i < pair.sup.raw_size();
             i = pair.sup.next_live(i + 1)) {
            const Action& candidate = pair.sup.raw(i).action;
            if (candidate.dir == head.dir && candidate.peer == head.peer &&
                candidate.label == head.label &&
                (head.dir == Dir::Receive ? sorts.coercible(candidate.sort, head.sort)
                                          : sorts.coercible(head.sort, candidate.sort))) {
                match = i;
                break;
            }
            if (!skippable(head, candidate)) {
                blocked = true;
                break;
            }
        }

        if (blocked) {
            outcome.blocked = true;
            cache.valid = false;
            return outcome;
        }
        if (match == pair.sup.raw_size()) {
            // Stuck: remember how far this head value has been scanned.
            cache.valid = true;
            cache.head = head;
            cache.pos = pair.sup.raw_size();
            return outcome;
        }

        const bool anticipated = match != pair.sup.start();
        if (!outcome.letters.empty()) outcome.letters += ',';
        outcome.letters += head.dir == Dir::Receive ? (anticipated ? 'A' : 'i')
                                                    : (anticipated ? 'B' : 'o');
        ++outcome.steps;
        // Advance the memo for its own head value; front matches for other
        // values leave it alone (flagging an entry cannot invalidate it).
        if (cache.valid && cache.head == head) cache.pos = match + 1;
        pair.sub.consume_head();
        pair.sup.remove_at(match);
    }
}

}  // namespace mpst
