#include "mpst/subtype.hpp"

#include <cassert>
#include <stdexcept>

#include "mpst/reduce.hpp"

namespace mpst {

namespace {

struct Cell {
    std::size_t visits = 0;
    bool seen = false;  // stored on the current search path
    Snapshot sub_snap, sup_snap;
    std::size_t rho_mark = 0;
};

// Trace entries are kept structural during the search and rendered only for
// an accepting run.
struct RawStep {
    const char* rule;
    std::size_t sub_state, sup_state;
    std::string text;  // reduction letters or the assumption windows
    bool is_pair = false;
    Action sub_action, sup_action;  // when is_pair
};

class SubtypeVisitor {
public:
    SubtypeVisitor(const Fsm& sub, const Fsm& sup, std::size_t visits, const SortTable& sorts,
                   bool record_trace, CheckStats& stats)
        : sub_(sub),
          sup_(sup),
          sorts_(sorts),
          stats_(stats),
          record_trace_(record_trace),
          cells_(sub.size() * sup.size(), Cell{visits, false, {}, {}, 0}) {}

    bool run(std::vector<TraceStep>& trace) {
        bool ok = visit(sub_.initial, sup_.initial, {});
        if (ok) {
            trace.reserve(trace_.size());
            for (auto& raw : trace_) {
                std::string detail =
                    raw.is_pair
                        ? raw.sub_action.to_string() + " | " + raw.sup_action.to_string()
                        : std::move(raw.text);
                trace.push_back({raw.rule, raw.sub_state, raw.sup_state, std::move(detail)});
            }
        }
        return ok;
    }

    bool saw_bound_exhausted() const { return saw_bound_exhausted_; }
    bool saw_fail_early() const { return saw_fail_early_; }
    bool saw_terminal_mismatch() const { return saw_terminal_mismatch_; }

private:
    Cell& cell(std::size_t s, std::size_t t) { return cells_[s * sup_.size() + t]; }

    bool visit(std::size_t s, std::size_t t, ScanCache cache) {
        ++stats_.nodes;
        const std::size_t trace_mark = trace_.size();

        ReduceOutcome reduced = reduce_full_cached(prefixes_, sorts_, cache);
        stats_.reductions += reduced.steps;
        if (record_trace_ && reduced.steps > 0)
            trace_.push_back({"sub", s, t, std::move(reduced.letters), false, {}, {}});
        if (reduced.blocked) {
            saw_fail_early_ = true;
            trace_.resize(trace_mark);
            return false;
        }

        Cell& c = cell(s, t);
        if (c.seen && check_assumption(prefixes_.sub, c.sub_snap, prefixes_.sup, c.sup_snap)) {
            assert(rho_.size() == sup_appended_);
            check_act_superset(c);
            if (record_trace_)
                trace_.push_back(
                    {"asm", s, t,
                     "(" + prefixes_.sub.to_string() + " | " + prefixes_.sup.to_string() + ")",
                     false, {}, {}});
            ++stats_.assumption_hits;
            return true;
        }

        const bool sub_terminal = sub_.terminal(s);
        const bool sup_terminal = sup_.terminal(t);
        if (sub_terminal || sup_terminal) {
            if (sub_terminal && sup_terminal && prefixes_.sub.empty() && prefixes_.sup.empty()) {
                assert(rho_.size() == sup_appended_);
                if (record_trace_) trace_.push_back({"end", s, t, {}, false, {}, {}});
                return true;
            }
            saw_terminal_mismatch_ = true;
            trace_.resize(trace_mark);
            return false;
        }

        // The visit budget gates further unrolling of this state pair.
        if (c.visits == 0) {
            saw_bound_exhausted_ = true;
            trace_.resize(trace_mark);
            return false;
        }

        const Cell saved = c;
        c.visits -= 1;
        c.seen = true;
        c.sub_snap = prefixes_.sub.snapshot();
        c.sup_snap = prefixes_.sup.snapshot();
        c.rho_mark = rho_.size();

        bool ok = explore_branches(s, t, cache);

        cell(s, t) = saved;
        if (!ok) trace_.resize(trace_mark);
        return ok;
    }

    bool explore_branches(std::size_t s, std::size_t t, const ScanCache& cache) {
        const auto& sub_out = sub_.out(s);
        const auto& sup_out = sup_.out(t);
        const Dir sub_dir = sub_out.front().action.dir;
        const Dir sup_dir = sup_out.front().action.dir;
        const Snapshot sub_base = cell(s, t).sub_snap;
        const Snapshot sup_base = cell(s, t).sup_snap;

        auto explore = [&](const FsmTransition& a, const FsmTransition& b, const char* rule) {
            const std::size_t trace_mark = trace_.size();
            if (record_trace_) trace_.push_back({rule, s, t, {}, true, a.action, b.action});
            prefixes_.sub.append(a.action);
            prefixes_.sup.append(b.action);
            rho_.push_back(&a.action);
            ++sup_appended_;
            stats_.peak_sub_prefix = std::max(stats_.peak_sub_prefix, prefixes_.sub.window_length());
            stats_.peak_sup_prefix = std::max(stats_.peak_sup_prefix, prefixes_.sup.window_length());

            bool ok = visit(a.target, b.target, cache);

            prefixes_.sub.restore(sub_base);
            prefixes_.sup.restore(sup_base);
            rho_.pop_back();
            --sup_appended_;
            if (!ok) trace_.resize(trace_mark);
            return ok;
        };

        if (sub_dir == Dir::Send && sup_dir == Dir::Receive) {
            for (const auto& a : sub_out)
                for (const auto& b : sup_out)
                    if (!explore(a, b, "oi")) return false;
            return true;
        }
        // Existential witnesses are searched with same-label candidates
        // first, then the rest in declared order.
        if (sub_dir == Dir::Send && sup_dir == Dir::Send) {
            for (const auto& a : sub_out) {
                bool found = false;
                for (int pass = 0; pass < 2 && !found; ++pass)
                    for (const auto& b : sup_out) {
                        if ((b.action.label == a.action.label) != (pass == 0)) continue;
                        if (explore(a, b, "oo")) {
                            found = true;
                            break;
                        }
                    }
                if (!found) return false;
            }
            return true;
        }
        if (sub_dir == Dir::Receive && sup_dir == Dir::Receive) {
            for (const auto& b : sup_out) {
                bool found = false;
                for (int pass = 0; pass < 2 && !found; ++pass)
                    for (const auto& a : sub_out) {
                        if ((a.action.label == b.action.label) != (pass == 0)) continue;
                        if (explore(a, b, "ii")) {
                            found = true;
                            break;
                        }
                    }
                if (!found) return false;
            }
            return true;
        }
        // sub receives, sup sends: one witnessing pair suffices.
        for (const auto& a : sub_out)
            for (const auto& b : sup_out)
                if (explore(a, b, "io")) return true;
        return false;
    }

    void check_act_superset(const Cell& c) {
        std::vector<Action> since;
        since.reserve(rho_.size() - c.rho_mark);
        for (std::size_t i = c.rho_mark; i < rho_.size(); ++i) since.push_back(*rho_[i]);
        auto rho_acts = act(since);
        auto sup_acts = act(prefixes_.sup.content());
        for (const auto& key : sup_acts) {
            if (!rho_acts.count(key)) {
                ++stats_.act_superset_violations;
                return;
            }
        }
    }

    const Fsm& sub_;
    const Fsm& sup_;
    const SortTable& sorts_;
    CheckStats& stats_;
    bool record_trace_ = true;
    std::vector<Cell> cells_;
    PrefixPair prefixes_;
    std::vector<const Action*> rho_;  // subtype actions appended on this path
    std::size_t sup_appended_ = 0;  // supertype appends; always equals rho_.size()
    std::vector<RawStep> trace_;
    bool saw_bound_exhausted_ = false;
    bool saw_fail_early_ = false;
    bool saw_terminal_mismatch_ = false;
};

}  // namespace

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Proven: return "proven";
        case VerdictKind::Refuted: return "refuted";
        case VerdictKind::Unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(RefuteReason reason) {
    switch (reason) {
        case RefuteReason::None: return "none";
        case RefuteReason::FailEarly: return "fail-early";
        case RefuteReason::StructuralMismatch: return "structural-mismatch";
        case RefuteReason::TerminalMismatch: return "terminal-mismatch";
    }
    return "none";
}

bool check_assumption(const Prefix& sub_prefix, const Snapshot& sub_snap,
                      const Prefix& sup_prefix, const Snapshot& sup_snap) {
    return sub_prefix.window_equals_snapshot(sub_snap) &&
           sup_prefix.window_equals_snapshot(sup_snap);
}

Verdict check_subtype(const Fsm& sub, const Fsm& sup, const CheckerConfig& config,
                      CheckStats* stats) {
    const std::size_t visits = config.visits.value_or(sub.size() + sup.size() + 1);
    if (visits == 0) throw std::invalid_argument("visit budget must be at least 1");

    CheckStats local_stats;
    CheckStats& st = stats ? *stats : local_stats;
    SubtypeVisitor visitor(sub, sup, visits, config.sorts, config.record_trace, st);

    Verdict verdict;
    if (visitor.run(verdict.trace)) {
        verdict.kind = VerdictKind::Proven;
        return verdict;
    }
    if (visitor.saw_bound_exhausted()) {
        verdict.kind = VerdictKind::Unknown;
        return verdict;
    }
    verdict.kind = VerdictKind::Refuted;
    verdict.refute_reason = visitor.saw_fail_early()          ? RefuteReason::FailEarly
                            : visitor.saw_terminal_mismatch() ? RefuteReason::TerminalMismatch
                                                              : RefuteReason::StructuralMismatch;
    return verdict;
}

Verdict check_with_chain(const Fsm& sub, const std::vector<Fsm>& mids, const Fsm& sup,
                         const CheckerConfig& config, CheckStats* stats) {
    if (mids.empty()) throw std::invalid_argument("chain must be non-empty");
    std::vector<const Fsm*> chain;
    chain.push_back(&sub);
    for (const Fsm& m : mids) chain.push_back(&m);
    chain.push_back(&sup);

    Verdict combined;
    combined.kind = VerdictKind::Proven;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
        Verdict link = check_subtype(*chain[i], *chain[i + 1], config, stats);
        if (!link.proven()) return link;
        combined.trace.insert(combined.trace.end(), link.trace.begin(), link.trace.end());
    }
    return combined;
}

std::string format_trace(const std::vector<TraceStep>& trace) {
    std::string out;
    std::size_t step = 0;
    for (const auto& t : trace) {
        out += "step=" + std::to_string(step++);
        out += " rule=" + t.rule;
        out += " sub_state=" + std::to_string(t.sub_state);
        out += " sup_state=" + std::to_string(t.sup_state);
        if (!t.detail.empty()) out += " detail=\"" + t.detail + "\"";
        out += '\n';
    }
    return out;
}

}  // namespace mpst
