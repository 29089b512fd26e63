#pragma once

#include <cstddef>
#include <vector>

#include "mpst/types.hpp"

namespace mpst {

/// Counts captured from a prefix, sufficient to roll it back to the state it
/// had at capture time.
struct Snapshot {
    std::size_t size = 0;     // transitions length
    std::size_t start = 0;    // start index
    std::size_t removed = 0;  // removal-log length
};

/// A sequence of send/receive actions with lazy removal. Entries are never
/// shifted: consuming the head advances `start`, removing an interior entry
/// flags it and logs the index. Invariant: the entry at `start` (when any
/// remain) is never flagged, so `start` is advanced greedily past flagged
/// entries.
class Prefix {
public:
    struct Entry {
        bool removed = false;
        Action action;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    void append(Action action);

    bool empty() const { return start_ == entries_.size(); }
    std::size_t live_count() const;
    const Action& head() const { return entries_[start_].action; }

    std::size_t start() const { return start_; }
    std::size_t raw_size() const { return entries_.size(); }
    std::size_t window_length() const { return entries_.size() - start_; }
    const Entry& raw(std::size_t index) const { return entries_[index]; }

    /// First live index at or after `from`, or raw_size() if none.
    std::size_t next_live(std::size_t from) const;

    /// Consumes the head entry by advancing `start` past it and any flagged
    /// entries behind it.
    void consume_head();

    /// Lazily removes the live entry at `index`. Advancing `start` is
    /// preferred when the entry is the head; otherwise the entry is flagged
    /// and the index logged.
    void remove_at(std::size_t index);

    Snapshot snapshot() const;
    void restore(const Snapshot& snap);

    /// Live actions from `start` onward, in order.
    std::vector<Action> content() const;

    /// Raw-slice comparison of the current window against the window the
    /// snapshot delimits, both read with present-day removal flags:
    /// entries[start..] == entries[..snap.size][snap.start..].
    bool window_equals_snapshot(const Snapshot& snap) const;

    std::string to_string() const;

private:
    std::vector<Entry> entries_;
    std::size_t start_ = 0;
    std::vector<std::size_t> removed_log_;

    void skip_flagged();
};

std::set<ActKey> act(const Prefix& prefix);
std::size_t terms_count(const Prefix& prefix);

}  // namespace mpst
