#include "mpst/prefix.hpp"

#include <cassert>
#include <stdexcept>

namespace mpst {

void Prefix::append(Action action) {
    entries_.push_back({false, std::move(action)});
}

std::size_t Prefix::live_count() const {
    std::size_t live = 0;
    for (std::size_t i = start_; i < entries_.size(); ++i)
        if (!entries_[i].removed) ++live;
    return live;
}

std::size_t Prefix::next_live(std::size_t from) const {
    while (from < entries_.size() && entries_[from].removed) ++from;
    return from;
}

void Prefix::skip_flagged() {
    while (start_ < entries_.size() && entries_[start_].removed) ++start_;
}

void Prefix::consume_head() {
    assert(!empty() && !entries_[start_].removed);
    ++start_;
    skip_flagged();
}

void Prefix::remove_at(std::size_t index) {
    assert(index >= start_ && index < entries_.size() && !entries_[index].removed);
    if (index == start_) {
        consume_head();
        return;
    }
    entries_[index].removed = true;
    removed_log_.push_back(index);
}

Snapshot Prefix::snapshot() const {
    return {entries_.size(), start_, removed_log_.size()};
}

void Prefix::restore(const Snapshot& snap) {
    if (snap.size > entries_.size() || snap.start > snap.size ||
        snap.removed > removed_log_.size()) {
        throw std::logic_error("prefix restore with a stale snapshot");
    }
    for (std::size_t i = snap.removed; i < removed_log_.size(); ++i)
        entries_[removed_log_[i]].removed = false;
    removed_log_.resize(snap.removed);
    entries_.resize(snap.size);
    start_ = snap.start;
}

std::vector<Action> Prefix::content() const {
    std::vector<Action> out;
    for (std::size_t i = start_; i < entries_.size(); ++i)
        if (!entries_[i].removed) out.push_back(entries_[i].action);
    return out;
}

bool Prefix::window_equals_snapshot(const Snapshot& snap) const {
    const std::size_t now_len = entries_.size() - start_;
    const std::size_t then_len = snap.size - snap.start;
    if (now_len != then_len) return false;
    for (std::size_t i = 0; i < now_len; ++i)
        if (!(entries_[start_ + i] == entries_[snap.start + i])) return false;
    return true;
}

std::string Prefix::to_string() const {
    std::string out;
    for (const Action& a : content()) {
        if (!out.empty()) out += '.';
        out += a.to_string();
    }
    return out;
}

std::set<ActKey> act(const Prefix& prefix) {
    return act(prefix.content());
}

std::size_t terms_count(const Prefix& prefix) {
    return prefix.live_count();
}

}  // namespace mpst
