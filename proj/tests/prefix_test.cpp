#include <doctest.h>

#include <random>

#include "mpst/prefix.hpp"
#include "test_support.hpp"

using namespace mpst;

namespace {

Action mk(Dir dir, const char* peer, const char* label) {
    return {dir, {peer}, label, {}};
}

}  // namespace

TEST_SUITE("prefix") {

TEST_CASE("terms_count basics") {
    Prefix empty;
    CHECK(terms_count(empty) == 0);

    Prefix one;
    one.append(mk(Dir::Send, "p", "a"));
    CHECK(terms_count(one) == 1);

    Prefix three;
    three.append(mk(Dir::Receive, "p", "a"));
    three.append(mk(Dir::Send, "q", "b"));
    three.append(mk(Dir::Receive, "r", "c"));
    CHECK(terms_count(three) == 3);
}

TEST_CASE("terms_count is additive over concatenation") {
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto xs = testing::random_actions(rng, 8);
        auto ys = testing::random_actions(rng, 8);
        Prefix x = testing::prefix_of(xs);
        Prefix y = testing::prefix_of(ys);
        auto both = xs;
        both.insert(both.end(), ys.begin(), ys.end());
        Prefix xy = testing::prefix_of(both);
        CHECK(terms_count(xy) == terms_count(x) + terms_count(y));

        auto ax = act(x);
        auto ay = act(y);
        ax.insert(ay.begin(), ay.end());
        CHECK(act(xy) == ax);
    }
}

TEST_CASE("snapshot and restore") {
    SUBCASE("append then restore") {
        Prefix p;
        p.append(mk(Dir::Send, "p", "a"));
        auto content = p.content();
        Snapshot snap = p.snapshot();
        p.append(mk(Dir::Send, "q", "b"));
        p.append(mk(Dir::Receive, "q", "c"));
        p.append(mk(Dir::Send, "r", "d"));
        p.restore(snap);
        CHECK(p.content() == content);
    }

    SUBCASE("lazy removals then restore") {
        Prefix p;
        p.append(mk(Dir::Receive, "p", "a"));
        p.append(mk(Dir::Send, "q", "b"));
        p.append(mk(Dir::Receive, "r", "c"));
        auto content = p.content();
        Snapshot snap = p.snapshot();
        p.remove_at(1);
        p.remove_at(2);
        CHECK(terms_count(p) == 1);
        p.restore(snap);
        CHECK(p.content() == content);
        CHECK(terms_count(p) == 3);
    }

    SUBCASE("empty prefix stays empty") {
        Prefix p;
        Snapshot snap = p.snapshot();
        p.append(mk(Dir::Send, "p", "a"));
        p.consume_head();
        p.restore(snap);
        CHECK(p.empty());
        CHECK(p.content().empty());
    }

    SUBCASE("stale snapshot is a defect") {
        Prefix p;
        p.append(mk(Dir::Send, "p", "a"));
        Snapshot snap = p.snapshot();
        Prefix q;
        CHECK_THROWS_AS(q.restore(snap), std::logic_error);
    }
}

TEST_CASE("head window invariant under interleaved operations") {
    // The entry at `start` is never flagged: consuming or removing the head
    // advances start past flagged entries.
    Prefix p;
    p.append(mk(Dir::Send, "p", "a"));
    p.append(mk(Dir::Send, "q", "b"));
    p.append(mk(Dir::Send, "r", "c"));
    p.remove_at(1);
    CHECK(p.head().peer.name == "p");
    p.consume_head();
    // start skipped the flagged q entry.
    CHECK(p.head().peer.name == "r");
    CHECK(terms_count(p) == 1);
}

TEST_CASE("matches a naive reference under random interleavings") {
    // Reference semantics: a plain vector of actions; removal erases,
    // snapshot copies.
    std::mt19937 rng(17);
    for (int round = 0; round < 300; ++round) {
        Prefix p;
        std::vector<Action> ref;
        std::vector<std::pair<Snapshot, std::vector<Action>>> snaps;
        for (int op = 0; op < 40; ++op) {
            int roll = std::uniform_int_distribution<int>(0, 99)(rng);
            if (roll < 40) {
                Action a = testing::random_action(rng);
                p.append(a);
                ref.push_back(a);
            } else if (roll < 60 && !ref.empty()) {
                // Remove a random live element.
                std::size_t k =
                    std::uniform_int_distribution<std::size_t>(0, ref.size() - 1)(rng);
                std::size_t live_seen = 0;
                for (std::size_t i = p.next_live(p.start()); i < p.raw_size();
                     i = p.next_live(i + 1)) {
                    if (live_seen++ == k) {
                        p.remove_at(i);
                        break;
                    }
                }
                ref.erase(ref.begin() + static_cast<std::ptrdiff_t>(k));
            } else if (roll < 75 && !ref.empty()) {
                p.consume_head();
                ref.erase(ref.begin());
            } else if (roll < 90) {
                snaps.emplace_back(p.snapshot(), ref);
            } else if (!snaps.empty()) {
                // Restore to the most recent snapshot (stack discipline).
                p.restore(snaps.back().first);
                ref = snaps.back().second;
                snaps.pop_back();
            }
            REQUIRE(p.content() == ref);
            REQUIRE(terms_count(p) == ref.size());
        }
    }
}

}  // TEST_SUITE
