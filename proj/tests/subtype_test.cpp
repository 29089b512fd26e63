#include <doctest.h>

#include <cmath>
#include <random>

#include "mpst/parse.hpp"
#include "mpst/project.hpp"
#include "mpst/subtype.hpp"
#include "test_support.hpp"

using namespace mpst;

namespace {

Verdict check(const char* sub, const char* sup, std::size_t visits,
              CheckStats* stats = nullptr) {
    CheckerConfig config;
    config.visits = visits;
    return check_subtype(local_to_fsm(parse_local(sub)), local_to_fsm(parse_local(sup)), config,
                         stats);
}

}  // namespace

TEST_SUITE("subtype") {

TEST_CASE("double buffering: the eager kernel refines its projection") {
    const char* sub = "s!ready . rec x . s!ready . s?copy . t?ready . t!copy . x";
    const char* sup = "rec x . s!ready . s?copy . t?ready . t!copy . x";
    CheckStats stats;
    Verdict v = check(sub, sup, 2, &stats);
    CHECK(v.kind == VerdictKind::Proven);
    CHECK(stats.assumption_hits > 0);
    CHECK(stats.act_superset_violations == 0);
    CHECK_FALSE(v.trace.empty());
}

TEST_CASE("forgotten actions are rejected") {
    // The candidate forgets ever to receive the initial l2 from q.
    const char* sub = "rec t . p?l1 . t";
    const char* sup = "q?l2 . rec t . p?l1 . t";
    Verdict v = check(sub, sup, 2);
    CHECK(v.kind != VerdictKind::Proven);
    CHECK(v.kind == VerdictKind::Unknown);  // every failing path is bound-limited
}

TEST_CASE("ring with choice at visit budget 1") {
    const char* sub = "rec t . c!{add . a?add . t, sub . a?add . t}";
    const char* sup = "rec t . a?add . c!{add . t, sub . t}";
    Verdict v = check(sub, sup, 1);
    CHECK(v.kind == VerdictKind::Proven);
}

TEST_CASE("alternating bit: the specification receiver refines the projection") {
    const char* sub = "rec t . s?{d0 . s!a0 . t, d1 . s!a1 . t}";
    const char* sup = "rec t . s?d0 . s!{a0 . rec u . s?d1 . s!{a0 . u, a1 . t}, a1 . t}";
    Verdict v = check(sub, sup, 2);
    CHECK(v.kind == VerdictKind::Proven);
}

TEST_CASE("a receive anticipated over a send deadlocks and is refuted") {
    const char* sub = "q?l2 . q!l1 . end";
    const char* sup = "q!l1 . q?l2 . end";
    for (std::size_t visits : {1, 2, 5, 16}) {
        Verdict v = check(sub, sup, visits);
        CHECK(v.kind == VerdictKind::Refuted);
        CHECK(v.refute_reason == RefuteReason::FailEarly);
    }
}

TEST_CASE("the safe reordering of the same pair is proven") {
    const char* sub = "p!l2 . p?l1 . end";
    const char* sup = "p?l1 . p!l2 . end";
    Verdict v = check(sub, sup, 2);
    CHECK(v.kind == VerdictKind::Proven);
}

TEST_CASE("terminal mismatches are refuted") {
    Verdict v = check("p!a . end", "p!a . p!b . end", 4);
    CHECK(v.kind == VerdictKind::Refuted);
    CHECK(v.refute_reason == RefuteReason::TerminalMismatch);

    Verdict w = check("end", "p!a . end", 4);
    CHECK(w.kind == VerdictKind::Refuted);
}

TEST_CASE("selection narrowing and branch widening carry over to the checker") {
    CHECK(check("p!a . end", "p!{a . end, b . end}", 2).kind == VerdictKind::Proven);
    CHECK(check("p?{a . end, b . end}", "p?a . end", 2).kind == VerdictKind::Proven);
    CHECK(check("p!{a . end, b . end}", "p!a . end", 2).kind != VerdictKind::Proven);
}

TEST_CASE("visit budget zero is a configuration error") {
    CheckerConfig config;
    config.visits = 0;
    Fsm m = local_to_fsm(parse_local("end"));
    CHECK_THROWS_AS(check_subtype(m, m, config), std::invalid_argument);
}

TEST_CASE("reflexivity over random machines") {
    std::mt19937 rng(83);
    for (int i = 0; i < 500; ++i) {
        auto t = testing::random_local_type(rng);
        Fsm m = local_to_fsm(t);
        CheckerConfig config;
        config.visits = m.size() + 1;
        INFO(format_local(t));
        Verdict v = check_subtype(m, m, config);
        CHECK(v.kind == VerdictKind::Proven);
    }
}

TEST_CASE("proven verdicts are monotone in the visit budget") {
    struct Case {
        const char* sub;
        const char* sup;
        std::size_t visits;
    };
    const Case cases[] = {
        {"s!ready . rec x . s!ready . s?copy . t?ready . t!copy . x",
         "rec x . s!ready . s?copy . t?ready . t!copy . x", 2},
        {"rec t . c!{add . a?add . t, sub . a?add . t}", "rec t . a?add . c!{add . t, sub . t}", 1},
        {"rec t . s?{d0 . s!a0 . t, d1 . s!a1 . t}",
         "rec t . s?d0 . s!{a0 . rec u . s?d1 . s!{a0 . u, a1 . t}, a1 . t}", 2},
        {"p!l2 . p?l1 . end", "p?l1 . p!l2 . end", 2},
    };
    for (const auto& c : cases) {
        for (std::size_t extra : {std::size_t{0}, std::size_t{1}, std::size_t{5}}) {
            Verdict v = check(c.sub, c.sup, c.visits + extra);
            CHECK(v.kind == VerdictKind::Proven);
        }
    }
}

TEST_CASE("assumption check compares raw windows against snapshots") {
    Prefix p;
    p.append({Dir::Receive, {"p"}, "l", {}});
    Prefix q;
    q.append({Dir::Receive, {"p"}, "l", {}});

    SUBCASE("identical empty windows") {
        Prefix a, b;
        Snapshot sa = a.snapshot(), sb = b.snapshot();
        CHECK(check_assumption(a, sa, b, sb));
    }
    SUBCASE("identical non-empty windows of length two") {
        Prefix a;
        a.append({Dir::Send, {"q"}, "m", {}});
        a.append({Dir::Receive, {"p"}, "l", {}});
        Snapshot snap = a.snapshot();
        // Append two more and consume the first two: the window content
        // repeats exactly.
        a.append({Dir::Send, {"q"}, "m", {}});
        a.append({Dir::Receive, {"p"}, "l", {}});
        a.consume_head();
        a.consume_head();
        CHECK(a.window_equals_snapshot(snap));
    }
    SUBCASE("a grown window fails the check") {
        Snapshot snap = p.snapshot();
        p.append({Dir::Receive, {"q"}, "m", {}});
        CHECK_FALSE(p.window_equals_snapshot(snap));
    }
}

TEST_CASE("chained checks") {
    Fsm kernel = local_to_fsm(parse_local("rec x . s!ready . s?copy . t?ready . t!copy . x"));
    Fsm eager =
        local_to_fsm(parse_local("s!ready . rec x . s!ready . s?copy . t?ready . t!copy . x"));
    CheckerConfig config;
    config.visits = 2;

    SUBCASE("reflexive middle") {
        Verdict v = check_with_chain(kernel, {kernel}, kernel, config);
        CHECK(v.kind == VerdictKind::Proven);
    }
    SUBCASE("the supertype itself as middle") {
        Verdict v = check_with_chain(eager, {kernel}, kernel, config);
        CHECK(v.kind == VerdictKind::Proven);
    }
    SUBCASE("one refuted link poisons the chain") {
        Fsm p_bad = local_to_fsm(parse_local("q?l2 . q!l1 . end"));
        Fsm p_good = local_to_fsm(parse_local("q!l1 . q?l2 . end"));
        Verdict v = check_with_chain(p_bad, {p_good}, p_good, config);
        CHECK(v.kind != VerdictKind::Proven);
    }
    SUBCASE("an empty chain is a usage error") {
        CHECK_THROWS_AS(check_with_chain(kernel, {}, kernel, config), std::invalid_argument);
    }
}

TEST_CASE("traces replay the accepting derivation") {
    const char* sub = "s!ready . rec x . s!ready . s?copy . t?ready . t!copy . x";
    const char* sup = "rec x . s!ready . s?copy . t?ready . t!copy . x";
    Verdict v = check(sub, sup, 2);
    REQUIRE(v.kind == VerdictKind::Proven);
    bool has_asm = false, has_sub = false;
    for (const auto& step : v.trace) {
        has_asm = has_asm || step.rule == "asm";
        has_sub = has_sub || step.rule == "sub";
    }
    CHECK(has_asm);
    CHECK(has_sub);
    std::string text = format_trace(v.trace);
    CHECK(text.find("rule=asm") != std::string::npos);
}

TEST_CASE("search is bounded by the node ceiling") {
    // Geometric ceiling: (pairs-per-node)^(path length) nodes, with path
    // length at most |sub| * |sup| * (visits + 1) re-entries.
    const char* sub = "rec t . c!{add . a?add . t, sub . a?add . t}";
    const char* sup = "rec t . a?add . c!{add . t, sub . t}";
    Fsm m_sub = local_to_fsm(parse_local(sub));
    Fsm m_sup = local_to_fsm(parse_local(sup));
    CheckerConfig config;
    config.visits = 3;
    CheckStats stats;
    check_subtype(m_sub, m_sup, config, &stats);
    double max_branch = 0;
    for (const auto& out : m_sub.states) max_branch = std::max(max_branch, double(out.size()));
    for (const auto& out : m_sup.states) max_branch = std::max(max_branch, double(out.size()));
    double depth = double(m_sub.size()) * double(m_sup.size()) * double(*config.visits + 1);
    double log_ceiling = (depth + 1) * std::log(std::max(2.0, max_branch * max_branch));
    CHECK(std::log(double(stats.nodes)) <= log_ceiling);
}

}  // TEST_SUITE
