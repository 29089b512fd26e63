#include <doctest.h>

#include <random>

#include "mpst/parse.hpp"
#include "mpst/project.hpp"
#include "mpst/subtype.hpp"
#include "mpst/sync.hpp"
#include "test_support.hpp"

using namespace mpst;

namespace {

bool sync_check(const char* sub, const char* sup) {
    return check_sync_subtype(parse_local(sub), parse_local(sup));
}

}  // namespace

TEST_SUITE("sync") {

TEST_CASE("end refines end") {
    CHECK(sync_check("end", "end"));
}

TEST_CASE("branch widening") {
    CHECK(sync_check("p?{a . end, b . end}", "p?a . end"));
    CHECK_FALSE(sync_check("p?a . end", "p?{a . end, b . end}"));
}

TEST_CASE("selection narrowing") {
    CHECK(sync_check("p!a . end", "p!{a . end, b . end}"));
    CHECK_FALSE(sync_check("p!{a . end, b . end}", "p!a . end"));
}

TEST_CASE("sort coercion on payloads") {
    SortTable sorts;
    sorts.allow("nat", "int");
    CHECK(check_sync_subtype(parse_local("p!a(nat) . end"), parse_local("p!a(int) . end"), sorts));
    CHECK_FALSE(
        check_sync_subtype(parse_local("p!a(int) . end"), parse_local("p!a(nat) . end"), sorts));
    // Receives take the supertype's payload.
    CHECK(check_sync_subtype(parse_local("p?a(int) . end"), parse_local("p?a(nat) . end"), sorts));
    CHECK_FALSE(
        check_sync_subtype(parse_local("p?a(nat) . end"), parse_local("p?a(int) . end"), sorts));
    // Without the table entry only reflexive coercions hold.
    CHECK_FALSE(sync_check("p!a(nat) . end", "p!a(int) . end"));
}

TEST_CASE("recursive simulation closes cycles") {
    CHECK(sync_check("rec x . p!a . x", "rec y . p!a . y"));
    CHECK(sync_check("rec x . p?{a . x, b . end}", "rec y . p?a . y"));
    CHECK_FALSE(sync_check("rec x . p!a . x", "rec y . p!b . y"));
    // No reordering synchronously: the double-buffering optimisation is
    // not a synchronous subtype.
    CHECK_FALSE(sync_check("s!ready . rec x . s!ready . s?copy . t?ready . t!copy . x",
                           "rec x . s!ready . s?copy . t?ready . t!copy . x"));
}

TEST_CASE("reflexivity over random types") {
    std::mt19937 rng(97);
    for (int i = 0; i < 500; ++i) {
        auto t = testing::random_local_type(rng);
        INFO(format_local(t));
        CHECK(check_sync_subtype(t, t));
    }
}

TEST_CASE("synchronously related pairs are asynchronously proven") {
    struct Case {
        const char* sub;
        const char* sup;
    };
    const Case corpus[] = {
        {"end", "end"},
        {"p?{a . end, b . end}", "p?a . end"},
        {"p!a . end", "p!{a . end, b . end}"},
        {"rec x . p!a . x", "rec y . p!a . y"},
        {"rec x . p?{a . x, b . end}", "rec y . p?a . y"},
        {"p!{a . p?{c . end, d . end}, b . end}", "p!{a . p?c . end, b . end, e . end}"},
    };
    for (const auto& c : corpus) {
        auto sub = parse_local(c.sub);
        auto sup = parse_local(c.sup);
        REQUIRE(check_sync_subtype(sub, sup));
        Fsm m_sub = local_to_fsm(sub);
        Fsm m_sup = local_to_fsm(sup);
        CheckerConfig config;
        config.visits = m_sub.size() + m_sup.size() + 1;
        Verdict v = check_subtype(m_sub, m_sup, config);
        CHECK(v.kind == VerdictKind::Proven);
    }
}

TEST_CASE("transitivity over corpus triples") {
    const char* chain[] = {
        "p?{a . end, b . end, c . end}",
        "p?{a . end, b . end}",
        "p?a . end",
    };
    auto t0 = parse_local(chain[0]);
    auto t1 = parse_local(chain[1]);
    auto t2 = parse_local(chain[2]);
    CHECK(check_sync_subtype(t0, t1));
    CHECK(check_sync_subtype(t1, t2));
    CHECK(check_sync_subtype(t0, t2));

    // Exhaustive over all corpus triples: relation restricted to the corpus
    // is transitively closed.
    std::vector<LocalRef> corpus = {
        t0, t1, t2,
        parse_local("p!a . end"),
        parse_local("p!{a . end, b . end}"),
        parse_local("rec x . p!a . x"),
        parse_local("rec y . p!a . y"),
        parse_local("end"),
    };
    for (const auto& a : corpus)
        for (const auto& b : corpus)
            for (const auto& c : corpus)
                if (check_sync_subtype(a, b) && check_sync_subtype(b, c))
                    CHECK(check_sync_subtype(a, c));
}

}  // TEST_SUITE
