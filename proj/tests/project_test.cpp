#include <doctest.h>

#include <random>
#include <set>

#include "mpst/parse.hpp"
#include "mpst/project.hpp"
#include "test_support.hpp"

using namespace mpst;

namespace {

GlobalProtocol double_buffering() {
    return parse_global(
        "global protocol DoubleBuffering(role s, role k, role t) {"
        "  rec loop {"
        "    ready() from k to s;"
        "    copy() from s to k;"
        "    ready() from t to k;"
        "    copy() from k to t;"
        "    continue loop;"
        "  }"
        "}");
}

// The alternating-bit protocol: the sender retransmits data tagged d0/d1 and
// the receiver acknowledges with a0/a1.
GlobalRef alternating_bit() {
    auto inner = GlobalType::make_rec(
        "u", GlobalType::make_msg(
                 {"s"}, {"r"},
                 {{"d1", {},
                   GlobalType::make_msg({"r"}, {"s"},
                                        {{"a0", {}, GlobalType::make_var("u")},
                                         {"a1", {}, GlobalType::make_var("t")}})}}));
    return GlobalType::make_rec(
        "t", GlobalType::make_msg(
                 {"s"}, {"r"},
                 {{"d0", {},
                   GlobalType::make_msg({"r"}, {"s"},
                                        {{"a0", {}, inner}, {"a1", {}, GlobalType::make_var("t")}})}}));
}

std::size_t subterm_count(const LocalRef& t) {
    std::size_t total = 1;
    switch (t->kind) {
        case LocalType::Kind::Rec:
            total += subterm_count(t->body);
            break;
        case LocalType::Kind::Select:
        case LocalType::Kind::Branch:
            for (const auto& c : t->choices) total += subterm_count(c.cont);
            break;
        default:
            break;
    }
    return total;
}

}  // namespace

TEST_SUITE("project") {

TEST_CASE("kernel projection of the double-buffering protocol") {
    GlobalProtocol p = double_buffering();
    LocalRef kernel = project(p.type, {"k"});
    CHECK(format_local(kernel) == "rec loop . s!ready . s?copy . t?ready . t!copy . loop");
    CHECK(structural_equal(
        kernel, parse_local("rec loop . s!ready . s?copy . t?ready . t!copy . loop")));
}

TEST_CASE("receiver projection of the alternating-bit protocol") {
    LocalRef receiver = project(alternating_bit(), {"r"});
    auto expected = parse_local(
        "rec t . s?d0 . s!{a0 . rec u . s?d1 . s!{a0 . u, a1 . t}, a1 . t}");
    CHECK(structural_equal(receiver, expected));

    LocalRef sender = project(alternating_bit(), {"s"});
    auto expected_sender = parse_local(
        "rec t . r!d0 . r?{a0 . rec u . r!d1 . r?{a0 . u, a1 . t}, a1 . t}");
    CHECK(structural_equal(sender, expected_sender));
}

TEST_CASE("projecting end and non-participants") {
    CHECK(project(GlobalType::make_end(), {"p"})->kind == LocalType::Kind::End);

    GlobalProtocol p = double_buffering();
    CHECK_FALSE(occurs(p.type, {"z"}));
    CHECK(project(p.type, {"z"})->kind == LocalType::Kind::End);
}

TEST_CASE("unmergeable branches are rejected") {
    // a -> b { l1: b -> c m1, l2: b -> c m2 }: c behaves differently per branch.
    auto g = GlobalType::make_msg(
        {"a"}, {"b"},
        {{"l1", {},
          GlobalType::make_msg({"b"}, {"c"}, {{"m1", {}, GlobalType::make_end()}})},
         {"l2", {},
          GlobalType::make_msg({"b"}, {"c"}, {{"m2", {}, GlobalType::make_end()}})}});
    CHECK(structural_equal(project(g, {"a"}),
                           parse_local("b!{l1 . end, l2 . end}")));
    CHECK_THROWS_AS(project(g, {"c"}), ProjectionError);
    try {
        project(g, {"c"});
    } catch (const ProjectionError& e) {
        CHECK(e.reason == ProjectionError::Reason::UnmergeableBranches);
        CHECK(e.role.name == "c");
    }
}

TEST_CASE("identical third-party branches merge plainly") {
    auto g = parse_global(
                 "global protocol Merge(role a, role b, role c) {"
                 "  choice at a { l1() from a to b; m() from b to c; }"
                 "          or { l2() from a to b; m() from b to c; }"
                 "}")
                 .type;
    CHECK(structural_equal(project(g, {"c"}), parse_local("b?m . end")));
}

TEST_CASE("local_to_fsm on the kernel loop") {
    Fsm fsm = local_to_fsm(parse_local("rec x . s!ready . s?copy . t?ready . t!copy . x"));
    CHECK(fsm.size() == 4);
    CHECK(validate_fsm(fsm).empty());
    // The cycle returns to the initial state.
    std::size_t s = fsm.initial;
    for (int i = 0; i < 4; ++i) s = fsm.out(s).front().target;
    CHECK(s == fsm.initial);
}

TEST_CASE("local_to_fsm merges identical continuations") {
    Fsm fsm = local_to_fsm(parse_local("rec t . c!{add . a?add . t, sub . a?add . t}"));
    // Both branch continuations are the same subterm, so the machine has
    // just the choice state and the shared receive state.
    CHECK(fsm.size() == 2);
    REQUIRE(fsm.out(fsm.initial).size() == 2);
    CHECK(fsm.out(fsm.initial)[0].target == fsm.out(fsm.initial)[1].target);
}

TEST_CASE("end is a single terminal state") {
    Fsm fsm = local_to_fsm(parse_local("end"));
    CHECK(fsm.size() == 1);
    CHECK(fsm.terminal(fsm.initial));
}

TEST_CASE("validate_fsm reports violations") {
    Fsm ok = local_to_fsm(parse_local("rec x . s!ready . s?copy . t?ready . t!copy . x"));
    CHECK(validate_fsm(ok).empty());

    Fsm mixed;
    mixed.states.resize(2);
    mixed.states[0].push_back({{Dir::Send, {"s"}, "a", {}}, 1});
    mixed.states[0].push_back({{Dir::Receive, {"s"}, "b", {}}, 1});
    auto violations = validate_fsm(mixed);
    REQUIRE_FALSE(violations.empty());
    CHECK(violations.front().find("mixed direction") != std::string::npos);

    Fsm unreachable;
    unreachable.states.resize(2);
    violations = validate_fsm(unreachable);
    REQUIRE_FALSE(violations.empty());
    CHECK(violations.front().find("unreachable") != std::string::npos);
}

TEST_CASE("projection composed with fsm construction is always valid") {
    std::mt19937 rng(31);
    int projected_ok = 0;
    for (int i = 0; i < 300; ++i) {
        auto t = testing::random_local_type(rng);
        Fsm fsm = local_to_fsm(t);
        INFO(format_local(t));
        CHECK(validate_fsm(fsm).empty());
        CHECK(fsm.size() <= subterm_count(t));
        ++projected_ok;
    }
    CHECK(projected_ok == 300);
}

}  // TEST_SUITE
