#include "mpst/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "mpst/project.hpp"
#include "mpst/subtype.hpp"

namespace mpst {

namespace {

LocalRef seq_sends(const Role& peer, const std::string& label, std::size_t count, LocalRef tail) {
    for (std::size_t i = 0; i < count; ++i)
        tail = LocalType::make_select(peer, {{label, {}, std::move(tail)}});
    return tail;
}

}  // namespace

std::string to_string(BenchFamily family) {
    switch (family) {
        case BenchFamily::Streaming: return "streaming";
        case BenchFamily::NestedChoice: return "nested_choice";
        case BenchFamily::Ring: return "ring";
        case BenchFamily::KBuffering: return "k_buffering";
    }
    return "streaming";
}

std::optional<BenchFamily> bench_family_from_string(const std::string& name) {
    if (name == "streaming") return BenchFamily::Streaming;
    if (name == "nested_choice") return BenchFamily::NestedChoice;
    if (name == "ring") return BenchFamily::Ring;
    if (name == "k_buffering") return BenchFamily::KBuffering;
    return std::nullopt;
}

std::pair<LocalRef, LocalRef> gen_streaming(std::size_t n) {
    LocalRef sup = parse_local("rec x . t?ready . t!value . x");
    LocalRef sub = seq_sends({"t"}, "value", n, sup);
    return {std::move(sub), std::move(sup)};
}

std::pair<LocalRef, LocalRef> gen_nested_choice(std::size_t n) {
    const Role o{"o"};
    LocalRef sub = LocalType::make_end();
    LocalRef sup = LocalType::make_end();
    for (std::size_t level = 0; level < n; ++level) {
        LocalRef in_rsu = LocalType::make_branch(
            o, {{"r", {}, sub}, {"s", {}, sub}, {"u", {}, sub}});
        LocalRef in_rs = LocalType::make_branch(o, {{"r", {}, sub}, {"s", {}, sub}});
        sub = LocalType::make_select(o, {{"m", {}, in_rsu}, {"p", {}, in_rs}});

        LocalRef out_mpq = LocalType::make_select(
            o, {{"m", {}, sup}, {"p", {}, sup}, {"q", {}, sup}});
        LocalRef out_mp = LocalType::make_select(o, {{"m", {}, sup}, {"p", {}, sup}});
        sup = LocalType::make_branch(o, {{"r", {}, out_mpq}, {"s", {}, out_mp}});
    }
    return {std::move(sub), std::move(sup)};
}

std::vector<RingEntry> gen_ring(std::size_t n) {
    if (n < 2) throw std::invalid_argument("ring needs at least 2 participants");
    auto role = [](std::size_t i) { return Role{"p" + std::to_string(i)}; };
    std::vector<RingEntry> entries;
    for (std::size_t i = 0; i < n; ++i) {
        const Role prev = role((i + n - 1) % n);
        const Role next = role((i + 1) % n);
        LocalRef projected, optimized;
        if (i == 0) {
            // The initiator already sends first; nothing to anticipate.
            projected = LocalType::make_rec(
                "t", LocalType::make_select(
                         next, {{"v", {}, LocalType::make_branch(
                                              prev, {{"v", {}, LocalType::make_var("t")}})}}));
            optimized = projected;
        } else {
            projected = LocalType::make_rec(
                "t", LocalType::make_branch(
                         prev, {{"v", {}, LocalType::make_select(
                                              next, {{"v", {}, LocalType::make_var("t")}})}}));
            optimized = LocalType::make_rec(
                "t", LocalType::make_select(
                         next, {{"v", {}, LocalType::make_branch(
                                              prev, {{"v", {}, LocalType::make_var("t")}})}}));
        }
        entries.push_back({role(i), std::move(optimized), std::move(projected)});
    }
    return entries;
}

std::pair<LocalRef, LocalRef> gen_kbuffering(std::size_t n) {
    LocalRef sup = parse_local("rec x . s!ready . s?copy . t?ready . t!copy . x");
    LocalRef sub = seq_sends({"s"}, "ready", n, sup);
    return {std::move(sub), std::move(sup)};
}

std::size_t bench_visits(BenchFamily family, std::size_t n) {
    switch (family) {
        case BenchFamily::Streaming:
        case BenchFamily::KBuffering:
            return n + 1;  // one unrolling per anticipated send, one to close
        case BenchFamily::Ring:
            return 1;
        case BenchFamily::NestedChoice:
            return 1;  // choice-free of recursion; one pass suffices
    }
    return n + 1;
}

GlobalProtocol streaming_protocol() {
    return parse_global(
        "global protocol Streaming(role s, role t) {"
        "  rec x { ready() from t to s; value() from s to t; continue x; }"
        "}");
}

GlobalProtocol kbuffering_protocol() {
    return parse_global(
        "global protocol KBuffering(role s, role k, role t) {"
        "  rec x {"
        "    ready() from k to s;"
        "    copy() from s to k;"
        "    ready() from t to k;"
        "    copy() from k to t;"
        "    continue x;"
        "  }"
        "}");
}

GlobalProtocol ring_protocol(std::size_t n) {
    if (n < 2) throw std::invalid_argument("ring needs at least 2 participants");
    GlobalProtocol protocol;
    protocol.name = "Ring" + std::to_string(n);
    for (std::size_t i = 0; i < n; ++i) protocol.roles.push_back({"p" + std::to_string(i)});
    GlobalRef body = GlobalType::make_var("t");
    for (std::size_t i = n; i-- > 0;) {
        const Role from = protocol.roles[i];
        const Role to = protocol.roles[(i + 1) % n];
        body = GlobalType::make_msg(from, to, {{"v", {}, std::move(body)}});
    }
    protocol.type = GlobalType::make_rec("t", std::move(body));
    return protocol;
}

GlobalProtocol nested_choice_protocol(std::size_t n) {
    GlobalProtocol protocol;
    protocol.name = "NestedChoice" + std::to_string(n);
    protocol.roles = {{"o"}, {"q"}};
    GlobalRef body = GlobalType::make_end();
    for (std::size_t level = 0; level < n; ++level) {
        GlobalRef out_mpq = GlobalType::make_msg(
            {"q"}, {"o"}, {{"m", {}, body}, {"p", {}, body}, {"q", {}, body}});
        GlobalRef out_mp = GlobalType::make_msg({"q"}, {"o"}, {{"m", {}, body}, {"p", {}, body}});
        body = GlobalType::make_msg({"o"}, {"q"}, {{"r", {}, out_mpq}, {"s", {}, out_mp}});
    }
    protocol.type = body;
    return protocol;
}

Role bench_subject(BenchFamily family) {
    switch (family) {
        case BenchFamily::Streaming: return {"s"};
        case BenchFamily::KBuffering: return {"k"};
        case BenchFamily::NestedChoice: return {"q"};
        case BenchFamily::Ring: return {"p1"};
    }
    return {"s"};
}

std::string bench_csv_header() {
    return "family,parameter,verdict,mean_seconds,runs";
}

std::string to_csv(const BenchRecord& record) {
    std::ostringstream out;
    out << record.family << ',' << record.parameter << ',' << record.verdict << ','
        << record.mean_seconds << ',' << record.runs;
    return out.str();
}

std::vector<BenchRecord> parse_bench_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<BenchRecord> records;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == bench_csv_header()) continue;
        }
        std::istringstream fields(line);
        BenchRecord r;
        std::string parameter, mean, runs;
        if (!std::getline(fields, r.family, ',') || !std::getline(fields, parameter, ',') ||
            !std::getline(fields, r.verdict, ',') || !std::getline(fields, mean, ',') ||
            !std::getline(fields, runs)) {
            throw std::invalid_argument("malformed benchmark CSV line: " + line);
        }
        r.parameter = std::stoul(parameter);
        r.mean_seconds = std::stod(mean);
        r.runs = std::stoul(runs);
        records.push_back(std::move(r));
    }
    return records;
}

BenchRecord run_bench(BenchFamily family, std::size_t parameter, std::size_t runs,
                      std::uint64_t* nodes) {
    runs = std::max<std::size_t>(runs, 5);

    // Materialize the machine pairs outside the timed region.
    std::vector<std::pair<Fsm, Fsm>> pairs;
    if (family == BenchFamily::Ring) {
        for (const RingEntry& e : gen_ring(parameter))
            pairs.emplace_back(local_to_fsm(e.sub, e.role), local_to_fsm(e.sup, e.role));
    } else {
        auto [sub, sup] = family == BenchFamily::Streaming    ? gen_streaming(parameter)
                          : family == BenchFamily::KBuffering ? gen_kbuffering(parameter)
                                                              : gen_nested_choice(parameter);
        pairs.emplace_back(local_to_fsm(sub), local_to_fsm(sup));
    }

    CheckerConfig config;
    config.visits = bench_visits(family, parameter);
    config.record_trace = false;

    auto check_all = [&](CheckStats* stats) {
        VerdictKind worst = VerdictKind::Proven;
        for (const auto& [sub, sup] : pairs) {
            Verdict v = check_subtype(sub, sup, config, stats);
            if (v.kind != VerdictKind::Proven) worst = v.kind;
        }
        return worst;
    };

    CheckStats stats;
    VerdictKind verdict = check_all(&stats);  // warm-up, discarded from timing
    if (nodes) *nodes = stats.nodes;

    using clock = std::chrono::steady_clock;
    double total = 0.0;
    for (std::size_t i = 0; i < runs; ++i) {
        auto begin = clock::now();
        check_all(nullptr);
        total += std::chrono::duration<double>(clock::now() - begin).count();
    }

    BenchRecord record;
    record.family = to_string(family);
    record.parameter = parameter;
    record.verdict = to_string(verdict);
    record.mean_seconds = total / static_cast<double>(runs) / static_cast<double>(pairs.size());
    record.runs = runs;
    return record;
}

}  // namespace mpst
