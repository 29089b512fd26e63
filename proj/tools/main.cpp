#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpst/bench.hpp"
#include "mpst/dot.hpp"
#include "mpst/parse.hpp"
#include "mpst/project.hpp"
#include "mpst/simulate.hpp"
#include "mpst/subtype.hpp"
#include "mpst/sync.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Loads a machine from either a local type (.mpst) or a DOT graph (.dot).
mpst::Fsm load_machine(const std::string& path) {
    const std::string text = read_file(path);
    if (ends_with(path, ".dot")) return mpst::parse_fsm_dot(text);
    return mpst::local_to_fsm(mpst::parse_local(text));
}

mpst::SortTable sort_table_from(const std::vector<std::string>& coercions) {
    mpst::SortTable table;
    for (const std::string& c : coercions) {
        auto colon = c.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == c.size())
            throw std::runtime_error("bad coercion '" + c + "' (expected FROM:TO)");
        table.allow(c.substr(0, colon), c.substr(colon + 1));
    }
    return table;
}

int cmd_project(const std::string& input, const std::string& role_name, const std::string& output) {
    mpst::GlobalProtocol protocol = mpst::parse_global(read_file(input));
    mpst::Role role{role_name};
    bool declared = false;
    for (const auto& r : protocol.roles) declared = declared || r == role;
    if (!declared) throw std::runtime_error("role '" + role_name + "' is not declared by the protocol");
    if (!mpst::occurs(protocol.type, role))
        std::cerr << "warning: role '" << role_name << "' never interacts; projecting to end\n";
    mpst::LocalRef local = mpst::project(protocol.type, role);
    write_output(output, mpst::format_local(local) + "\n");
    return kExitOk;
}

int cmd_fsm(const std::string& input, const std::string& output) {
    mpst::LocalRef local = mpst::parse_local(read_file(input));
    write_output(output, mpst::write_fsm_dot(mpst::local_to_fsm(local)));
    return kExitOk;
}

int cmd_subtype(const std::string& sub_path, const std::string& sup_path,
                std::optional<std::size_t> visits, const std::vector<std::string>& chain_paths,
                const std::vector<std::string>& coercions, bool trace, bool emit_json) {
    mpst::Fsm sub = load_machine(sub_path);
    mpst::Fsm sup = load_machine(sup_path);

    mpst::CheckerConfig config;
    config.visits = visits;
    config.sorts = sort_table_from(coercions);

    mpst::CheckStats stats;
    auto begin = std::chrono::steady_clock::now();
    mpst::Verdict verdict;
    if (chain_paths.empty()) {
        verdict = mpst::check_subtype(sub, sup, config, &stats);
    } else {
        std::vector<mpst::Fsm> mids;
        for (const std::string& path : chain_paths) mids.push_back(load_machine(path));
        verdict = mpst::check_with_chain(sub, mids, sup, config, &stats);
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();

    if (emit_json) {
        json out;
        out["verdict"] = mpst::to_string(verdict.kind);
        out["reason"] = verdict.kind == mpst::VerdictKind::Refuted
                            ? mpst::to_string(verdict.refute_reason)
                            : (verdict.kind == mpst::VerdictKind::Unknown ? "bound-exhausted" : "");
        out["nodes_explored"] = stats.nodes;
        out["elapsed_seconds"] = elapsed;
        if (trace) {
            json steps = json::array();
            for (const auto& s : verdict.trace) {
                steps.push_back({{"rule", s.rule},
                                 {"sub_state", s.sub_state},
                                 {"sup_state", s.sup_state},
                                 {"detail", s.detail}});
            }
            out["trace"] = std::move(steps);
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "verdict: " << mpst::to_string(verdict.kind);
        if (verdict.kind == mpst::VerdictKind::Refuted)
            std::cout << " (" << mpst::to_string(verdict.refute_reason) << ")";
        if (verdict.kind == mpst::VerdictKind::Unknown) std::cout << " (bound-exhausted)";
        std::cout << "\n";
        if (trace) std::cout << mpst::format_trace(verdict.trace);
    }
    return verdict.proven() ? kExitOk : kExitNegative;
}

int cmd_sync_subtype(const std::string& sub_path, const std::string& sup_path,
                     const std::vector<std::string>& coercions) {
    mpst::LocalRef sub = mpst::parse_local(read_file(sub_path));
    mpst::LocalRef sup = mpst::parse_local(read_file(sup_path));
    bool ok = mpst::check_sync_subtype(sub, sup, sort_table_from(coercions));
    std::cout << (ok ? "subtype" : "not a subtype") << "\n";
    return ok ? kExitOk : kExitNegative;
}

int cmd_simulate(const std::string& input, const std::vector<std::string>& replacements,
                 std::size_t bound, std::size_t budget, bool emit_json) {
    mpst::GlobalProtocol protocol = mpst::parse_global(read_file(input));
    std::map<mpst::Role, mpst::Fsm> machines;
    for (const std::string& r : replacements) {
        auto eq = r.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == r.size())
            throw std::runtime_error("bad replacement '" + r + "' (expected ROLE=FILE)");
        machines[mpst::Role{r.substr(0, eq)}] = load_machine(r.substr(eq + 1));
    }

    mpst::SystemConfig system = mpst::compose_system(protocol, machines, bound, budget);
    mpst::OracleResult result = mpst::run_bounded(system);

    if (emit_json) {
        json out;
        out["verdict"] = mpst::to_string(result.kind);
        out["explored"] = result.explored;
        json trace = json::array();
        for (const auto& t : result.trace) trace.push_back(t.to_string());
        out["trace"] = std::move(trace);
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << mpst::to_string(result.kind) << " (" << result.explored
                  << " configurations)\n";
        for (const auto& t : result.trace) std::cout << "  " << t.to_string() << "\n";
    }
    return result.kind == mpst::OracleResult::Kind::DeadlockFree ? kExitOk : kExitNegative;
}

int cmd_bench(const std::string& family_name, const std::string& range, std::size_t runs,
              std::optional<std::size_t> step, const std::string& output) {
    auto family = mpst::bench_family_from_string(family_name);
    if (!family) throw std::runtime_error("unknown family '" + family_name + "'");

    auto dots = range.find("..");
    if (dots == std::string::npos)
        throw std::runtime_error("bad range '" + range + "' (expected A..B)");
    std::size_t lo = std::stoul(range.substr(0, dots));
    std::size_t hi = std::stoul(range.substr(dots + 2));
    if (hi < lo) throw std::runtime_error("empty range '" + range + "'");

    std::size_t stride = step.value_or([&] {
        switch (*family) {
            case mpst::BenchFamily::Streaming: return std::size_t{10};
            case mpst::BenchFamily::KBuffering: return std::size_t{5};
            case mpst::BenchFamily::Ring: return std::size_t{2};
            case mpst::BenchFamily::NestedChoice: return std::size_t{1};
        }
        return std::size_t{1};
    }());
    if (stride == 0) throw std::runtime_error("step must be positive");

    std::string csv = mpst::bench_csv_header() + "\n";
    for (std::size_t n = lo; n <= hi; n += stride) {
        mpst::BenchRecord record = mpst::run_bench(*family, n, runs);
        csv += mpst::to_csv(record) + "\n";
        std::cerr << mpst::to_csv(record) << "\n";
    }
    write_output(output, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification toolkit for asynchronous multiparty session protocols"};
    app.require_subcommand(1);

    // project
    auto* project = app.add_subcommand("project", "Project a global protocol onto one role");
    std::string project_input, project_role, project_output;
    project->add_option("input", project_input, "global protocol (.scr)")->required();
    project->add_option("--role", project_role, "role to project onto")->required();
    project->add_option("-o,--output", project_output, "output file (default stdout)");

    // fsm
    auto* fsm = app.add_subcommand("fsm", "Convert a local type to a DOT machine");
    std::string fsm_input, fsm_output;
    fsm->add_option("input", fsm_input, "local type (.mpst)")->required();
    fsm->add_option("-o,--output", fsm_output, "output file (default stdout)");

    // subtype
    auto* subtype = app.add_subcommand("subtype", "Check asynchronous subtyping between machines");
    std::string sub_path, sup_path;
    std::optional<std::size_t> visits;
    std::vector<std::string> chain, coercions;
    bool trace = false, subtype_json = false;
    subtype->add_option("--sub", sub_path, "candidate subtype (.mpst or .dot)")->required();
    subtype->add_option("--sup", sup_path, "supertype (.mpst or .dot)")->required();
    subtype->add_option("--visits", visits, "per-state-pair visit budget");
    subtype->add_option("--chain", chain, "intermediate machines")->delimiter(',');
    subtype->add_option("--coerce", coercions, "extra sort coercions FROM:TO");
    subtype->add_flag("--trace", trace, "print the accepting derivation");
    subtype->add_flag("--json", subtype_json, "machine-readable output");

    // sync-subtype
    auto* sync = app.add_subcommand("sync-subtype", "Check synchronous subtyping between local types");
    std::string sync_sub, sync_sup;
    std::vector<std::string> sync_coercions;
    sync->add_option("--sub", sync_sub, "candidate subtype (.mpst)")->required();
    sync->add_option("--sup", sync_sup, "supertype (.mpst)")->required();
    sync->add_option("--coerce", sync_coercions, "extra sort coercions FROM:TO");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run the bounded execution oracle on a system");
    std::string simulate_input;
    std::vector<std::string> replacements;
    std::size_t bound = 4, budget = 1'000'000;
    bool simulate_json = false;
    simulate->add_option("input", simulate_input, "global protocol (.scr)")->required();
    simulate->add_option("--replace", replacements, "replace a role's machine, ROLE=FILE");
    simulate->add_option("--bound", bound, "channel bound (default 4)");
    simulate->add_option("--budget", budget, "configuration budget (default 1e6)");
    simulate->add_flag("--json", simulate_json, "machine-readable output");

    // bench
    auto* bench = app.add_subcommand("bench", "Time the checker on a benchmark family");
    std::string family, range = "0..0", bench_output;
    std::size_t runs = 5;
    std::optional<std::size_t> step;
    bench->add_option("--family", family, "streaming|nested_choice|ring|k_buffering")->required();
    bench->add_option("--param-range", range, "parameter range A..B")->required();
    bench->add_option("--runs", runs, "timed runs per parameter (min 5)");
    bench->add_option("--step", step, "range stride (default per family)");
    bench->add_option("-o,--output", bench_output, "CSV output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(project)) return cmd_project(project_input, project_role, project_output);
        if (app.got_subcommand(fsm)) return cmd_fsm(fsm_input, fsm_output);
        if (app.got_subcommand(subtype))
            return cmd_subtype(sub_path, sup_path, visits, chain, coercions, trace, subtype_json);
        if (app.got_subcommand(sync)) return cmd_sync_subtype(sync_sub, sync_sup, sync_coercions);
        if (app.got_subcommand(simulate))
            return cmd_simulate(simulate_input, replacements, bound, budget, simulate_json);
        if (app.got_subcommand(bench)) return cmd_bench(family, range, runs, step, bench_output);
    } catch (const mpst::SourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
