#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpst/parse.hpp"
#include "mpst/types.hpp"

namespace mpst {

/// Benchmark families scaling the checker along different axes: anticipated
/// sends (streaming, k_buffering), choice depth (nested_choice) and
/// participant count (ring).
enum class BenchFamily { Streaming, NestedChoice, Ring, KBuffering };

std::string to_string(BenchFamily family);
std::optional<BenchFamily> bench_family_from_string(const std::string& name);

/// Streaming: the supertype loops `t?ready . t!value`; the subtype
/// anticipates n `t!value` sends before entering the same loop.
std::pair<LocalRef, LocalRef> gen_streaming(std::size_t n);  // (sub, sup)

/// Nested choice over a single partner `o`, n levels deep; the subtype
/// narrows the selections and widens the branchings level by level.
std::pair<LocalRef, LocalRef> gen_nested_choice(std::size_t n);

struct RingEntry {
    Role role;
    LocalRef sub;
    LocalRef sup;
};

/// Ring of n >= 2 participants p0..p{n-1}; each middle participant receives
/// from its predecessor and sends to its successor, and its optimisation
/// sends before receiving. p0 initiates (nothing to reorder) and the last
/// participant closes the ring with the same send-first optimisation.
std::vector<RingEntry> gen_ring(std::size_t n);

/// k-buffering: the double-buffering kernel loop with n anticipated
/// `s!ready` sends; n = 1 is the classic double-buffered kernel.
std::pair<LocalRef, LocalRef> gen_kbuffering(std::size_t n);

/// Recommended visit budget for a family instance: one per anticipated send
/// plus one for the closing loop, or the checker default when no
/// anticipation is involved.
std::size_t bench_visits(BenchFamily family, std::size_t n);

/// Global protocols whose projections are the supertypes above, for
/// cross-validating proven pairs against the execution oracle.
GlobalProtocol streaming_protocol();
GlobalProtocol kbuffering_protocol();
GlobalProtocol ring_protocol(std::size_t n);
GlobalProtocol nested_choice_protocol(std::size_t n);

/// The role whose machine gets replaced when cross-validating a family.
Role bench_subject(BenchFamily family);

struct BenchRecord {
    std::string family;
    std::size_t parameter = 0;
    std::string verdict;
    double mean_seconds = 0.0;
    std::size_t runs = 0;
};

std::string bench_csv_header();
std::string to_csv(const BenchRecord& record);
std::vector<BenchRecord> parse_bench_csv(const std::string& text);

/// Times the subtype check for one family instance: one discarded warm-up,
/// then the mean over at least five runs on a monotonic clock. For the ring
/// family the time is per participant and the verdict aggregates all of
/// them. `nodes` (when given) receives the search node count of one run.
BenchRecord run_bench(BenchFamily family, std::size_t parameter, std::size_t runs,
                      std::uint64_t* nodes = nullptr);

}  // namespace mpst
