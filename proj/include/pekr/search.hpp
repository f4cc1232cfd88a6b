#pragma once

// Exact extremal search: t-intersecting families of partitions of [n] are the
// cliques of the compatibility graph on B(n), so maximum families come from an
// exact maximum-clique search.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pekr/bitset.hpp"
#include "pekr/counting.hpp"
#include "pekr/family.hpp"

namespace pekr {

// B_8 = 4140 vertices. n=6 (t=1) and n=7 (t>=2) are the sizes exact search is
// expected to finish on; n=8 builds but searches may hit the time budget.
inline constexpr int kSearchLimit = 8;

struct CompatibilityGraph {
    int n = 0;
    int t = 0;
    std::vector<ElementSet> sigma; // indexed by rank
    std::vector<Bitset> adjacency; // edge iff common_blocks >= t, no loops

    std::size_t vertex_count() const noexcept { return sigma.size(); }
    bool adjacent(std::size_t u, std::size_t v) const { return adjacency[u].test(v); }
    std::size_t degree(std::size_t v) const { return adjacency[v].count(); }
    std::size_t edge_count() const;
};

CompatibilityGraph build_graph_serial(int n, int t);
CompatibilityGraph build_graph(int n, int t, int threads = 1);

enum class SearchMode { unrestricted, nontrivial };

std::string_view to_string(SearchMode m);
SearchMode parse_search_mode(std::string_view s);

struct SearchOptions {
    int threads = 1;
    std::chrono::milliseconds timeout{300'000};
    // Start the incumbent from a known feasible family (trivial or HM) so the
    // bound phase only looks for strictly larger cliques.
    bool seed_incumbent = true;
};

struct BoundComparison {
    std::optional<BigCount> hm_size; // absent when n < t+2
    BigCount trivial;                // B_{n-t}
    bool equals_hm = false;
    bool equals_trivial = false;
};

struct SearchReport {
    int n = 0;
    int t = 0;
    SearchMode mode = SearchMode::unrestricted;
    BigCount optimum = 0;
    PartitionFamily witness{1};
    std::optional<HmWitness> hm_verdict;
    BoundComparison bounds;
    // Nodes of the deterministic witness pass. Identical across thread counts.
    std::uint64_t nodes_explored = 0;
    // Nodes of the parallel bound pass; depends on scheduling.
    std::uint64_t bound_nodes = 0;
    std::chrono::milliseconds wall_time{0};
    bool optimal = true;
};

// Exact maximum (mode-constrained) clique. On timeout the best clique found so
// far is reported with optimal = false.
SearchReport max_family(const CompatibilityGraph& g, SearchMode mode, const SearchOptions& options = {});

// Mode-feasible clique test used to re-verify witnesses independently of the
// search code.
bool satisfies_mode(const PartitionFamily& a, int t, SearchMode mode);

struct ExtremalEnumeration {
    std::uint64_t count = 0;
    bool complete = true; // false on timeout or early stop
};

// Visits every mode-feasible clique of exactly `target` vertices in
// lexicographic order of sorted rank sequences. The callback returns false to
// stop early.
ExtremalEnumeration enumerate_extremal(const CompatibilityGraph& g, SearchMode mode, std::size_t target,
                                       const std::function<bool(const PartitionFamily&)>& visit,
                                       const SearchOptions& options = {});

} // namespace pekr
