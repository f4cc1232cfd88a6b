#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pekr/errors.hpp"
#include "pekr/iso.hpp"
#include "pekr/search.hpp"

using namespace pekr;

TEST_CASE("compatibility graph") {
    SUBCASE("tiny cases") {
        const auto g2 = build_graph(2, 1);
        CHECK(g2.vertex_count() == 2);
        CHECK(g2.edge_count() == 0);
        const auto g3 = build_graph(3, 1);
        CHECK(g3.vertex_count() == 5);
    }
    SUBCASE("edges match a brute-force pair scan") {
        for (int n = 1; n <= 5; ++n)
            for (int t = 1; t <= 3; ++t) {
                const auto g = build_graph(n, t, 3);
                const auto parts = oracle::partitions(n);
                std::size_t edges = 0;
                for (const auto& p : parts)
                    for (const auto& q : parts) {
                        const auto u = rank(SetPartition::from_blocks(n, p));
                        const auto v = rank(SetPartition::from_blocks(n, q));
                        const bool e = p != q && oracle::shared_blocks(p, q) >= t;
                        CHECK(g.adjacent(u, v) == e);
                        edges += e ? 1 : 0;
                    }
                CHECK(g.edge_count() == edges / 2);
            }
    }
    SUBCASE("serial and parallel builds agree") {
        for (int t = 1; t <= 2; ++t) {
            const auto a = build_graph_serial(6, t);
            const auto b = build_graph(6, t, 4);
            CHECK(a.adjacency == b.adjacency);
            CHECK(a.sigma == b.sigma);
        }
    }
    SUBCASE("degree of the finest partition") {
        // The finest partition shares exactly |sigma(P)| blocks with P.
        for (int n = 2; n <= 6; ++n)
            for (int t = 1; t <= 3; ++t) {
                const auto g = build_graph(n, t);
                std::size_t expect = 0;
                for (const auto& p : oracle::partitions(n))
                    if (p.size() != static_cast<std::size_t>(n) && static_cast<int>(oracle::singletons(p).size()) >= t)
                        ++expect;
                CHECK(g.degree(partition_count(n) - 1) == expect);
            }
    }
    CHECK_THROWS_AS(build_graph(9, 1), LimitError);
    CHECK_THROWS_AS(build_graph(4, 0), RangeError);
}

TEST_CASE("exact search agrees with brute force") {
    for (int n = 2; n <= 5; ++n)
        for (int t = 1; t <= 2; ++t) {
            const auto g = build_graph(n, t);
            for (auto mode : {SearchMode::unrestricted, SearchMode::nontrivial}) {
                const auto brute = oracle::brute_max_family(n, t, mode == SearchMode::nontrivial);
                for (bool seeded : {true, false}) {
                    SearchOptions o;
                    o.seed_incumbent = seeded;
                    const auto rep = max_family(g, mode, o);
                    CAPTURE(n);
                    CAPTURE(t);
                    CHECK(rep.optimal);
                    CHECK(rep.optimum == brute.optimum);
                    CHECK(rep.witness.size() == brute.optimum);
                    if (brute.optimum > 0) CHECK(satisfies_mode(rep.witness, t, mode));
                }
                if (brute.optimum > 0) {
                    const auto e = enumerate_extremal(g, mode, brute.optimum, [](const PartitionFamily&) { return true; });
                    CHECK(e.complete);
                    CHECK(e.count == brute.optimal_count);
                }
            }
        }
}

TEST_CASE("recorded optima") {
    // Values fixed from the brute-force oracle above.
    auto opt = [](int n, int t, SearchMode m) { return max_family(build_graph(n, t), m).optimum; };
    CHECK(opt(2, 1, SearchMode::unrestricted) == 1);
    CHECK(opt(3, 1, SearchMode::unrestricted) == 2);
    CHECK(opt(4, 1, SearchMode::unrestricted) == 5);
    CHECK(opt(4, 2, SearchMode::unrestricted) == 2);
    CHECK(opt(5, 1, SearchMode::nontrivial) == 11);
    CHECK(opt(5, 2, SearchMode::nontrivial) == 5);
}

TEST_CASE("larger non-trivial searches") {
    // Beyond brute force: witnesses are re-checked against the oracles instead.
    for (auto [n, t, expected] : {std::tuple{7, 1, 152}, std::tuple{7, 2, 45}}) {
        CAPTURE(n);
        CAPTURE(t);
        const auto rep = max_family(build_graph(n, t), SearchMode::nontrivial);
        CHECK(rep.optimal);
        CHECK(rep.optimum == expected);
        CHECK(rep.witness.size() == static_cast<std::size_t>(expected));
        CHECK(satisfies_mode(rep.witness, t, SearchMode::nontrivial));
        const auto members = rep.witness.members();
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                REQUIRE(oracle::shared_blocks(members[i].blocks(), members[j].blocks()) >= t);
        REQUIRE(rep.bounds.hm_size);
        CHECK(rep.optimum >= *rep.bounds.hm_size);
    }
}

TEST_CASE("witness is the lexicographically least optimal clique") {
    for (int n = 3; n <= 5; ++n)
        for (auto mode : {SearchMode::unrestricted, SearchMode::nontrivial}) {
            const auto g = build_graph(n, 1);
            const auto rep = max_family(g, mode);
            std::optional<std::vector<Rank>> first;
            enumerate_extremal(g, mode, rep.witness.size(), [&](const PartitionFamily& a) {
                first = a.ranks();
                return false;
            });
            REQUIRE(first);
            CHECK(*first == rep.witness.ranks());
        }
}

TEST_CASE("reports do not depend on the thread count") {
    for (int t = 1; t <= 2; ++t)
        for (auto mode : {SearchMode::unrestricted, SearchMode::nontrivial}) {
            const auto g = build_graph(6, t);
            SearchOptions one, many;
            many.threads = 4;
            const auto a = max_family(g, mode, one);
            const auto b = max_family(g, mode, many);
            CHECK(a.optimum == b.optimum);
            CHECK(a.witness == b.witness);
            CHECK(a.nodes_explored == b.nodes_explored);
            CHECK(a.hm_verdict == b.hm_verdict);
        }
}

TEST_CASE("bound comparison") {
    const auto rep = max_family(build_graph(5, 1), SearchMode::nontrivial);
    REQUIRE(rep.bounds.hm_size);
    CHECK(*rep.bounds.hm_size == 11);
    CHECK(rep.bounds.trivial == 15);
    CHECK(rep.bounds.equals_hm);
    const auto small = max_family(build_graph(2, 1), SearchMode::unrestricted);
    CHECK_FALSE(small.bounds.hm_size);
    CHECK(small.bounds.equals_trivial);
}

TEST_CASE("extremal enumeration") {
    const auto g = build_graph(2, 1);
    CHECK(enumerate_extremal(g, SearchMode::unrestricted, 1, [](const PartitionFamily&) { return true; }).count == 2);

    // Every optimal nontrivial family at n=4, t=2, up to relabelling.
    const auto g42 = build_graph(4, 2);
    const auto opt = max_family(g42, SearchMode::nontrivial);
    std::vector<CanonicalFamily> classes;
    const auto e = enumerate_extremal(g42, SearchMode::nontrivial, opt.witness.size(), [&](const PartitionFamily& a) {
        CHECK(satisfies_mode(a, 2, SearchMode::nontrivial));
        const auto c = canonicalize_family_iso(a);
        if (std::find(classes.begin(), classes.end(), c) == classes.end()) classes.push_back(c);
        return true;
    });
    CHECK(e.complete);
    CHECK(e.count == oracle::brute_max_family(4, 2, true).optimal_count);
    CHECK(classes.size() >= 1);
    CHECK(classes.size() <= e.count);
}

TEST_CASE("timeouts report the best family so far") {
    SearchOptions o;
    o.timeout = std::chrono::milliseconds(200);
    const auto rep = max_family(build_graph(8, 1), SearchMode::nontrivial, o);
    CHECK_FALSE(rep.optimal);
    CHECK(rep.witness.size() == static_cast<std::size_t>(rep.optimum));
    CHECK(rep.optimum >= 675);
    CHECK(satisfies_mode(rep.witness, 1, SearchMode::nontrivial));
}

TEST_CASE("search modes") {
    CHECK(parse_search_mode("nontrivial") == SearchMode::nontrivial);
    CHECK(to_string(SearchMode::unrestricted) == "unrestricted");
    CHECK_THROWS_AS(parse_search_mode("fast"), Error);
}
