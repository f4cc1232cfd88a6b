#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "pekr/counting.hpp"
#include "pekr/errors.hpp"
#include "pekr/family.hpp"
#include "pekr/sampling.hpp"

using namespace pekr;

namespace {

SetPartition of(int n, oracle::Blocks b) { return SetPartition::from_blocks(n, b); }

PartitionFamily fam(int n, std::vector<oracle::Blocks> members) {
    std::vector<SetPartition> ps;
    for (auto& m : members) ps.push_back(of(n, m));
    return PartitionFamily::from_partitions(n, ps);
}

std::set<oracle::Blocks> as_blocks(const PartitionFamily& a) {
    std::set<oracle::Blocks> out;
    for (const auto& p : a.members()) out.insert(oracle::canonical(p.blocks()));
    return out;
}

// S_ij(A) straight from the definition.
std::set<oracle::Blocks> oracle_split(const std::set<oracle::Blocks>& a, int i, int j) {
    std::set<oracle::Blocks> out;
    for (const auto& p : a) {
        const auto s = oracle::split(p, i, j);
        out.insert(a.count(s) ? p : s);
    }
    return out;
}

bool oracle_intersecting(const std::set<oracle::Blocks>& a, int t) {
    for (const auto& p : a)
        for (const auto& q : a)
            if (p != q && oracle::shared_blocks(p, q) < t) return false;
    return true;
}

} // namespace

TEST_CASE("family construction") {
    const auto a = fam(3, {{{1}, {2}, {3}}, {{1}, {2, 3}}});
    CHECK(a.size() == 2);
    CHECK(a.ranks().front() < a.ranks().back());
    CHECK(a.contains(of(3, {{1}, {2, 3}})));
    CHECK_FALSE(a.contains(of(3, {{1, 2, 3}})));
    CHECK_THROWS_AS(PartitionFamily::from_ranks(3, {1, 1}), DuplicateMember);
    CHECK_THROWS_AS(fam(3, {{{1}, {2}, {3}}, {{1}, {2}, {3}}}), DuplicateMember);
    CHECK_THROWS_AS(PartitionFamily::from_ranks(3, {5}), RangeError);
}

TEST_CASE("t-intersection") {
    CHECK(is_t_intersecting(PartitionFamily(4), 3));
    CHECK(is_t_intersecting(fam(3, {{{1, 2, 3}}}), 5));
    CHECK(is_t_intersecting(fam(3, {{{1}, {2, 3}}, {{1}, {2}, {3}}}), 1));
    const auto q = PartitionFamily::from_partitions(5, std::vector{pair_partition(5, 1, 5), pair_partition(5, 2, 5)});
    CHECK(is_t_intersecting(q, 2));
    CHECK_FALSE(is_t_intersecting(q, 3));

    std::mt19937_64 rng(11);
    for (int k = 0; k < 300; ++k) {
        const int n = 3 + k % 4;
        const int t = 1 + k % 2;
        const auto a = k % 3 ? random_t_intersecting_family(n, t, 12, rng) : random_family(n, 6, rng);
        const bool expect = oracle_intersecting(as_blocks(a), t);
        CHECK(is_t_intersecting_serial(a, t) == expect);
        CHECK(is_t_intersecting(a, t, 4) == expect);
        if (k % 3) CHECK(expect);
    }
}

TEST_CASE("triviality witness") {
    std::vector<SetPartition> with1;
    for (const auto& p : enumerate_partitions(5))
        if (sigma(p).contains(1)) with1.push_back(p);
    const auto star = PartitionFamily::from_partitions(5, with1);
    const auto r = triviality_witness(star, 1);
    REQUIRE(r.trivial());
    CHECK(*r.witness == ElementSet::of({1}));

    CHECK_FALSE(triviality_witness(construct_hm(5, {{1}, 5}), 1).trivial());
    CHECK(triviality_witness(construct_hm(5, {{1}, 5}), 1).common.empty());

    const auto single = triviality_witness(fam(4, {{{1}, {2}, {3, 4}}}), 2);
    REQUIRE(single.trivial());
    CHECK(*single.witness == ElementSet::of({1, 2}));
    CHECK_THROWS_AS(triviality_witness(PartitionFamily(3), 1), EmptyFamilyError);
}

TEST_CASE("family split") {
    const auto one = family_split(fam(3, {{{1, 2}, {3}}}), 1, 2);
    CHECK(one.result == fam(3, {{{1}, {2}, {3}}}));

    const auto a = fam(3, {{{1, 2}, {3}}, {{1}, {2}, {3}}});
    const auto two = family_split(a, 1, 2);
    CHECK(two.decomposition.move.empty());
    CHECK(two.result == a);
    CHECK_THROWS_AS(family_split(a, 2, 2), ElementError);

    std::mt19937_64 rng(3);
    for (int k = 0; k < 400; ++k) {
        const int n = 3 + k % 4;
        const auto x = random_family(n, 10, rng);
        const int i = 1 + static_cast<int>(rng() % n);
        int j = 1 + static_cast<int>(rng() % n);
        if (j == i) j = i % n + 1;
        const auto s = family_split(x, i, j);
        CHECK(s.result.size() == x.size());
        CHECK(as_blocks(s.result) == oracle_split(as_blocks(x), i, j));
        CHECK(s.decomposition.stay.size() + s.decomposition.move.size() == x.size());
        CHECK(s.decomposition.image_of_move.size() == s.decomposition.move.size());
    }
}

TEST_CASE("compression") {
    const auto one = compress(fam(3, {{{1, 2}, {3}}}), 1);
    CHECK(one.final_family == fam(3, {{{1}, {2}, {3}}}));
    const auto nt = compress(fam(3, {{{1, 2}, {3}}}), 1, PairOrder::nontrivial_preserving);
    CHECK(nt.final_family == fam(3, {{{1}, {2}, {3}}}));

    const auto fixed = compress(one.final_family, 1);
    CHECK(fixed.steps.empty());
    CHECK(fixed.final_family == one.final_family);

    const auto bad = fam(3, {{{1, 2}, {3}}, {{1, 3}, {2}}});
    CHECK_THROWS_AS(compress(bad, 1), NotIntersectingError);

    std::mt19937_64 rng(5);
    for (int k = 0; k < 300; ++k) {
        const int n = 3 + k % 4;
        const int t = 1 + k % 2;
        const auto a = random_t_intersecting_family(n, t, 14, rng);
        const auto rep = compress(a, t, k % 2 ? PairOrder::lexicographic : PairOrder::nontrivial_preserving, true);
        CHECK(rep.steps.size() <= static_cast<std::size_t>(n) * a.size());
        CHECK(rep.final_family.size() == a.size());
        CHECK(rep.final_singletons >= rep.initial_singletons);
        CHECK(oracle_intersecting(as_blocks(rep.final_family), t));
        if (!rep.stuck) {
            CHECK(is_compressed(rep.final_family));
            const auto fb = as_blocks(rep.final_family);
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j)
                    if (i != j) CHECK(oracle_split(fb, i, j) == fb);
            CHECK(sets_t_intersecting(sigma_family(rep.final_family).sets, t));
        }
    }
}

TEST_CASE("sigma family") {
    const auto sf = sigma_family(fam(3, {{{1}, {2, 3}}, {{1}, {2}, {3}}}));
    CHECK(sf.sets == std::vector{ElementSet::of({1}), ElementSet::of({1, 2, 3})});
    CHECK(sf.multiset_size == 2);
    CHECK(sigma_family(fam(3, {{{1, 2, 3}}})).sets == std::vector{ElementSet{}});
    CHECK(sets_t_intersecting(std::vector{ElementSet::of({1, 2}), ElementSet::of({2, 3})}, 1));
    CHECK_FALSE(sets_t_intersecting(std::vector{ElementSet::of({1}), ElementSet::of({2})}, 1));
}

TEST_CASE("trivial families") {
    CHECK(construct_trivial(4, std::vector{1}).size() == 5);
    CHECK(construct_trivial(4, std::vector{1, 2}).size() == 2);
    const auto all = construct_trivial(3, std::vector{1, 2, 3});
    REQUIRE(all.size() == 1);
    CHECK(all.members()[0] == SetPartition::finest(3));
    const auto b = oracle::bell(10);
    for (int n = 2; n <= 8; ++n)
        for (int t = 1; t < n; ++t) {
            std::vector<int> anchors;
            for (int k = 0; k < t; ++k) anchors.push_back(n - k);
            const auto f = construct_trivial(n, anchors);
            CHECK(oracle::Big(f.size()) == b[n - t]);
            CHECK(is_t_intersecting(f, t));
            CHECK(triviality_witness(f, t).trivial());
        }
}

TEST_CASE("HM families") {
    const auto h = construct_hm(5, {{1}, 5});
    CHECK(h.size() == 11);
    const auto h2 = construct_hm(4, {{1, 2}, 4});
    CHECK(h2 == fam(4, {{{1}, {2}, {3}, {4}}, {{1, 4}, {2}, {3}}, {{2, 4}, {1}, {3}}}));
    CHECK_FALSE(triviality_witness(h2, 2).trivial());
    // Q(1,4) and Q(2,4) share only {3}: at n = t+2 two pair partitions have
    // n-3 < t common blocks, so H is t-intersecting only from n = t+3 on.
    CHECK(common_blocks(pair_partition(4, 1, 4), pair_partition(4, 2, 4)) == 1);
    CHECK_FALSE(is_t_intersecting(h2, 2));
    CHECK(is_t_intersecting(construct_hm(3, {{1}, 3}), 1));
    for (int t = 1; t <= 3; ++t)
        for (int n = t + 2; n <= 8; ++n) {
            std::vector<int> anchors;
            for (int k = 1; k <= t; ++k) anchors.push_back(k);
            const auto f = construct_hm(n, {anchors, n});
            // At n = t+2 the only common singleton is the one element outside
            // the anchors and b: trivial for t = 1, not t-intersecting for t >= 2.
            CHECK(is_t_intersecting(f, t) == (t == 1 || n >= t + 3));
            CHECK(triviality_witness(f, t).trivial() == (t == 1 && n == 3));
        }
    CHECK_THROWS_AS(construct_hm(3, {{1, 2}, 3}), RangeError);
    CHECK_THROWS_AS(construct_hm(5, {{1}, 1}), ElementError);

    const BellTable table(12);
    for (int t = 1; t <= 3; ++t)
        for (int n = t + 2; n <= 7; ++n) {
            std::vector<int> anchors;
            for (int k = 1; k <= t; ++k) anchors.push_back(k + 1);
            const HmWitness w{anchors, 1};
            const auto f = construct_hm(n, w);
            std::set<oracle::Blocks> expect;
            for (const auto& p : oracle::partitions(n))
                if (oracle::in_hm(oracle::canonical(p), anchors, 1, n)) expect.insert(oracle::canonical(p));
            CHECK(as_blocks(f) == expect);
            CHECK(BigCount(f.size()) == hm_size(table, n, t));
            for (const auto& p : all_partitions(n)) CHECK(hm_contains(w, p) == f.contains(p));
        }
}

TEST_CASE("HM recognition") {
    const auto w = recognize_hm(construct_hm(6, {{2}, 5}), 1);
    REQUIRE(w);
    CHECK(*w == HmWitness{{2}, 5});
    CHECK_FALSE(recognize_hm(construct_trivial(6, std::vector{1}), 1));
    const auto h = construct_hm(6, {{1}, 4});
    std::vector<Rank> fewer(h.ranks().begin() + 1, h.ranks().end());
    CHECK_FALSE(recognize_hm(PartitionFamily::from_ranks(6, fewer), 1));
    const auto w2 = recognize_hm(construct_hm(6, {{1, 3}, 2}), 2, 4);
    REQUIRE(w2);
    CHECK(*w2 == HmWitness{{1, 3}, 2});
}

TEST_CASE("undo") {
    const HmWitness w{{1}, 5};
    const auto h = construct_hm(5, w);
    int held = 0;
    for (int i = 1; i <= 5; ++i)
        for (int j = 1; j <= 5; ++j) {
            if (i == j) continue;
            if (family_split(h, i, j).result != h) {
                CHECK_THROWS_AS(verify_undo(h, 1, i, j, w), PremiseNotMet);
                continue;
            }
            ++held;
            const auto v = verify_undo(h, 1, i, j, w);
            CHECK(v.conclusion_holds);
            CHECK(v.missing_anchored.empty());
            CHECK(v.missing_pairs.empty());
            CHECK(undo_premise_holds(h, 1, i, j, h));
        }
    CHECK(held > 0);

    const auto star = construct_trivial(5, std::vector{1});
    CHECK_THROWS_AS(verify_undo(star, 1, 1, 2, w), PremiseNotMet);
    CHECK(anchored_partition(5, w, 3) == of(5, {{1}, {3}, {2, 4, 5}}));

    for (int n = 4; n <= 6; ++n) {
        const auto rep = search_unsplit_counterexamples(n, HmWitness{{1}, n});
        CHECK(rep.perturbations > 0);
        CHECK(rep.counterexamples.empty());
    }
}

TEST_CASE("relabelled families") {
    const std::vector<int> perm{5, 2, 3, 4, 1};
    CHECK(relabel(construct_hm(5, {{1}, 5}), perm) == construct_hm(5, {{5}, 1}));
}
