#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "pekr/counting.hpp"
#include "pekr/errors.hpp"

using namespace pekr;

namespace {

const BellTable& table() {
    static const BellTable t(45);
    return t;
}

struct Oracle {
    std::vector<oracle::Big> b = oracle::bell(45);
    std::vector<oracle::Big> s = oracle::bell_sf(45);

    oracle::Big hm(int n, int t) const { return b[n - t] - s[n - t] - s[n - t - 1] + t; }
    bool less(int c, int t, int n) const { return c * b[n - t - 1] < b[n - t] - s[n - t] - s[n - t - 1]; }
    bool less02(int t, int r, int n) const { return t * b[n - r + 1] < s[n - t - 1]; }
    bool less03(int t, int n) const {
        const int sp = (n + (t - 1) * (t + 1)) / (t + 1);
        oracle::Big rhs = 0;
        for (int k = sp + 1; k <= n; ++k) rhs += oracle::choose(n, k) * s[n - k];
        return s[n - t - 1] > rhs;
    }
    oracle::Big ekr(int n, int t) const {
        const int sp = (n + (t - 1) * (t + 1)) / (t + 1);
        oracle::Big v = 0;
        for (int k = t + 1; k <= sp; ++k) v += oracle::choose(n - t, k - t) * s[n - k];
        for (int k = std::max(sp + 1, t + 1); k <= n; ++k) v += oracle::choose(n, k) * s[n - k];
        return v;
    }
};

const Oracle& ref() {
    static const Oracle o;
    return o;
}

} // namespace

TEST_CASE("Bell table") {
    const std::vector<int> bell{1, 1, 2, 5, 15, 52};
    const std::vector<int> sf{1, 0, 1, 1, 4, 11};
    for (int m = 0; m <= 5; ++m) {
        CHECK(table().bell(m) == bell[m]);
        CHECK(table().bell_sf(m) == sf[m]);
    }
    for (int m = 0; m <= 45; ++m) {
        CHECK(table().bell(m) == ref().b[m]);
        CHECK(table().bell_sf(m) == ref().s[m]);
    }
    CHECK(to_decimal(table().bell(40)) == "157450588391204931289324344702531067");
    CHECK(table().binomial(5, 2) == 10);
    CHECK(table().binomial(5, 6) == 0);
    CHECK(table().binomial(5, -1) == 0);
    CHECK_THROWS_AS(table().bell(46), RangeError);
    CHECK_THROWS_AS(BellTable(-1), RangeError);
}

TEST_CASE("identities hold") {
    const auto rep = verify_identities(BellTable(25));
    CHECK(rep.n_max == 25);
    CHECK(rep.all_hold());
}

TEST_CASE("split point") {
    CHECK(split_point(8, 1) == 4);
    CHECK(split_point(3, 1) == 1);
    CHECK(split_point(6, 1) == 3);
    for (int t = 1; t <= 5; ++t)
        for (int n = 0; n <= 40; ++n) {
            // floor(n/(t+1) + t - 1) computed with rationals
            const int num = n + (t - 1) * (t + 1);
            CHECK(split_point(n, t) * (t + 1) <= num);
            CHECK((split_point(n, t) + 1) * (t + 1) > num);
        }
}

TEST_CASE("HM size") {
    CHECK(hm_size(table(), 5, 1) == 11);
    CHECK(hm_size(table(), 4, 2) == 3);
    for (int t = 1; t <= 6; ++t) CHECK(hm_size(table(), t + 2, t) == 1 + t);
    for (int t = 1; t <= 3; ++t)
        for (int n = t + 2; n <= 40; ++n) CHECK(hm_size(table(), n, t) == ref().hm(n, t));
    CHECK_THROWS_AS(hm_size(table(), 2, 1), RangeError);
    CHECK_THROWS_AS(hm_size(table(), 5, 0), RangeError);
}

TEST_CASE("lemma predicates") {
    CHECK(check_lemma_less(table(), 1, 1, 4));
    CHECK_FALSE(check_lemma_less(table(), 4, 1, 4));
    CHECK_FALSE(check_lemma_less(table(), 1, 1, 3));
    CHECK(check_lemma_less02(table(), 1, 5, 7));
    CHECK(check_lemma_less02(table(), 2, 6, 8));
    CHECK(check_lemma_less02(table(), 1, 7, 9) == ref().less02(1, 7, 9));
    CHECK(check_lemma_less02(table(), 1, 7, 9));
    CHECK_THROWS_AS(check_lemma_less02(table(), 1, 4, 9), RangeError);
    CHECK_FALSE(check_lemma_less03(table(), 1, 3));
    CHECK(check_lemma_less03(table(), 1, 8) == ref().less03(1, 8));
    CHECK_THROWS_AS(check_lemma_less03(table(), 2, 3), RangeError);

    for (int t = 1; t <= 3; ++t)
        for (int n = t + 2; n <= 40; ++n) {
            for (int c = 1; c <= 4; ++c) CHECK(check_lemma_less(table(), c, t, n) == ref().less(c, t, n));
            CHECK(check_lemma_less03(table(), t, n) == ref().less03(t, n));
            for (int r = t + 4; r <= n - 2; ++r) CHECK(check_lemma_less02(table(), t, r, n) == ref().less02(t, r, n));
        }
}

TEST_CASE("EKR split bound") {
    for (int t = 1; t <= 4; ++t) CHECK(ekr_split_bound(table(), t + 1, t) == 1);
    // Hand expansion: 5*4 + 10*1 + 15*1 + 6*0 + 1*1.
    CHECK(ekr_split_bound(table(), 6, 1) == 46);
    for (int t = 1; t <= 3; ++t)
        for (int n = t + 1; n <= 40; ++n) CHECK(ekr_split_bound(table(), n, t) == ref().ekr(n, t));
}

TEST_CASE("threshold scans") {
    CHECK(parse_lemma("less") == Lemma::less);
    CHECK(parse_lemma("ekr-bound") == Lemma::ekr_bound);
    CHECK(lemma_id(Lemma::less03) == "less03");
    CHECK_THROWS_AS(parse_lemma("lemma-9"), UnknownLemmaError);

    SUBCASE("less, c=1..4") {
        for (int t = 1; t <= 3; ++t)
            for (int c = 1; c <= 4; ++c) {
                ScanParams p;
                p.c = c;
                const auto rep = threshold_scan(table(), Lemma::less, t, p, 1, 40);
                // Oracle threshold: start of the final all-true run of applicable n.
                std::optional<int> expect;
                for (int n = 40; n >= t + 2 && ref().less(c, t, n); --n) expect = n;
                CHECK(rep.threshold == expect);
                CHECK(rep.points.size() == 40);
                for (const auto& pt : rep.points)
                    if (pt.holds) CHECK(*pt.holds == ref().less(c, t, pt.n));
                if (rep.status == ScanStatus::holds_from) CHECK(rep.threshold.has_value());
            }
    }
    SUBCASE("less02 with fixed r and across the window") {
        ScanParams p;
        p.r = 5;
        const auto fixed = threshold_scan(table(), Lemma::less02, 1, p, 7, 40);
        std::optional<int> expect;
        for (int n = 40; n >= 7 && ref().less02(1, 5, n); --n) expect = n;
        CHECK(fixed.threshold == expect);
        const auto all = threshold_scan(table(), Lemma::less02, 1, {}, 1, 40);
        for (const auto& pt : all.points) {
            if (pt.n < 7) {
                CHECK_FALSE(pt.holds.has_value());
                continue;
            }
            bool every = true;
            for (int r = 5; r <= pt.n - 2; ++r) every = every && ref().less02(1, r, pt.n);
            CHECK(pt.holds == std::optional<bool>(every));
        }
    }
    SUBCASE("less03 and EKR bound scans agree with the oracle") {
        for (int t = 1; t <= 3; ++t) {
            const auto l3 = threshold_scan(table(), Lemma::less03, t, {}, 1, 40);
            std::optional<int> expect;
            for (int n = 40; n > t + 1 && ref().less03(t, n); --n) expect = n;
            CHECK(l3.threshold == expect);
            CHECK((l3.status == ScanStatus::never_holds) == !expect.has_value());
            const auto eb = threshold_scan(table(), Lemma::ekr_bound, t, {}, 1, 40);
            for (const auto& pt : eb.points)
                if (pt.holds) CHECK(*pt.holds == (ref().ekr(pt.n, t) >= ref().hm(pt.n, t) - t));
        }
    }
    SUBCASE("recorded less03 thresholds") {
        CHECK(threshold_scan(table(), Lemma::less03, 1, {}, 1, 40).threshold == 12);
        CHECK(threshold_scan(table(), Lemma::less03, 2, {}, 1, 40).threshold == 27);
        CHECK(threshold_scan(table(), Lemma::less03, 3, {}, 1, 40).status == ScanStatus::never_holds);
    }
    CHECK(to_string(ScanStatus::holds_from) == "holds-from");
}
