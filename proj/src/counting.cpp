#include "pekr/counting.hpp"

#include "pekr/errors.hpp"

namespace pekr {

BellTable::BellTable(int n_max) : n_max_(n_max) {
    if (n_max < 0) throw RangeError("n_max must be non-negative");

    pascal_.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        pascal_[n].resize(n + 1);
        pascal_[n][0] = pascal_[n][n] = 1;
        for (int k = 1; k < n; ++k) pascal_[n][k] = pascal_[n - 1][k - 1] + pascal_[n - 1][k];
    }

    bell_sf_.assign(n_max + 1, 0);
    bell_sf_[0] = 1;
    for (int m = 2; m <= n_max; ++m) {
        BigCount s = 0;
        for (int k = 1; k <= m - 1; ++k) s += pascal_[m - 1][k] * bell_sf_[m - 1 - k];
        bell_sf_[m] = s;
    }

    bell_.assign(n_max + 1, 0);
    for (int m = 0; m <= n_max; ++m) {
        BigCount s = 0;
        for (int k = 0; k <= m; ++k) s += pascal_[m][k] * bell_sf_[m - k];
        bell_[m] = s;
    }

    // Self-test against B_{m+1} = sum_k C(m,k) B_k.
    std::vector<BigCount> check(n_max + 1, 0);
    check[0] = 1;
    for (int m = 0; m + 1 <= n_max; ++m) {
        BigCount s = 0;
        for (int k = 0; k <= m; ++k) s += pascal_[m][k] * check[k];
        check[m + 1] = s;
    }
    for (int m = 0; m <= n_max; ++m)
        if (check[m] != bell_[m])
            throw InternalError("Bell table self-test failed at m=" + std::to_string(m));
    for (int m = 0; m + 1 <= n_max; ++m)
        if (bell_[m] != bell_sf_[m] + bell_sf_[m + 1])
            throw InternalError("B_m = B~_m + B~_{m+1} failed at m=" + std::to_string(m));
}

void BellTable::require(int m) const {
    if (m < 0 || m > n_max_)
        throw RangeError("index " + std::to_string(m) + " outside Bell table 0.." + std::to_string(n_max_));
}

const BigCount& BellTable::bell(int m) const {
    require(m);
    return bell_[m];
}

const BigCount& BellTable::bell_sf(int m) const {
    require(m);
    return bell_sf_[m];
}

BigCount BellTable::binomial(int n, int k) const {
    require(n);
    if (k < 0 || k > n) return 0;
    return pascal_[n][k];
}

IdentityReport verify_identities(const BellTable& table) {
    IdentityReport r;
    r.n_max = table.n_max();
    for (int m = 0; m <= table.n_max(); ++m) {
        BigCount sum = 0;
        for (int k = 0; k <= m; ++k) sum += table.binomial(m, k) * table.bell_sf(m - k);
        if (!r.sum_identity_failure && sum != table.bell(m)) r.sum_identity_failure = m;

        if (m >= 1) {
            BigCount sf = 0;
            for (int k = 1; k <= m - 1; ++k) sf += table.binomial(m - 1, k) * table.bell_sf(m - 1 - k);
            if (!r.sf_recurrence_failure && sf != table.bell_sf(m)) r.sf_recurrence_failure = m;
        } else if (table.bell_sf(0) != 1 || table.bell(0) != 1) {
            r.sf_recurrence_failure = 0;
        }

        if (m + 1 <= table.n_max() && !r.adjacent_sf_failure &&
            table.bell(m) != table.bell_sf(m) + table.bell_sf(m + 1))
            r.adjacent_sf_failure = m;
    }
    return r;
}

int split_point(int n, int t) {
    if (t < 1 || n < 0) throw RangeError("split point needs t >= 1 and n >= 0");
    return (n + (t - 1) * (t + 1)) / (t + 1);
}

BigCount hm_size(const BellTable& table, int n, int t) {
    if (t < 1 || n < t + 2)
        throw RangeError("hm_size needs t >= 1 and n >= t+2 (got n=" + std::to_string(n) + ", t=" +
                         std::to_string(t) + ")");
    return table.bell(n - t) - table.bell_sf(n - t) - table.bell_sf(n - t - 1) + t;
}

bool check_lemma_less(const BellTable& table, int c, int t, int n) {
    if (c < 1 || t < 1 || n < t + 2) throw RangeError("less needs c >= 1, t >= 1, n >= t+2");
    return c * table.bell(n - t - 1) < table.bell(n - t) - table.bell_sf(n - t) - table.bell_sf(n - t - 1);
}

bool check_lemma_less02(const BellTable& table, int t, int r, int n) {
    if (t < 1 || r < t + 4 || r > n - 2) throw RangeError("less02 needs t+4 <= r <= n-2");
    return t * table.bell(n - r + 1) < table.bell_sf(n - t - 1);
}

bool check_lemma_less03(const BellTable& table, int t, int n) {
    if (t < 1 || n <= t + 1) throw RangeError("less03 needs n > t+1");
    const int s = split_point(n, t);
    BigCount tail = 0;
    for (int k = s + 1; k <= n; ++k) tail += table.binomial(n, k) * table.bell_sf(n - k);
    return table.bell_sf(n - t - 1) > tail;
}

BigCount ekr_split_bound(const BellTable& table, int n, int t) {
    if (t < 1 || n < t + 1) throw RangeError("ekr_split_bound needs n >= t+1");
    const int s = split_point(n, t);
    BigCount total = 0;
    for (int k = t + 1; k <= s; ++k) total += table.binomial(n - t, k - t) * table.bell_sf(n - k);
    for (int k = s + 1; k <= n; ++k) total += table.binomial(n, k) * table.bell_sf(n - k);
    return total;
}

Lemma parse_lemma(std::string_view id) {
    if (id == "less") return Lemma::less;
    if (id == "less02") return Lemma::less02;
    if (id == "less03") return Lemma::less03;
    if (id == "ekr-bound") return Lemma::ekr_bound;
    throw UnknownLemmaError("unknown lemma '" + std::string(id) + "' (expected less, less02, less03, ekr-bound)");
}

std::string_view lemma_id(Lemma l) {
    switch (l) {
    case Lemma::less: return "less";
    case Lemma::less02: return "less02";
    case Lemma::less03: return "less03";
    case Lemma::ekr_bound: return "ekr-bound";
    }
    return "?";
}

std::string_view to_string(ScanStatus s) {
    switch (s) {
    case ScanStatus::holds_from: return "holds-from";
    case ScanStatus::holds_non_monotonic: return "holds-non-monotonic";
    case ScanStatus::never_holds: return "never-holds";
    }
    return "?";
}

std::optional<bool> evaluate_lemma(const BellTable& table, Lemma lemma, int t, const ScanParams& params, int n) {
    switch (lemma) {
    case Lemma::less:
        if (n < t + 2) return std::nullopt;
        return check_lemma_less(table, params.c, t, n);
    case Lemma::less02:
        if (params.r) {
            if (*params.r < t + 4 || *params.r > n - 2) return std::nullopt;
            return check_lemma_less02(table, t, *params.r, n);
        }
        if (n - 2 < t + 4) return std::nullopt;
        for (int r = t + 4; r <= n - 2; ++r)
            if (!check_lemma_less02(table, t, r, n)) return false;
        return true;
    case Lemma::less03:
        if (n <= t + 1) return std::nullopt;
        return check_lemma_less03(table, t, n);
    case Lemma::ekr_bound:
        if (n < t + 2) return std::nullopt;
        return ekr_split_bound(table, n, t) >= hm_size(table, n, t) - t;
    }
    return std::nullopt;
}

ScanReport threshold_scan(const BellTable& table, Lemma lemma, int t, const ScanParams& params, int n_lo, int n_hi) {
    if (t < 1) throw RangeError("threshold_scan needs t >= 1");
    if (n_lo > n_hi) throw RangeError("empty n range");
    if (n_hi > table.n_max()) throw RangeError("n range exceeds Bell table");

    ScanReport rep;
    rep.lemma = lemma;
    rep.t = t;
    rep.params = params;
    std::optional<bool> previous;
    for (int n = n_lo; n <= n_hi; ++n) {
        const auto v = evaluate_lemma(table, lemma, t, params, n);
        rep.points.push_back({n, v});
        if (!v) continue;
        if (previous && *previous && !*v) rep.monotone = false;
        if (*v && !(previous && *previous)) rep.threshold = n;
        if (!*v) rep.threshold.reset();
        previous = v;
    }
    if (!rep.threshold)
        rep.status = ScanStatus::never_holds;
    else
        rep.status = rep.monotone ? ScanStatus::holds_from : ScanStatus::holds_non_monotonic;
    return rep;
}

} // namespace pekr
