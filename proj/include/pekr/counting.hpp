#pragma once

// Exact Bell-number arithmetic. Everything here is integer-exact; there is no
// floating point anywhere in the module.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pekr {

using BigCount = boost::multiprecision::cpp_int;

inline std::string to_decimal(const BigCount& v) { return v.str(); }

// Bell numbers B_m, singleton-free Bell numbers B~_m and binomials up to n_max.
//
// Construction computes B~ by the singleton-free recurrence, then B by the
// binomial convolution with B~, and cross-checks B against the classical
// recurrence B_{m+1} = sum_k C(m,k) B_k. Any mismatch throws InternalError.
class BellTable {
public:
    explicit BellTable(int n_max);

    int n_max() const noexcept { return n_max_; }
    const BigCount& bell(int m) const;
    const BigCount& bell_sf(int m) const;
    // C(n,k); zero when k < 0 or k > n.
    BigCount binomial(int n, int k) const;

private:
    void require(int m) const;

    int n_max_;
    std::vector<BigCount> bell_;
    std::vector<BigCount> bell_sf_;
    std::vector<std::vector<BigCount>> pascal_;
};

inline BellTable build_table(int n_max) { return BellTable(n_max); }

// Re-derives each identity from the table and reports the first m at which it
// fails. Empty optionals mean the identity held over the whole range.
struct IdentityReport {
    int n_max = 0;
    std::optional<int> sum_identity_failure;      // B_m = sum_k C(m,k) B~_{m-k}
    std::optional<int> sf_recurrence_failure;     // B~_m = sum_{k=1}^{m-1} C(m-1,k) B~_{m-1-k}
    std::optional<int> adjacent_sf_failure;       // B_m = B~_m + B~_{m+1}

    bool all_hold() const {
        return !sum_identity_failure && !sf_recurrence_failure && !adjacent_sf_failure;
    }
};
IdentityReport verify_identities(const BellTable& table);

// floor(n/(t+1) + t - 1), evaluated in integers.
int split_point(int n, int t);

// B_{n-t} - B~_{n-t} - B~_{n-t-1} + t. RangeError unless t >= 1 and n >= t+2.
BigCount hm_size(const BellTable& table, int n, int t);

// c*B_{n-t-1} < B_{n-t} - B~_{n-t} - B~_{n-t-1}
bool check_lemma_less(const BellTable& table, int c, int t, int n);
// t*B_{n-r+1} < B~_{n-t-1}, for t+4 <= r <= n-2
bool check_lemma_less02(const BellTable& table, int t, int r, int n);
// B~_{n-t-1} > sum_{k=split_point+1}^{n} C(n,k) B~_{n-k}, for n > t+1
bool check_lemma_less03(const BellTable& table, int t, int n);

// Upper bound on a compressed non-trivial family obtained by bounding each
// sigma-layer of size k <= split_point with the EKR bound C(n-t,k-t) and the
// remaining layers with C(n,k):
//   sum_{k=t+1}^{s} C(n-t,k-t) B~_{n-k} + sum_{k=s+1}^{n} C(n,k) B~_{n-k}
BigCount ekr_split_bound(const BellTable& table, int n, int t);

enum class Lemma { less, less02, less03, ekr_bound };

Lemma parse_lemma(std::string_view id); // UnknownLemmaError
std::string_view lemma_id(Lemma l);

struct ScanParams {
    int c = 1;              // multiplier for `less`
    std::optional<int> r;   // fixed r for `less02`; absent = every r in the window
};

struct ScanPoint {
    int n = 0;
    std::optional<bool> holds; // empty when n is outside the lemma's domain
};

enum class ScanStatus { holds_from, holds_non_monotonic, never_holds };

struct ScanReport {
    Lemma lemma = Lemma::less;
    int t = 1;
    ScanParams params;
    std::vector<ScanPoint> points;
    std::optional<int> threshold; // start of the final all-true run
    bool monotone = true;         // no true -> false flip among applicable points
    ScanStatus status = ScanStatus::never_holds;
};

std::string_view to_string(ScanStatus s);

// Evaluates the lemma at a single n; empty when n is outside its domain.
std::optional<bool> evaluate_lemma(const BellTable& table, Lemma lemma, int t, const ScanParams& params, int n);

ScanReport threshold_scan(const BellTable& table, Lemma lemma, int t, const ScanParams& params, int n_lo, int n_hi);

} // namespace pekr
