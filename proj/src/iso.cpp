#include "pekr/iso.hpp"

#include <algorithm>
#include <map>

#include "pekr/errors.hpp"

namespace pekr {

namespace {

// For element e: how many members put e in a block of each size. Equivariant
// under relabelling, so elements may only be sent to slots of their own class.
std::vector<std::vector<int>> element_invariants(const PartitionFamily& a) {
    const int n = a.ground_size();
    std::vector<std::vector<int>> inv(n, std::vector<int>(n + 1, 0));
    for (const auto& p : a.members()) {
        const auto masks = p.block_masks();
        for (int e = 1; e <= n; ++e) ++inv[e - 1][std::popcount(masks[p.rgs()[e - 1]])];
    }
    return inv;
}

} // namespace

CanonicalFamily canonicalize_family_iso(const PartitionFamily& a) {
    const int n = a.ground_size();
    if (n > kIsoLimit) throw LimitError("canonical forms support n <= " + std::to_string(kIsoLimit));

    const auto inv = element_invariants(a);
    // Classes in descending invariant order; slots are handed out in that order.
    std::map<std::vector<int>, std::vector<int>, std::greater<>> classes;
    for (int e = 1; e <= n; ++e) classes[inv[e - 1]].push_back(e);

    std::vector<std::vector<int>> members;   // elements per class
    std::vector<std::vector<int>> slots;     // target labels per class, permuted in place
    int next_slot = 1;
    for (auto& [key, elems] : classes) {
        members.push_back(elems);
        std::vector<int> s(elems.size());
        for (auto& x : s) x = next_slot++;
        slots.push_back(std::move(s));
    }

    CanonicalFamily best;
    std::vector<int> perm(n);
    std::vector<Rank> image;
    image.reserve(a.size());
    bool first = true;
    while (true) {
        for (std::size_t c = 0; c < members.size(); ++c)
            for (std::size_t k = 0; k < members[c].size(); ++k) perm[members[c][k] - 1] = slots[c][k];
        image.clear();
        for (const auto& p : a.members()) image.push_back(rank(relabel(p, perm)));
        std::sort(image.begin(), image.end());
        if (first || image < best.form) {
            best.form = image;
            best.perm = perm;
            first = false;
        }
        // Odometer over the per-class permutations.
        std::size_t c = 0;
        for (; c < slots.size(); ++c)
            if (std::next_permutation(slots[c].begin(), slots[c].end())) break;
        if (c == slots.size()) break;
    }
    return best;
}

bool equivalent(const PartitionFamily& a, const PartitionFamily& b) {
    if (a.ground_size() != b.ground_size() || a.size() != b.size()) return false;
    return canonicalize_family_iso(a) == canonicalize_family_iso(b);
}

} // namespace pekr
