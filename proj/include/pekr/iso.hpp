#pragma once

// Relabelling equivalence of partition families. Two families are equivalent
// when a permutation of [n] maps one onto the other.

#include <vector>

#include "pekr/family.hpp"

namespace pekr {

inline constexpr int kIsoLimit = 8;

struct CanonicalFamily {
    std::vector<Rank> form; // sorted member ranks of the canonical image
    std::vector<int> perm;  // perm[e-1] = image of e; maps the input onto `form`

    bool operator==(const CanonicalFamily& o) const { return form == o.form; }
};

// Minimal image (lexicographic on sorted rank sequences) over the relabellings
// that respect an element-invariant ordering. The admissible set is itself
// relabelling-equivariant, so the result is a canonical form. LimitError for
// n > kIsoLimit.
CanonicalFamily canonicalize_family_iso(const PartitionFamily& a);

bool equivalent(const PartitionFamily& a, const PartitionFamily& b);

} // namespace pekr
