#pragma once

// Families of set partitions over a common ground set [n].

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pekr/partition.hpp"

namespace pekr {

// Members are kept sorted by rank with no duplicates; the partition objects
// are cached alongside the ranks so that hot loops never unrank.
class PartitionFamily {
public:
    explicit PartitionFamily(int n = 1);
    static PartitionFamily from_partitions(int n, std::span<const SetPartition> members);
    static PartitionFamily from_ranks(int n, std::vector<Rank> ranks);

    int ground_size() const noexcept { return n_; }
    std::size_t size() const noexcept { return ranks_.size(); }
    bool empty() const noexcept { return ranks_.empty(); }
    const std::vector<Rank>& ranks() const noexcept { return ranks_; }
    const std::vector<SetPartition>& members() const noexcept { return members_; }

    bool contains(Rank r) const;
    bool contains(const SetPartition& p) const;

    bool operator==(const PartitionFamily& o) const { return n_ == o.n_ && ranks_ == o.ranks_; }

private:
    int n_;
    std::vector<Rank> ranks_;
    std::vector<SetPartition> members_;
};

// Per-element block masks of a partition: mask[e-1] is the block holding e.
// Two partitions share the block with minimum e iff their masks agree at e.
using BlockTable = std::vector<ElementMask>;
BlockTable block_table(const SetPartition& p);
int common_blocks(std::span<const ElementMask> p, std::span<const ElementMask> q);

bool is_t_intersecting_serial(const PartitionFamily& a, int t);
bool is_t_intersecting(const PartitionFamily& a, int t, int threads = 1);

struct TrivialityReport {
    ElementSet common;                // intersection of sigma over all members
    std::optional<ElementSet> witness; // first t elements of `common`, if |common| >= t

    bool trivial() const noexcept { return witness.has_value(); }
};

// EmptyFamilyError for an empty family.
TrivialityReport triviality_witness(const PartitionFamily& a, int t);

struct SplitDecomposition {
    PartitionFamily stay;          // members whose split image is already present
    PartitionFamily move;          // members whose split image is absent
    PartitionFamily image_of_move; // split images of `move`
};

struct SplitResult {
    SplitDecomposition decomposition;
    PartitionFamily result;
};

SplitResult family_split(const PartitionFamily& a, int i, int j);

enum class PairOrder { lexicographic, nontrivial_preserving };

struct CompressionStep {
    int i = 0;
    int j = 0;
    std::size_t moved = 0;
};

struct CompressionReport {
    PartitionFamily initial;
    PartitionFamily final_family;
    std::vector<CompressionStep> steps;
    int passes = 0;
    // Only set by nontrivial_preserving: a skipped pair still changes the family.
    bool stuck = false;
    std::size_t initial_singletons = 0;
    std::size_t final_singletons = 0;
};

bool is_compressed(const PartitionFamily& a);
std::size_t total_singletons(const PartitionFamily& a);

// NotIntersectingError unless `a` is t-intersecting. With `verify` set, every
// effective step is re-checked for size and the t-intersecting property.
CompressionReport compress(const PartitionFamily& a, int t, PairOrder order = PairOrder::lexicographic,
                           bool verify = false);

struct SigmaFamily {
    std::vector<ElementSet> sets; // distinct images, ascending
    std::size_t multiset_size = 0;
};

SigmaFamily sigma_family(const PartitionFamily& a);
bool sets_t_intersecting(std::span<const ElementSet> sets, int t);

struct HmWitness {
    std::vector<int> anchors; // a_1..a_t, ascending
    int pivot = 0;            // b

    int t() const noexcept { return static_cast<int>(anchors.size()); }
    bool operator==(const HmWitness&) const = default;
};

PartitionFamily construct_trivial(int n, std::span<const int> anchors);
PartitionFamily construct_hm(int n, const HmWitness& w);
// Membership in H(a_1..a_t,b) without materialising the family.
bool hm_contains(const HmWitness& w, const SetPartition& p);

// Lexicographically least witness (anchors, then pivot) whose HM family is
// exactly `a`.
std::optional<HmWitness> recognize_hm(const PartitionFamily& a, int t, int threads = 1);

// P_e: singletons a_1..a_t and e, everything else in one block.
SetPartition anchored_partition(int n, const HmWitness& w, int e);

struct UndoVerdict {
    bool conclusion_holds = false;
    std::optional<SetPartition> counterexample; // member of A xor H
    std::vector<int> missing_anchored;           // e with P_e not in A
    std::vector<int> missing_pairs;              // a_l with Q(a_l,b) not in A
};

// Premise: A is t-intersecting and S_ij(A) = H(w). Throws PremiseNotMet when
// it does not hold; otherwise reports whether A = H(w).
UndoVerdict verify_undo(const PartitionFamily& a, int t, int i, int j, const HmWitness& w);
bool undo_premise_holds(const PartitionFamily& a, int t, int i, int j, const PartitionFamily& h);

struct UnsplitSearchReport {
    int n = 0;
    HmWitness witness;
    std::size_t perturbations = 0; // distinct families A = H - {P} + {T}
    std::size_t pair_checks = 0;
    std::size_t premise_held = 0;
    std::vector<PartitionFamily> counterexamples;
};

// Replaces one member P of H(w) by an un-split T (a singleton of P merged into
// another block) and looks for any ordered (i,j) with S_ij(A) = H while A is
// t-intersecting and A != H.
UnsplitSearchReport search_unsplit_counterexamples(int n, const HmWitness& w);

PartitionFamily relabel(const PartitionFamily& a, std::span<const int> perm);

} // namespace pekr
