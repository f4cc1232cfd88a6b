#pragma once

// Set partitions of [n] = {1..n} in canonical restricted-growth form.
//
// Elements are 1-based at every public boundary. Internally the rgs array is
// 0-based: rgs[k] is the block index of element k+1, and block indices are
// assigned in order of each block's minimum element.

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <iterator>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pekr {

using Rank = std::uint64_t;
using ElementMask = std::uint64_t; // bit (e-1) <=> element e

inline constexpr int kMaxElements = 64;        // bitmask width
inline constexpr int kMaxRankElements = 25;    // B_25 < 2^63, B_26 does not fit
inline constexpr int kEnumerationLimit = 14;   // B_14 = 190,899,322

using Block = std::vector<int>;

// Subset of [n] stored as a bitmask. Used for sigma images and anchor sets.
class ElementSet {
public:
    constexpr ElementSet() = default;
    constexpr explicit ElementSet(ElementMask bits) : bits_(bits) {}
    static ElementSet of(std::initializer_list<int> elements);
    static ElementSet of(std::span<const int> elements);
    static ElementSet full(int n) { return ElementSet(n >= 64 ? ~ElementMask{0} : ((ElementMask{1} << n) - 1)); }

    constexpr ElementMask bits() const noexcept { return bits_; }
    constexpr bool contains(int e) const noexcept { return (bits_ >> (e - 1)) & 1U; }
    constexpr int size() const noexcept { return std::popcount(bits_); }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    std::vector<int> elements() const;

    constexpr ElementSet operator&(ElementSet o) const noexcept { return ElementSet(bits_ & o.bits_); }
    constexpr ElementSet operator|(ElementSet o) const noexcept { return ElementSet(bits_ | o.bits_); }
    constexpr bool is_subset_of(ElementSet o) const noexcept { return (bits_ & ~o.bits_) == 0; }
    constexpr auto operator<=>(const ElementSet&) const = default;

private:
    ElementMask bits_ = 0;
};

using SingletonSet = ElementSet;

std::string to_string(ElementSet s); // "{1,4}"

class PartitionEnumerator;

class SetPartition {
public:
    // Validates that rgs is a restricted-growth sequence; throws RangeError.
    static SetPartition from_rgs(std::vector<std::uint8_t> rgs);
    // Blocks must be nonempty, pairwise disjoint and cover [n].
    static SetPartition from_blocks(int n, std::span<const Block> blocks);
    // Relabels an arbitrary block-label array into canonical form.
    static SetPartition from_labels(std::span<const int> labels);
    static SetPartition finest(int n);

    int size() const noexcept { return static_cast<int>(rgs_.size()); }
    int block_count() const noexcept { return blocks_; }
    const std::vector<std::uint8_t>& rgs() const noexcept { return rgs_; }
    int block_index_of(int element) const { return rgs_[element - 1]; }

    std::vector<Block> blocks() const;
    // Block masks in canonical block-index order.
    std::vector<ElementMask> block_masks() const;
    ElementMask block_mask_of(int element) const;

    bool operator==(const SetPartition&) const = default;
    std::strong_ordering operator<=>(const SetPartition& o) const { return rgs_ <=> o.rgs_; }

private:
    friend class PartitionEnumerator;
    explicit SetPartition(std::vector<std::uint8_t> rgs, int blocks) : rgs_(std::move(rgs)), blocks_(blocks) {}

    std::vector<std::uint8_t> rgs_;
    int blocks_ = 0;
};

inline std::vector<Block> to_blocks(const SetPartition& p) { return p.blocks(); }

// Lexicographic rgs-order generator. Usable as a plain cursor (`next()`), as
// an input range, or started at an arbitrary rank for chunked parallel work.
class PartitionEnumerator {
public:
    explicit PartitionEnumerator(int n);
    PartitionEnumerator(int n, Rank start);

    const SetPartition& current() const noexcept { return current_; }
    bool done() const noexcept { return done_; }
    // Advances to the lexicographic successor; sets done() after the last one.
    void next();

private:
    SetPartition current_;
    std::vector<std::uint8_t> prefix_max_; // max(rgs[0..k])
    bool done_ = false;
};

class PartitionRange {
public:
    explicit PartitionRange(int n) : n_(n) {}

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = SetPartition;
        using difference_type = std::ptrdiff_t;
        using pointer = const SetPartition*;
        using reference = const SetPartition&;

        iterator() = default;
        explicit iterator(int n) : e_(std::make_shared<PartitionEnumerator>(n)) {}
        reference operator*() const { return e_->current(); }
        pointer operator->() const { return &e_->current(); }
        iterator& operator++() { e_->next(); return *this; }
        void operator++(int) { e_->next(); }
        bool operator==(std::default_sentinel_t) const { return !e_ || e_->done(); }

    private:
        std::shared_ptr<PartitionEnumerator> e_;
    };

    iterator begin() const { return iterator(n_); }
    std::default_sentinel_t end() const { return {}; }

private:
    int n_;
};

// Every partition of [n] exactly once, lexicographic in rgs. LimitError if
// n > kEnumerationLimit.
PartitionRange enumerate_partitions(int n);
std::vector<SetPartition> all_partitions(int n);

// Number of partitions of [n], computed from the rank completion table.
// Valid for n <= kMaxRankElements.
Rank partition_count(int n);

Rank rank(const SetPartition& p);
SetPartition unrank(int n, Rank index);

// |{B : B is a block of both p and q}|. DimensionError if sizes differ.
int common_blocks(const SetPartition& p, const SetPartition& q);

// The (i,j)-split: if j shares i's block, detach i as a singleton.
SetPartition split(const SetPartition& p, int i, int j);

SingletonSet sigma(const SetPartition& p);

// perm[e-1] is the image of element e (1-based values).
SetPartition relabel(const SetPartition& p, std::span<const int> perm);

// Partition with block {a,b} and every other element a singleton.
SetPartition pair_partition(int n, int a, int b);

// Text forms: "1,5|2|3|4" and "rgs:0,1,2,2".
std::string to_text(const SetPartition& p);
std::string to_rgs_text(const SetPartition& p);
// n is required for block form to detect cover errors; when absent it is the
// largest element mentioned. Throws ParseError/OverlapError/CoverError/...
SetPartition parse_partition(std::string_view text, std::optional<int> n = std::nullopt);

// Counts partitions of [n] satisfying pred. The serial version is the
// reference; the parallel one splits the rank space into contiguous chunks.
std::uint64_t count_partitions_serial(int n, const std::function<bool(const SetPartition&)>& pred);
std::uint64_t count_partitions(int n, const std::function<bool(const SetPartition&)>& pred, int threads);

} // namespace pekr

template <>
struct std::hash<pekr::SetPartition> {
    std::size_t operator()(const pekr::SetPartition& p) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto v : p.rgs()) h = (h ^ v) * 1099511628211ULL;
        return h;
    }
};
