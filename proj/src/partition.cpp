#include "pekr/partition.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <sstream>

#include "pekr/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pekr {

namespace {

// completions[r][m]: number of ways to fill r more rgs positions when m blocks
// are already open. Only entries with r + m <= kMaxRankElements are filled.
struct CompletionTable {
    std::array<std::array<Rank, kMaxRankElements + 2>, kMaxRankElements + 1> c{};

    CompletionTable() {
        for (int m = 0; m <= kMaxRankElements + 1; ++m) c[0][m] = 1;
        for (int r = 1; r <= kMaxRankElements; ++r)
            for (int m = 1; r + m <= kMaxRankElements; ++m)
                c[r][m] = static_cast<Rank>(m) * c[r - 1][m] + c[r - 1][m + 1];
    }
};

const CompletionTable& completions() {
    static const CompletionTable table;
    return table;
}

void require_rankable(int n) {
    if (n < 1 || n > kMaxRankElements)
        throw LimitError("rank/unrank supports 1 <= n <= " + std::to_string(kMaxRankElements) +
                         ", got n=" + std::to_string(n));
}

void require_element(int n, int e, const char* name) {
    if (e < 1 || e > n)
        throw ElementError(std::string("element ") + name + "=" + std::to_string(e) + " outside 1.." +
                           std::to_string(n));
}

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Parses a non-negative integer token; `offset` is the token's column origin.
int parse_int(std::string_view token, std::size_t column) {
    auto t = trim(token);
    if (t.empty()) throw ParseError("expected an integer", 1, column);
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || value < 0)
        throw ParseError("invalid integer '" + std::string(t) + "'", 1, column);
    return value;
}

} // namespace

ElementSet ElementSet::of(std::initializer_list<int> elements) {
    return of(std::span<const int>(elements.begin(), elements.size()));
}

ElementSet ElementSet::of(std::span<const int> elements) {
    ElementMask bits = 0;
    for (int e : elements) bits |= ElementMask{1} << (e - 1);
    return ElementSet(bits);
}

std::vector<int> ElementSet::elements() const {
    std::vector<int> out;
    for (ElementMask b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
}

std::string to_string(ElementSet s) {
    std::string out = "{";
    bool first = true;
    for (int e : s.elements()) {
        if (!first) out += ',';
        out += std::to_string(e);
        first = false;
    }
    return out + "}";
}

SetPartition SetPartition::from_rgs(std::vector<std::uint8_t> rgs) {
    if (rgs.empty()) throw RangeError("a partition needs n >= 1");
    if (rgs.size() > static_cast<std::size_t>(kMaxElements))
        throw LimitError("partitions support n <= " + std::to_string(kMaxElements));
    if (rgs[0] != 0) throw RangeError("rgs must start with 0");
    int max_seen = 0;
    for (std::size_t k = 1; k < rgs.size(); ++k) {
        if (rgs[k] > max_seen + 1)
            throw RangeError("rgs entry " + std::to_string(k) + " exceeds running maximum + 1");
        max_seen = std::max<int>(max_seen, rgs[k]);
    }
    return SetPartition(std::move(rgs), max_seen + 1);
}

SetPartition SetPartition::from_labels(std::span<const int> labels) {
    if (labels.empty()) throw RangeError("a partition needs n >= 1");
    if (labels.size() > static_cast<std::size_t>(kMaxElements))
        throw LimitError("partitions support n <= " + std::to_string(kMaxElements));
    std::vector<std::uint8_t> rgs(labels.size());
    std::vector<std::pair<int, int>> seen; // label -> canonical index
    for (std::size_t k = 0; k < labels.size(); ++k) {
        auto it = std::find_if(seen.begin(), seen.end(), [&](auto& p) { return p.first == labels[k]; });
        if (it == seen.end()) {
            seen.emplace_back(labels[k], static_cast<int>(seen.size()));
            rgs[k] = static_cast<std::uint8_t>(seen.size() - 1);
        } else {
            rgs[k] = static_cast<std::uint8_t>(it->second);
        }
    }
    return SetPartition(std::move(rgs), static_cast<int>(seen.size()));
}

SetPartition SetPartition::from_blocks(int n, std::span<const Block> blocks) {
    if (n < 1) throw RangeError("a partition needs n >= 1");
    if (n > kMaxElements) throw LimitError("partitions support n <= " + std::to_string(kMaxElements));
    std::vector<int> labels(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw EmptyBlockError("block " + std::to_string(b + 1) + " is empty");
        for (int e : blocks[b]) {
            if (e < 1 || e > n)
                throw CoverError("element " + std::to_string(e) + " is outside [" + std::to_string(n) + "]");
            if (labels[e - 1] != -1)
                throw OverlapError("element " + std::to_string(e) + " appears in more than one block");
            labels[e - 1] = static_cast<int>(b);
        }
    }
    for (int e = 1; e <= n; ++e)
        if (labels[e - 1] == -1)
            throw CoverError("element " + std::to_string(e) + " is not covered by any block");
    return from_labels(labels);
}

SetPartition SetPartition::finest(int n) {
    std::vector<std::uint8_t> rgs(n);
    for (int k = 0; k < n; ++k) rgs[k] = static_cast<std::uint8_t>(k);
    return from_rgs(std::move(rgs));
}

std::vector<Block> SetPartition::blocks() const {
    std::vector<Block> out(blocks_);
    for (int k = 0; k < size(); ++k) out[rgs_[k]].push_back(k + 1);
    for (const auto& b : out)
        if (b.empty()) throw InternalError("canonical partition produced an empty block");
    return out;
}

std::vector<ElementMask> SetPartition::block_masks() const {
    std::vector<ElementMask> out(blocks_, 0);
    for (int k = 0; k < size(); ++k) out[rgs_[k]] |= ElementMask{1} << k;
    return out;
}

ElementMask SetPartition::block_mask_of(int element) const {
    ElementMask m = 0;
    const auto label = rgs_[element - 1];
    for (int k = 0; k < size(); ++k)
        if (rgs_[k] == label) m |= ElementMask{1} << k;
    return m;
}

PartitionEnumerator::PartitionEnumerator(int n) : PartitionEnumerator(n, 0) {}

PartitionEnumerator::PartitionEnumerator(int n, Rank start) : current_(unrank(n, start)) {
    prefix_max_.resize(n);
    std::uint8_t m = 0;
    for (int k = 0; k < n; ++k) {
        m = std::max(m, current_.rgs_[k]);
        prefix_max_[k] = m;
    }
}

void PartitionEnumerator::next() {
    if (done_) return;
    auto& rgs = current_.rgs_;
    const int n = static_cast<int>(rgs.size());
    int k = n - 1;
    while (k >= 1 && rgs[k] > prefix_max_[k - 1]) --k;
    if (k < 1) {
        done_ = true;
        return;
    }
    ++rgs[k];
    prefix_max_[k] = std::max(prefix_max_[k - 1], rgs[k]);
    for (int x = k + 1; x < n; ++x) {
        rgs[x] = 0;
        prefix_max_[x] = prefix_max_[k];
    }
    current_.blocks_ = prefix_max_[n - 1] + 1;
}

PartitionRange enumerate_partitions(int n) {
    if (n < 1) throw RangeError("enumeration needs n >= 1");
    if (n > kEnumerationLimit)
        throw LimitError("enumeration is limited to n <= " + std::to_string(kEnumerationLimit) +
                         " (got " + std::to_string(n) + ")");
    return PartitionRange(n);
}

std::vector<SetPartition> all_partitions(int n) {
    std::vector<SetPartition> out;
    out.reserve(partition_count(n));
    for (const auto& p : enumerate_partitions(n)) out.push_back(p);
    return out;
}

Rank partition_count(int n) {
    require_rankable(n);
    return completions().c[n - 1][1];
}

Rank rank(const SetPartition& p) {
    const int n = p.size();
    require_rankable(n);
    const auto& c = completions().c;
    const auto& rgs = p.rgs();
    Rank r = 0;
    int open = 1;
    for (int k = 1; k < n; ++k) {
        r += static_cast<Rank>(rgs[k]) * c[n - k - 1][open];
        open = std::max(open, rgs[k] + 1);
    }
    return r;
}

SetPartition unrank(int n, Rank index) {
    require_rankable(n);
    const auto& c = completions().c;
    if (index >= c[n - 1][1])
        throw RangeError("rank " + std::to_string(index) + " out of range for n=" + std::to_string(n));
    std::vector<std::uint8_t> rgs(n, 0);
    int open = 1;
    for (int k = 1; k < n; ++k) {
        const int rem = n - k - 1;
        int v = 0;
        for (;; ++v) {
            const Rank cnt = c[rem][std::max(open, v + 1)];
            if (index < cnt) break;
            index -= cnt;
        }
        rgs[k] = static_cast<std::uint8_t>(v);
        open = std::max(open, v + 1);
    }
    return SetPartition::from_rgs(std::move(rgs));
}

int common_blocks(const SetPartition& p, const SetPartition& q) {
    if (p.size() != q.size())
        throw DimensionError("partitions of different ground sets (" + std::to_string(p.size()) + " vs " +
                             std::to_string(q.size()) + ")");
    const auto pm = p.block_masks();
    const auto qm = q.block_masks();
    int shared = 0;
    for (ElementMask m : pm)
        if (qm[q.rgs()[std::countr_zero(m)]] == m) ++shared;
    return shared;
}

SetPartition split(const SetPartition& p, int i, int j) {
    const int n = p.size();
    require_element(n, i, "i");
    require_element(n, j, "j");
    if (i == j) throw ElementError("split needs i != j");
    if (p.rgs()[i - 1] != p.rgs()[j - 1]) return p;
    std::vector<int> labels(p.rgs().begin(), p.rgs().end());
    labels[i - 1] = p.block_count();
    return SetPartition::from_labels(labels);
}

SingletonSet sigma(const SetPartition& p) {
    std::array<int, kMaxElements> sizes{};
    for (auto v : p.rgs()) ++sizes[v];
    ElementMask bits = 0;
    for (int k = 0; k < p.size(); ++k)
        if (sizes[p.rgs()[k]] == 1) bits |= ElementMask{1} << k;
    return SingletonSet(bits);
}

SetPartition relabel(const SetPartition& p, std::span<const int> perm) {
    const int n = p.size();
    if (static_cast<int>(perm.size()) != n) throw DimensionError("permutation size differs from n");
    std::vector<int> labels(n, -1);
    for (int e = 1; e <= n; ++e) {
        const int image = perm[e - 1];
        require_element(n, image, "perm image");
        if (labels[image - 1] != -1) throw ElementError("not a permutation");
        labels[image - 1] = p.rgs()[e - 1];
    }
    return SetPartition::from_labels(labels);
}

SetPartition pair_partition(int n, int a, int b) {
    require_element(n, a, "a");
    require_element(n, b, "b");
    if (a == b) throw ElementError("pair partition needs a != b");
    std::vector<int> labels(n);
    for (int e = 1; e <= n; ++e) labels[e - 1] = e;
    labels[b - 1] = a;
    return SetPartition::from_labels(labels);
}

std::string to_text(const SetPartition& p) {
    std::string out;
    bool first_block = true;
    for (const auto& b : p.blocks()) {
        if (!first_block) out += '|';
        first_block = false;
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (k) out += ',';
            out += std::to_string(b[k]);
        }
    }
    return out;
}

std::string to_rgs_text(const SetPartition& p) {
    std::string out = "rgs:";
    for (std::size_t k = 0; k < p.rgs().size(); ++k) {
        if (k) out += ',';
        out += std::to_string(p.rgs()[k]);
    }
    return out;
}

SetPartition parse_partition(std::string_view text, std::optional<int> n) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const std::size_t lead = first == std::string_view::npos ? 0 : first;
    const auto body = trim(text);
    if (body.empty()) throw ParseError("empty partition", 1, 1);

    if (body.starts_with("rgs:")) {
        std::vector<int> values;
        std::size_t pos = 4;
        while (true) {
            const auto comma = body.find(',', pos);
            const auto token = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
            values.push_back(parse_int(token, lead + pos + 1));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (n && static_cast<int>(values.size()) != *n)
            throw DimensionError("rgs has length " + std::to_string(values.size()) + ", expected " +
                                 std::to_string(*n));
        std::vector<std::uint8_t> rgs;
        for (int v : values) {
            if (v > 255) throw RangeError("rgs entry too large");
            rgs.push_back(static_cast<std::uint8_t>(v));
        }
        return SetPartition::from_rgs(std::move(rgs));
    }

    std::vector<Block> blocks;
    int largest = 0;
    std::size_t pos = 0;
    while (true) {
        const auto bar = body.find('|', pos);
        const auto block_text = body.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos);
        Block block;
        if (!trim(block_text).empty()) {
            std::size_t epos = 0;
            while (true) {
                const auto comma = block_text.find(',', epos);
                const auto token =
                    block_text.substr(epos, comma == std::string_view::npos ? std::string_view::npos : comma - epos);
                const int e = parse_int(token, lead + pos + epos + 1);
                if (e == 0) throw ParseError("elements are 1-based", 1, lead + pos + epos + 1);
                block.push_back(e);
                largest = std::max(largest, e);
                if (comma == std::string_view::npos) break;
                epos = comma + 1;
            }
        }
        blocks.push_back(std::move(block));
        if (bar == std::string_view::npos) break;
        pos = bar + 1;
    }
    const int ground = n.value_or(largest);
    if (largest > ground)
        throw DimensionError("element " + std::to_string(largest) + " exceeds n=" + std::to_string(ground));
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    return SetPartition::from_blocks(ground, blocks);
}

std::uint64_t count_partitions_serial(int n, const std::function<bool(const SetPartition&)>& pred) {
    std::uint64_t count = 0;
    for (const auto& p : enumerate_partitions(n))
        if (pred(p)) ++count;
    return count;
}

std::uint64_t count_partitions(int n, const std::function<bool(const SetPartition&)>& pred, int threads) {
    (void)enumerate_partitions(n); // limit check
    const Rank total = partition_count(n);
    const std::int64_t chunks = std::max<std::int64_t>(1, std::min<std::int64_t>(threads * 16, total));
    std::uint64_t count = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : count) num_threads(std::max(1, threads))
    for (std::int64_t c = 0; c < chunks; ++c) {
        const Rank lo = total * c / chunks;
        const Rank hi = total * (c + 1) / chunks;
        if (lo == hi) continue;
        PartitionEnumerator e(n, lo);
        for (Rank r = lo; r < hi; ++r, e.next())
            if (pred(e.current())) ++count;
    }
    return count;
}

} // namespace pekr
