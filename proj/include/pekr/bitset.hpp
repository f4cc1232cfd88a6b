#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace pekr {

// Fixed-size dynamic bitset tuned for the clique kernels: word-level and/andnot,
// popcount, and ascending set-bit iteration.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const noexcept { return bits_; }
    std::size_t word_count() const noexcept { return words_.size(); }
    const std::uint64_t* data() const noexcept { return words_.data(); }

    void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

    void set_all() noexcept {
        for (auto& w : words_) w = ~std::uint64_t{0};
        if (bits_ & 63) words_.back() = (std::uint64_t{1} << (bits_ & 63)) - 1;
    }

    bool any() const noexcept {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    // Number of set bits with index >= i.
    std::size_t count_from(std::size_t i) const noexcept {
        std::size_t w = i >> 6;
        if (w >= words_.size()) return 0;
        std::size_t c = static_cast<std::size_t>(std::popcount(words_[w] & (~std::uint64_t{0} << (i & 63))));
        for (++w; w < words_.size(); ++w) c += static_cast<std::size_t>(std::popcount(words_[w]));
        return c;
    }

    // First set bit with index >= i, or size() if none.
    std::size_t find_next(std::size_t i) const noexcept {
        std::size_t w = i >> 6;
        if (w >= words_.size()) return bits_;
        std::uint64_t cur = words_[w] & (~std::uint64_t{0} << (i & 63));
        while (true) {
            if (cur) return (w << 6) + static_cast<std::size_t>(std::countr_zero(cur));
            if (++w >= words_.size()) return bits_;
            cur = words_[w];
        }
    }
    std::size_t find_first() const noexcept { return find_next(0); }

    void and_with(const Bitset& o) noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    }
    void and_not(const Bitset& o) noexcept {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    }
    // this = a & b, reusing storage.
    void assign_and(const Bitset& a, const Bitset& b) {
        bits_ = a.bits_;
        words_.resize(a.words_.size());
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] = a.words_[k] & b.words_[k];
    }
    // Clears bits with index <= i.
    void clear_through(std::size_t i) noexcept {
        const std::size_t w = i >> 6;
        for (std::size_t k = 0; k < w && k < words_.size(); ++k) words_[k] = 0;
        if (w < words_.size()) words_[w] &= ((i & 63) == 63) ? 0 : (~std::uint64_t{0} << ((i & 63) + 1));
    }

    bool operator==(const Bitset&) const = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace pekr
