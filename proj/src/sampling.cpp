#include "pekr/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace pekr {

PartitionFamily random_family(int n, std::size_t max_size, std::mt19937_64& rng) {
    const Rank total = partition_count(n);
    const auto cap = static_cast<std::size_t>(std::min<Rank>(total, max_size));
    const auto size = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
    std::vector<Rank> ranks(total);
    std::iota(ranks.begin(), ranks.end(), Rank{0});
    std::shuffle(ranks.begin(), ranks.end(), rng);
    ranks.resize(size);
    return PartitionFamily::from_ranks(n, std::move(ranks));
}

PartitionFamily random_t_intersecting_family(int n, int t, std::size_t max_size, std::mt19937_64& rng) {
    const Rank total = partition_count(n);
    const auto target = std::uniform_int_distribution<std::size_t>(1, max_size)(rng);
    std::vector<Rank> order(total);
    std::iota(order.begin(), order.end(), Rank{0});
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Rank> kept;
    std::vector<BlockTable> tables;
    for (Rank r : order) {
        if (kept.size() >= target) break;
        const auto table = block_table(unrank(n, r));
        const bool fits = std::all_of(tables.begin(), tables.end(),
                                      [&](const BlockTable& other) { return common_blocks(table, other) >= t; });
        if (!fits) continue;
        kept.push_back(r);
        tables.push_back(table);
    }
    return PartitionFamily::from_ranks(n, std::move(kept));
}

} // namespace pekr
