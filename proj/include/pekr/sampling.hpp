#pragma once

#include <cstddef>
#include <random>

#include "pekr/family.hpp"

namespace pekr {

// Uniform size in [1, max_size], distinct members drawn uniformly from B(n).
PartitionFamily random_family(int n, std::size_t max_size, std::mt19937_64& rng);

// Greedy random clique of the compatibility graph: members are visited in a
// random order and kept when they share >= t blocks with everything kept so far.
PartitionFamily random_t_intersecting_family(int n, int t, std::size_t max_size, std::mt19937_64& rng);

} // namespace pekr
