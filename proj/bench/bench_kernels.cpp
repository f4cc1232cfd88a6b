// Serial reference kernels against their OpenMP versions.
//   bench_kernels [threads] [reps]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include <omp.h>

#include "pekr/family.hpp"
#include "pekr/partition.hpp"
#include "pekr/search.hpp"

using namespace pekr;

namespace {

template <typename F>
double best_ms(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
        if (dt.count() < best) best = dt.count();
    }
    return best;
}

int failures = 0;

void row(const std::string& name, double serial, double parallel, bool same) {
    std::printf("%-34s %10.2f %10.2f %7.2fx  %s\n", name.c_str(), serial, parallel, serial / parallel,
                same ? "ok" : "MISMATCH");
    if (!same) ++failures;
}

} // namespace

int main(int argc, char** argv) {
    const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
    const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
    std::printf("threads=%d reps=%d (best of reps, ms)\n", threads, reps);
    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial", "parallel", "speedup");

    for (int n : {7, 8}) {
        CompatibilityGraph a, b;
        const double s = best_ms(reps, [&] { a = build_graph_serial(n, 1); });
        const double p = best_ms(reps, [&] { b = build_graph(n, 1, threads); });
        row("build_graph n=" + std::to_string(n) + " t=1", s, p, a.adjacency == b.adjacency);
    }

    const std::function<bool(const SetPartition&)> sf = [](const SetPartition& q) { return sigma(q).empty(); };
    for (int n : {10, 11}) {
        std::uint64_t a = 0, b = 0;
        const double s = best_ms(reps, [&] { a = count_partitions_serial(n, sf); });
        const double p = best_ms(reps, [&] { b = count_partitions(n, sf, threads); });
        row("count singleton-free n=" + std::to_string(n), s, p, a == b);
    }

    for (auto [n, t] : {std::pair{8, 1}, std::pair{8, 2}}) {
        const auto h = construct_hm(n, t == 1 ? HmWitness{{1}, n} : HmWitness{{1, 2}, n});
        bool a = false, b = false;
        const double s = best_ms(reps, [&] { a = is_t_intersecting_serial(h, t); });
        const double p = best_ms(reps, [&] { b = is_t_intersecting(h, t, threads); });
        row("t-intersecting HM n=" + std::to_string(n) + " t=" + std::to_string(t), s, p, a == b);
    }

    for (auto [n, t] : {std::pair{7, 1}, std::pair{7, 2}}) {
        const auto g = build_graph(n, t, threads);
        SearchReport a, b;
        SearchOptions one, many;
        many.threads = threads;
        const double s = best_ms(reps, [&] { a = max_family(g, SearchMode::nontrivial, one); });
        const double p = best_ms(reps, [&] { b = max_family(g, SearchMode::nontrivial, many); });
        row("max_family nontrivial n=" + std::to_string(n) + " t=" + std::to_string(t), s, p,
            a.optimum == b.optimum && a.witness == b.witness);
    }
    return failures == 0 ? 0 : 1;
}
