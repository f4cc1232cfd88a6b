#include "pekr/search.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>

#include "pekr/errors.hpp"

namespace pekr {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    Clock::time_point end;
    bool expired() const { return Clock::now() >= end; }
};

void require_searchable(int n, int t) {
    if (n < 1 || t < 1) throw RangeError("search needs n >= 1 and t >= 1");
    if (n > kSearchLimit)
        throw LimitError("exact search supports n <= " + std::to_string(kSearchLimit) + " (got n=" +
                         std::to_string(n) + ")");
}

// Flat per-vertex block tables: tables[v*n + k] is the block mask holding k+1.
std::vector<ElementMask> vertex_tables(int n, std::vector<ElementSet>& sigma) {
    const auto count = partition_count(n);
    std::vector<ElementMask> tables(count * n);
    sigma.resize(count);
    Rank v = 0;
    for (const auto& p : enumerate_partitions(n)) {
        const auto t = block_table(p);
        std::copy(t.begin(), t.end(), tables.begin() + static_cast<std::ptrdiff_t>(v * n));
        sigma[v] = pekr::sigma(p);
        ++v;
    }
    return tables;
}

bool mode_ok(SearchMode mode, ElementMask common_sigma, int t) {
    return mode == SearchMode::unrestricted || std::popcount(common_sigma) < t;
}

// True when no extension by vertices of `cand` can push the common singleton
// set below t (it only shrinks, and at best shrinks to the AND over all of cand).
template <typename SigmaOf>
bool nontrivial_hopeless(const Bitset& cand, ElementMask common_sigma, int t, SigmaOf sigma_of) {
    if (std::popcount(common_sigma) < t) return false;
    ElementMask reachable = common_sigma;
    for (std::size_t v = cand.find_first(); v < cand.size(); v = cand.find_next(v + 1)) {
        reachable &= sigma_of(v);
        if (std::popcount(reachable) < t) return false;
    }
    return true;
}

// Greedy sequential colouring of `cand`; fills vertices in colour order with
// their colour numbers (1-based). Returns the number of colours.
int colour_sort(const Bitset& cand, const std::vector<Bitset>& adj, std::vector<std::size_t>& vert,
                std::vector<int>& colour, Bitset& uncoloured, Bitset& q) {
    vert.clear();
    colour.clear();
    uncoloured = cand;
    int c = 0;
    while (uncoloured.any()) {
        ++c;
        q = uncoloured;
        for (std::size_t v = q.find_first(); v < q.size(); v = q.find_first()) {
            q.reset(v);
            uncoloured.reset(v);
            q.and_not(adj[v]);
            vert.push_back(v);
            colour.push_back(c);
        }
    }
    return c;
}

int colour_count(const Bitset& cand, const std::vector<Bitset>& adj, Bitset& uncoloured, Bitset& q) {
    uncoloured = cand;
    int c = 0;
    while (uncoloured.any()) {
        ++c;
        q = uncoloured;
        for (std::size_t v = q.find_first(); v < q.size(); v = q.find_first()) {
            q.reset(v);
            uncoloured.reset(v);
            q.and_not(adj[v]);
        }
    }
    return c;
}

// A clique whose common singleton set still has t or more elements can only
// become non-trivial through a breaker: a vertex whose singletons miss part of it.
bool is_breaker(ElementMask sigma, ElementMask common_sigma) { return (sigma & common_sigma) != common_sigma; }

// Parallel branch and bound for the optimum size. Vertices are renumbered by
// descending degree; the incumbent is shared and only ever grows.
class BoundSearch {
public:
    BoundSearch(const CompatibilityGraph& g, SearchMode mode, Deadline deadline, std::vector<std::size_t> seed)
        : g_(g), mode_(mode), deadline_(deadline) {
        const std::size_t nv = g.vertex_count();
        order_.resize(nv);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::vector<std::size_t> deg(nv);
        for (std::size_t v = 0; v < nv; ++v) deg[v] = g.degree(v);
        std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return deg[a] > deg[b]; });
        std::vector<std::size_t> pos(nv);
        for (std::size_t p = 0; p < nv; ++p) pos[order_[p]] = p;
        adj_.assign(nv, Bitset(nv));
        sig_.resize(nv);
        for (std::size_t p = 0; p < nv; ++p) {
            const auto& row = g.adjacency[order_[p]];
            for (std::size_t u = row.find_first(); u < nv; u = row.find_next(u + 1)) adj_[p].set(pos[u]);
            sig_[p] = g.sigma[order_[p]].bits();
        }
        best_clique_ = std::move(seed);
        best_.store(static_cast<int>(best_clique_.size()));
    }

    void run(int threads) {
        const std::size_t nv = g_.vertex_count();
        if (nv == 0) return;
        Bitset all(nv);
        all.set_all();
        std::vector<std::size_t> vert;
        std::vector<int> colour;
        Bitset u, q;
        colour_sort(all, adj_, vert, colour, u, q);
        const auto roots = static_cast<std::int64_t>(vert.size());
        const ElementMask full = ElementSet::full(g_.n).bits();

#pragma omp parallel num_threads(std::max(1, threads))
        {
            std::uint64_t local_nodes = 0;
            Scratch s;
            s.ensure(nv + 1);
#pragma omp for schedule(dynamic, 1)
            for (std::int64_t idx = 0; idx < roots; ++idx) {
                if (timed_out_.load(std::memory_order_relaxed)) continue;
                const auto k = static_cast<std::size_t>(roots - 1 - idx);
                if (colour[k] <= best_.load(std::memory_order_relaxed)) continue;
                const std::size_t v = vert[k];
                Bitset cand(nv);
                for (std::size_t x = 0; x < k; ++x) cand.set(vert[x]);
                cand.and_with(adj_[v]);
                std::vector<std::size_t> clique{v};
                const ElementMask cs = full & sig_[v];
                if (!cand.any()) {
                    if (mode_ok(mode_, cs, g_.t)) offer(clique);
                } else {
                    expand(clique, cand, cs, local_nodes, s);
                }
            }
            nodes_.fetch_add(local_nodes);
        }
    }

    int best() const { return best_.load(); }
    bool timed_out() const { return timed_out_.load(); }
    std::uint64_t nodes() const { return nodes_.load(); }
    std::vector<std::size_t> best_vertices() const {
        std::lock_guard lock(mutex_);
        return best_clique_;
    }

private:
    struct Scratch {
        std::vector<std::vector<std::size_t>> vert;
        std::vector<std::vector<int>> colour;
        std::vector<Bitset> next;
        Bitset u, q;
        // Sized once before the search: references into these vectors are held
        // across recursive calls.
        void ensure(std::size_t depth) {
            vert.resize(depth + 1);
            colour.resize(depth + 1);
            next.resize(depth + 1);
        }
    };

    void offer(const std::vector<std::size_t>& clique) {
        std::lock_guard lock(mutex_);
        if (static_cast<int>(clique.size()) <= best_.load()) return;
        best_clique_.clear();
        for (auto p : clique) best_clique_.push_back(order_[p]);
        best_.store(static_cast<int>(clique.size()));
    }

    void expand(std::vector<std::size_t>& clique, Bitset& cand, ElementMask cs, std::uint64_t& nodes, Scratch& s) {
        if ((++nodes & 1023) == 0 && deadline_.expired()) timed_out_.store(true);
        if (timed_out_.load(std::memory_order_relaxed)) return;
        if (mode_ == SearchMode::nontrivial &&
            nontrivial_hopeless(cand, cs, g_.t, [&](std::size_t v) { return sig_[v]; }))
            return;

        const std::size_t depth = clique.size();
        auto& vert = s.vert[depth];
        auto& colour = s.colour[depth];
        colour_sort(cand, adj_, vert, colour, s.u, s.q);
        if (mode_ == SearchMode::nontrivial && std::popcount(cs) >= g_.t) {
            expand_breakers(clique, cand, cs, nodes, s);
            return;
        }
        for (std::size_t k = vert.size(); k-- > 0;) {
            if (static_cast<int>(depth) + colour[k] <= best_.load(std::memory_order_relaxed)) return;
            const std::size_t v = vert[k];
            Bitset& next = s.next[depth];
            next.assign_and(cand, adj_[v]);
            const ElementMask ncs = cs & sig_[v];
            clique.push_back(v);
            if (!next.any()) {
                if (mode_ok(mode_, ncs, g_.t) && static_cast<int>(clique.size()) > best_.load()) offer(clique);
            } else {
                expand(clique, next, ncs, nodes, s);
            }
            clique.pop_back();
            cand.reset(v);
            if (timed_out_.load(std::memory_order_relaxed)) return;
        }
    }

    // Branch only on breakers; every other candidate stays available below.
    void expand_breakers(std::vector<std::size_t>& clique, Bitset& cand, ElementMask cs, std::uint64_t& nodes,
                         Scratch& s) {
        const std::size_t depth = clique.size();
        const auto& vert = s.vert[depth];
        if (static_cast<int>(depth) + s.colour[depth].back() <= best_.load(std::memory_order_relaxed)) return;
        for (std::size_t k = vert.size(); k-- > 0;) {
            const std::size_t v = vert[k];
            if (!is_breaker(sig_[v], cs)) continue;
            Bitset& next = s.next[depth];
            next.assign_and(cand, adj_[v]);
            cand.reset(v);
            const int bound = static_cast<int>(depth) + 1 + colour_count(next, adj_, s.u, s.q);
            if (bound <= best_.load(std::memory_order_relaxed)) continue;
            const ElementMask ncs = cs & sig_[v];
            clique.push_back(v);
            if (!next.any()) {
                if (mode_ok(mode_, ncs, g_.t) && static_cast<int>(clique.size()) > best_.load()) offer(clique);
            } else {
                expand(clique, next, ncs, nodes, s);
            }
            clique.pop_back();
            if (timed_out_.load(std::memory_order_relaxed)) return;
        }
    }

    const CompatibilityGraph& g_;
    SearchMode mode_;
    Deadline deadline_;
    std::vector<std::size_t> order_;
    std::vector<Bitset> adj_;
    std::vector<ElementMask> sig_;

    std::atomic<int> best_{0};
    std::atomic<bool> timed_out_{false};
    std::atomic<std::uint64_t> nodes_{0};
    mutable std::mutex mutex_;
    std::vector<std::size_t> best_clique_;
};

// Serial depth-first search over vertices in rank order. Visits cliques of the
// target size in lexicographic order of their sorted rank sequences.
class LexSearch {
public:
    LexSearch(const CompatibilityGraph& g, SearchMode mode, std::size_t target, Deadline deadline,
              const std::function<bool(const std::vector<std::size_t>&)>& visit)
        : g_(g), mode_(mode), target_(target), deadline_(deadline), visit_(visit) {}

    // Returns true if the visitor asked to stop.
    bool run() {
        const std::size_t nv = g_.vertex_count();
        Bitset all(nv);
        all.set_all();
        levels_.assign(target_ + 1, Bitset(nv));
        return dfs(all, ElementSet::full(g_.n).bits());
    }

    std::uint64_t nodes() const { return nodes_; }
    bool timed_out() const { return timed_out_; }

private:
    bool dfs(const Bitset& cand, ElementMask cs) {
        if ((++nodes_ & 1023) == 0 && deadline_.expired()) timed_out_ = true;
        if (timed_out_) return true;
        if (clique_.size() == target_) {
            if (!mode_ok(mode_, cs, g_.t)) return false;
            return !visit_(clique_);
        }
        const std::size_t need = target_ - clique_.size();
        if (cand.count() < need) return false;
        if (mode_ == SearchMode::nontrivial &&
            nontrivial_hopeless(cand, cs, g_.t, [&](std::size_t v) { return g_.sigma[v].bits(); }))
            return false;
        if (static_cast<std::size_t>(colour_sort(cand, g_.adjacency, vert_, colour_, u_, q_)) < need) return false;
        if (mode_ == SearchMode::nontrivial && std::popcount(cs) >= g_.t && !breaker_can_reach(cand, cs, need))
            return false;

        Bitset& next = levels_[clique_.size() + 1];
        for (std::size_t v = cand.find_first(); v < cand.size(); v = cand.find_next(v + 1)) {
            if (cand.count_from(v) < need) break;
            next.assign_and(cand, g_.adjacency[v]);
            next.clear_through(v);
            clique_.push_back(v);
            if (dfs(next, cs & g_.sigma[v].bits())) return true;
            clique_.pop_back();
        }
        return false;
    }

    bool breaker_can_reach(const Bitset& cand, ElementMask cs, std::size_t need) {
        for (std::size_t v = cand.find_first(); v < cand.size(); v = cand.find_next(v + 1)) {
            if (!is_breaker(g_.sigma[v].bits(), cs)) continue;
            scratch_.assign_and(cand, g_.adjacency[v]);
            if (1 + static_cast<std::size_t>(colour_count(scratch_, g_.adjacency, u_, q_)) >= need) return true;
        }
        return false;
    }

    const CompatibilityGraph& g_;
    SearchMode mode_;
    std::size_t target_;
    Deadline deadline_;
    const std::function<bool(const std::vector<std::size_t>&)>& visit_;
    std::vector<std::size_t> clique_;
    std::vector<Bitset> levels_;
    std::vector<std::size_t> vert_;
    std::vector<int> colour_;
    Bitset u_, q_, scratch_;
    std::uint64_t nodes_ = 0;
    bool timed_out_ = false;
};

PartitionFamily family_of(int n, const std::vector<std::size_t>& vertices) {
    std::vector<Rank> ranks(vertices.begin(), vertices.end());
    return PartitionFamily::from_ranks(n, std::move(ranks));
}

} // namespace

std::size_t CompatibilityGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& row : adjacency) total += row.count();
    return total / 2;
}

CompatibilityGraph build_graph_serial(int n, int t) {
    require_searchable(n, t);
    CompatibilityGraph g;
    g.n = n;
    g.t = t;
    const auto tables = vertex_tables(n, g.sigma);
    const std::size_t nv = g.sigma.size();
    g.adjacency.assign(nv, Bitset(nv));
    for (std::size_t u = 0; u < nv; ++u)
        for (std::size_t v = u + 1; v < nv; ++v)
            if (common_blocks(std::span(tables.data() + u * n, n), std::span(tables.data() + v * n, n)) >= t) {
                g.adjacency[u].set(v);
                g.adjacency[v].set(u);
            }
    return g;
}

CompatibilityGraph build_graph(int n, int t, int threads) {
    require_searchable(n, t);
    CompatibilityGraph g;
    g.n = n;
    g.t = t;
    const auto tables = vertex_tables(n, g.sigma);
    const auto nv = static_cast<std::int64_t>(g.sigma.size());
    g.adjacency.assign(nv, Bitset(nv));
#pragma omp parallel for schedule(dynamic, 32) num_threads(std::max(1, threads))
    for (std::int64_t u = 0; u < nv; ++u) {
        const std::span row_u(tables.data() + u * n, static_cast<std::size_t>(n));
        for (std::int64_t v = 0; v < nv; ++v)
            if (v != u && common_blocks(row_u, std::span(tables.data() + v * n, n)) >= t) g.adjacency[u].set(v);
    }
    return g;
}

std::string_view to_string(SearchMode m) { return m == SearchMode::unrestricted ? "unrestricted" : "nontrivial"; }

SearchMode parse_search_mode(std::string_view s) {
    if (s == "unrestricted") return SearchMode::unrestricted;
    if (s == "nontrivial") return SearchMode::nontrivial;
    throw Error("unknown search mode '" + std::string(s) + "' (expected unrestricted or nontrivial)");
}

bool satisfies_mode(const PartitionFamily& a, int t, SearchMode mode) {
    if (!is_t_intersecting_serial(a, t)) return false;
    if (mode == SearchMode::unrestricted) return true;
    return !a.empty() && !triviality_witness(a, t).trivial();
}

SearchReport max_family(const CompatibilityGraph& g, SearchMode mode, const SearchOptions& options) {
    const auto start = Clock::now();
    const Deadline deadline{start + options.timeout};
    const int n = g.n;
    const int t = g.t;
    const BellTable table(n + 1);

    std::vector<std::size_t> seed;
    if (options.seed_incumbent) {
        std::vector<int> anchors(static_cast<std::size_t>(std::min(t, n)));
        std::iota(anchors.begin(), anchors.end(), 1);
        std::optional<PartitionFamily> feasible;
        if (mode == SearchMode::unrestricted && t <= n)
            feasible = construct_trivial(n, anchors);
        else if (mode == SearchMode::nontrivial && n >= t + 2)
            feasible = construct_hm(n, HmWitness{anchors, n});
        // H is not t-intersecting at n = t+2 for t >= 2 (two pair partitions
        // share only n-3 blocks), so the seed is checked rather than assumed.
        if (feasible && satisfies_mode(*feasible, t, mode))
            seed.assign(feasible->ranks().begin(), feasible->ranks().end());
    }

    BoundSearch bound(g, mode, deadline, seed);
    bound.run(options.threads);

    SearchReport rep;
    rep.n = n;
    rep.t = t;
    rep.mode = mode;
    rep.bound_nodes = bound.nodes();
    rep.optimal = !bound.timed_out();
    const auto omega = static_cast<std::size_t>(bound.best());
    rep.optimum = omega;

    std::vector<std::size_t> witness = bound.best_vertices();
    if (rep.optimal && omega > 0) {
        const std::function<bool(const std::vector<std::size_t>&)> take = [&](const std::vector<std::size_t>& c) {
            witness = c;
            return false;
        };
        LexSearch lex(g, mode, omega, deadline, take);
        lex.run();
        rep.nodes_explored = lex.nodes();
    }
    std::sort(witness.begin(), witness.end());
    rep.witness = family_of(n, witness);
    if (rep.witness.size() != omega) throw InternalError("witness size differs from the optimum");
    if (omega > 0 && !satisfies_mode(rep.witness, t, mode)) throw InternalError("search produced an infeasible witness");

    rep.hm_verdict = recognize_hm(rep.witness, t);
    rep.bounds.trivial = t <= n ? table.bell(n - t) : BigCount(0);
    rep.bounds.equals_trivial = rep.optimum == rep.bounds.trivial;
    if (n >= t + 2) {
        rep.bounds.hm_size = hm_size(table, n, t);
        rep.bounds.equals_hm = rep.optimum == *rep.bounds.hm_size;
    }
    rep.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    return rep;
}

ExtremalEnumeration enumerate_extremal(const CompatibilityGraph& g, SearchMode mode, std::size_t target,
                                       const std::function<bool(const PartitionFamily&)>& visit,
                                       const SearchOptions& options) {
    const Deadline deadline{Clock::now() + options.timeout};
    ExtremalEnumeration out;
    bool stopped = false;
    const std::function<bool(const std::vector<std::size_t>&)> each = [&](const std::vector<std::size_t>& c) {
        ++out.count;
        if (!visit(family_of(g.n, c))) {
            stopped = true;
            return false;
        }
        return true;
    };
    LexSearch lex(g, mode, target, deadline, each);
    lex.run();
    out.complete = !stopped && !lex.timed_out();
    return out;
}

} // namespace pekr
