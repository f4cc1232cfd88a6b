#include "pekr/family.hpp"

#include <algorithm>
#include <atomic>

#include "pekr/counting.hpp"
#include "pekr/errors.hpp"

namespace pekr {

namespace {

void require_pair(int n, int i, int j) {
    if (i < 1 || i > n || j < 1 || j > n)
        throw ElementError("pair (" + std::to_string(i) + "," + std::to_string(j) + ") outside 1.." +
                           std::to_string(n));
    if (i == j) throw ElementError("splitting needs i != j");
}

void validate_witness(int n, const HmWitness& w) {
    if (w.anchors.empty()) throw ElementError("HM witness needs at least one anchor");
    ElementMask seen = 0;
    auto take = [&](int e) {
        if (e < 1 || e > n) throw ElementError("witness element " + std::to_string(e) + " outside 1.." + std::to_string(n));
        const ElementMask bit = ElementMask{1} << (e - 1);
        if (seen & bit) throw ElementError("witness elements must be distinct");
        seen |= bit;
    };
    for (int a : w.anchors) take(a);
    take(w.pivot);
}

// Advances a sorted combination of [n] in lexicographic order.
bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    int x = k - 1;
    while (x >= 0 && c[x] == n - k + x + 1) --x;
    if (x < 0) return false;
    ++c[x];
    for (int y = x + 1; y < k; ++y) c[y] = c[y - 1] + 1;
    return true;
}

} // namespace

PartitionFamily::PartitionFamily(int n) : n_(n) {
    if (n < 1) throw RangeError("a family needs n >= 1");
}

PartitionFamily PartitionFamily::from_partitions(int n, std::span<const SetPartition> members) {
    std::vector<Rank> ranks;
    ranks.reserve(members.size());
    for (const auto& p : members) {
        if (p.size() != n)
            throw DimensionError("member of size " + std::to_string(p.size()) + " in a family over n=" +
                                 std::to_string(n));
        ranks.push_back(rank(p));
    }
    return from_ranks(n, std::move(ranks));
}

PartitionFamily PartitionFamily::from_ranks(int n, std::vector<Rank> ranks) {
    PartitionFamily f(n);
    std::sort(ranks.begin(), ranks.end());
    if (auto dup = std::adjacent_find(ranks.begin(), ranks.end()); dup != ranks.end())
        throw DuplicateMember("duplicate member " + to_text(unrank(n, *dup)));
    f.members_.reserve(ranks.size());
    for (Rank r : ranks) f.members_.push_back(unrank(n, r));
    f.ranks_ = std::move(ranks);
    return f;
}

bool PartitionFamily::contains(Rank r) const { return std::binary_search(ranks_.begin(), ranks_.end(), r); }

bool PartitionFamily::contains(const SetPartition& p) const { return p.size() == n_ && contains(rank(p)); }

BlockTable block_table(const SetPartition& p) {
    const auto masks = p.block_masks();
    BlockTable out(p.size());
    for (int k = 0; k < p.size(); ++k) out[k] = masks[p.rgs()[k]];
    return out;
}

int common_blocks(std::span<const ElementMask> p, std::span<const ElementMask> q) {
    int shared = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const ElementMask below = (ElementMask{1} << k) - 1;
        if (p[k] == q[k] && (p[k] & below) == 0) ++shared;
    }
    return shared;
}

bool is_t_intersecting_serial(const PartitionFamily& a, int t) {
    const auto& m = a.members();
    for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = x + 1; y < m.size(); ++y)
            if (common_blocks(m[x], m[y]) < t) return false;
    return true;
}

bool is_t_intersecting(const PartitionFamily& a, int t, int threads) {
    const auto& m = a.members();
    const auto count = static_cast<std::int64_t>(m.size());
    std::vector<BlockTable> tables;
    tables.reserve(m.size());
    for (const auto& p : m) tables.push_back(block_table(p));

    std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 16) num_threads(std::max(1, threads))
    for (std::int64_t x = 0; x < count; ++x) {
        if (failed.load(std::memory_order_relaxed)) continue;
        for (std::int64_t y = x + 1; y < count; ++y)
            if (common_blocks(tables[x], tables[y]) < t) {
                failed.store(true, std::memory_order_relaxed);
                break;
            }
    }
    return !failed.load();
}

TrivialityReport triviality_witness(const PartitionFamily& a, int t) {
    if (a.empty()) throw EmptyFamilyError("triviality is undefined for an empty family");
    ElementSet common = ElementSet::full(a.ground_size());
    for (const auto& p : a.members()) common = common & sigma(p);
    TrivialityReport rep;
    rep.common = common;
    if (common.size() >= t) {
        ElementMask bits = 0;
        ElementMask rest = common.bits();
        for (int k = 0; k < t; ++k) {
            const ElementMask low = rest & (~rest + 1);
            bits |= low;
            rest ^= low;
        }
        rep.witness = ElementSet(bits);
    }
    return rep;
}

SplitResult family_split(const PartitionFamily& a, int i, int j) {
    const int n = a.ground_size();
    require_pair(n, i, j);
    std::vector<Rank> stay, move, image;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& p = a.members()[k];
        if (p.rgs()[i - 1] != p.rgs()[j - 1]) {
            stay.push_back(a.ranks()[k]);
            continue;
        }
        const Rank s = rank(split(p, i, j));
        if (a.contains(s)) {
            stay.push_back(a.ranks()[k]);
        } else {
            move.push_back(a.ranks()[k]);
            image.push_back(s);
        }
    }
    std::vector<Rank> merged = stay;
    merged.insert(merged.end(), image.begin(), image.end());

    SplitResult out{{PartitionFamily::from_ranks(n, std::move(stay)), PartitionFamily::from_ranks(n, std::move(move)),
                     PartitionFamily(n)},
                    PartitionFamily(n)};
    try {
        out.decomposition.image_of_move = PartitionFamily::from_ranks(n, std::move(image));
        out.result = PartitionFamily::from_ranks(n, std::move(merged));
    } catch (const DuplicateMember&) {
        throw InternalError("split is not injective on the moving part");
    }
    if (out.result.size() != a.size()) throw InternalError("family split changed the family size");
    return out;
}

bool is_compressed(const PartitionFamily& a) {
    const int n = a.ground_size();
    for (const auto& p : a.members())
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                if (i == j || p.rgs()[i - 1] != p.rgs()[j - 1]) continue;
                if (!a.contains(split(p, i, j))) return false;
            }
    return true;
}

std::size_t total_singletons(const PartitionFamily& a) {
    std::size_t total = 0;
    for (const auto& p : a.members()) total += static_cast<std::size_t>(sigma(p).size());
    return total;
}

CompressionReport compress(const PartitionFamily& a, int t, PairOrder order, bool verify) {
    if (!is_t_intersecting(a, t)) throw NotIntersectingError("compress needs a t-intersecting family");
    const int n = a.ground_size();
    const std::size_t step_bound = static_cast<std::size_t>(n) * a.size();

    CompressionReport rep{a, a, {}, 0, false, total_singletons(a), 0};
    PartitionFamily current = a;
    while (true) {
        ++rep.passes;
        bool changed = false;
        bool skipped = false;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                if (i == j) continue;
                auto r = family_split(current, i, j);
                if (r.decomposition.move.empty()) continue;
                if (order == PairOrder::nontrivial_preserving && !triviality_witness(current, t).trivial() &&
                    triviality_witness(r.result, t).trivial()) {
                    skipped = true;
                    continue;
                }
                if (verify && !is_t_intersecting(r.result, t))
                    throw InternalError("splitting broke the t-intersecting property");
                rep.steps.push_back({i, j, r.decomposition.move.size()});
                current = std::move(r.result);
                changed = true;
                if (rep.steps.size() > step_bound) throw InternalError("compression exceeded n*|A| effective steps");
            }
        if (!changed) {
            rep.stuck = skipped;
            break;
        }
    }
    rep.final_singletons = total_singletons(current);
    rep.final_family = std::move(current);
    if (verify) {
        if (order == PairOrder::lexicographic && !is_compressed(rep.final_family))
            throw InternalError("compression stopped at a non-compressed family");
        if (!rep.steps.empty() && rep.final_singletons <= rep.initial_singletons)
            throw InternalError("compression did not increase the singleton count");
    }
    return rep;
}

SigmaFamily sigma_family(const PartitionFamily& a) {
    SigmaFamily out;
    out.multiset_size = a.size();
    for (const auto& p : a.members()) out.sets.push_back(sigma(p));
    std::sort(out.sets.begin(), out.sets.end());
    out.sets.erase(std::unique(out.sets.begin(), out.sets.end()), out.sets.end());
    return out;
}

bool sets_t_intersecting(std::span<const ElementSet> sets, int t) {
    for (std::size_t x = 0; x < sets.size(); ++x)
        for (std::size_t y = x + 1; y < sets.size(); ++y)
            if ((sets[x] & sets[y]).size() < t) return false;
    return true;
}

PartitionFamily construct_trivial(int n, std::span<const int> anchors) {
    const int t = static_cast<int>(anchors.size());
    if (n < 1 || n > kEnumerationLimit) throw LimitError("construct_trivial supports 1 <= n <= 14");
    if (t > n) throw ElementError("more anchors than elements");
    std::vector<bool> is_anchor(n + 1, false);
    for (int a : anchors) {
        if (a < 1 || a > n) throw ElementError("anchor " + std::to_string(a) + " outside 1.." + std::to_string(n));
        if (is_anchor[a]) throw ElementError("anchors must be distinct");
        is_anchor[a] = true;
    }
    std::vector<int> rest;
    for (int e = 1; e <= n; ++e)
        if (!is_anchor[e]) rest.push_back(e);

    std::vector<int> labels(n);
    for (int e = 1; e <= n; ++e)
        if (is_anchor[e]) labels[e - 1] = 1000 + e;
    if (rest.empty()) return PartitionFamily::from_partitions(n, std::vector{SetPartition::from_labels(labels)});

    std::vector<Rank> ranks;
    for (const auto& q : enumerate_partitions(static_cast<int>(rest.size()))) {
        for (std::size_t k = 0; k < rest.size(); ++k) labels[rest[k] - 1] = q.rgs()[k];
        ranks.push_back(rank(SetPartition::from_labels(labels)));
    }
    return PartitionFamily::from_ranks(n, std::move(ranks));
}

bool hm_contains(const HmWitness& w, const SetPartition& p) {
    const int n = p.size();
    const ElementSet s = sigma(p);
    const ElementSet anchors = ElementSet::of(w.anchors);
    if (anchors.is_subset_of(s)) {
        const ElementMask extra = s.bits() & ~anchors.bits() & ~(ElementMask{1} << (w.pivot - 1));
        return extra != 0;
    }
    // Q(a_l,b): everything but {a_l,b} is a singleton.
    for (int a : w.anchors) {
        const ElementMask pair = (ElementMask{1} << (a - 1)) | (ElementMask{1} << (w.pivot - 1));
        if (s.bits() == (ElementSet::full(n).bits() & ~pair)) return true;
    }
    return false;
}

PartitionFamily construct_hm(int n, const HmWitness& w) {
    validate_witness(n, w);
    if (n < w.t() + 2) throw RangeError("construct_hm needs n >= t+2");
    if (n > kEnumerationLimit) throw LimitError("construct_hm supports n <= 14");
    const ElementSet anchors = ElementSet::of(w.anchors);
    const ElementMask excluded = anchors.bits() | (ElementMask{1} << (w.pivot - 1));
    std::vector<Rank> ranks;
    Rank r = 0;
    for (const auto& p : enumerate_partitions(n)) {
        const ElementSet s = sigma(p);
        if (anchors.is_subset_of(s) && (s.bits() & ~excluded) != 0) ranks.push_back(r);
        ++r;
    }
    for (int a : w.anchors) ranks.push_back(rank(pair_partition(n, a, w.pivot)));
    return PartitionFamily::from_ranks(n, std::move(ranks));
}

std::optional<HmWitness> recognize_hm(const PartitionFamily& a, int t, int threads) {
    const int n = a.ground_size();
    if (t < 1 || n < t + 2 || a.empty()) return std::nullopt;
    const BellTable table(n);
    if (BigCount(a.size()) != hm_size(table, n, t)) return std::nullopt;

    std::vector<HmWitness> candidates;
    std::vector<int> comb(t);
    for (int k = 0; k < t; ++k) comb[k] = k + 1;
    do {
        const ElementSet anchors = ElementSet::of(comb);
        for (int b = 1; b <= n; ++b)
            if (!anchors.contains(b)) candidates.push_back({comb, b});
    } while (next_combination(comb, n));

    const auto count = static_cast<std::int64_t>(candidates.size());
    std::vector<char> match(candidates.size(), 0);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads))
    for (std::int64_t c = 0; c < count; ++c) {
        bool all = true;
        for (const auto& p : a.members())
            if (!hm_contains(candidates[c], p)) {
                all = false;
                break;
            }
        match[c] = all;
    }
    for (std::size_t c = 0; c < candidates.size(); ++c)
        if (match[c]) return candidates[c];
    return std::nullopt;
}

SetPartition anchored_partition(int n, const HmWitness& w, int e) {
    std::vector<int> labels(n, 0);
    for (int a : w.anchors) labels[a - 1] = 1000 + a;
    labels[e - 1] = 2000;
    return SetPartition::from_labels(labels);
}

bool undo_premise_holds(const PartitionFamily& a, int t, int i, int j, const PartitionFamily& h) {
    if (a.size() != h.size()) return false;
    // Cheap image test first: every split image must land in H.
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto& p = a.members()[k];
        if (p.rgs()[i - 1] != p.rgs()[j - 1]) {
            if (!h.contains(a.ranks()[k])) return false;
            continue;
        }
        const Rank s = rank(split(p, i, j));
        if (!h.contains(a.contains(s) ? a.ranks()[k] : s)) return false;
    }
    return family_split(a, i, j).result == h && is_t_intersecting(a, t);
}

UndoVerdict verify_undo(const PartitionFamily& a, int t, int i, int j, const HmWitness& w) {
    const int n = a.ground_size();
    require_pair(n, i, j);
    validate_witness(n, w);
    if (w.t() != t) throw RangeError("witness has a different number of anchors than t");
    if (n < t + 3) throw RangeError("undo verification needs n >= t+3");

    const PartitionFamily h = construct_hm(n, w);
    if (!is_t_intersecting(a, t)) throw PremiseNotMet("A is not t-intersecting");
    if (family_split(a, i, j).result != h) throw PremiseNotMet("S_ij(A) differs from the HM family");

    UndoVerdict v;
    v.conclusion_holds = a == h;
    if (!v.conclusion_holds) {
        for (const auto& p : a.members())
            if (!h.contains(p)) {
                v.counterexample = p;
                break;
            }
        if (!v.counterexample)
            for (const auto& p : h.members())
                if (!a.contains(p)) {
                    v.counterexample = p;
                    break;
                }
    }
    const ElementSet excluded = ElementSet::of(w.anchors) | ElementSet::of({w.pivot});
    for (int e = 1; e <= n; ++e)
        if (!excluded.contains(e) && !a.contains(anchored_partition(n, w, e))) v.missing_anchored.push_back(e);
    for (int l : w.anchors)
        if (!a.contains(pair_partition(n, l, w.pivot))) v.missing_pairs.push_back(l);
    return v;
}

UnsplitSearchReport search_unsplit_counterexamples(int n, const HmWitness& w) {
    validate_witness(n, w);
    const int t = w.t();
    if (n < t + 3) throw RangeError("undo search needs n >= t+3");
    const PartitionFamily h = construct_hm(n, w);

    UnsplitSearchReport rep;
    rep.n = n;
    rep.witness = w;
    for (std::size_t idx = 0; idx < h.size(); ++idx) {
        const auto& p = h.members()[idx];
        const auto masks = p.block_masks();
        for (int i = 1; i <= n; ++i) {
            const int bi = p.rgs()[i - 1];
            if (std::popcount(masks[bi]) != 1) continue;
            for (int target = 0; target < p.block_count(); ++target) {
                if (target == bi) continue;
                std::vector<int> labels(p.rgs().begin(), p.rgs().end());
                labels[i - 1] = target;
                const Rank merged = rank(SetPartition::from_labels(labels));
                if (h.contains(merged)) continue;

                std::vector<Rank> ranks = h.ranks();
                ranks[idx] = merged;
                const auto a = PartitionFamily::from_ranks(n, std::move(ranks));
                ++rep.perturbations;
                for (int x = 1; x <= n; ++x)
                    for (int y = 1; y <= n; ++y) {
                        if (x == y) continue;
                        ++rep.pair_checks;
                        if (!undo_premise_holds(a, t, x, y, h)) continue;
                        ++rep.premise_held;
                        rep.counterexamples.push_back(a);
                    }
            }
        }
    }
    return rep;
}

PartitionFamily relabel(const PartitionFamily& a, std::span<const int> perm) {
    std::vector<SetPartition> out;
    out.reserve(a.size());
    for (const auto& p : a.members()) out.push_back(relabel(p, perm));
    return PartitionFamily::from_partitions(a.ground_size(), out);
}

} // namespace pekr
