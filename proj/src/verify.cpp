#include "pekr/verify.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "pekr/counting.hpp"
#include "pekr/errors.hpp"
#include "pekr/family.hpp"
#include "pekr/io.hpp"
#include "pekr/sampling.hpp"
#include "pekr/search.hpp"

namespace pekr {

namespace {

struct Range {
    int lo;
    int hi;
};

Range clip(const VerifyConfig& c, int lo, int hi) {
    return {std::max(lo, c.n_min.value_or(lo)), std::min(hi, c.n_max.value_or(hi))};
}

Finding make(std::string claim, bool asymptotic = false) {
    Finding f;
    f.claim = std::move(claim);
    f.asymptotic = asymptotic;
    return f;
}

void refute(Finding& f, std::string evidence, std::string counterexample) {
    if (f.status == FindingStatus::refuted) return;
    f.status = FindingStatus::refuted;
    f.evidence = std::move(evidence);
    f.counterexample = std::move(counterexample);
}

std::string family_with_note(const PartitionFamily& a, int t, const std::string& note) {
    return "# " + note + "\n" + emit_family_text(a, t);
}

Finding identity_finding(const std::string& claim, Range r) {
    Finding f = make(claim);
    f.parameters = {{"n_min", r.lo}, {"n_max", r.hi}};
    const int lo = std::max(0, r.lo);
    if (r.hi < lo) {
        f.status = FindingStatus::skipped;
        f.evidence = "empty range";
        return f;
    }
    const BellTable table(r.hi + 1);
    const auto rep = verify_identities(table);
    std::optional<int> failure;
    if (claim == "bell-sum-identity") failure = rep.sum_identity_failure;
    if (claim == "bell-sf-recurrence") failure = rep.sf_recurrence_failure;
    if (claim == "bell-adjacent-identity") failure = rep.adjacent_sf_failure;
    if (failure && *failure >= lo && *failure <= r.hi)
        refute(f, "identity fails", "n=" + std::to_string(*failure) + " B=" + to_decimal(table.bell(*failure)) +
                                        " B~=" + to_decimal(table.bell_sf(*failure)));
    else
        f.evidence = "exact for n=" + std::to_string(lo) + ".." + std::to_string(r.hi);
    return f;
}

Finding enum_count_finding(Range r, int threads) {
    Finding f = make("enum-count");
    f.parameters = {{"n_min", r.lo}, {"n_max", r.hi}};
    const int hi = std::min(r.hi, 12);
    const BellTable table(std::max(hi, 1));
    for (int n = std::max(1, r.lo); n <= hi; ++n) {
        const auto all = count_partitions(n, [](const SetPartition&) { return true; }, threads);
        const auto sf = count_partitions(n, [](const SetPartition& p) { return sigma(p).empty(); }, threads);
        if (BigCount(all) != table.bell(n) || BigCount(sf) != table.bell_sf(n))
            refute(f, "enumeration disagrees with the recurrence",
                   "n=" + std::to_string(n) + " enumerated=" + std::to_string(all) + "/" + std::to_string(sf) +
                       " table=" + to_decimal(table.bell(n)) + "/" + to_decimal(table.bell_sf(n)));
    }
    if (f.status == FindingStatus::verified) f.evidence = "B_n and B~_n match enumeration";
    return f;
}

std::pair<Finding, Finding> hm_findings(const VerifyConfig& c) {
    Finding size = make("hm-size");
    Finding inter = make("hm-intersecting");
    const auto r = clip(c, 3, 9);
    const int t_hi = std::min(c.t_max, 3);
    const BellTable table(std::max(r.hi, 2));
    int cases = 0;
    std::vector<std::string> boundary;
    for (int t = 1; t <= t_hi; ++t)
        for (int n = std::max(r.lo, t + 2); n <= r.hi; ++n) {
            std::vector<int> anchors(t);
            for (int k = 0; k < t; ++k) anchors[k] = k + 1;
            const auto h = construct_hm(n, HmWitness{anchors, n});
            const std::string at = "n=" + std::to_string(n) + " t=" + std::to_string(t);
            ++cases;
            if (BigCount(h.size()) != hm_size(table, n, t))
                refute(size, "size formula differs from construction",
                       at + " constructed=" + std::to_string(h.size()) + " formula=" + to_decimal(hm_size(table, n, t)));
            const bool ok = is_t_intersecting(h, t, c.threads) && !triviality_witness(h, t).trivial();
            if (n == t + 2) {
                if (!ok) boundary.push_back(at);
            } else if (!ok) {
                refute(inter, "HM family is not non-trivially t-intersecting", family_with_note(h, t, at));
            }
        }
    size.parameters = {{"n_max", r.hi}, {"t_max", t_hi}};
    inter.parameters = {{"n_max", r.hi}, {"t_max", t_hi}};
    if (size.status == FindingStatus::verified) size.evidence = std::to_string(cases) + " (n,t) cases";
    if (inter.status == FindingStatus::verified) {
        inter.evidence = "non-trivially t-intersecting for t+3 <= n";
        if (!boundary.empty()) {
            inter.evidence += "; fails at n=t+2 (";
            for (std::size_t k = 0; k < boundary.size(); ++k) inter.evidence += (k ? ", " : "") + boundary[k];
            inter.evidence += ")";
        }
    }
    return {size, inter};
}

// Exhaustive n=4, t=1, |A| <= 3 plus random samples at n=5,6.
std::pair<Finding, Finding> split_findings(const VerifyConfig& c) {
    Finding size = make("split-size");
    Finding inter = make("split-intersecting");
    std::size_t families = 0;
    auto check = [&](const PartitionFamily& a, int t) {
        ++families;
        const bool was = is_t_intersecting(a, t);
        for (int i = 1; i <= a.ground_size(); ++i)
            for (int j = 1; j <= a.ground_size(); ++j) {
                if (i == j) continue;
                const auto r = family_split(a, i, j).result;
                if (r.size() != a.size())
                    refute(size, "size changed under S_" + std::to_string(i) + std::to_string(j),
                           family_with_note(a, t, "i=" + std::to_string(i) + " j=" + std::to_string(j)));
                if (was && !is_t_intersecting(r, t))
                    refute(inter, "intersection lost under S_" + std::to_string(i) + std::to_string(j),
                           family_with_note(a, t, "i=" + std::to_string(i) + " j=" + std::to_string(j)));
            }
    };
    const auto r = clip(c, 4, 6);
    if (r.lo <= 4 && r.hi >= 4) {
        const Rank total = partition_count(4);
        for (Rank x = 0; x < total; ++x) {
            check(PartitionFamily::from_ranks(4, {x}), 1);
            for (Rank y = x + 1; y < total; ++y) {
                check(PartitionFamily::from_ranks(4, {x, y}), 1);
                for (Rank z = y + 1; z < total; ++z) check(PartitionFamily::from_ranks(4, {x, y, z}), 1);
            }
        }
    }
    std::mt19937_64 rng(c.seed);
    for (int n = std::max(5, r.lo); n <= std::min(6, r.hi); ++n)
        for (int t = 1; t <= std::min(2, c.t_max); ++t)
            for (std::size_t s = 0; s < c.samples; ++s) {
                check(random_family(n, 12, rng), t);
                check(random_t_intersecting_family(n, t, 16, rng), t);
            }
    for (Finding* f : {&size, &inter}) {
        f->parameters = {{"seed", c.seed}, {"samples", c.samples}};
        if (f->status == FindingStatus::verified) f->evidence = std::to_string(families) + " families, all pairs";
    }
    return {size, inter};
}

std::pair<Finding, Finding> compress_findings(const VerifyConfig& c) {
    Finding fix = make("compress-fixpoint");
    Finding sig = make("sigma-intersecting");
    std::mt19937_64 rng(c.seed + 1);
    const auto r = clip(c, 3, 6);
    std::size_t runs = 0;
    for (int n = r.lo; n <= r.hi; ++n)
        for (int t = 1; t <= std::min(2, c.t_max); ++t)
            for (std::size_t s = 0; s < c.samples; ++s) {
                const auto a = random_t_intersecting_family(n, t, 16, rng);
                const auto rep = compress(a, t);
                ++runs;
                const auto note = family_with_note(a, t, "compress input");
                if (rep.steps.size() > static_cast<std::size_t>(n) * a.size())
                    refute(fix, "more than n*|A| effective steps", note);
                if (rep.final_family.size() != a.size() || !is_compressed(rep.final_family) ||
                    !is_t_intersecting(rep.final_family, t))
                    refute(fix, "final family not a same-size compressed t-intersecting family", note);
                const auto sf = sigma_family(rep.final_family);
                if (!sets_t_intersecting(sf.sets, t)) refute(sig, "sigma image not t-intersecting", note);
            }
    for (Finding* f : {&fix, &sig}) {
        f->parameters = {{"seed", c.seed + 1}, {"samples", c.samples}, {"n_max", r.hi}};
        if (f->status == FindingStatus::verified) f->evidence = std::to_string(runs) + " random families";
    }
    return {fix, sig};
}

Finding undo_finding(const VerifyConfig& c) {
    Finding f = make("undo-hm");
    const auto r = clip(c, 4, 7);
    std::size_t perturbations = 0;
    for (int t = 1; t <= std::min(2, c.t_max); ++t)
        for (int n = std::max(r.lo, t + 3); n <= r.hi; ++n) {
            std::vector<int> anchors(t);
            for (int k = 0; k < t; ++k) anchors[k] = k + 1;
            const auto rep = search_unsplit_counterexamples(n, HmWitness{anchors, n});
            perturbations += rep.perturbations;
            if (!rep.counterexamples.empty())
                refute(f, "un-split family maps onto H", family_with_note(rep.counterexamples.front(), t, "A != H"));
        }
    f.parameters = {{"n_max", r.hi}, {"t_max", std::min(2, c.t_max)}};
    if (f.status == FindingStatus::verified) f.evidence = std::to_string(perturbations) + " perturbations, none maps onto H";
    return f;
}

std::vector<Finding> search_findings(const VerifyConfig& c, const std::vector<std::string>& wanted) {
    auto want = [&](std::string_view id) { return std::find(wanted.begin(), wanted.end(), id) != wanted.end(); };
    Finding tf = make("trivial-feasible");
    Finding topt = make("trivial-optimal", true);
    Finding hf = make("hm-feasible");
    Finding hopt = make("hm-optimal", true);
    Finding huniq = make("hm-unique", true);
    const auto r = clip(c, 2, 6);
    const SearchOptions opts{c.threads, c.timeout, true};
    std::vector<std::string> topt_miss, hopt_miss, huniq_miss, huniq_ok;
    for (int t = 1; t <= std::min(2, c.t_max); ++t)
        for (int n = std::max(r.lo, t + 1); n <= r.hi; ++n) {
            const auto g = build_graph(n, t, c.threads);
            const std::string at = "n=" + std::to_string(n) + " t=" + std::to_string(t);
            if (want("trivial-feasible") || want("trivial-optimal")) {
                const auto rep = max_family(g, SearchMode::unrestricted, opts);
                if (rep.optimal && rep.optimum < rep.bounds.trivial)
                    refute(tf, "unrestricted optimum below B_{n-t}", at);
                if (!rep.bounds.equals_trivial) topt_miss.push_back(at + " optimum=" + to_decimal(rep.optimum));
            }
            if (n < t + 3) continue;
            if (want("hm-feasible") || want("hm-optimal") || want("hm-unique")) {
                const auto rep = max_family(g, SearchMode::nontrivial, opts);
                if (rep.optimal && rep.optimum < *rep.bounds.hm_size) refute(hf, "nontrivial optimum below HM size", at);
                if (!rep.bounds.equals_hm) {
                    hopt_miss.push_back(at + " optimum=" + to_decimal(rep.optimum));
                } else if (want("hm-unique")) {
                    bool all_hm = true;
                    const auto e = enumerate_extremal(
                        g, SearchMode::nontrivial, static_cast<std::size_t>(rep.optimum),
                        [&](const PartitionFamily& a) {
                            if (!recognize_hm(a, t)) all_hm = false;
                            return all_hm;
                        },
                        opts);
                    if (!all_hm || !e.complete)
                        huniq_miss.push_back(at);
                    else
                        huniq_ok.push_back(at + " (" + std::to_string(e.count) + " extremal families)");
                }
            }
        }
    auto settle = [](Finding& f, const std::vector<std::string>& misses, const std::string& ok) {
        if (misses.empty()) {
            f.evidence = ok;
            return;
        }
        f.status = FindingStatus::skipped;
        std::string e = "not attained at";
        for (std::size_t k = 0; k < misses.size(); ++k) e += (k ? "; " : " ") + misses[k];
        f.evidence = e;
    };
    settle(topt, topt_miss, "optimum equals B_{n-t} on the grid");
    settle(hopt, hopt_miss, "nontrivial optimum equals the HM size on the grid");
    settle(huniq, huniq_miss, "every extremal family is an HM family where equality holds");
    if (!huniq_ok.empty()) {
        huniq.evidence += "; unique at";
        for (std::size_t k = 0; k < huniq_ok.size(); ++k) huniq.evidence += (k ? "; " : " ") + huniq_ok[k];
    }
    if (tf.status == FindingStatus::verified) tf.evidence = "trivial family feasible on the grid";
    if (hf.status == FindingStatus::verified) hf.evidence = "HM family feasible on the grid";

    std::vector<Finding> out;
    for (Finding* f : {&tf, &topt, &hf, &hopt, &huniq}) {
        f->parameters = {{"n_max", r.hi}, {"t_max", std::min(2, c.t_max)}};
        if (want(f->claim)) out.push_back(*f);
    }
    return out;
}

Finding scan_finding(const VerifyConfig& c, const std::string& claim) {
    Finding f = make(claim, true);
    const auto lemma = parse_lemma(claim == "ekr-bound" ? "ekr-bound" : claim.substr(6));
    const int hi = std::min(c.n_max.value_or(40), 40);
    const BellTable table(hi + 1);
    std::vector<std::string> misses;
    nlohmann::json thresholds = nlohmann::json::array();
    const std::vector<int> multipliers = lemma == Lemma::less ? std::vector<int>{1, 2, 3, 4} : std::vector<int>{1};
    for (int t = 1; t <= c.t_max; ++t)
        for (int cc : multipliers) {
            ScanParams p;
            p.c = cc;
            const auto rep = threshold_scan(table, lemma, t, p, 1, hi);
            thresholds.push_back({{"t", t}, {"c", cc}, {"status", std::string(to_string(rep.status))},
                                  {"threshold", rep.threshold ? nlohmann::json(*rep.threshold) : nlohmann::json(nullptr)}});
            if (rep.status != ScanStatus::holds_from)
                misses.push_back("t=" + std::to_string(t) + (lemma == Lemma::less ? " c=" + std::to_string(cc) : "") +
                                 " (" + std::string(to_string(rep.status)) + ")");
        }
    f.parameters = {{"n_max", hi}, {"t_max", c.t_max}, {"thresholds", thresholds}};
    if (misses.empty()) {
        f.evidence = "persistent threshold found for every t";
    } else {
        f.status = FindingStatus::skipped;
        f.evidence = "no persistent threshold up to n=" + std::to_string(hi) + " for";
        for (std::size_t k = 0; k < misses.size(); ++k) f.evidence += (k ? "; " : " ") + misses[k];
    }
    return f;
}

} // namespace

std::string_view to_string(FindingStatus s) {
    switch (s) {
    case FindingStatus::verified: return "verified";
    case FindingStatus::refuted: return "refuted";
    case FindingStatus::skipped: return "skipped";
    }
    return "?";
}

const std::vector<std::string_view>& known_claims() {
    static const std::vector<std::string_view> claims{
        "bell-sum-identity", "bell-sf-recurrence", "bell-adjacent-identity", "enum-count",
        "hm-size",           "hm-intersecting",    "split-size",         "split-intersecting",     "compress-fixpoint",
        "sigma-intersecting", "undo-hm",           "trivial-feasible",       "trivial-optimal",
        "hm-feasible",       "hm-optimal",         "hm-unique",              "lemma-less",
        "lemma-less02",      "lemma-less03",       "ekr-bound"};
    return claims;
}

std::vector<Finding> cmd_verify(const VerifyConfig& config) {
    std::vector<std::string> wanted = config.claims;
    if (wanted.empty())
        for (auto id : known_claims()) wanted.emplace_back(id);
    for (const auto& id : wanted)
        if (std::find(known_claims().begin(), known_claims().end(), id) == known_claims().end())
            throw Error("unknown claim '" + id + "'");
    auto want = [&](std::string_view id) { return std::find(wanted.begin(), wanted.end(), id) != wanted.end(); };

    std::vector<Finding> out;
    for (const char* id : {"bell-sum-identity", "bell-sf-recurrence", "bell-adjacent-identity"})
        if (want(id)) out.push_back(identity_finding(id, clip(config, 0, 25)));
    if (want("enum-count")) out.push_back(enum_count_finding(clip(config, 1, 12), config.threads));
    if (want("hm-size") || want("hm-intersecting")) {
        auto [a, b] = hm_findings(config);
        if (want("hm-size")) out.push_back(a);
        if (want("hm-intersecting")) out.push_back(b);
    }
    if (want("split-size") || want("split-intersecting")) {
        auto [a, b] = split_findings(config);
        if (want("split-size")) out.push_back(a);
        if (want("split-intersecting")) out.push_back(b);
    }
    if (want("compress-fixpoint") || want("sigma-intersecting")) {
        auto [a, b] = compress_findings(config);
        if (want("compress-fixpoint")) out.push_back(a);
        if (want("sigma-intersecting")) out.push_back(b);
    }
    if (want("undo-hm")) out.push_back(undo_finding(config));
    if (want("trivial-feasible") || want("trivial-optimal") || want("hm-feasible") || want("hm-optimal") ||
        want("hm-unique"))
        for (auto& f : search_findings(config, wanted)) out.push_back(std::move(f));
    for (const char* id : {"lemma-less", "lemma-less02", "lemma-less03", "ekr-bound"})
        if (want(id)) out.push_back(scan_finding(config, id));
    return out;
}

int verify_exit_code(const std::vector<Finding>& findings) {
    int code = 0;
    for (const auto& f : findings) {
        if (f.status == FindingStatus::refuted && !f.asymptotic) return 1;
        if (f.status != FindingStatus::verified && f.asymptotic) code = 2;
    }
    return code;
}

nlohmann::json findings_json(const std::vector<Finding>& findings) {
    auto arr = nlohmann::json::array();
    for (const auto& f : findings) {
        arr.push_back({{"claim", f.claim},
                       {"status", std::string(to_string(f.status))},
                       {"asymptotic", f.asymptotic},
                       {"parameters", f.parameters},
                       {"evidence", f.evidence},
                       {"counterexample", f.counterexample ? nlohmann::json(*f.counterexample) : nlohmann::json(nullptr)}});
    }
    return {{"findings", arr}, {"exit_code", verify_exit_code(findings)}};
}

std::string findings_text(const std::vector<Finding>& findings) {
    std::ostringstream out;
    for (const auto& f : findings) {
        out << (f.status == FindingStatus::verified ? "[ok]   " : f.status == FindingStatus::refuted ? "[FAIL] " : "[skip] ")
            << f.claim << (f.asymptotic ? " (asymptotic)" : "") << ": " << f.evidence << "\n";
        if (f.counterexample) out << "       counterexample:\n" << *f.counterexample << "\n";
    }
    return out.str();
}

} // namespace pekr
