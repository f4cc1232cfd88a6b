// pekr: command-line front end for the partition EKR toolkit.

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pekr/counting.hpp"
#include "pekr/errors.hpp"
#include "pekr/family.hpp"
#include "pekr/io.hpp"
#include "pekr/partition.hpp"
#include "pekr/search.hpp"
#include "pekr/verify.hpp"

using namespace pekr;

namespace {

struct Common {
    std::string format = "text";
    int threads = 0;
    std::string out;
};

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("PEKR_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
        throw Error(std::string("PEKR_THREADS must be a positive integer (got '") + env + "')");
    }
    return 1;
}

void write_family(const PartitionFamily& a, std::optional<int> t, const Common& c) {
    const auto fmt = parse_output_format(c.format);
    if (!c.out.empty()) {
        emit_family(a, t, c.out, fmt);
        return;
    }
    if (fmt == OutputFormat::json)
        std::cout << family_json(a, t).dump() << "\n";
    else
        std::cout << emit_family_text(a, t);
}

int require_t(std::optional<int> flag, const FamilyFile& f) {
    if (flag) return *flag;
    if (f.t) return *f.t;
    throw Error("t is neither given with --t nor in the file header");
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s;
}

void add_common(CLI::App* cmd, Common& c, bool with_out) {
    cmd->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--threads", c.threads, "worker threads (default: PEKR_THREADS or 1)");
    if (with_out) cmd->add_option("-o,--out", c.out, "write the family to a file instead of stdout");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact tools for t-intersecting families of set partitions"};
    app.require_subcommand(1);
    Common common;
    int code = 0;

    // bell
    int bell_max = 10;
    auto* bell = app.add_subcommand("bell", "Bell and singleton-free Bell numbers");
    bell->add_option("--n-max", bell_max, "last row")->check(CLI::NonNegativeNumber);
    add_common(bell, common, false);
    bell->callback([&] {
        const BellTable table(bell_max);
        if (parse_output_format(common.format) == OutputFormat::json) {
            auto rows = nlohmann::json::array();
            for (int n = 0; n <= bell_max; ++n) rows.push_back(bell_row_json(table, n));
            std::cout << rows.dump() << "\n";
            return;
        }
        std::vector<std::string> b, s;
        std::size_t wb = 4, ws = 7;
        for (int n = 0; n <= bell_max; ++n) {
            b.push_back(to_decimal(table.bell(n)));
            s.push_back(to_decimal(table.bell_sf(n)));
            wb = std::max(wb, b.back().size());
            ws = std::max(ws, s.back().size());
        }
        std::cout << std::setw(3) << "n" << "  " << std::setw(static_cast<int>(wb)) << "bell" << "  "
                  << std::setw(static_cast<int>(ws)) << "bell_sf" << "\n";
        for (int n = 0; n <= bell_max; ++n)
            std::cout << std::setw(3) << n << "  " << std::setw(static_cast<int>(wb)) << b[n] << "  "
                      << std::setw(static_cast<int>(ws)) << s[n] << "\n";
    });

    // enumerate
    int en_n = 0;
    bool en_sf = false, en_count = false, en_rgs = false;
    auto* enumerate = app.add_subcommand("enumerate", "List the partitions of [n] in lexicographic rgs order");
    enumerate->add_option("--n", en_n, "ground set size")->required();
    enumerate->add_flag("--singleton-free", en_sf, "only partitions without singleton blocks");
    enumerate->add_flag("--count", en_count, "print the count only");
    enumerate->add_flag("--rgs", en_rgs, "print restricted growth strings");
    add_common(enumerate, common, false);
    enumerate->callback([&] {
        const int threads = resolve_threads(common.threads);
        auto keep = [&](const SetPartition& p) { return !en_sf || sigma(p).empty(); };
        const bool json = parse_output_format(common.format) == OutputFormat::json;
        if (en_count) {
            const auto c = count_partitions(en_n, keep, threads);
            if (json)
                std::cout << nlohmann::json{{"n", en_n}, {"count", std::to_string(c)}}.dump() << "\n";
            else
                std::cout << c << "\n";
            return;
        }
        auto arr = nlohmann::json::array();
        for (const auto& p : enumerate_partitions(en_n)) {
            if (!keep(p)) continue;
            const auto s = en_rgs ? to_rgs_text(p) : to_text(p);
            if (json)
                arr.push_back(s);
            else
                std::cout << s << "\n";
        }
        if (json) std::cout << nlohmann::json{{"n", en_n}, {"partitions", arr}}.dump() << "\n";
    });

    // intersect
    std::string in_path;
    std::optional<int> t_flag;
    auto* intersect = app.add_subcommand("intersect", "Check that a family is t-intersecting and classify it");
    intersect->add_option("file", in_path, "family file")->required();
    intersect->add_option("--t", t_flag, "required common blocks (default: from header)");
    add_common(intersect, common, false);
    intersect->callback([&] {
        const auto f = parse_family_file(in_path);
        const int t = require_t(t_flag, f);
        const bool ok = is_t_intersecting(f.family, t, resolve_threads(common.threads));
        std::optional<TrivialityReport> tr;
        if (!f.family.empty()) tr = triviality_witness(f.family, t);
        const auto hm = ok && tr && !tr->trivial() ? recognize_hm(f.family, t) : std::nullopt;
        if (parse_output_format(common.format) == OutputFormat::json) {
            nlohmann::json j{{"n", f.family.ground_size()}, {"t", t}, {"size", f.family.size()}, {"t_intersecting", ok}};
            j["trivial"] = tr ? nlohmann::json(tr->trivial()) : nlohmann::json(nullptr);
            j["common_singletons"] = tr ? nlohmann::json(tr->common.elements()) : nlohmann::json(nullptr);
            j["hm_witness"] = hm_witness_json(hm);
            std::cout << j.dump() << "\n";
        } else {
            std::cout << (ok ? "t-intersecting" : "not t-intersecting") << " (t=" << t << ", |A|=" << f.family.size()
                      << ")\n";
            if (tr)
                std::cout << (tr->trivial() ? "trivial" : "non-trivial") << "; common singletons "
                          << to_string(tr->common) << "\n";
            if (hm) std::cout << "HM family: anchors " << join(hm->anchors) << ", pivot " << hm->pivot << "\n";
        }
        code = ok ? 0 : 1;
    });

    // split
    int sp_i = 0, sp_j = 0;
    auto* split_cmd = app.add_subcommand("split", "Apply the (i,j)-split operator to a family");
    split_cmd->add_option("file", in_path, "family file")->required();
    split_cmd->add_option("--i", sp_i, "element split off")->required();
    split_cmd->add_option("--j", sp_j, "element whose block loses i")->required();
    add_common(split_cmd, common, true);
    split_cmd->callback([&] {
        const auto f = parse_family_file(in_path);
        const auto r = family_split(f.family, sp_i, sp_j);
        write_family(r.result, f.t, common);
    });

    // compress
    std::string order = "lex";
    bool verify_steps = false, show_steps = false;
    auto* compress_cmd = app.add_subcommand("compress", "Split repeatedly until the family is compressed");
    compress_cmd->add_option("file", in_path, "family file")->required();
    compress_cmd->add_option("--t", t_flag, "required common blocks (default: from header)");
    compress_cmd->add_option("--order", order, "lex or nontrivial")->check(CLI::IsMember({"lex", "nontrivial"}));
    compress_cmd->add_flag("--verify", verify_steps, "re-check size and intersection after every step");
    compress_cmd->add_flag("--steps", show_steps, "print the effective steps to stderr");
    add_common(compress_cmd, common, true);
    compress_cmd->callback([&] {
        const auto f = parse_family_file(in_path);
        const int t = require_t(t_flag, f);
        const auto rep = compress(f.family, t, order == "lex" ? PairOrder::lexicographic : PairOrder::nontrivial_preserving,
                                  verify_steps);
        if (show_steps)
            for (const auto& s : rep.steps) std::cerr << "S_" << s.i << "," << s.j << " moved " << s.moved << "\n";
        write_family(rep.final_family, t, common);
        if (rep.stuck) {
            std::cerr << "stopped: every remaining split would make the family trivial\n";
            code = 2;
        }
    });

    // construct
    int co_n = 0, co_pivot = 0;
    std::vector<int> anchors;
    auto* construct = app.add_subcommand("construct", "Build a trivial or HM family");
    construct->require_subcommand(1);
    auto* ctrivial = construct->add_subcommand("trivial", "all partitions with the anchors as singletons");
    auto* chm = construct->add_subcommand("hm", "the HM family H(anchors, pivot)");
    for (auto* c : {ctrivial, chm}) {
        c->add_option("--n", co_n, "ground set size")->required();
        c->add_option("--anchors", anchors, "anchor elements, comma separated")->required()->delimiter(',');
        add_common(c, common, true);
    }
    chm->add_option("--pivot", co_pivot, "pivot element b")->required();
    ctrivial->callback([&] {
        write_family(construct_trivial(co_n, anchors), static_cast<int>(anchors.size()), common);
    });
    chm->callback([&] {
        std::vector<int> sorted = anchors;
        std::sort(sorted.begin(), sorted.end());
        write_family(construct_hm(co_n, HmWitness{sorted, co_pivot}), static_cast<int>(anchors.size()), common);
    });

    // recognize
    auto* recognize = app.add_subcommand("recognize", "Decide whether a family is an HM family");
    recognize->add_option("file", in_path, "family file")->required();
    recognize->add_option("--t", t_flag, "number of anchors (default: from header)");
    add_common(recognize, common, false);
    recognize->callback([&] {
        const auto f = parse_family_file(in_path);
        const int t = require_t(t_flag, f);
        const auto w = recognize_hm(f.family, t, resolve_threads(common.threads));
        if (parse_output_format(common.format) == OutputFormat::json)
            std::cout << nlohmann::json{{"hm_witness", hm_witness_json(w)}}.dump() << "\n";
        else if (w)
            std::cout << "HM family: anchors " << join(w->anchors) << ", pivot " << w->pivot << "\n";
        else
            std::cout << "not an HM family\n";
        code = w ? 0 : 1;
    });

    // verify
    VerifyConfig vc;
    int v_timeout = 300;
    auto* verify = app.add_subcommand("verify", "Check the toolkit's claims over a parameter grid");
    verify->add_option("--claims", vc.claims, "claim ids, comma separated (default: all)")->delimiter(',');
    verify->add_option("--n-min", vc.n_min, "smallest n");
    verify->add_option("--n-max", vc.n_max, "largest n");
    verify->add_option("--t-max", vc.t_max, "largest t")->check(CLI::PositiveNumber);
    verify->add_option("--samples", vc.samples, "random families per (n,t)");
    verify->add_option("--seed", vc.seed, "sampling seed");
    verify->add_option("--timeout", v_timeout, "per-search budget in seconds");
    verify->add_flag("--list", [&](std::int64_t) {
        for (auto id : known_claims()) std::cout << id << "\n";
        std::exit(0);
    }, "list claim ids and exit");
    add_common(verify, common, false);
    verify->callback([&] {
        vc.threads = resolve_threads(common.threads);
        vc.timeout = std::chrono::seconds(v_timeout);
        const auto findings = cmd_verify(vc);
        if (parse_output_format(common.format) == OutputFormat::json)
            std::cout << findings_json(findings).dump(2) << "\n";
        else
            std::cout << findings_text(findings);
        code = verify_exit_code(findings);
    });

    // search
    int se_n = 0, se_t = 1, se_timeout = 300;
    std::string mode = "unrestricted";
    bool timing = false, no_seed = false;
    auto* search = app.add_subcommand("search", "Exact maximum t-intersecting family by clique search");
    search->add_option("--n", se_n, "ground set size")->required();
    search->add_option("--t", se_t, "required common blocks");
    search->add_option("--mode", mode, "unrestricted or nontrivial");
    search->add_option("--timeout", se_timeout, "budget in seconds");
    search->add_flag("--timing", timing, "include wall time in the report");
    search->add_flag("--no-seed", no_seed, "start from an empty incumbent");
    add_common(search, common, true);
    search->callback([&] {
        SearchOptions opts;
        opts.threads = resolve_threads(common.threads);
        opts.timeout = std::chrono::seconds(se_timeout);
        opts.seed_incumbent = !no_seed;
        const auto m = parse_search_mode(mode);
        const auto g = build_graph(se_n, se_t, opts.threads);
        const auto rep = max_family(g, m, opts);
        if (parse_output_format(common.format) == OutputFormat::json)
            std::cout << search_report_json(rep, timing).dump() << "\n";
        else
            std::cout << search_report_text(rep, timing);
        if (!common.out.empty()) emit_family(rep.witness, se_t, common.out, OutputFormat::text);
        const bool attained = m == SearchMode::nontrivial ? rep.bounds.equals_hm : rep.bounds.equals_trivial;
        code = !rep.optimal ? 3 : attained ? 0 : 2;
    });

    // scan
    std::string lemma;
    int sc_t = 1, sc_lo = 1, sc_hi = 40;
    ScanParams params;
    auto* scan = app.add_subcommand("scan", "Find where an inequality starts to hold for good");
    scan->add_option("--lemma", lemma, "less, less02, less03 or ekr-bound")->required();
    scan->add_option("--t", sc_t, "t")->check(CLI::PositiveNumber);
    scan->add_option("--c", params.c, "multiplier for less");
    scan->add_option("--r", params.r, "fixed r for less02 (default: every r in range)");
    scan->add_option("--n-min", sc_lo, "first n");
    scan->add_option("--n-max", sc_hi, "last n");
    add_common(scan, common, false);
    scan->callback([&] {
        if (sc_hi < sc_lo) throw RangeError("--n-max is smaller than --n-min");
        const BellTable table(sc_hi + 1);
        const auto rep = threshold_scan(table, parse_lemma(lemma), sc_t, params, sc_lo, sc_hi);
        if (parse_output_format(common.format) == OutputFormat::json)
            std::cout << scan_report_json(rep).dump() << "\n";
        else
            std::cout << scan_report_text(rep);
        code = rep.status == ScanStatus::holds_from ? 0 : 2;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return code;
}
