#include "pekr/io.hpp"

#include <fstream>
#include <sstream>

#include "pekr/errors.hpp"

namespace pekr {

namespace {

std::string at_line(const std::exception& e, std::size_t line) {
    return std::string(e.what()) + " at line " + std::to_string(line);
}

// Parses "n=5 t=2" (t optional, any order, whitespace separated).
void parse_header(std::string_view body, std::size_t line, std::size_t offset, int& n, std::optional<int>& t) {
    std::optional<int> seen_n;
    std::size_t pos = 0;
    while (pos < body.size()) {
        while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) ++pos;
        if (pos >= body.size()) break;
        const std::size_t start = pos;
        while (pos < body.size() && body[pos] != ' ' && body[pos] != '\t') ++pos;
        const auto token = body.substr(start, pos - start);
        const auto eq = token.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected key=value in header, got '" + std::string(token) + "'", line, offset + start + 1);
        const auto key = token.substr(0, eq);
        const auto value = token.substr(eq + 1);
        int v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(std::string(value), &used);
            if (used != value.size() || v < 1) throw std::invalid_argument("bad");
        } catch (const std::exception&) {
            throw ParseError("header value for '" + std::string(key) + "' must be a positive integer", line,
                             offset + start + eq + 2);
        }
        if (key == "n")
            seen_n = v;
        else if (key == "t")
            t = v;
        else
            throw ParseError("unknown header key '" + std::string(key) + "'", line, offset + start + 1);
    }
    if (!seen_n) throw ParseError("header must define n", line, offset + 1);
    n = *seen_n;
}

FamilyFile parse_family_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 1, e.byte);
    }
    if (!j.contains("n") || !j["n"].is_number_integer() || !j.contains("members") || !j["members"].is_array())
        throw ParseError("family JSON needs integer 'n' and array 'members'", 1, 1);
    const int n = j["n"].get<int>();
    FamilyFile out;
    if (j.contains("t") && !j["t"].is_null()) out.t = j["t"].get<int>();
    std::vector<SetPartition> members;
    std::size_t index = 0;
    for (const auto& m : j["members"]) {
        ++index;
        try {
            members.push_back(parse_partition(m.get<std::string>(), n));
        } catch (const DimensionError& e) {
            throw HeaderMismatch(std::string(e.what()) + " (member " + std::to_string(index) + ")");
        }
    }
    out.family = PartitionFamily::from_partitions(n, members);
    return out;
}

} // namespace

OutputFormat parse_output_format(std::string_view s) {
    if (s == "text") return OutputFormat::text;
    if (s == "json") return OutputFormat::json;
    throw Error("unknown output format '" + std::string(s) + "' (expected text or json)");
}

FamilyFile parse_family(std::istream& in) {
    FamilyFile out;
    std::optional<int> n;
    std::vector<SetPartition> members;
    std::vector<std::size_t> member_lines;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view body(raw);
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        const auto first = body.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        const auto last = body.find_last_not_of(" \t\r");
        const auto content = body.substr(first, last - first + 1);

        if (!n) {
            if (content.find('=') == std::string_view::npos)
                throw ParseError("expected header 'n=<N> [t=<T>]' before members", line, first + 1);
            int parsed = 0;
            parse_header(content, line, first, parsed, out.t);
            n = parsed;
            continue;
        }
        try {
            members.push_back(parse_partition(content, *n));
            member_lines.push_back(line);
        } catch (const ParseError& e) {
            throw ParseError(e.detail(), line, first + e.column());
        } catch (const DimensionError& e) {
            throw HeaderMismatch(at_line(e, line));
        } catch (const CoverError& e) {
            throw CoverError(at_line(e, line));
        } catch (const OverlapError& e) {
            throw OverlapError(at_line(e, line));
        } catch (const EmptyBlockError& e) {
            throw EmptyBlockError(at_line(e, line));
        } catch (const RangeError& e) {
            throw RangeError(at_line(e, line));
        } catch (const LimitError& e) {
            throw LimitError(at_line(e, line));
        }
    }
    if (!n) throw ParseError("missing header 'n=<N>'", line + 1, 1);

    std::vector<std::pair<Rank, std::size_t>> seen;
    for (std::size_t k = 0; k < members.size(); ++k) seen.emplace_back(rank(members[k]), member_lines[k]);
    std::sort(seen.begin(), seen.end());
    for (std::size_t k = 1; k < seen.size(); ++k)
        if (seen[k].first == seen[k - 1].first)
            throw DuplicateMember("duplicate member " + to_text(unrank(*n, seen[k].first)) + " at lines " +
                                  std::to_string(std::min(seen[k].second, seen[k - 1].second)) + " and " +
                                  std::to_string(std::max(seen[k].second, seen[k - 1].second)));
    out.family = PartitionFamily::from_partitions(*n, members);
    return out;
}

FamilyFile parse_family(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_family_json(std::string(text));
    std::istringstream in{std::string(text)};
    return parse_family(in);
}

FamilyFile parse_family_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open family file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_family(buf.str());
}

std::string emit_family_text(const PartitionFamily& a, std::optional<int> t) {
    std::string out = "n=" + std::to_string(a.ground_size());
    if (t) out += " t=" + std::to_string(*t);
    out += '\n';
    for (const auto& p : a.members()) out += to_text(p) + '\n';
    return out;
}

nlohmann::json family_json(const PartitionFamily& a, std::optional<int> t) {
    nlohmann::json j;
    j["n"] = a.ground_size();
    j["t"] = t ? nlohmann::json(*t) : nlohmann::json(nullptr);
    j["size"] = a.size();
    auto members = nlohmann::json::array();
    for (const auto& p : a.members()) members.push_back(to_text(p));
    j["members"] = std::move(members);
    return j;
}

void emit_family(const PartitionFamily& a, std::optional<int> t, const std::filesystem::path& path,
                 OutputFormat format) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    if (format == OutputFormat::json)
        out << family_json(a, t).dump(2) << '\n';
    else
        out << emit_family_text(a, t);
}

nlohmann::json hm_witness_json(const std::optional<HmWitness>& w) {
    if (!w) return nullptr;
    return {{"anchors", w->anchors}, {"pivot", w->pivot}};
}

nlohmann::json bell_row_json(const BellTable& table, int n) {
    return {{"n", n}, {"bell", to_decimal(table.bell(n))}, {"bell_sf", to_decimal(table.bell_sf(n))}};
}

nlohmann::json scan_report_json(const ScanReport& r) {
    nlohmann::json j;
    j["lemma"] = std::string(lemma_id(r.lemma));
    j["t"] = r.t;
    j["c"] = r.params.c;
    j["r"] = r.params.r ? nlohmann::json(*r.params.r) : nlohmann::json(nullptr);
    j["status"] = std::string(to_string(r.status));
    j["threshold"] = r.threshold ? nlohmann::json(*r.threshold) : nlohmann::json(nullptr);
    j["monotone"] = r.monotone;
    auto points = nlohmann::json::array();
    for (const auto& p : r.points)
        points.push_back({{"n", p.n}, {"holds", p.holds ? nlohmann::json(*p.holds) : nlohmann::json(nullptr)}});
    j["points"] = std::move(points);
    return j;
}

std::string scan_report_text(const ScanReport& r) {
    std::ostringstream out;
    out << "lemma " << lemma_id(r.lemma) << " t=" << r.t;
    if (r.lemma == Lemma::less) out << " c=" << r.params.c;
    if (r.lemma == Lemma::less02) out << " r=" << (r.params.r ? std::to_string(*r.params.r) : "all");
    out << "\n";
    for (const auto& p : r.points) out << "  n=" << p.n << "  " << (p.holds ? (*p.holds ? "true" : "false") : "n/a") << "\n";
    out << "status: " << to_string(r.status);
    if (r.threshold) out << " (persistent from n=" << *r.threshold << ")";
    out << "\n";
    return out.str();
}

nlohmann::json search_report_json(const SearchReport& r, bool include_timing) {
    nlohmann::json j;
    j["n"] = r.n;
    j["t"] = r.t;
    j["mode"] = std::string(to_string(r.mode));
    j["optimum"] = to_decimal(r.optimum);
    j["optimal"] = r.optimal;
    auto witness = nlohmann::json::array();
    for (const auto& p : r.witness.members()) witness.push_back(to_text(p));
    j["witness"] = std::move(witness);
    j["hm_witness"] = hm_witness_json(r.hm_verdict);
    j["bounds"] = {{"hm_size", r.bounds.hm_size ? nlohmann::json(to_decimal(*r.bounds.hm_size)) : nlohmann::json(nullptr)},
                   {"trivial", to_decimal(r.bounds.trivial)},
                   {"equals_hm", r.bounds.equals_hm},
                   {"equals_trivial", r.bounds.equals_trivial}};
    j["nodes"] = r.nodes_explored;
    if (include_timing) j["ms"] = r.wall_time.count();
    return j;
}

std::string search_report_text(const SearchReport& r, bool include_timing) {
    std::ostringstream out;
    out << "n=" << r.n << " t=" << r.t << " mode=" << to_string(r.mode) << "\n";
    out << "optimum: " << r.optimum << (r.optimal ? "" : " (best so far, search timed out)") << "\n";
    out << "trivial bound B_{n-t}: " << r.bounds.trivial << (r.bounds.equals_trivial ? " (attained)" : "") << "\n";
    if (r.bounds.hm_size)
        out << "HM size: " << *r.bounds.hm_size << (r.bounds.equals_hm ? " (attained)" : "") << "\n";
    if (r.hm_verdict) {
        out << "witness is an HM family: anchors";
        for (int a : r.hm_verdict->anchors) out << ' ' << a;
        out << ", pivot " << r.hm_verdict->pivot << "\n";
    } else {
        out << "witness is not an HM family\n";
    }
    out << "witness (" << r.witness.size() << " members):\n";
    for (const auto& p : r.witness.members()) out << "  " << to_text(p) << "\n";
    out << "nodes: " << r.nodes_explored << "\n";
    if (include_timing) out << "ms: " << r.wall_time.count() << "\n";
    return out.str();
}

} // namespace pekr
