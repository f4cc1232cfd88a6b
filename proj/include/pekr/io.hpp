#pragma once

// Family files, text/JSON serialisation and report emission.
//
// Family file format:
//   # comment
//   n=5 t=1
//   1,5|2|3|4
//   rgs:0,1,2,3,0
// The header comes first (t is optional), then one partition per line in
// block or rgs form. Output is always in ascending rank order.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pekr/counting.hpp"
#include "pekr/family.hpp"
#include "pekr/search.hpp"

namespace pekr {

enum class OutputFormat { text, json };
OutputFormat parse_output_format(std::string_view s);

struct FamilyFile {
    PartitionFamily family{1};
    std::optional<int> t;
};

// ParseError (with line/column), HeaderMismatch, DuplicateMember, and the
// partition errors (CoverError, OverlapError, ...) annotated with the line.
FamilyFile parse_family(std::istream& in);
FamilyFile parse_family(std::string_view text);
FamilyFile parse_family_file(const std::filesystem::path& path);

std::string emit_family_text(const PartitionFamily& a, std::optional<int> t = std::nullopt);
nlohmann::json family_json(const PartitionFamily& a, std::optional<int> t = std::nullopt);
void emit_family(const PartitionFamily& a, std::optional<int> t, const std::filesystem::path& path,
                 OutputFormat format);

nlohmann::json hm_witness_json(const std::optional<HmWitness>& w);
nlohmann::json bell_row_json(const BellTable& table, int n);
nlohmann::json scan_report_json(const ScanReport& r);
// `ms` is only included with include_timing; everything else is deterministic.
nlohmann::json search_report_json(const SearchReport& r, bool include_timing = false);
std::string search_report_text(const SearchReport& r, bool include_timing = false);
std::string scan_report_text(const ScanReport& r);

} // namespace pekr
