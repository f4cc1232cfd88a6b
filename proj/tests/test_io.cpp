#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "pekr/errors.hpp"
#include "pekr/io.hpp"
#include "pekr/sampling.hpp"

using namespace pekr;

namespace {

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("parsing family files") {
    const auto f = parse_family("n=5\n1,5|2|3|4\n");
    CHECK(f.family.size() == 1);
    CHECK(f.family.members()[0] == pair_partition(5, 1, 5));
    CHECK_FALSE(f.t);

    const auto g = parse_family("# comment\n\n  n=4 t=2  \n1|2|3|4   # finest\nrgs:0,1,2,0\n");
    CHECK(g.t == 2);
    CHECK(g.family.size() == 2);

    CHECK(parse_family("n=3\n").family.empty());
}

TEST_CASE("malformed family files") {
    CHECK_THROWS_AS(parse_family("n=5\n1,5|2|3\n"), CoverError);
    CHECK(message_of([] { parse_family("n=5\n1,5|2|3\n"); }).find("line 2") != std::string::npos);
    CHECK_THROWS_AS(parse_family("n=5\n1,5|2|3|4|5\n"), OverlapError);
    CHECK_THROWS_AS(parse_family("n=4\n1,5|2|3|4\n"), HeaderMismatch);
    CHECK_THROWS_AS(parse_family("n=3\nrgs:0,1\n"), HeaderMismatch);
    CHECK_THROWS_AS(parse_family("1|2|3\n"), ParseError);
    CHECK_THROWS_AS(parse_family(""), ParseError);
    CHECK_THROWS_AS(parse_family("n=x\n"), ParseError);
    CHECK_THROWS_AS(parse_family("n=3 k=2\n"), ParseError);

    const auto dup = message_of([] { parse_family("n=3\n1|2|3\n1,2|3\n3|1|2\n"); });
    CHECK(dup.find("lines 2 and 4") != std::string::npos);
    CHECK_THROWS_AS(parse_family("n=3\n1|2|3\n3|2|1\n"), DuplicateMember);

    try {
        parse_family("n=3\n\n  1,2|y\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 7);
    }
}

TEST_CASE("round trips") {
    const auto h = construct_hm(6, {{1}, 5});
    const auto text = emit_family_text(h, 1);
    const auto back = parse_family(text);
    CHECK(back.family == h);
    CHECK(back.t == 1);
    CHECK(emit_family_text(back.family, back.t) == text);

    const auto js = parse_family(family_json(h, 1).dump());
    CHECK(js.family == h);
    CHECK(js.t == 1);

    std::mt19937_64 rng(31);
    for (int k = 0; k < 200; ++k) {
        const auto a = random_family(2 + k % 6, 20, rng);
        CHECK(parse_family(emit_family_text(a)).family == a);
        CHECK(parse_family(family_json(a).dump()).family == a);
    }

    const auto dir = std::filesystem::temp_directory_path() / "pekr_io_test";
    std::filesystem::create_directories(dir);
    emit_family(h, 1, dir / "h.txt", OutputFormat::text);
    emit_family(h, 1, dir / "h.json", OutputFormat::json);
    CHECK(parse_family_file(dir / "h.txt").family == h);
    CHECK(parse_family_file(dir / "h.json").family == h);
    CHECK_THROWS_AS(parse_family_file(dir / "missing.txt"), Error);
    std::filesystem::remove_all(dir);
}

TEST_CASE("JSON reports") {
    const BellTable table(4);
    CHECK(bell_row_json(table, 4).dump() == R"({"bell":"15","bell_sf":"4","n":4})");
    CHECK(hm_witness_json(HmWitness{{1}, 5}).dump() == R"({"anchors":[1],"pivot":5})");
    CHECK(hm_witness_json(std::nullopt).is_null());

    const auto rep = max_family(build_graph(5, 1), SearchMode::nontrivial);
    const auto j = search_report_json(rep);
    CHECK(j["optimum"] == "11");
    CHECK(j["bounds"]["hm_size"] == "11");
    CHECK(j["bounds"]["trivial"] == "15");
    CHECK(j["witness"].size() == 11);
    CHECK_FALSE(j.contains("ms"));
    CHECK(search_report_json(rep, true).contains("ms"));
    CHECK(parse_output_format("json") == OutputFormat::json);
    CHECK_THROWS_AS(parse_output_format("xml"), Error);
}
