#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "pyfluency/report.hpp"

using namespace pyfluency;

namespace {

Occurrence occ(Level level, int line = 1) {
    Occurrence o;
    o.construct = "print-call";
    o.display_name = "Print";
    o.start_line = line;
    o.end_line = line;
    o.displacement = 0;
    o.level = level;
    return o;
}

std::vector<Occurrence> occs(std::initializer_list<Level> levels) {
    std::vector<Occurrence> out;
    int line = 1;
    for (Level level : levels) out.push_back(occ(level, line++));
    return out;
}

}  // namespace

TEST_CASE("file summary: histogram and required level") {
    FileReport report = summarize_file("a.py", occs({kA1, kA1, kA1, kA2, kB1, kB1}));
    CHECK(report.required_level == kB1);
    CHECK(report.histogram.count(kA1) == 3);
    CHECK(report.histogram.count(kA2) == 1);
    CHECK(report.histogram.count(kB1) == 2);
    CHECK(report.histogram.count(kB2) == 0);
    CHECK(report.histogram.count(kC1) == 0);
    CHECK(report.histogram.count(kC2) == 0);
    CHECK(report.histogram.total() == 6);
}

TEST_CASE("empty file is unrated, not A1") {
    FileReport report = summarize_file("empty.py", {});
    CHECK_FALSE(report.required_level.has_value());
    CHECK(report.histogram.total() == 0);
}

TEST_CASE("single C2 occurrence is the required level") {
    FileReport report = summarize_file("meta.py", occs({kC2}));
    CHECK(report.required_level == kC2);
}

TEST_CASE("parse-failed files carry the failure and zero occurrences") {
    ParseFailure failure{"bad.py", 3, "invalid syntax"};
    FileReport report = summarize_file("bad.py", {}, failure);
    REQUIRE(report.failure.has_value());
    CHECK(report.failure->line == 3);
    CHECK(report.occurrences.empty());
    CHECK_FALSE(report.required_level.has_value());

    UnitReport unit = summarize_unit("u", {report});
    CHECK(unit.files_failed == 1);
    CHECK_FALSE(unit.required_level.has_value());
}

TEST_CASE("unit summary: pointwise sums, max level, file order by path") {
    FileReport b = summarize_file("b.py", occs({kB2}));
    FileReport a = summarize_file("a.py", occs({kB1, kA1}));
    UnitReport unit = summarize_unit("demo", {b, a});
    CHECK(unit.required_level == kB2);
    CHECK(unit.histogram.count(kA1) == 1);
    CHECK(unit.histogram.count(kB1) == 1);
    CHECK(unit.histogram.count(kB2) == 1);
    REQUIRE(unit.files.size() == 2);
    CHECK(unit.files[0].path == "a.py");
    CHECK(unit.files[1].path == "b.py");
}

TEST_CASE("unit of one empty file is unrated with an all-zero histogram") {
    UnitReport unit = summarize_unit("u", {summarize_file("e.py", {})});
    CHECK_FALSE(unit.required_level.has_value());
    CHECK(unit.histogram.total() == 0);
    CHECK(unit.files_failed == 0);
}

TEST_CASE("unit required level dominates every rated file (monotonicity)") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> rank(1, 6);
    std::uniform_int_distribution<int> file_count(1, 6);
    std::uniform_int_distribution<int> occ_count(0, 8);
    for (int iteration = 0; iteration < 200; ++iteration) {
        std::vector<FileReport> files;
        for (int f = 0; f < file_count(rng); ++f) {
            std::vector<Occurrence> list;
            for (int i = 0; i < occ_count(rng); ++i)
                list.push_back(occ(Level::from_rank(rank(rng)), i + 1));
            files.push_back(summarize_file("f" + std::to_string(f) + ".py", std::move(list)));
        }
        UnitReport unit = summarize_unit("u", files);
        std::int64_t expected_total = 0;
        for (const FileReport& file : files) {
            expected_total += file.histogram.total();
            if (file.required_level) {
                REQUIRE(unit.required_level.has_value());
                CHECK(*unit.required_level >= *file.required_level);
            }
        }
        CHECK(unit.histogram.total() == expected_total);
    }
}

TEST_CASE("histogram addition commutes: file order never changes unit totals") {
    std::vector<FileReport> files;
    files.push_back(summarize_file("a.py", occs({kA1, kB2})));
    files.push_back(summarize_file("b.py", occs({kC1})));
    files.push_back(summarize_file("c.py", occs({kA2, kA2, kB1})));
    UnitReport forward = summarize_unit("u", files);
    std::reverse(files.begin(), files.end());
    UnitReport backward = summarize_unit("u", files);
    CHECK(forward.histogram == backward.histogram);
    CHECK(forward.required_level == backward.required_level);
    CHECK(forward.files.front().path == backward.files.front().path);
}

TEST_CASE("adding an A1-only file never raises the unit level") {
    UnitReport before = summarize_unit("u", {summarize_file("a.py", occs({kB1}))});
    UnitReport after = summarize_unit(
        "u", {summarize_file("a.py", occs({kB1})), summarize_file("z.py", occs({kA1, kA1}))});
    CHECK(before.required_level == after.required_level);
}
