#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pyfluency/analyze.hpp"

using namespace pyfluency;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = PYFLUENCY_FIXTURE_DIR;

std::vector<UnitReport> analyze_dir(const fs::path& dir, const LevelMapping& mapping,
                                    int workers) {
    auto files = discover_files({SourceKind::Directory, dir.string()});
    return analyze_files(files, mapping, workers);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("pyfluency-pipe-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("worker count never changes the serialized output") {
    LevelMapping mapping = LevelMapping::built_in_default();
    auto one = analyze_dir(kFixtures / "mini-repo", mapping, 1);
    auto eight = analyze_dir(kFixtures / "mini-repo", mapping, 8);
    CHECK(to_json(one) == to_json(eight));
    CHECK(to_csv(one) == to_csv(eight));
    CHECK(to_terminal(one) == to_terminal(eight));
}

TEST_CASE("level overrides change levels and aggregates, never positions or counts") {
    auto base = analyze_dir(kFixtures / "override", LevelMapping::built_in_default(), 2);
    auto flipped = analyze_dir(kFixtures / "override",
                               LevelMapping::from_config("list-comprehension: B1\n"), 2);

    REQUIRE(base.size() == 1);
    REQUIRE(flipped.size() == 1);
    CHECK(base[0].required_level == kB2);
    CHECK(flipped[0].required_level == kB1);

    REQUIRE(base[0].files.size() == flipped[0].files.size());
    for (size_t f = 0; f < base[0].files.size(); ++f) {
        const FileReport& before = base[0].files[f];
        const FileReport& after = flipped[0].files[f];
        REQUIRE(before.occurrences.size() == after.occurrences.size());
        for (size_t i = 0; i < before.occurrences.size(); ++i) {
            CHECK(before.occurrences[i].construct == after.occurrences[i].construct);
            CHECK(before.occurrences[i].start_line == after.occurrences[i].start_line);
            CHECK(before.occurrences[i].end_line == after.occurrences[i].end_line);
            CHECK(before.occurrences[i].displacement == after.occurrences[i].displacement);
        }
    }
}

TEST_CASE("run(): parse failures are reported but exit 0") {
    std::ostringstream out, err;
    RunConfig config;
    config.source = {SourceKind::Directory, (kFixtures / "mixed").string()};
    config.print_terminal = true;
    CHECK(run(config, out, err) == 0);
    CHECK(out.str().find("1 failed to parse") != std::string::npos);
    CHECK(err.str().empty());
}

TEST_CASE("run(): configuration problems exit 1 naming the input") {
    std::ostringstream out, err;
    RunConfig config;
    config.source = {SourceKind::File, (kFixtures / "mini-repo" / "app.py").string()};
    config.levels_config_path = "/no/such/levels.cfg";
    CHECK(run(config, out, err) == 1);
    CHECK(err.str().find("/no/such/levels.cfg") != std::string::npos);

    std::ostringstream out2, err2;
    RunConfig bad_format;
    bad_format.source = config.source;
    bad_format.print_terminal = false;
    CHECK(run(bad_format, out2, err2) == 1);
    CHECK(err2.str().find("nothing to do") != std::string::npos);
}

TEST_CASE("run(): ingestion problems exit 2 naming the input") {
    std::ostringstream out, err;
    RunConfig config;
    config.source = {SourceKind::Directory, "/no/such/tree"};
    CHECK(run(config, out, err) == 2);
    CHECK(err.str().find("/no/such/tree") != std::string::npos);
}

TEST_CASE("run(): writes the requested formats into the output directory") {
    fs::path out_dir = fresh_dir("formats");
    std::ostringstream out, err;
    RunConfig config;
    config.source = {SourceKind::Directory, (kFixtures / "mini-repo").string()};
    config.output_dir = out_dir;
    config.write_json = true;
    config.write_csv = true;
    config.write_html = true;
    config.print_terminal = false;
    REQUIRE(run(config, out, err) == 0);

    CHECK(fs::exists(out_dir / "report.json"));
    CHECK(fs::exists(out_dir / "report.csv"));
    CHECK(fs::exists(out_dir / "html" / "index.html"));

    // json on disk round-trips through the model
    std::string json = slurp(out_dir / "report.json");
    CHECK(to_json(parse_report_json(json)) == json);
    fs::remove_all(out_dir);
}

TEST_CASE("analyze_files groups by unit in first-seen order") {
    std::vector<SourceFile> sources = {
        {"x.py", "x.py", "unit-b", "print('x')\n"},
        {"y.py", "y.py", "unit-a", "x = [1]\n"},
        {"z.py", "z.py", "unit-b", "d = {'k': 1}\n"},
    };
    auto run = analyze_files(sources, LevelMapping::built_in_default(), 4);
    REQUIRE(run.size() == 2);
    CHECK(run[0].name == "unit-b");
    CHECK(run[0].files.size() == 2);
    CHECK(run[1].name == "unit-a");
    CHECK(run[0].histogram.total() == 2);
}
