#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "pyfluency/catalog.hpp"
#include "pyfluency/detector.hpp"

using namespace pyfluency;

namespace {

// The published assignments the default catalog must ship with.
const std::vector<std::pair<std::string, Level>> kPinnedDefaults = {
    {"print-call", kA1},          {"if-statement", kA1},
    {"list-literal", kA1},        {"open-call", kA2},
    {"nested-list", kA2},         {"simple-dictionary", kA2},
    {"list-with-dictionary", kB1},{"nested-dictionary", kB1},
    {"with-statement", kB1},      {"list-comprehension", kB2},
    {"dunder-dict-attribute", kB2},{"main-guard", kB2},
    {"dict-of-lists-of-dicts", kB2},{"lambda-expression", kB2},
    {"dunder-slots", kC1},        {"generator-function", kC1},
    {"function-decorator", kC1},  {"metaclass", kC2},
    {"class-decorator", kC2},
};

}  // namespace

TEST_CASE("default mapping carries the pinned assignments") {
    LevelMapping mapping = LevelMapping::built_in_default();
    for (const auto& [id, level] : kPinnedDefaults) {
        INFO(id);
        CHECK(mapping.level_for(id) == level);
    }
    CHECK(mapping.level_for("list-comprehension") == kB2);
    CHECK(mapping.level_for("print-call") == kA1);
    CHECK(mapping.level_for("metaclass") == kC2);
    CHECK(mapping.source() == LevelMapping::Source::BuiltInDefault);
}

TEST_CASE("catalog ids are unique and display names resolvable both ways") {
    std::set<std::string_view> ids, names;
    for (const ConstructInfo& info : construct_catalog()) {
        CHECK(ids.insert(info.id).second);
        CHECK(names.insert(info.display_name).second);
        CHECK(display_name_of(info.id) == info.display_name);
        const ConstructInfo* back = find_construct_by_display_name(info.display_name);
        REQUIRE(back != nullptr);
        CHECK(back->id == info.id);
    }
    CHECK_THROWS_AS(display_name_of("no-such-construct"), UnknownConstructError);
}

TEST_CASE("empty config equals the built-in default") {
    LevelMapping defaults = LevelMapping::built_in_default();
    LevelMapping loaded = LevelMapping::from_config("");
    CHECK(loaded.entries() == defaults.entries());
    CHECK(loaded.source() == LevelMapping::Source::ConfigFile);

    LevelMapping commented = LevelMapping::from_config("# nothing here\n\n   \n# bye\n");
    CHECK(commented.entries() == defaults.entries());
}

TEST_CASE("overrides re-level only the named ids") {
    LevelMapping loaded = LevelMapping::from_config("list-comprehension: B1\n");
    CHECK(loaded.level_for("list-comprehension") == kB1);

    LevelMapping defaults = LevelMapping::built_in_default();
    for (const auto& [id, level] : defaults.entries()) {
        if (id == "list-comprehension") continue;
        CHECK(loaded.level_for(id) == level);
    }
}

TEST_CASE("override parsing accepts comments, case-insensitive labels, repeats") {
    LevelMapping loaded = LevelMapping::from_config(
        "# tune containers\n"
        "nested-list: b1   # inline note\n"
        "nested-list: C1\n"
        "main-guard: a2\n");
    CHECK(loaded.level_for("nested-list") == kC1);  // last entry wins
    CHECK(loaded.level_for("main-guard") == kA2);
}

TEST_CASE("config errors carry line numbers and offending ids") {
    CHECK_THROWS_AS(LevelMapping::from_config("list-comprehenzion: B1\n"),
                    UnknownConstructError);
    try {
        LevelMapping::from_config("print-call: A1\nlist-comprehenzion: B1\n");
        FAIL("expected UnknownConstructError");
    } catch (const UnknownConstructError& e) {
        CHECK(e.construct_id() == "list-comprehenzion");
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    CHECK_THROWS_AS(LevelMapping::from_config("print-call: B7\n"), UnknownLevelError);
    CHECK_THROWS_AS(LevelMapping::from_config("print-call A1\n"), MalformedConfigError);
    CHECK_THROWS_AS(LevelMapping::from_config(": A1\n"), MalformedConfigError);
    CHECK_THROWS_AS(LevelMapping::from_config("print-call:\n"), MalformedConfigError);
    try {
        LevelMapping::from_config("\n\nbad line\n");
        FAIL("expected MalformedConfigError");
    } catch (const MalformedConfigError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("random legal override sets differ from the default exactly on their domain") {
    std::mt19937 rng(7);
    const auto& catalog = construct_catalog();
    std::uniform_int_distribution<size_t> pick(0, catalog.size() - 1);
    std::uniform_int_distribution<int> rank(1, 6);
    for (int iteration = 0; iteration < 100; ++iteration) {
        std::map<std::string, Level> overrides;
        std::string config;
        int n = 1 + iteration % 5;
        for (int i = 0; i < n; ++i) {
            const ConstructInfo& info = catalog[pick(rng)];
            Level level = Level::from_rank(rank(rng));
            overrides.insert_or_assign(std::string(info.id), level);
            config += std::string(info.id) + ": " + std::string(level.label()) + "\n";
        }
        LevelMapping loaded = LevelMapping::from_config(config);
        for (const ConstructInfo& info : catalog) {
            auto it = overrides.find(std::string(info.id));
            Level expected = it != overrides.end() ? it->second : info.default_level;
            CHECK(loaded.level_for(info.id) == expected);
        }
    }
}

TEST_CASE("rule registry and catalog form a bijection") {
    const auto& rules = detection_rules();
    CHECK(rules.size() == construct_catalog().size());

    std::set<std::string> rule_ids;
    for (const DetectionRule& rule : rules) {
        CHECK(rule_ids.insert(rule.id).second);  // pairwise distinct
        CHECK(find_construct(rule.id) != nullptr);
    }
    LevelMapping defaults = LevelMapping::built_in_default();
    for (const DetectionRule& rule : rules) CHECK_NOTHROW(defaults.level_for(rule.id));
}

TEST_CASE("startup check lists the ids a mapping is missing") {
    LevelMapping defaults = LevelMapping::built_in_default();
    CHECK_NOTHROW(verify_rules_covered(defaults));
}
