#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pyfluency/detector.hpp"
#include "pyfluency/parser.hpp"

using namespace pyfluency;

namespace {

std::vector<Occurrence> detect_in(std::string_view src,
                                  const LevelMapping& mapping = LevelMapping::built_in_default()) {
    ParseOutcome outcome = parse_text(src);
    if (auto* failure = std::get_if<ParseFailure>(&outcome))
        FAIL("parse failure line " << failure->line << ": " << failure->message);
    return detect(std::get<SyntaxTree>(outcome), mapping);
}

std::vector<std::string> construct_ids(std::string_view src) {
    std::vector<std::string> ids;
    for (const Occurrence& occ : detect_in(src)) ids.push_back(occ.construct);
    return ids;
}

std::multiset<std::string> construct_multiset(std::string_view src) {
    auto ids = construct_ids(src);
    return {ids.begin(), ids.end()};
}

}  // namespace

TEST_CASE("print call: position, level, single occurrence") {
    auto occs = detect_in("print('hi')");
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].construct == "print-call");
    CHECK(occs[0].display_name == "Print");
    CHECK(occs[0].start_line == 1);
    CHECK(occs[0].end_line == 1);
    CHECK(occs[0].displacement == 0);
    CHECK(occs[0].level == kA1);
}

TEST_CASE("nested list: outer classified once, inner independently") {
    auto occs = detect_in("x = [1, [2, 3]]");
    REQUIRE(occs.size() == 2);
    CHECK(occs[0].construct == "nested-list");
    CHECK(occs[0].level == kA2);
    CHECK(occs[0].displacement == 4);
    CHECK(occs[1].construct == "list-literal");
    CHECK(occs[1].level == kA1);
    CHECK(occs[1].displacement == 8);
}

TEST_CASE("list comprehension displacement counts the characters before the bracket") {
    std::string src = "squares = [i*i for i in range(10)]";
    auto occs = detect_in(src);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].construct == "list-comprehension");
    CHECK(occs[0].start_line == 1);
    CHECK(occs[0].end_line == 1);
    CHECK(occs[0].displacement == static_cast<int>(src.find('[')));  // 10
    CHECK(occs[0].displacement == 10);
    CHECK(occs[0].level == kB2);
}

TEST_CASE("main guard suppresses the plain if-statement classification") {
    auto occs = detect_in("if __name__ == '__main__': main()\n");
    std::vector<std::string> ids;
    for (const auto& occ : occs) ids.push_back(occ.construct);
    CHECK(ids == std::vector<std::string>{"main-guard"});
    CHECK(occs[0].level == kB2);

    // either operand order matches
    CHECK(construct_ids("if '__main__' == __name__:\n    pass\n") ==
          std::vector<std::string>{"main-guard"});

    // nearly-main-guards stay plain if statements
    CHECK(construct_ids("if __name__ == '__most__':\n    pass\n") ==
          std::vector<std::string>{"if-statement"});
    CHECK(construct_ids("if __name__ != '__main__':\n    pass\n") ==
          std::vector<std::string>{"if-statement"});
    CHECK(construct_ids("if name == '__main__':\n    pass\n") ==
          std::vector<std::string>{"if-statement"});
}

TEST_CASE("empty module yields nothing") {
    CHECK(detect_in("").empty());
    CHECK(detect_in("x = 1\n").empty());
}

TEST_CASE("elif arms count as their own if statements") {
    CHECK(construct_multiset("if a:\n    pass\nelif b:\n    pass\nelse:\n    pass\n") ==
          std::multiset<std::string>{"if-statement", "if-statement"});
}

TEST_CASE("container family: exactly one classification per node") {
    SECTION("list with dictionary beats nested-list and list-literal") {
        auto ids = construct_multiset("x = [{'a': 1}]");
        CHECK(ids == std::multiset<std::string>{"list-with-dictionary", "simple-dictionary"});
    }
    SECTION("dict of lists of dicts") {
        auto ids = construct_multiset("d = {'a': [{'b': 1}]}");
        CHECK(ids == std::multiset<std::string>{"dict-of-lists-of-dicts",
                                                "list-with-dictionary", "simple-dictionary"});
    }
    SECTION("nested dictionary") {
        auto ids = construct_multiset("d = {'a': {'b': 1}}");
        CHECK(ids == std::multiset<std::string>{"nested-dictionary", "simple-dictionary"});
    }
    SECTION("a dict with a plain list value matches no dict rule") {
        auto ids = construct_multiset("d = {'a': [1]}");
        CHECK(ids == std::multiset<std::string>{"list-literal"});
    }
    SECTION("dict unpack of a name stays simple") {
        CHECK(construct_multiset("d = {**base}") ==
              std::multiset<std::string>{"simple-dictionary"});
    }
    SECTION("containers inside annotations still count") {
        CHECK(construct_multiset("def f(x={'a': 1}):\n    pass\n") ==
              std::multiset<std::string>{"function-def", "simple-dictionary"});
    }
}

TEST_CASE("open call") {
    auto occs = detect_in("fh = open('x.txt')");
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].construct == "open-call");
    CHECK(occs[0].level == kA2);
    // attribute calls are not the bare name
    CHECK(construct_ids("fh = io.open('x.txt')").empty());
}

TEST_CASE("function family: generator beats async beats plain") {
    CHECK(construct_ids("def f():\n    pass\n") == std::vector<std::string>{"function-def"});
    CHECK(construct_ids("async def f():\n    pass\n") ==
          std::vector<std::string>{"async-function"});
    CHECK(construct_multiset("def g():\n    yield 1\n") ==
          std::multiset<std::string>{"generator-function"});
    CHECK(construct_multiset("async def g():\n    yield 1\n") ==
          std::multiset<std::string>{"generator-function"});
    // a nested def's yield belongs to the nested def only
    CHECK(construct_multiset("def outer():\n    def inner():\n        yield 1\n    return inner\n") ==
          std::multiset<std::string>{"function-def", "generator-function"});
    // yield from also makes a generator, and counts itself
    CHECK(construct_multiset("def g():\n    yield from r\n") ==
          std::multiset<std::string>{"generator-function", "yield-from"});
}

TEST_CASE("decorator family by definition kind") {
    auto ids = construct_multiset("@lru_cache\ndef f():\n    pass\n");
    CHECK(ids == std::multiset<std::string>{"function-decorator", "function-def"});

    ids = construct_multiset("@dataclass\nclass C:\n    pass\n");
    CHECK(ids == std::multiset<std::string>{"class-decorator", "class-def"});

    ids = construct_multiset("@property\ndef x(self):\n    return 1\n");
    CHECK(ids == std::multiset<std::string>{"property-decorator", "function-def"});

    // one occurrence per decorator entry
    ids = construct_multiset("@a\n@b.c\n@d(e)\ndef f():\n    pass\n");
    CHECK(ids == std::multiset<std::string>{"function-decorator", "function-decorator",
                                            "function-decorator", "function-def"});
}

TEST_CASE("decorator occurrences sit on the at-sign") {
    auto occs = detect_in("@property\ndef x(self):\n    return 1\n");
    REQUIRE(occs[0].construct == "property-decorator");
    CHECK(occs[0].start_line == 1);
    CHECK(occs[0].displacement == 0);
}

TEST_CASE("class family: metaclass beats protocol beats plain class") {
    CHECK(construct_ids("class C:\n    pass\n") == std::vector<std::string>{"class-def"});
    CHECK(construct_ids("class C(Base, metaclass=Meta):\n    pass\n") ==
          std::vector<std::string>{"metaclass"});
    auto ids = construct_multiset(
        "class CM:\n    def __enter__(self):\n        return self\n"
        "    def __exit__(self, *a):\n        return False\n");
    CHECK(ids.count("context-manager-protocol") == 1);
    CHECK(ids.count("class-def") == 0);
}

TEST_CASE("dunder rules") {
    CHECK(construct_ids("d = obj.__dict__") == std::vector<std::string>{"dunder-dict-attribute"});
    auto ids = construct_multiset("class C:\n    __slots__ = ['a']\n");
    CHECK(ids == std::multiset<std::string>{"class-def", "dunder-slots", "list-literal"});
    // __slots__ assigned outside a class body is not the idiom
    CHECK(construct_ids("__slots__ = ['a']\n") == std::vector<std::string>{"list-literal"});
    // annotated assignment form also counts
    auto ann = construct_multiset("class C:\n    __slots__: tuple = ('a',)\n");
    CHECK(ann.count("dunder-slots") == 1);
}

TEST_CASE("star-args matches signature stars and call-site unpacking, not targets") {
    CHECK(construct_ids("def f(*args):\n    pass\n") ==
          std::vector<std::string>{"function-def", "star-args"});
    CHECK(construct_ids("def f(**kw):\n    pass\n") ==
          std::vector<std::string>{"function-def", "star-args"});
    CHECK(construct_multiset("f(*xs, **kw)") ==
          std::multiset<std::string>{"star-args", "star-args"});
    // keyword-only marker and unpacking targets do not count
    CHECK(construct_ids("def f(a, *, b):\n    pass\n") ==
          std::vector<std::string>{"function-def"});
    CHECK(construct_ids("a, *rest = xs\n") == std::vector<std::string>{"tuple-literal"});
}

TEST_CASE("string formatting: f-strings, percent on a literal, .format calls") {
    CHECK(construct_ids("s = f'{x}'") == std::vector<std::string>{"string-formatting"});
    CHECK(construct_ids("s = '%s' % x") == std::vector<std::string>{"string-formatting"});
    CHECK(construct_ids("s = '{}'.format(x)") == std::vector<std::string>{"string-formatting"});
    CHECK(construct_ids("s = 'plain'").empty());
    CHECK(construct_ids("n = a % b").empty());  // modulo on names is arithmetic
}

TEST_CASE("statement rules: with, for, while, try, imports") {
    CHECK(construct_multiset("with open('f') as fh:\n    pass\n") ==
          std::multiset<std::string>{"with-statement", "open-call"});
    CHECK(construct_ids("for i in r:\n    pass\n") == std::vector<std::string>{"for-statement"});
    CHECK(construct_ids("while x:\n    pass\n") == std::vector<std::string>{"while-statement"});
    CHECK(construct_ids("try:\n    pass\nexcept E:\n    pass\n") ==
          std::vector<std::string>{"try-except"});
    CHECK(construct_multiset("import os\nfrom sys import argv\n") ==
          std::multiset<std::string>{"import", "import"});
    CHECK(construct_ids("async def f():\n    async for i in it:\n        pass\n") ==
          std::vector<std::string>{"async-function", "for-statement"});
}

TEST_CASE("comprehension and lambda rules") {
    CHECK(construct_ids("g = (i for i in r)") ==
          std::vector<std::string>{"generator-expression"});
    CHECK(construct_ids("d = {k: v for k, v in it}") ==
          std::vector<std::string>{"dict-comprehension", "tuple-literal"});
    CHECK(construct_ids("s = {i for i in r}") == std::vector<std::string>{"set-comprehension"});
    CHECK(construct_ids("f = lambda: 1") == std::vector<std::string>{"lambda-expression"});
}

TEST_CASE("constructs inside f-string fields are detected") {
    auto ids = construct_multiset("s = f\"{[i for i in r]} and {d.format(1)}\"");
    CHECK(ids == std::multiset<std::string>{"string-formatting", "list-comprehension",
                                            "string-formatting"});
    // a format spec is not a string literal of its own
    CHECK(construct_ids("s = f'{x:>10}'") == std::vector<std::string>{"string-formatting"});

    auto occs = detect_in("s = f'{[i for i in r]}'");
    REQUIRE(occs.size() == 2);
    CHECK(occs[1].construct == "list-comprehension");
    CHECK(occs[1].displacement == 7);  // position inside the literal
}

TEST_CASE("match blocks: bodies are analyzed, patterns stay cheap") {
    auto ids = construct_multiset(
        "match command:\n"
        "    case 'print':\n"
        "        print(command)\n"
        "    case _:\n"
        "        pass\n");
    CHECK(ids == std::multiset<std::string>{"print-call"});
}

TEST_CASE("ordering is by line, then displacement, then construct id") {
    auto occs = detect_in("x = [1]; y = {'a': 1}\nprint(x)\n");
    REQUIRE(occs.size() == 3);
    CHECK(occs[0].construct == "list-literal");
    CHECK(occs[1].construct == "simple-dictionary");
    CHECK(occs[2].construct == "print-call");
    CHECK(std::is_sorted(occs.begin(), occs.end(), [](const auto& a, const auto& b) {
        return std::tuple(a.start_line, a.displacement, a.construct) <
               std::tuple(b.start_line, b.displacement, b.construct);
    }));
}

TEST_CASE("occurrence levels come from the active mapping") {
    LevelMapping overridden = LevelMapping::from_config("list-comprehension: B1\n");
    auto occs = detect_in("x = [i for i in r]", overridden);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].level == kB1);
}

TEST_CASE("detection is deterministic") {
    const char* src = "x = [1, {'a': [2]}]\nif x:\n    print(x)\n";
    auto a = detect_in(src);
    auto b = detect_in(src);
    CHECK(a == b);
}

TEST_CASE("concatenating two modules unions their occurrence multisets") {
    const std::string part_a = "print('a')\nx = [1, 2]\nif x:\n    pass\n";
    const std::string part_b = "d = {'k': 'v'}\nfor i in x:\n    print(i)\n";
    auto combined = construct_multiset(part_a + part_b);
    auto separate = construct_multiset(part_a);
    for (const std::string& id : construct_multiset(part_b)) separate.insert(id);
    CHECK(combined == separate);
}

TEST_CASE("every occurrence lies within the file's line count") {
    const std::string src = "def f():\n    return [i for i in range(3)]\n\nprint(f())\n";
    long line_count = std::count(src.begin(), src.end(), '\n');
    for (const Occurrence& occ : detect_in(src)) {
        CHECK(occ.start_line >= 1);
        CHECK(occ.end_line <= line_count);
        CHECK(occ.start_line <= occ.end_line);
        CHECK(occ.displacement >= 0);
    }
}
