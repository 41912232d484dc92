#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "treefpp/engine.hpp"
#include "treefpp/zoo.hpp"

using namespace treefpp;

namespace {

const char* kFourGenText =
    "degree 2\n"
    "gen a = (1, 1) (1 2)\n"
    "gen b = (a, c) ()\n"
    "gen c = (a, d) ()\n"
    "gen d = (1, b) ()\n";

GroupPresentation four_gen() { return parse_presentation(kFourGenText); }

}  // namespace

TEST_CASE("parsing a presentation") {
    GroupPresentation G = four_gen();
    CHECK(G.degree() == 2);
    CHECK(G.generator_count() == 4);
    CHECK(G.generator_names() == std::vector<std::string>{"a", "b", "c", "d"});
    CHECK(G.generator_index("a") == 0);
    CHECK(G.generator_index("d") == 3);
    CHECK(G.generator_index("x") == -1);
    CHECK(G.generator(0).root == 1);  // the swap
    CHECK(G.generator(1).root == 0);
    CHECK(G.generator(1).sections == std::vector<GenWord>{{1}, {3}});
    CHECK(G.generator(3).sections == std::vector<GenWord>{{}, {2}});
}

TEST_CASE("comments and whitespace are tolerated") {
    GroupPresentation G = parse_presentation(
        "# two-generator recursion\n"
        "degree 2\n"
        "\n"
        "gen a = ( 1 , b ) ( 1 2 )  # odometer-like\n"
        "gen b = (1, a) (1 2)\n");
    CHECK(G.generator_count() == 2);
    CHECK(G.generator(0).sections == std::vector<GenWord>{{}, {2}});
    CHECK(G.generator(0).root == 1);
}

TEST_CASE("canonical text round-trips") {
    GroupPresentation G = four_gen();
    CHECK(G.canonical_text() == kFourGenText);
    GroupPresentation H = parse_presentation(G.canonical_text());
    CHECK(H.canonical_text() == G.canonical_text());
}

TEST_CASE("evaluate builds portraits") {
    GroupPresentation G = four_gen();
    Portrait pa = G.evaluate(G.parse("a"), 2);
    CHECK(pa.labels == std::vector<uint16_t>{1, 0, 0});
    CHECK(*G.generator_portrait(1, 2) == pa);
    // involution, so the inverse has the same portrait
    CHECK(*G.generator_portrait(-1, 2) == pa);
    Portrait pb = G.evaluate(G.parse("b"), 3);
    // b = (a, c): left child carries a's swap, right child carries c's
    CHECK(pb.labels[0] == 0);
    CHECK(pb.labels[1] == 1);  // a at vertex 1
    CHECK(pb.labels[2] == 0);  // c has trivial root
    CHECK(pb.labels[5] == 1);  // c = (a, d), so a at vertex 2.1
    CHECK(is_identity(G.evaluate({}, 3)));
    CHECK(is_identity(G.evaluate(G.parse("a a"), 4)));
}

TEST_CASE("apply_word moves vertices") {
    GroupPresentation G = four_gen();
    CHECK(G.apply_word(G.parse("a"), {0}) == std::vector<uint8_t>{1});
    CHECK(G.apply_word(G.parse("a"), {1, 0}) == std::vector<uint8_t>{0, 0});
    CHECK(G.apply_word(G.parse("b"), {0}) == std::vector<uint8_t>{0});
    // b = (a, c) acts by a below the first letter
    CHECK(G.apply_word(G.parse("b"), {0, 0}) == std::vector<uint8_t>{0, 1});
    CHECK(G.apply_word({}, {1, 1}) == std::vector<uint8_t>{1, 1});
}

TEST_CASE("section words match the recursion") {
    GroupPresentation G = four_gen();
    CHECK(G.section_word(G.parse("b"), {0}) == G.parse("a"));
    CHECK(G.section_word(G.parse("b"), {1}) == G.parse("c"));
    CHECK(G.section_word(G.parse("d"), {0}) == GenWord{});
    // section of a composite matches the composed portraits
    const GenWord w = G.parse("a b");
    for (uint8_t x : {uint8_t{0}, uint8_t{1}}) {
        GenWord s = G.section_word(w, {x});
        Portrait expect = section(G.evaluate(w, 4), {x});
        CHECK(G.evaluate(s, 3) == expect);
    }
    // deeper path, two letters
    GenWord s2 = G.section_word(G.parse("b"), {1, 1});
    CHECK(equal_elements(G, s2, G.parse("d")).is_equal());
}

TEST_CASE("root permutations without portraits") {
    GroupPresentation G = four_gen();
    CHECK(word_root_perm(G, G.parse("a")) == 1);
    CHECK(word_root_perm(G, G.parse("b")) == 0);
    CHECK(word_root_perm(G, G.parse("a a")) == 0);
    CHECK(word_root_perm(G, G.parse("a b a")) == 0);
    CHECK(word_root_perm(G, {}) == 0);
}

TEST_CASE("equality: defining relations hold") {
    GroupPresentation G = four_gen();
    for (const char* rel : {"a a", "b b", "c c", "d d", "b c d", "d c b"}) {
        EqualityVerdict v = equal_elements(G, G.parse(rel), {});
        CHECK(v.is_equal());
    }
    CHECK(equal_elements(G, G.parse("b c"), G.parse("d")).is_equal());
}

TEST_CASE("equality: refutations carry a witness level") {
    GroupPresentation G = four_gen();
    EqualityVerdict ab = equal_elements(G, G.parse("a"), G.parse("b"));
    CHECK(ab.status == EqualityStatus::NotEqual);
    CHECK(ab.witness_level == 1);
    // b and c agree to depth 2 and split at depth 3
    EqualityVerdict bc = equal_elements(G, G.parse("b"), G.parse("c"));
    CHECK(bc.status == EqualityStatus::NotEqual);
    CHECK(bc.witness_level == 3);
    CHECK(G.evaluate(G.parse("b"), 2) == G.evaluate(G.parse("c"), 2));
    CHECK(G.evaluate(G.parse("b"), 3) != G.evaluate(G.parse("c"), 3));
}

TEST_CASE("equality: caps surface as Unknown, not as a wrong answer") {
    GroupPresentation G = four_gen();
    // depth cap stops before the level-3 witness is reachable
    EqualityVerdict deep = equal_elements(G, G.parse("b"), G.parse("c"), 1, 100);
    CHECK(deep.status == EqualityStatus::Unknown);
    // pair cap stops the closure of a genuinely trivial word
    EqualityVerdict wide = equal_elements(G, G.parse("b c d"), {}, 30, 1);
    CHECK(wide.status == EqualityStatus::Unknown);
    CHECK_THROWS_AS(equal_elements(G, {}, {}, 0, 1), std::invalid_argument);
}

TEST_CASE("parse errors point at the offending token") {
    auto expect_error = [](const char* text, int line, int column) {
        try {
            parse_presentation(text);
            FAIL("expected a parse error for: ", text);
        } catch (const ParseError& e) {
            CHECK(e.line == line);
            CHECK(e.column == column);
        }
    };
    // letter outside 1..degree inside the cycle
    expect_error("degree 2\ngen a = (1, 1) (1 3)\n", 2, 19);
    // undeclared generator in a section
    expect_error("degree 2\ngen a = (1, z) (1 2)\n", 2, 13);
    // generators before any degree line
    expect_error("gen a = (1, 1) (1 2)\n", 1, 4);
    // section count mismatch
    expect_error("degree 3\ngen a = (1, 1) (1 2 3)\n", 2, 14);
    // duplicate generator
    expect_error("degree 2\ngen a = (1, 1) ()\ngen a = (1, 1) ()\n", 3, 5);
    // degree out of range
    expect_error("degree 9\ngen a = () (1 2)\n", 1, 9);
    CHECK_THROWS_AS(parse_presentation("degree 2\n"), ParseError);
}

TEST_CASE("shared parse produces a usable pointer") {
    auto G = parse_presentation_shared(kFourGenText);
    REQUIRE(G != nullptr);
    CHECK(G->generator_count() == 4);
    CHECK(G->canonical_text() == kFourGenText);
}

TEST_CASE("presentation constructor validates directly built recursions") {
    CHECK_THROWS_AS(GroupPresentation(1, {{"a", {{}}, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(GroupPresentation(2, {{"a", {{}}, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(GroupPresentation(2, {{"a", {{}, {5}}, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(GroupPresentation(2, {{"a", {{}, {}}, 7}}), std::invalid_argument);
    GroupPresentation ok(2, {{"a", {{}, {1}}, 1}});
    CHECK(ok.generator_count() == 1);
}
