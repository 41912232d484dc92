#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "treefpp/portrait.hpp"
#include "treefpp/rng.hpp"

using namespace treefpp;

namespace {

Portrait random_portrait(int degree, int depth, Rng& rng) {
    const PermTable& t = PermTable::shared(degree);
    TreeGeometry geom(degree, depth);
    Portrait p;
    p.degree = uint8_t(degree);
    p.depth = uint8_t(depth);
    p.labels.resize(geom.label_count);
    for (auto& lab : p.labels) lab = uint16_t(rng.below(t.size()));
    return p;
}

// degree 2: portrait acting only at the root
Portrait root_swap(int depth) {
    Portrait p = identity_portrait(2, depth);
    p.labels[0] = PermTable::shared(2).rank_of({1, 0});
    return p;
}

}  // namespace

TEST_CASE("tree geometry offsets and counts") {
    TreeGeometry g23(2, 3);
    CHECK(g23.level_offset == std::vector<uint64_t>{0, 1, 3, 7});
    CHECK(g23.label_count == 7);
    CHECK(g23.leaf_count == 8);
    CHECK(g23.vertices_at(0) == 1);
    CHECK(g23.vertices_at(2) == 4);

    TreeGeometry g32(3, 2);
    CHECK(g32.level_offset == std::vector<uint64_t>{0, 1, 4});
    CHECK(g32.label_count == 4);
    CHECK(g32.leaf_count == 9);
    CHECK(TreeGeometry::child(2, 3, 1) == 7);
}

TEST_CASE("identity portrait") {
    const Portrait id = identity_portrait(2, 3);
    CHECK(is_identity(id));
    CHECK(id.labels.size() == 7);
    CHECK(fixed_leaf_count(id) == 8);
    CHECK(has_fixed_leaf(id));
    CHECK(leaf_count(id) == 8);
    for (int k = 0; k <= 3; ++k) CHECK(fixed_vertex_count(id, k) == uint64_t(1) << k);
}

TEST_CASE("apply_vertex descends through original letters") {
    // root swap, identity below: first letter flips, the rest pass through
    const Portrait p = root_swap(3);
    CHECK(apply_vertex(p, {0, 1, 0}) == std::vector<uint8_t>{1, 1, 0});
    CHECK(apply_vertex(p, {1, 0, 1}) == std::vector<uint8_t>{0, 0, 1});
    CHECK(fixed_leaf_count(p) == 0);
    CHECK_FALSE(has_fixed_leaf(p));
    CHECK(fixed_vertex_count(p, 0) == 1);
    CHECK(fixed_vertex_count(p, 1) == 0);
}

TEST_CASE("compose applies the right factor first") {
    const PermTable& t = PermTable::shared(2);
    // a: swap below child 0 only; b: swap at the root
    Portrait a = identity_portrait(2, 2);
    a.labels[1] = t.rank_of({1, 0});
    const Portrait b = root_swap(2);

    const Portrait ab = compose(a, b);  // b first
    // path {0,0}: b sends it to {1,0}; a acts trivially below child 1
    CHECK(apply_vertex(ab, {0, 0}) == std::vector<uint8_t>{1, 0});
    // path {1,0}: b sends it to {0,0}; a swaps below child 0
    CHECK(apply_vertex(ab, {1, 0}) == std::vector<uint8_t>{0, 1});

    const Portrait ba = compose(b, a);  // a first
    CHECK(apply_vertex(ba, {0, 0}) == std::vector<uint8_t>{1, 1});
    CHECK(apply_vertex(ba, {1, 0}) == std::vector<uint8_t>{0, 0});
    CHECK_FALSE(ab == ba);
}

TEST_CASE("composition laws on random portraits") {
    for (int degree : {2, 3, 6}) {
        Rng rng(degree * 13 + 1);
        for (int i = 0; i < 40; ++i) {
            const Portrait a = random_portrait(degree, 3, rng);
            const Portrait b = random_portrait(degree, 3, rng);
            const Portrait c = random_portrait(degree, 3, rng);
            CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
            CHECK(compose(a, identity_portrait(degree, 3)) == a);
            CHECK(compose(identity_portrait(degree, 3), a) == a);
            CHECK(is_identity(compose(a, inverse(a))));
            CHECK(is_identity(compose(inverse(a), a)));
            CHECK(inverse(compose(a, b)) == compose(inverse(b), inverse(a)));
        }
    }
}

TEST_CASE("apply_vertex is the composed action") {
    Rng rng(77);
    for (int i = 0; i < 30; ++i) {
        const Portrait a = random_portrait(3, 3, rng);
        const Portrait b = random_portrait(3, 3, rng);
        const Portrait ab = compose(a, b);
        std::vector<uint8_t> path = {uint8_t(rng.below(3)), uint8_t(rng.below(3)),
                                     uint8_t(rng.below(3))};
        CHECK(apply_vertex(ab, path) == apply_vertex(a, apply_vertex(b, path)));
    }
}

TEST_CASE("sections compose by the cocycle rule") {
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        const Portrait a = random_portrait(2, 4, rng);
        const Portrait b = random_portrait(2, 4, rng);
        for (uint8_t x : {0, 1}) {
            const std::vector<uint8_t> v = {x};
            const Portrait lhs = section(compose(a, b), v);
            const Portrait rhs = compose(section(a, apply_vertex(b, v)), section(b, v));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("section drops depth and matches sub-action") {
    Rng rng(8);
    const Portrait p = random_portrait(3, 3, rng);
    const std::vector<uint8_t> v = {2};
    const Portrait s = section(p, v);
    CHECK(s.depth == 2);
    // action below v: p(v w) = p(v) . s(w)
    for (uint8_t x = 0; x < 3; ++x)
        for (uint8_t y = 0; y < 3; ++y) {
            const auto full = apply_vertex(p, {2, x, y});
            const auto sub = apply_vertex(s, {x, y});
            CHECK(full[1] == sub[0]);
            CHECK(full[2] == sub[1]);
        }
    CHECK(section(p, {}) == p);
}

TEST_CASE("truncate is compatible with composition") {
    Rng rng(21);
    for (int i = 0; i < 30; ++i) {
        const Portrait a = random_portrait(2, 4, rng);
        const Portrait b = random_portrait(2, 4, rng);
        CHECK(truncate(compose(a, b), 2) == compose(truncate(a, 2), truncate(b, 2)));
        CHECK(truncate(a, 4) == a);
        CHECK(truncate(a, 1).labels.size() == 1);
    }
}

TEST_CASE("fixed leaf count matches a direct walk") {
    Rng rng(31);
    for (int i = 0; i < 25; ++i) {
        const Portrait p = random_portrait(2, 4, rng);
        uint64_t direct = 0;
        for (const auto& path : level_paths(2, 4))
            if (apply_vertex(p, path) == path) ++direct;
        CHECK(fixed_leaf_count(p) == direct);
        CHECK(has_fixed_leaf(p) == (direct > 0));
    }
}

TEST_CASE("fixed vertex count at intermediate levels") {
    Rng rng(32);
    for (int i = 0; i < 25; ++i) {
        const Portrait p = random_portrait(3, 3, rng);
        for (int level = 0; level <= 3; ++level) {
            uint64_t direct = 0;
            for (const auto& path : level_paths(3, level))
                if (apply_vertex(p, path) == path) ++direct;
            CHECK(fixed_vertex_count(p, level) == direct);
        }
        CHECK(fixed_vertex_count(p, 3) == fixed_leaf_count(p));
    }
}

TEST_CASE("level paths enumerate lexicographically") {
    const auto paths = level_paths(2, 2);
    REQUIRE(paths.size() == 4);
    CHECK(paths[0] == std::vector<uint8_t>{0, 0});
    CHECK(paths[1] == std::vector<uint8_t>{0, 1});
    CHECK(paths[2] == std::vector<uint8_t>{1, 0});
    CHECK(paths[3] == std::vector<uint8_t>{1, 1});
    CHECK(level_paths(3, 0).size() == 1);
    CHECK(level_paths(3, 0)[0].empty());
}

TEST_CASE("label encoding width") {
    CHECK(bytes_per_label(2) == 1);
    CHECK(bytes_per_label(5) == 1);   // 5! = 120
    CHECK(bytes_per_label(6) == 2);   // 6! = 720
    CHECK(bytes_per_label(8) == 2);
}

TEST_CASE("encode and decode round-trip") {
    for (int degree : {2, 3, 6}) {
        Rng rng(degree);
        for (int depth = 1; depth <= 3; ++depth) {
            for (int i = 0; i < 10; ++i) {
                const Portrait p = random_portrait(degree, depth, rng);
                std::vector<uint8_t> buf(p.labels.size() * bytes_per_label(degree));
                encode_labels(p, buf.data());
                CHECK(decode_labels(degree, depth, buf.data()) == p);

                const auto framed = encode_portrait(p);
                CHECK(framed.size() == buf.size() + 4);
                CHECK(decode_portrait(framed) == p);
            }
        }
    }
}

TEST_CASE("portrait hash separates distinct portraits") {
    const Portrait id = identity_portrait(2, 3);
    const Portrait p = root_swap(3);
    CHECK(portrait_hash(id) == portrait_hash(identity_portrait(2, 3)));
    CHECK(portrait_hash(id) != portrait_hash(p));
    Rng rng(55);
    const Portrait a = random_portrait(3, 2, rng);
    Portrait b = a;
    b.labels.back() = uint16_t((b.labels.back() + 1) % PermTable::shared(3).size());
    CHECK(portrait_hash(a) != portrait_hash(b));
}
