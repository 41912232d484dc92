#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "treefpp/perms.hpp"
#include "treefpp/rng.hpp"

using namespace treefpp;

namespace {

uint64_t factorial(int n) {
    uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Perm image_list(const PermTable& t, uint16_t r) { return t.perm(r); }

}  // namespace

TEST_CASE("identity has rank zero at every degree") {
    for (int d = 2; d <= PermTable::kMaxDegree; ++d) {
        const PermTable& t = PermTable::shared(d);
        CHECK(t.size() == factorial(d));
        CHECK(t.is_identity(0));
        for (int x = 0; x < d; ++x) CHECK(t.apply(0, uint8_t(x)) == x);
        CHECK(t.fixed_points(0) == d);
        CHECK(t.parity(0) == 0);
        CHECK(t.cycle_notation(0) == "()");
    }
}

TEST_CASE("rank_of inverts perm for every rank") {
    for (int d = 2; d <= 6; ++d) {
        const PermTable& t = PermTable::shared(d);
        for (uint32_t r = 0; r < t.size(); ++r)
            CHECK(t.rank_of(image_list(t, uint16_t(r))) == r);
    }
    // spot checks at the top degree
    const PermTable& t8 = PermTable::shared(8);
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const uint16_t r = uint16_t(rng.below(t8.size()));
        CHECK(t8.rank_of(image_list(t8, r)) == r);
    }
}

TEST_CASE("ranks are lexicographic on image lists") {
    const PermTable& t = PermTable::shared(3);
    CHECK(t.perm(0) == Perm{0, 1, 2});
    CHECK(t.perm(1) == Perm{0, 2, 1});
    CHECK(t.perm(2) == Perm{1, 0, 2});
    CHECK(t.perm(3) == Perm{1, 2, 0});
    CHECK(t.perm(4) == Perm{2, 0, 1});
    CHECK(t.perm(5) == Perm{2, 1, 0});
}

TEST_CASE("compose applies the right factor first") {
    const PermTable& t = PermTable::shared(3);
    const uint16_t swap01 = t.rank_of({1, 0, 2});
    const uint16_t cyc = t.rank_of({1, 2, 0});  // x -> x+1 mod 3
    const uint16_t c = t.compose(swap01, cyc);
    for (int x = 0; x < 3; ++x)
        CHECK(t.apply(c, uint8_t(x)) == t.apply(swap01, t.apply(cyc, uint8_t(x))));
}

TEST_CASE("composition group laws across degrees") {
    for (int d : {2, 3, 5, 7}) {
        const PermTable& t = PermTable::shared(d);
        Rng rng(101 + d);
        for (int i = 0; i < 150; ++i) {
            const uint16_t p = uint16_t(rng.below(t.size()));
            const uint16_t q = uint16_t(rng.below(t.size()));
            const uint16_t r = uint16_t(rng.below(t.size()));
            CHECK(t.compose(p, t.inverse(p)) == 0);
            CHECK(t.compose(t.inverse(p), p) == 0);
            CHECK(t.compose(t.compose(p, q), r) == t.compose(p, t.compose(q, r)));
            CHECK(t.compose(p, 0) == p);
            CHECK(t.compose(0, p) == p);
        }
    }
}

TEST_CASE("fixed points and parity match the image lists") {
    for (int d : {3, 4, 5}) {
        const PermTable& t = PermTable::shared(d);
        for (uint32_t r = 0; r < t.size(); ++r) {
            const Perm& p = t.perm(uint16_t(r));
            int fixed = 0;
            for (int x = 0; x < d; ++x)
                if (p[x] == x) ++fixed;
            CHECK(t.fixed_points(uint16_t(r)) == fixed);
            int inversions = 0;
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j)
                    if (p[i] > p[j]) ++inversions;
            CHECK(t.parity(uint16_t(r)) == inversions % 2);
        }
    }
}

TEST_CASE("single cycle detection") {
    const PermTable& t3 = PermTable::shared(3);
    CHECK(t3.is_single_cycle(t3.rank_of({1, 2, 0})));
    CHECK(t3.is_single_cycle(t3.rank_of({2, 0, 1})));
    CHECK_FALSE(t3.is_single_cycle(0));
    CHECK_FALSE(t3.is_single_cycle(t3.rank_of({0, 2, 1})));
    const PermTable& t4 = PermTable::shared(4);
    CHECK(t4.is_single_cycle(t4.rank_of({1, 2, 3, 0})));
    CHECK_FALSE(t4.is_single_cycle(t4.rank_of({1, 0, 3, 2})));  // two 2-cycles
}

TEST_CASE("power and order") {
    const PermTable& t = PermTable::shared(5);
    const uint16_t cyc = t.rank_of({1, 2, 3, 4, 0});
    CHECK(t.order(cyc) == 5);
    CHECK(t.power(cyc, 5) == 0);
    CHECK(t.power(cyc, 0) == 0);
    CHECK(t.power(cyc, 7) == t.compose(cyc, t.compose(cyc, t.compose(cyc, t.power(cyc, 4)))));
    const uint16_t swap01 = t.rank_of({1, 0, 2, 3, 4});
    CHECK(t.order(swap01) == 2);
    CHECK(t.order(0) == 1);
    Rng rng(9);
    for (int i = 0; i < 80; ++i) {
        const uint16_t p = uint16_t(rng.below(t.size()));
        CHECK(t.power(p, t.order(p)) == 0);
    }
}

TEST_CASE("cycle notation is one-based") {
    const PermTable& t = PermTable::shared(4);
    CHECK(t.cycle_notation(t.rank_of({1, 0, 2, 3})) == "(1 2)");
    CHECK(t.cycle_notation(t.rank_of({1, 2, 3, 0})) == "(1 2 3 4)");
    CHECK(t.cycle_notation(t.rank_of({1, 0, 3, 2})) == "(1 2)(3 4)");
}

TEST_CASE("group closure of generator sets") {
    const PermTable& t = PermTable::shared(3);
    const uint16_t swap01 = t.rank_of({1, 0, 2});
    const uint16_t cyc = t.rank_of({1, 2, 0});

    auto trivial = perm_group_closure(t, {});
    CHECK(trivial == std::vector<uint16_t>{0});

    auto c2 = perm_group_closure(t, {swap01});
    CHECK(c2.size() == 2);
    CHECK(std::binary_search(c2.begin(), c2.end(), uint16_t(0)));

    auto a3 = perm_group_closure(t, {cyc});
    CHECK(a3.size() == 3);
    for (uint16_t r : a3) CHECK(t.parity(r) == 0);

    auto s3 = perm_group_closure(t, {swap01, cyc});
    CHECK(s3.size() == 6);
    CHECK(std::is_sorted(s3.begin(), s3.end()));

    // closure is a subgroup: closed under composition and inverses
    for (uint16_t p : s3)
        for (uint16_t q : s3) {
            CHECK(std::binary_search(s3.begin(), s3.end(), t.compose(p, q)));
            CHECK(std::binary_search(s3.begin(), s3.end(), t.inverse(p)));
        }
}

TEST_CASE("transitivity of generated groups") {
    const PermTable& t = PermTable::shared(3);
    CHECK(perm_group_transitive(t, {t.rank_of({1, 2, 0})}));
    CHECK(perm_group_transitive(t, {t.rank_of({1, 0, 2}), t.rank_of({0, 2, 1})}));
    CHECK_FALSE(perm_group_transitive(t, {t.rank_of({1, 0, 2})}));
    CHECK_FALSE(perm_group_transitive(t, {}));
    const PermTable& t4 = PermTable::shared(4);
    CHECK_FALSE(perm_group_transitive(t4, {t4.rank_of({1, 0, 3, 2})}));
}

TEST_CASE("lemire sampling stays in range and hits every value") {
    Rng rng(7);
    std::set<uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const uint64_t v = rng.below(6);
        CHECK(v < 6);
        seen.insert(v);
    }
    CHECK(seen.size() == 6);
}

TEST_CASE("sample streams are deterministic and index-separated") {
    Rng a = sample_stream(42, 0);
    Rng b = sample_stream(42, 0);
    Rng c = sample_stream(42, 1);
    bool all_equal = true;
    bool any_differ = false;
    for (int i = 0; i < 16; ++i) {
        const uint64_t x = a.next();
        all_equal = all_equal && (x == b.next());
        any_differ = any_differ || (x != c.next());
    }
    CHECK(all_equal);
    CHECK(any_differ);
}
