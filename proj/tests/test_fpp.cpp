#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "treefpp/fpp.hpp"
#include "treefpp/zoo.hpp"

using namespace treefpp;

namespace {

std::shared_ptr<QuotientSource> source_of(const std::string& key) {
    return build_zoo_group(key).handle.source();
}

mpq_class q(long num, long den) { return make_rational(num, den); }

}  // namespace

TEST_CASE("exact fixed-leaf proportions, four-generator torsion group") {
    auto src = source_of("grigorchuk");
    CHECK(fpp_exact(*src, 1) == q(1, 2));
    CHECK(fpp_exact(*src, 2) == q(3, 8));
    CHECK(fpp_exact(*src, 3) == q(39, 128));
    CHECK(fpp_exact(*src, 4) == q(1063, 4096));
}

TEST_CASE("exact fixed-leaf proportions, two-generator torsion-free group") {
    auto src = source_of("basilica");
    CHECK(fpp_exact(*src, 1) == q(1, 2));
    CHECK(fpp_exact(*src, 2) == q(3, 8));
    CHECK(fpp_exact(*src, 3) == q(19, 64));
    CHECK(fpp_exact(*src, 4) == q(1023, 4096));
}

TEST_CASE("proportions for the degree-2 monodromy pair follow a closed form") {
    auto src = source_of("chebyshev2");
    // (2^(n-1) + 1) / 2^(n+1), already valid at n = 1
    for (int n = 1; n <= 8; ++n) {
        const long p = (1L << (n - 1)) + 1;
        CHECK(fpp_exact(*src, n) == q(p, 1L << (n + 1)));
    }
}

TEST_CASE("degree-3 spinal group proportions") {
    auto src = source_of("ggs:p=3,alpha=1.2");
    CHECK(fpp_exact(*src, 1) == q(1, 3));
    CHECK(fpp_exact(*src, 2) == q(7, 27));
    CHECK(fpp_exact(*src, 3) == q(451, 2187));
}

TEST_CASE("full wreath closure matches its recursion") {
    auto src = source_of("wreath:sym2");
    CHECK(fpp_exact(*src, 1) == q(1, 2));
    CHECK(fpp_exact(*src, 2) == q(3, 8));
    CHECK(fpp_exact(*src, 3) == q(39, 128));
}

TEST_CASE("coset-constrained closure proportions") {
    auto src = source_of("coset:alt3-sym3");
    CHECK(fpp_exact(*src, 1) == q(2, 3));
    CHECK(fpp_exact(*src, 2) == q(50, 81));
}

TEST_CASE("exact series never increases with the level") {
    auto run = [](const char* key, int top) {
        CAPTURE(key);
        auto src = source_of(key);
        mpq_class prev = fpp_exact(*src, 1);
        for (int n = 2; n <= top; ++n) {
            mpq_class cur = fpp_exact(*src, n);
            CHECK(cur <= prev);
            prev = cur;
        }
    };
    for (const char* key : {"grigorchuk", "basilica", "chebyshev2"}) run(key, 4);
    run("ggs:p=3,alpha=1.2", 3);  // the level-4 quotient is past the default limit
}

TEST_CASE("fixed-leaf histogram at level 2") {
    auto src = source_of("grigorchuk");
    XnHistogram h = xn_exact(*src, 2);
    CHECK(h.exact);
    CHECK(h.level == 2);
    CHECK(h.population == 8);
    CHECK(h.counts == std::map<uint64_t, uint64_t>{{0, 5}, {2, 2}, {4, 1}});
    CHECK(h.mass.at(0) == q(5, 8));
    CHECK(h.mass.at(2) == q(1, 4));
    CHECK(h.mass.at(4) == q(1, 8));
    // the proportion is the mass of {X > 0}
    mpq_class positive = h.mass.at(2) + h.mass.at(4);
    CHECK(positive == fpp_exact(*src, 2));
}

TEST_CASE("conditional fixation against the crude bound") {
    auto src = source_of("grigorchuk");
    // no element of the level-2 quotient fixes exactly one leaf
    ConditionalResult none = conditional_fixation_exact(*src, 2, 1, 1);
    CHECK(none.exact);
    CHECK(none.empty_condition);
    CHECK_FALSE(none.exact_value.has_value());
    CHECK(none.bound == q(1, 2));

    ConditionalResult two = conditional_fixation_exact(*src, 2, 1, 2);
    REQUIRE(two.exact_value.has_value());
    CHECK(*two.exact_value == q(1, 2));
    ConditionalResult four = conditional_fixation_exact(*src, 2, 1, 4);
    REQUIRE(four.exact_value.has_value());
    CHECK(*four.exact_value == q(3, 8));

    auto bas = source_of("basilica");
    ConditionalResult bfour = conditional_fixation_exact(*bas, 2, 1, 4);
    REQUIRE(bfour.exact_value.has_value());
    CHECK(*bfour.exact_value == q(3, 4));
    // the crude bound can fail: here the conditional mass exceeds 1 - 1/|pi_1|
    CHECK(*bfour.exact_value > bfour.bound);
}

TEST_CASE("conditional fixation by sampling tracks the exact value") {
    auto src = source_of("grigorchuk");
    ConditionalResult mc =
        conditional_fixation_mc(*src, 2, 1, 4, 20000, 64, 999);
    CHECK_FALSE(mc.exact);
    CHECK(mc.samples_total == 20000);
    CHECK(mc.samples_in_condition > 0);
    CHECK(mc.hits <= mc.samples_in_condition);
    // exact value 3/8; the walk at this length is near-mixed, allow wide slack
    CHECK(mc.estimate > 0.25);
    CHECK(mc.estimate < 0.5);
    CHECK(mc.wilson_lo <= mc.estimate);
    CHECK(mc.wilson_hi >= mc.estimate);
    ConditionalResult again =
        conditional_fixation_mc(*src, 2, 1, 4, 20000, 64, 999);
    CHECK(again.hits == mc.hits);
    CHECK(again.samples_in_condition == mc.samples_in_condition);
}

TEST_CASE("cylinder counts factor as products over singletons") {
    for (const char* key : {"grigorchuk", "basilica"}) {
        CAPTURE(key);
        auto src = source_of(key);
        for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 1}}) {
            auto base = src->quotient(n, kDefaultElementLimit);
            auto sec = src->quotient(m, kDefaultElementLimit);
            TreeGeometry geo(2, n);
            for (uint64_t vi = 0; vi < geo.vertices_at(n); ++vi) {
                std::vector<uint8_t> v;
                uint64_t x = vi;
                for (int i = 0; i < n; ++i) {
                    v.insert(v.begin(), static_cast<uint8_t>(x % 2));
                    x /= 2;
                }
                for (uint64_t ai = 0; ai < base->order(); ai += 3) {
                    for (uint64_t bi = 0; bi < sec->order(); bi += 3) {
                        CylinderCheck c = cylinder_independence_check(
                            *src, n, m, v, {base->portrait(ai)}, {sec->portrait(bi)});
                        CHECK(c.equal);
                        CHECK(c.lhs == c.rhs);
                    }
                }
            }
        }
    }
}

TEST_CASE("cylinder check edge cases") {
    auto src = source_of("grigorchuk");
    auto base = src->quotient(1, kDefaultElementLimit);
    auto sec = src->quotient(1, kDefaultElementLimit);
    // empty base set: both sides vanish
    CylinderCheck none =
        cylinder_independence_check(*src, 1, 1, {0}, {}, {sec->portrait(0)});
    CHECK(none.equal);
    CHECK(none.lhs == 0);
    CHECK(none.rhs == 0);
    // full sets on both sides: probability one on both sides
    std::vector<Portrait> all_base, all_sec;
    for (uint64_t i = 0; i < base->order(); ++i) all_base.push_back(base->portrait(i));
    for (uint64_t i = 0; i < sec->order(); ++i) all_sec.push_back(sec->portrait(i));
    CylinderCheck full = cylinder_independence_check(*src, 1, 1, {1}, all_base, all_sec);
    CHECK(full.equal);
    CHECK(full.lhs == 1);
    CHECK(full.rhs == 1);
}

TEST_CASE("walk estimates approach the exact proportion") {
    auto G = build_zoo_group("grigorchuk").handle.presentation();
    McEstimate est = fpp_mc(*G, 3, 50000, 256, 31337);
    CHECK(est.samples == 50000);
    CHECK(est.hits > 0);
    const double exact = 39.0 / 128.0;
    CHECK(std::abs(est.estimate - exact) < 0.02);
    CHECK(est.std_error > 0);
    CHECK(est.std_error < 0.005);
    McEstimate rerun = fpp_mc(*G, 3, 50000, 256, 31337);
    CHECK(rerun.hits == est.hits);  // same seed, same streams
    McEstimate other = fpp_mc(*G, 3, 50000, 256, 31338);
    CHECK(other.hits != est.hits);
}

TEST_CASE("zero-length walks never move") {
    auto G = build_zoo_group("basilica").handle.presentation();
    McEstimate est = fpp_mc(*G, 2, 500, 0, 1);
    CHECK(est.hits == est.samples);
    CHECK(est.estimate == 1.0);
}

TEST_CASE("single walk draws come from the library's own chain") {
    auto G = build_zoo_group("grigorchuk").handle.presentation();
    Rng r1(555), r2(555);
    Portrait p1 = walk_sample_portrait(*G, 3, 64, r1);
    Portrait p2 = walk_sample_portrait(*G, 3, 64, r2);
    CHECK(p1 == p2);
    CHECK(p1.depth == 3);
    CHECK(p1.degree == 2);
}

TEST_CASE("direct draws for closed groups hit the exact proportion") {
    auto wreath = build_zoo_group("wreath:sym2");
    McEstimate est = fpp_mc_finite_type(*wreath.handle.finite_type(), 2, 60000, 2024);
    const double exact = 3.0 / 8.0;
    CHECK(std::abs(est.estimate - exact) <= 3 * est.std_error + 1e-9);
    XnHistogram h = xn_mc_finite_type(*wreath.handle.finite_type(), 2, 5000, 7);
    CHECK_FALSE(h.exact);
    CHECK(h.population == 5000);
    uint64_t total = 0;
    for (const auto& [value, count] : h.counts) {
        CHECK(value <= 4);
        total += count;
    }
    CHECK(total == 5000);
}

TEST_CASE("series report: automatic mode picks a provenance per level") {
    auto entry = build_zoo_group("wreath:sym2");
    FppConfig cfg;
    cfg.mode = FppMode::Auto;
    cfg.max_level = 5;
    cfg.element_limit = 100;  // forces the switch after level 2 (order 8 -> 128)
    FppSeries series = fpp_report(entry.handle, cfg);
    REQUIRE(series.entries.size() == 5);
    CHECK(series.entries[0].provenance == "exact");
    CHECK(series.entries[1].provenance == "exact");
    for (int i = 2; i < 5; ++i) {
        CAPTURE(i);
        CHECK(series.entries[i].provenance.rfind("recursion", 0) == 0);
        REQUIRE(series.entries[i].exact_value.has_value());
    }
    // recursion continues the exact prefix seamlessly
    CHECK(*series.entries[2].exact_value == q(39, 128));
    CHECK(series.entries[0].quotient_order == 2);
    CHECK(series.entries[1].quotient_order == 8);
}

TEST_CASE("series report: walks take over for presentations past the limit") {
    auto entry = build_zoo_group("grigorchuk");
    FppConfig cfg;
    cfg.mode = FppMode::Auto;
    cfg.max_level = 3;
    cfg.element_limit = 4;  // level 2 has order 8, too big
    cfg.samples = 2000;
    cfg.seed = 99;
    FppSeries series = fpp_report(entry.handle, cfg);
    REQUIRE(series.entries.size() == 3);
    CHECK(series.entries[0].provenance == "exact");
    for (size_t i = 1; i < 3; ++i) {
        const FppEntry& e = series.entries[i];
        CAPTURE(e.level);
        CHECK(e.provenance == "mc");
        REQUIRE(e.mc.has_value());
        CHECK(e.mc->samples == 2000);
    }
    CHECK_FALSE(series.note.empty());
}

TEST_CASE("series report: sampling without a seed is refused") {
    auto entry = build_zoo_group("grigorchuk");
    FppConfig cfg;
    cfg.mode = FppMode::Mc;
    cfg.max_level = 2;
    CHECK_THROWS_AS(fpp_report(entry.handle, cfg), std::invalid_argument);
}

TEST_CASE("argument validation") {
    auto src = source_of("grigorchuk");
    CHECK_THROWS_AS(fpp_exact(*src, 0), std::invalid_argument);
    CHECK_THROWS_AS(xn_exact(*src, -1), std::invalid_argument);
    auto G = build_zoo_group("grigorchuk").handle.presentation();
    CHECK_THROWS_AS(fpp_mc(*G, 0, 10, 1, 1), std::invalid_argument);
}
