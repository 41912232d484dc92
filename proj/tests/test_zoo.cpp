#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "treefpp/zoo.hpp"

using namespace treefpp;

TEST_CASE("every built-in key builds with the right shape") {
    struct Expect {
        const char* key;
        int degree;
        size_t gens;  // 0 for finite-type entries
    };
    const Expect table[] = {
        {"grigorchuk", 2, 4},    {"basilica", 2, 2},
        {"ob", 2, 3},            {"chebyshev2", 2, 2},
        {"ggs:p=3,alpha=1.2", 3, 2},
        {"ggs:p=5,alpha=1.0.2.2", 5, 2},
        {"ggs:p=7,alpha=1.2.3.4.5.6", 7, 2},
        {"exceptional:d=3", 3, 2},
        {"exceptional:d=4", 4, 2},
        {"exceptional:d=8", 8, 2},
        {"wreath:sym2", 2, 0},   {"wreath:alt4", 4, 0},
        {"coset:alt3-sym3", 3, 0},
    };
    for (const Expect& e : table) {
        CAPTURE(e.key);
        ZooEntry z = build_zoo_group(e.key);
        CHECK(z.key == e.key);
        CHECK(z.handle.degree() == e.degree);
        CHECK_FALSE(z.description.empty());
        if (e.gens == 0) {
            CHECK(z.handle.is_finite_type());
        } else {
            REQUIRE(z.handle.presentation() != nullptr);
            CHECK(z.handle.presentation()->generator_count() == e.gens);
        }
    }
}

TEST_CASE("custom presentations load from a file") {
    const char* path = "/tmp/zoo_custom_test.grp";
    {
        std::ofstream out(path);
        out << "degree 2\ngen a = (1, a) (1 2)\n";
    }
    ZooEntry z = build_zoo_group(std::string("custom:") + path);
    REQUIRE(z.handle.presentation() != nullptr);
    CHECK(z.handle.presentation()->generator_count() == 1);
    CHECK(z.handle.degree() == 2);
    std::remove(path);
    CHECK_THROWS_AS(build_zoo_group("custom:/tmp/zoo_no_such_file.grp"),
                    std::invalid_argument);
}

TEST_CASE("malformed keys are rejected") {
    const char* bad[] = {
        "ggs:p=4,alpha=1.2.1",        // p not prime
        "ggs:p=3,alpha=1.1",          // sum not 0 mod p
        "ggs:p=3,alpha=0.0",          // vanishing exponent list
        "ggs:p=5,alpha=1.4",          // wrong length
        "ggs:p=3",                    // missing alpha
        "exceptional:d=2",            // family starts at 3
        "exceptional:d=9",            // past the supported degree
        "wreath:sym9",                // permutation degree out of range
        "coset:cyc5-sym5",            // C5 is not normal in S5
        "coset:alt3",                 // missing the dash
        "nonsense",                   // unknown head
        "grigorchuk:x=1",             // parameters on a plain group
    };
    for (const char* key : bad) {
        CAPTURE(key);
        CHECK_THROWS_AS(build_zoo_group(key), std::invalid_argument);
    }
}

TEST_CASE("the degree-p spinal recursion is as declared") {
    ZooEntry z = build_zoo_group("ggs:p=3,alpha=1.2");
    auto G = z.handle.presentation();
    REQUIRE(G != nullptr);
    const GeneratorRecursion& a = G->generator(0);
    const GeneratorRecursion& b = G->generator(1);
    CHECK(a.name == "a");
    CHECK(b.name == "b");
    // a is the rooted p-cycle
    CHECK(a.sections == std::vector<GenWord>{{}, {}, {}});
    CHECK(PermTable::shared(3).is_single_cycle(a.root));
    // b carries a^alpha_i in the first p-1 slots and recurses in the last
    CHECK(b.sections[0] == GenWord{1});
    CHECK(b.sections[1] == GenWord{1, 1});
    CHECK(b.sections[2] == GenWord{2});
    CHECK(b.root == 0);
}

TEST_CASE("parameters of the exceptional polynomials check out") {
    for (int d = 3; d <= 8; ++d) {
        for (int branch = 0; branch < d - 1; ++branch) {
            CAPTURE(d);
            CAPTURE(branch);
            ComplexParameter a = exceptional_parameter(d, branch);
            ParameterResiduals r = exceptional_parameter_residuals(d, a);
            CHECK(r.fixed_point <= 1e-9);
            CHECK(r.critical_a <= 1e-9);
            CHECK(r.critical_free <= 1e-9);
        }
    }
    // distinct branches give distinct parameters
    for (int d = 3; d <= 8; ++d) {
        for (int i = 0; i < d - 1; ++i) {
            for (int j = i + 1; j < d - 1; ++j) {
                ComplexParameter x = exceptional_parameter(d, i);
                ComplexParameter y = exceptional_parameter(d, j);
                CHECK(std::hypot(x.re - y.re, x.im - y.im) > 1e-6);
            }
        }
    }
    CHECK_THROWS_AS(exceptional_parameter(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(exceptional_parameter(3, 2), std::invalid_argument);
}

TEST_CASE("orbifold Euler characteristics") {
    CHECK(hyperbolicity_chi({}) == 2);
    CHECK(hyperbolicity_chi({2, 2, 2, 2}) == 0);
    CHECK(hyperbolicity_chi({2, 4, 4}) == 0);
    CHECK(hyperbolicity_chi({std::nullopt, std::nullopt}) == 0);
    // the exceptional family has signature (infinity, infinity, d-1), so
    // chi = -(d-2)/(d-1)
    for (int d = 3; d <= 8; ++d) {
        std::vector<std::optional<uint64_t>> nu = {std::nullopt, std::nullopt,
                                                   uint64_t(d - 1)};
        mpq_class expected(-(d - 2), d - 1);
        expected.canonicalize();
        CHECK(hyperbolicity_chi(nu) == expected);
    }
    CHECK(hyperbolicity_chi({{3}, {3}, {3}}) == 0);            // Euclidean
    CHECK(hyperbolicity_chi({{2}, {3}, {3}}) == mpq_class(1, 6));  // spherical
    CHECK_THROWS_AS(hyperbolicity_chi({{0}}), std::invalid_argument);
}

TEST_CASE("the product of generators can witness level transitivity") {
    auto exc = build_zoo_group("exceptional:d=3").handle.presentation();
    for (int n = 1; n <= 5; ++n) {
        CAPTURE(n);
        CHECK(product_of_generators_transitive(*exc, n));
    }
    auto cheb = build_zoo_group("chebyshev2").handle.presentation();
    CHECK(product_of_generators_transitive(*cheb, 3));
    // a group whose generator product has trivial root action
    auto flat = parse_presentation_shared("degree 2\ngen a = (a, a) ()\n");
    CHECK_FALSE(product_of_generators_transitive(*flat, 1));
}

TEST_CASE("the catalogue lists one row per family") {
    auto rows = list_zoo();
    CHECK(rows.size() >= 9);
    bool saw_spinal = false;
    for (const auto& r : rows) {
        CHECK_FALSE(r.pattern.empty());
        CHECK_FALSE(r.example.empty());
        CHECK_FALSE(r.description.empty());
        if (r.example.rfind("ggs:", 0) == 0) {
            saw_spinal = true;
            // the printed example must itself build
            CHECK_NOTHROW(build_zoo_group(r.example));
        }
    }
    CHECK(saw_spinal);
}
