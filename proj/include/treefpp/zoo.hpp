#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treefpp/fpp.hpp"

namespace treefpp {

struct ZooEntry {
    std::string key;
    std::string description;
    GroupHandle handle;
    std::vector<std::string> facts;  // informal expectations shown by the CLI
};

struct ZooListing {
    std::string pattern;
    std::string example;
    std::string description;
};

std::vector<ZooListing> list_zoo();

// Keys: grigorchuk | basilica | ob | chebyshev2 | ggs:p=<prime>,alpha=<i.j...>
// | exceptional:d=<k> | wreath:<perm-group> | coset:<q>-<p> | custom:<file>.
// Permutation groups are named sym<k>, alt<k>, cyc<k> with 2 <= k <= 8.
ZooEntry build_zoo_group(const std::string& key, int threads = 1);

struct ComplexParameter {
    double re = 0;
    double im = 0;
    int branch = 0;
};

// Parameter of f(z) = z(z-a)^(d-1) whose free critical point a/d is fixed:
// a = zeta * d/(1-d) with zeta a (d-1)st root of unity picked by `branch`.
ComplexParameter exceptional_parameter(int d, int branch);

struct ParameterResiduals {
    double fixed_point = 0;    // |f(a/d) - a/d|
    double critical_a = 0;     // |f'(a)|
    double critical_free = 0;  // |f'(a/d)|
};

ParameterResiduals exceptional_parameter_residuals(int d, const ComplexParameter& a);

// chi = 2 - sum over entries of (1 - 1/nu); nullopt means nu = infinity.
mpq_class hyperbolicity_chi(const std::vector<std::optional<uint64_t>>& nu);

// True when the product of all generators, in declaration order, acts as a
// single d^n-cycle on level n.
bool product_of_generators_transitive(const GroupPresentation& G, int n);

}  // namespace treefpp
