#pragma once

#include <cstdint>
#include <vector>

#include "treefpp/finite_type.hpp"
#include "treefpp/rational.hpp"

namespace treefpp {

struct RecursionEntry {
    int level = 0;
    bool exact = true;
    mpq_class value;             // set when exact
    RationalInterval enclosure;  // always valid; degenerate when exact
};

struct FiniteTypeRecursion {
    // Fixed-point proportion per level, averaged over cosets.
    std::vector<RecursionEntry> series;
    // Per-coset channels, aligned with FiniteTypeSpec::cosets().
    std::vector<std::vector<RecursionEntry>> channels;
};

// Closed-form level recursion for finite-type groups. Each coset channel
// iterates q' = (1/|Q|) sum over tau in cQ of (1 - (1-q)^fix(tau)) from
// q_0 = 1; the reported proportion is the channel average. Arithmetic stays
// exact until a denominator passes denom_bit_budget bits, then switches to
// certified outward-rounded interval iteration with interval_bits precision
// (the step map is increasing in q on [0,1], so endpoint images enclose).
FiniteTypeRecursion fpp_finite_type_recursion(const FiniteTypeSpec& spec, int max_level,
                                              size_t denom_bit_budget = size_t(1) << 20,
                                              unsigned interval_bits = 192);

}  // namespace treefpp
