#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "treefpp/perms.hpp"
#include "treefpp/portrait.hpp"
#include "treefpp/quotient.hpp"
#include "treefpp/rng.hpp"

namespace treefpp {

enum class FiniteTypeKind { IteratedWreath, CosetType };

// Closed self-similar groups cut out by a one-level pattern: every label drawn
// from a permutation group P (iterated wreath product), or all labels of one
// automorphism confined to a single coset of a normal subgroup Q of P (coset
// type). Both admit exact uniform sampling and level-by-level enumeration.
class FiniteTypeSpec {
public:
    static FiniteTypeSpec iterated_wreath(int degree, const std::vector<uint16_t>& p_gens);
    static FiniteTypeSpec coset_type(int degree, const std::vector<uint16_t>& p_gens,
                                     const std::vector<uint16_t>& q_gens);

    FiniteTypeKind kind() const { return kind_; }
    int degree() const { return degree_; }
    // Sorted permutation ranks of P.
    const std::vector<uint16_t>& group_elements() const { return p_; }
    // Sorted ranks of Q; equals P for the iterated wreath.
    const std::vector<uint16_t>& subgroup_elements() const { return q_; }
    // Cosets of Q in P, each sorted, ordered by least element. The iterated
    // wreath has the single coset P.
    const std::vector<std::vector<uint16_t>>& cosets() const { return cosets_; }

private:
    FiniteTypeSpec() = default;
    FiniteTypeKind kind_ = FiniteTypeKind::IteratedWreath;
    int degree_ = 2;
    std::vector<uint16_t> p_;
    std::vector<uint16_t> q_;
    std::vector<std::vector<uint16_t>> cosets_;
};

// Exact draw from the uniform measure on the depth-`level` truncation of the
// closed group: a uniform coset, then independent uniform in-coset labels at
// every internal vertex (single coset = plain iid labels).
Portrait sample_finite_type(const FiniteTypeSpec& spec, int level, Rng& rng);

// |pi_level| of the closed group; saturates at UINT64_MAX.
uint64_t finite_type_order(const FiniteTypeSpec& spec, int level);

// Full enumeration of the level quotient (no witness words; the group has no
// distinguished generators). Throws LimitExceeded when the order is known to
// pass element_limit before any portrait is built.
LevelQuotient enumerate_finite_type_quotient(const FiniteTypeSpec& spec, int level,
                                             uint64_t element_limit = kDefaultElementLimit);

class FiniteTypeSource : public QuotientSource {
public:
    explicit FiniteTypeSource(FiniteTypeSpec spec) : spec_(std::move(spec)) {}

    const FiniteTypeSpec& spec() const { return spec_; }
    int degree() const override { return spec_.degree(); }
    std::shared_ptr<const LevelQuotient> quotient(int level, uint64_t element_limit) override;

private:
    FiniteTypeSpec spec_;
    std::mutex mutex_;
    std::map<int, std::shared_ptr<const LevelQuotient>> cache_;
};

}  // namespace treefpp
