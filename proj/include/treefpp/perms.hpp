#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace treefpp {

// A permutation of {0,...,d-1} stored as its image list: p[i] is the image of i.
using Perm = std::vector<uint8_t>;

// Shared lookup tables for the symmetric group of a fixed degree.
// Permutations are identified by their lexicographic rank among all d!
// image lists, so rank 0 is always the identity. Degrees up to 6 get a
// full composition table; degrees 7 and 8 compose on the fly.
class PermTable {
public:
    explicit PermTable(int degree);

    static constexpr int kMaxDegree = 8;

    int degree() const { return degree_; }
    uint32_t size() const { return static_cast<uint32_t>(perms_.size()); }

    uint16_t rank_of(const Perm& p) const;
    const Perm& perm(uint16_t rank) const { return perms_[rank]; }

    // compose(p, q) is "p after q": the result maps x to p[q[x]].
    uint16_t compose(uint16_t p, uint16_t q) const;
    uint16_t inverse(uint16_t p) const { return inverse_[p]; }
    uint8_t apply(uint16_t p, uint8_t x) const {
        return flat_[static_cast<size_t>(p) * degree_ + x];
    }

    bool is_identity(uint16_t p) const { return p == 0; }
    int fixed_points(uint16_t p) const { return fixed_points_[p]; }
    int parity(uint16_t p) const { return parity_[p]; }  // 0 even, 1 odd
    bool is_single_cycle(uint16_t p) const;

    uint16_t power(uint16_t p, uint64_t e) const;
    uint64_t order(uint16_t p) const;

    std::string cycle_notation(uint16_t p) const;

    // Process-wide cached table per degree.
    static const PermTable& shared(int degree);

private:
    int degree_;
    std::vector<Perm> perms_;
    std::vector<uint8_t> flat_;          // perms_ flattened, size d! * d
    std::vector<uint16_t> inverse_;
    std::vector<uint8_t> fixed_points_;
    std::vector<uint8_t> parity_;
    std::vector<uint16_t> compose_;      // full table iff degree <= 6
    bool has_compose_table_;
};

// Closure of a set of permutation ranks under composition.
std::vector<uint16_t> perm_group_closure(const PermTable& table,
                                         std::vector<uint16_t> generators);

// True if the generated group moves every point to every other point.
bool perm_group_transitive(const PermTable& table,
                           const std::vector<uint16_t>& generators);

}  // namespace treefpp
