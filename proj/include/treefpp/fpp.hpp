#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treefpp/engine.hpp"
#include "treefpp/finite_type.hpp"
#include "treefpp/quotient.hpp"
#include "treefpp/rational.hpp"
#include "treefpp/recursions.hpp"
#include "treefpp/rng.hpp"

namespace treefpp {

// One group, however it is defined: by a presentation or by a finite-type
// pattern. The quotient source is built lazily and shared, so level
// enumerations are reused across computations on the same handle.
class GroupHandle {
public:
    GroupHandle(std::string key, std::shared_ptr<const GroupPresentation> pres,
                int threads = 1);
    GroupHandle(std::string key, FiniteTypeSpec spec);

    const std::string& key() const { return key_; }
    int degree() const;
    bool is_finite_type() const { return spec_.has_value(); }
    std::shared_ptr<const GroupPresentation> presentation() const { return pres_; }
    const FiniteTypeSpec* finite_type() const { return spec_ ? &*spec_ : nullptr; }
    std::shared_ptr<QuotientSource> source() const;

private:
    std::string key_;
    std::shared_ptr<const GroupPresentation> pres_;
    std::optional<FiniteTypeSpec> spec_;
    int threads_ = 1;
    mutable std::shared_ptr<QuotientSource> source_;
};

// Share of level-n quotient elements fixing at least one depth-n leaf. All
// proportions computed on quotients equal those of the profinite closure;
// that identification is used throughout.
mpq_class fpp_exact(QuotientSource& source, int n,
                    uint64_t element_limit = kDefaultElementLimit);

struct McEstimate {
    int level = 0;
    uint64_t samples = 0;
    uint64_t hits = 0;
    double estimate = 0;
    double std_error = 0;
};

// Lazy symmetric generator walk on the level-n quotient, started at the
// identity: each step stays put with probability 1/2, else multiplies by a
// uniformly chosen generator or inverse. walk_length 0 never moves.
// Sample i draws from its own stream of `seed`, so results do not depend on
// scheduling.
McEstimate fpp_mc(const GroupPresentation& G, int n, uint64_t samples,
                  uint64_t walk_length, uint64_t seed);

// One draw of the same walk, exposed for distribution-level validation.
Portrait walk_sample_portrait(const GroupPresentation& G, int n, uint64_t walk_length,
                              Rng& rng);

// Direct Haar draws for finite-type groups (exactly uniform, no walk).
McEstimate fpp_mc_finite_type(const FiniteTypeSpec& spec, int n, uint64_t samples,
                              uint64_t seed);

// Distribution of the number of fixed level-n leaves.
struct XnHistogram {
    int level = 0;
    bool exact = false;
    uint64_t population = 0;                // quotient order, or sample count
    std::map<uint64_t, uint64_t> counts;    // value -> occurrences
    std::map<uint64_t, mpq_class> mass;     // value -> probability (exact mode)
};

XnHistogram xn_exact(QuotientSource& source, int n,
                     uint64_t element_limit = kDefaultElementLimit);
XnHistogram xn_mc(const GroupPresentation& G, int n, uint64_t samples,
                  uint64_t walk_length, uint64_t seed);
XnHistogram xn_mc_finite_type(const FiniteTypeSpec& spec, int n, uint64_t samples,
                              uint64_t seed);

// P(X_{n+m} = r | X_n = r) together with the comparison bound 1 - 1/|pi_m|.
struct ConditionalResult {
    int base_level = 0;    // n
    int extra_levels = 0;  // m
    uint64_t fixed_count = 0;  // r
    bool exact = false;
    bool empty_condition = false;  // no element satisfies X_n = r
    std::optional<mpq_class> exact_value;
    uint64_t samples_total = 0;
    uint64_t samples_in_condition = 0;
    uint64_t hits = 0;
    double estimate = 0;
    double std_error = 0;
    double wilson_lo = 0;  // 95% score interval on the conditional frequency
    double wilson_hi = 0;
    mpq_class bound;
};

ConditionalResult conditional_fixation_exact(QuotientSource& source, int n, int m,
                                             uint64_t r,
                                             uint64_t element_limit = kDefaultElementLimit);
// Walk samples on the level-(n+m) quotient; requires a presentation.
ConditionalResult conditional_fixation_mc(QuotientSource& source, int n, int m, uint64_t r,
                                          uint64_t samples, uint64_t walk_length,
                                          uint64_t seed,
                                          uint64_t element_limit = kDefaultElementLimit);

// Exact test of product structure between a depth-n cylinder and a section
// cylinder below the vertex v of level n.
struct CylinderCheck {
    int base_level = 0;     // n
    int section_level = 0;  // m
    std::vector<uint8_t> vertex;
    uint64_t lhs_count = 0;
    mpq_class lhs;
    mpq_class rhs;
    bool equal = false;
};

CylinderCheck cylinder_independence_check(QuotientSource& source, int n, int m,
                                          const std::vector<uint8_t>& v,
                                          const std::vector<Portrait>& A,
                                          const std::vector<Portrait>& B,
                                          uint64_t element_limit = kDefaultElementLimit);

enum class FppMode { Exact, Mc, Recursion, Auto };

struct FppEntry {
    int level = 0;
    std::string provenance;  // "exact", "mc", "recursion", "recursion-interval"
    std::optional<mpq_class> exact_value;
    std::optional<RationalInterval> enclosure;
    std::optional<McEstimate> mc;
    std::optional<uint64_t> quotient_order;
};

struct FppConfig {
    FppMode mode = FppMode::Auto;
    int max_level = 1;
    uint64_t element_limit = kDefaultElementLimit;
    uint64_t samples = 50000;
    std::optional<uint64_t> walk_length;  // default 16 * level
    std::optional<uint64_t> seed;         // must be set when MC runs
    size_t denom_bit_budget = size_t(1) << 20;
    unsigned interval_bits = 192;
};

struct FppSeries {
    std::string group_key;
    FppMode mode = FppMode::Auto;
    std::vector<FppEntry> entries;
    std::string note;
};

// Level-by-level series. Auto mode goes exact while the quotient fits the
// element limit, then switches to the closed-form recursion for finite-type
// groups and to MC walks otherwise; each entry records its provenance.
FppSeries fpp_report(const GroupHandle& handle, const FppConfig& config);

}  // namespace treefpp
