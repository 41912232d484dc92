#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "treefpp/engine.hpp"
#include "treefpp/portrait.hpp"

namespace treefpp {

inline constexpr uint64_t kDefaultElementLimit = 5000000;

struct LimitExceeded : std::runtime_error {
    uint64_t partial_count;
    int level;
    LimitExceeded(uint64_t partial_count, int level)
        : std::runtime_error("element limit exceeded at level " + std::to_string(level) +
                             " after " + std::to_string(partial_count) + " elements"),
          partial_count(partial_count),
          level(level) {}
};

// The fully enumerated finite group of depth-`level` portraits. Elements are
// stored as sorted canonical label encodings; all iteration orders downstream
// derive from that sort, which makes results independent of how the
// enumeration was scheduled. Witness words (one short word per element) are
// present when the quotient came from a presentation.
class LevelQuotient {
public:
    LevelQuotient(int degree, int level, std::vector<uint8_t> sorted_keys,
                  std::shared_ptr<const GroupPresentation> presentation = nullptr,
                  std::vector<uint32_t> witness_parent = {},
                  std::vector<int32_t> witness_gen = {});

    int degree() const { return degree_; }
    int level() const { return level_; }
    uint64_t order() const { return count_; }
    size_t key_size() const { return key_size_; }
    const uint8_t* key(uint64_t i) const { return keys_.data() + i * key_size_; }

    Portrait portrait(uint64_t i) const;
    std::optional<uint64_t> find(const Portrait& p) const;
    std::optional<uint64_t> find_key(const uint8_t* key) const;

    bool has_witnesses() const { return !witness_gen_.empty(); }
    GenWord witness_word(uint64_t i) const;
    const GroupPresentation* presentation() const { return presentation_.get(); }
    std::shared_ptr<const GroupPresentation> presentation_ptr() const { return presentation_; }

    // True if the element's truncation to depth k is trivial, i.e. the
    // element lies in the level-k stabilizer.
    bool in_level_stabilizer(uint64_t i, int k) const;

    const std::vector<uint8_t>& raw_keys() const { return keys_; }
    const std::vector<uint32_t>& raw_witness_parent() const { return witness_parent_; }
    const std::vector<int32_t>& raw_witness_gen() const { return witness_gen_; }

private:
    int degree_;
    int level_;
    size_t key_size_;
    uint64_t count_;
    std::vector<uint8_t> keys_;
    std::shared_ptr<const GroupPresentation> presentation_;
    std::vector<uint32_t> witness_parent_;
    std::vector<int32_t> witness_gen_;
};

// Breadth-first closure of the generator portraits (and inverses) under
// left multiplication. Deterministic: candidate insertion order equals the
// serial order for every thread count. Throws LimitExceeded when the closure
// grows past element_limit.
LevelQuotient enumerate_quotient(std::shared_ptr<const GroupPresentation> G, int n,
                                 uint64_t element_limit = kDefaultElementLimit,
                                 int threads = 1);

// Indices of elements whose depth-k truncation is the identity.
std::vector<uint64_t> level_stabilizer(const LevelQuotient& Q, int k);

// Smallest subset of Q closed under composition and inversion containing the
// seeds. Returned sorted.
std::vector<uint64_t> subgroup_closure(const LevelQuotient& Q,
                                       const std::vector<uint64_t>& seeds);

// Uniform access to level quotients of one group, however it is defined.
// Implementations cache computed levels.
class QuotientSource {
public:
    virtual ~QuotientSource() = default;
    virtual int degree() const = 0;
    // Throws LimitExceeded if the quotient does not fit the limit.
    virtual std::shared_ptr<const LevelQuotient> quotient(int level,
                                                          uint64_t element_limit) = 0;
    // Null when the group is not given by a presentation.
    virtual std::shared_ptr<const GroupPresentation> presentation() const { return nullptr; }
};

class PresentationSource : public QuotientSource {
public:
    PresentationSource(std::shared_ptr<const GroupPresentation> G, int threads = 1)
        : pres_(std::move(G)), threads_(threads) {}

    int degree() const override { return pres_->degree(); }
    std::shared_ptr<const LevelQuotient> quotient(int level, uint64_t element_limit) override;
    std::shared_ptr<const GroupPresentation> presentation() const override { return pres_; }

    // Pre-seed a level (e.g. loaded from cache).
    void adopt(std::shared_ptr<const LevelQuotient> q);

    // Snapshot of the levels computed or adopted so far.
    std::vector<std::pair<int, std::shared_ptr<const LevelQuotient>>> cached();

private:
    std::shared_ptr<const GroupPresentation> pres_;
    int threads_;
    std::mutex mutex_;
    std::map<int, std::shared_ptr<const LevelQuotient>> cache_;
};

}  // namespace treefpp
