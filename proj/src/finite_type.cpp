#include "treefpp/finite_type.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace treefpp {

namespace {

std::vector<uint16_t> sorted_closure(const PermTable& table,
                                     const std::vector<uint16_t>& gens) {
    for (uint16_t g : gens) {
        if (g >= table.size()) throw std::invalid_argument("permutation rank out of range");
    }
    std::vector<uint16_t> c = perm_group_closure(table, gens);
    std::sort(c.begin(), c.end());
    return c;
}

bool contains(const std::vector<uint16_t>& sorted, uint16_t x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

}  // namespace

FiniteTypeSpec FiniteTypeSpec::iterated_wreath(int degree,
                                               const std::vector<uint16_t>& p_gens) {
    if (degree < 2 || degree > PermTable::kMaxDegree) {
        throw std::invalid_argument("degree out of range");
    }
    const PermTable& table = PermTable::shared(degree);
    FiniteTypeSpec s;
    s.kind_ = FiniteTypeKind::IteratedWreath;
    s.degree_ = degree;
    s.p_ = sorted_closure(table, p_gens);
    s.q_ = s.p_;
    s.cosets_ = {s.p_};
    return s;
}

FiniteTypeSpec FiniteTypeSpec::coset_type(int degree, const std::vector<uint16_t>& p_gens,
                                          const std::vector<uint16_t>& q_gens) {
    if (degree < 2 || degree > PermTable::kMaxDegree) {
        throw std::invalid_argument("degree out of range");
    }
    const PermTable& table = PermTable::shared(degree);
    FiniteTypeSpec s;
    s.kind_ = FiniteTypeKind::CosetType;
    s.degree_ = degree;
    s.p_ = sorted_closure(table, p_gens);
    s.q_ = sorted_closure(table, q_gens);
    if (s.q_.size() < 2) {
        throw std::invalid_argument("coset subgroup must be nontrivial");
    }
    for (uint16_t q : s.q_) {
        if (!contains(s.p_, q)) {
            throw std::invalid_argument("subgroup is not contained in the ambient group");
        }
    }
    for (uint16_t p : s.p_) {
        for (uint16_t q : s.q_) {
            const uint16_t conj = table.compose(table.compose(p, q), table.inverse(p));
            if (!contains(s.q_, conj)) {
                throw std::invalid_argument("subgroup is not normal in the ambient group");
            }
        }
    }
    std::vector<char> seen(table.size(), 0);
    for (uint16_t c : s.p_) {
        if (seen[c]) continue;
        std::vector<uint16_t> coset;
        for (uint16_t q : s.q_) coset.push_back(table.compose(c, q));
        std::sort(coset.begin(), coset.end());
        for (uint16_t e : coset) seen[e] = 1;
        s.cosets_.push_back(std::move(coset));
    }
    std::sort(s.cosets_.begin(), s.cosets_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return s;
}

Portrait sample_finite_type(const FiniteTypeSpec& spec, int level, Rng& rng) {
    if (level < 1) throw std::invalid_argument("sampling needs level >= 1");
    const TreeGeometry geo(spec.degree(), level);
    const auto& coset = spec.cosets()[rng.below(spec.cosets().size())];
    Portrait p;
    p.degree = static_cast<uint8_t>(spec.degree());
    p.depth = static_cast<uint8_t>(level);
    p.labels.resize(geo.label_count);
    for (uint64_t i = 0; i < geo.label_count; ++i) {
        p.labels[i] = coset[rng.below(coset.size())];
    }
    return p;
}

uint64_t finite_type_order(const FiniteTypeSpec& spec, int level) {
    if (level < 0) throw std::invalid_argument("level must be >= 0");
    if (level == 0) return 1;
    const TreeGeometry geo(spec.degree(), level);
    const uint64_t base = spec.cosets().front().size();
    uint64_t per_coset = 1;
    for (uint64_t i = 0; i < geo.label_count; ++i) {
        if (per_coset > UINT64_MAX / base) return UINT64_MAX;
        per_coset *= base;
    }
    const uint64_t num_cosets = spec.cosets().size();
    if (per_coset > UINT64_MAX / num_cosets) return UINT64_MAX;
    return per_coset * num_cosets;
}

LevelQuotient enumerate_finite_type_quotient(const FiniteTypeSpec& spec, int level,
                                             uint64_t element_limit) {
    if (level < 1) throw std::invalid_argument("enumeration needs level >= 1");
    const uint64_t total = finite_type_order(spec, level);
    if (total > element_limit) throw LimitExceeded(total, level);

    const TreeGeometry geo(spec.degree(), level);
    const size_t bpl = static_cast<size_t>(bytes_per_label(spec.degree()));
    const size_t key_size = geo.label_count * bpl;
    std::vector<uint8_t> keys(total * key_size);

    Portrait p;
    p.degree = static_cast<uint8_t>(spec.degree());
    p.depth = static_cast<uint8_t>(level);
    p.labels.assign(geo.label_count, 0);

    uint64_t written = 0;
    std::vector<uint32_t> idx(geo.label_count);
    for (const auto& coset : spec.cosets()) {
        std::fill(idx.begin(), idx.end(), 0);
        for (;;) {
            for (uint64_t i = 0; i < geo.label_count; ++i) p.labels[i] = coset[idx[i]];
            encode_labels(p, keys.data() + written * key_size);
            ++written;
            // advance the mixed-radix counter, least significant position last
            size_t pos = geo.label_count;
            while (pos > 0) {
                --pos;
                if (++idx[pos] < coset.size()) break;
                idx[pos] = 0;
                if (pos == 0) goto coset_done;
            }
            continue;
        coset_done:
            break;
        }
    }
    if (written != total) throw std::logic_error("finite-type enumeration miscounted");

    std::vector<uint64_t> order(total);
    for (uint64_t i = 0; i < total; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
        return std::memcmp(keys.data() + a * key_size, keys.data() + b * key_size,
                           key_size) < 0;
    });
    std::vector<uint8_t> sorted(keys.size());
    for (uint64_t i = 0; i < total; ++i) {
        std::memcpy(sorted.data() + i * key_size, keys.data() + order[i] * key_size,
                    key_size);
    }
    return LevelQuotient(spec.degree(), level, std::move(sorted));
}

std::shared_ptr<const LevelQuotient> FiniteTypeSource::quotient(int level,
                                                                uint64_t element_limit) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(level);
        if (it != cache_.end()) return it->second;
    }
    auto q = std::make_shared<const LevelQuotient>(
        enumerate_finite_type_quotient(spec_, level, element_limit));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.try_emplace(level, q);
    return it->second;
}

}  // namespace treefpp
