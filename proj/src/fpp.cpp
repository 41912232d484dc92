#include "treefpp/fpp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treefpp {

namespace {

std::vector<std::shared_ptr<const Portrait>> signed_generator_portraits(
    const GroupPresentation& G, int n) {
    std::vector<std::shared_ptr<const Portrait>> out;
    const int32_t k = static_cast<int32_t>(G.generator_count());
    for (int32_t c = 1; c <= k; ++c) out.push_back(G.generator_portrait(c, n));
    for (int32_t c = 1; c <= k; ++c) out.push_back(G.generator_portrait(-c, n));
    return out;
}

Portrait walk_sample(int degree, int n,
                     const std::vector<std::shared_ptr<const Portrait>>& gens,
                     uint64_t walk_length, Rng& rng) {
    Portrait state = identity_portrait(degree, n);
    for (uint64_t s = 0; s < walk_length; ++s) {
        if (rng.coin()) continue;  // lazy half-step
        state = compose(*gens[rng.below(gens.size())], state);
    }
    return state;
}

mpq_class ratio(uint64_t num, uint64_t den) {
    mpq_class q(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
    q.canonicalize();
    return q;
}

double binom_stderr(uint64_t hits, uint64_t n) {
    if (n == 0) return 0;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return std::sqrt(p * (1 - p) / static_cast<double>(n));
}

// 95% score interval for a binomial proportion.
void wilson_interval(uint64_t hits, uint64_t n, double& lo, double& hi) {
    if (n == 0) {
        lo = 0;
        hi = 1;
        return;
    }
    const double z = 1.959963984540054;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = z * z;
    const double denom = 1 + z2 / nn;
    const double center = (p + z2 / (2 * nn)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
    lo = std::max(0.0, center - half);
    hi = std::min(1.0, center + half);
}

}  // namespace

GroupHandle::GroupHandle(std::string key, std::shared_ptr<const GroupPresentation> pres,
                         int threads)
    : key_(std::move(key)), pres_(std::move(pres)), threads_(threads) {
    if (!pres_) throw std::invalid_argument("group handle needs a presentation");
}

GroupHandle::GroupHandle(std::string key, FiniteTypeSpec spec)
    : key_(std::move(key)), spec_(std::move(spec)) {}

int GroupHandle::degree() const { return pres_ ? pres_->degree() : spec_->degree(); }

std::shared_ptr<QuotientSource> GroupHandle::source() const {
    if (!source_) {
        if (pres_) {
            source_ = std::make_shared<PresentationSource>(pres_, threads_);
        } else {
            source_ = std::make_shared<FiniteTypeSource>(*spec_);
        }
    }
    return source_;
}

mpq_class fpp_exact(QuotientSource& source, int n, uint64_t element_limit) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    const auto Q = source.quotient(n, element_limit);
    uint64_t hits = 0;
    for (uint64_t i = 0; i < Q->order(); ++i) {
        if (has_fixed_leaf(Q->portrait(i))) ++hits;
    }
    return ratio(hits, Q->order());
}

McEstimate fpp_mc(const GroupPresentation& G, int n, uint64_t samples,
                  uint64_t walk_length, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const auto gens = signed_generator_portraits(G, n);
    McEstimate est;
    est.level = n;
    est.samples = samples;
    for (uint64_t i = 0; i < samples; ++i) {
        Rng rng = sample_stream(seed, i);
        if (has_fixed_leaf(walk_sample(G.degree(), n, gens, walk_length, rng))) ++est.hits;
    }
    est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
    est.std_error = binom_stderr(est.hits, samples);
    return est;
}

Portrait walk_sample_portrait(const GroupPresentation& G, int n, uint64_t walk_length,
                              Rng& rng) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    const auto gens = signed_generator_portraits(G, n);
    return walk_sample(G.degree(), n, gens, walk_length, rng);
}

McEstimate fpp_mc_finite_type(const FiniteTypeSpec& spec, int n, uint64_t samples,
                              uint64_t seed) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    McEstimate est;
    est.level = n;
    est.samples = samples;
    for (uint64_t i = 0; i < samples; ++i) {
        Rng rng = sample_stream(seed, i);
        if (has_fixed_leaf(sample_finite_type(spec, n, rng))) ++est.hits;
    }
    est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
    est.std_error = binom_stderr(est.hits, samples);
    return est;
}

XnHistogram xn_exact(QuotientSource& source, int n, uint64_t element_limit) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    const auto Q = source.quotient(n, element_limit);
    XnHistogram h;
    h.level = n;
    h.exact = true;
    h.population = Q->order();
    for (uint64_t i = 0; i < Q->order(); ++i) {
        ++h.counts[fixed_leaf_count(Q->portrait(i))];
    }
    for (const auto& [value, c] : h.counts) h.mass[value] = ratio(c, h.population);
    return h;
}

XnHistogram xn_mc(const GroupPresentation& G, int n, uint64_t samples,
                  uint64_t walk_length, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const auto gens = signed_generator_portraits(G, n);
    XnHistogram h;
    h.level = n;
    h.population = samples;
    for (uint64_t i = 0; i < samples; ++i) {
        Rng rng = sample_stream(seed, i);
        ++h.counts[fixed_leaf_count(walk_sample(G.degree(), n, gens, walk_length, rng))];
    }
    return h;
}

XnHistogram xn_mc_finite_type(const FiniteTypeSpec& spec, int n, uint64_t samples,
                              uint64_t seed) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    XnHistogram h;
    h.level = n;
    h.population = samples;
    for (uint64_t i = 0; i < samples; ++i) {
        Rng rng = sample_stream(seed, i);
        ++h.counts[fixed_leaf_count(sample_finite_type(spec, n, rng))];
    }
    return h;
}

ConditionalResult conditional_fixation_exact(QuotientSource& source, int n, int m,
                                             uint64_t r, uint64_t element_limit) {
    if (n < 1 || m < 1) throw std::invalid_argument("levels must be >= 1");
    ConditionalResult res;
    res.base_level = n;
    res.extra_levels = m;
    res.fixed_count = r;
    res.exact = true;
    res.bound = 1 - ratio(1, source.quotient(m, element_limit)->order());
    const auto Q = source.quotient(n + m, element_limit);
    uint64_t in_condition = 0;
    uint64_t hits = 0;
    for (uint64_t i = 0; i < Q->order(); ++i) {
        const Portrait p = Q->portrait(i);
        if (fixed_vertex_count(p, n) != r) continue;
        ++in_condition;
        if (fixed_leaf_count(p) == r) ++hits;
    }
    res.samples_total = Q->order();
    res.samples_in_condition = in_condition;
    res.hits = hits;
    if (in_condition == 0) {
        res.empty_condition = true;
        return res;
    }
    res.exact_value = ratio(hits, in_condition);
    res.estimate = rational_double(*res.exact_value);
    return res;
}

ConditionalResult conditional_fixation_mc(QuotientSource& source, int n, int m, uint64_t r,
                                          uint64_t samples, uint64_t walk_length,
                                          uint64_t seed, uint64_t element_limit) {
    if (n < 1 || m < 1) throw std::invalid_argument("levels must be >= 1");
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const auto P = source.presentation();
    if (!P) throw std::invalid_argument("walk sampling needs a presentation");
    ConditionalResult res;
    res.base_level = n;
    res.extra_levels = m;
    res.fixed_count = r;
    res.bound = 1 - ratio(1, source.quotient(m, element_limit)->order());
    const auto gens = signed_generator_portraits(*P, n + m);
    for (uint64_t i = 0; i < samples; ++i) {
        Rng rng = sample_stream(seed, i);
        const Portrait p = walk_sample(P->degree(), n + m, gens, walk_length, rng);
        if (fixed_vertex_count(p, n) != r) continue;
        ++res.samples_in_condition;
        if (fixed_leaf_count(p) == r) ++res.hits;
    }
    res.samples_total = samples;
    if (res.samples_in_condition == 0) {
        res.empty_condition = true;
        return res;
    }
    res.estimate =
        static_cast<double>(res.hits) / static_cast<double>(res.samples_in_condition);
    res.std_error = binom_stderr(res.hits, res.samples_in_condition);
    wilson_interval(res.hits, res.samples_in_condition, res.wilson_lo, res.wilson_hi);
    return res;
}

CylinderCheck cylinder_independence_check(QuotientSource& source, int n, int m,
                                          const std::vector<uint8_t>& v,
                                          const std::vector<Portrait>& A,
                                          const std::vector<Portrait>& B,
                                          uint64_t element_limit) {
    if (n < 1 || m < 1) throw std::invalid_argument("levels must be >= 1");
    if (v.size() != static_cast<size_t>(n)) {
        throw std::invalid_argument("vertex must lie at the base level");
    }
    for (uint8_t letter : v) {
        if (letter >= source.degree()) throw std::invalid_argument("vertex letter out of range");
    }
    const auto Qn = source.quotient(n, element_limit);
    const auto Qm = source.quotient(m, element_limit);
    const auto Q = source.quotient(n + m, element_limit);

    std::vector<char> in_a(Qn->order(), 0);
    std::vector<char> in_b(Qm->order(), 0);
    for (const Portrait& p : A) {
        const auto idx = Qn->find(p);
        if (!idx) throw std::invalid_argument("base pattern is not in the level quotient");
        in_a[*idx] = 1;
    }
    for (const Portrait& p : B) {
        const auto idx = Qm->find(p);
        if (!idx) throw std::invalid_argument("section pattern is not in the level quotient");
        in_b[*idx] = 1;
    }
    const uint64_t count_a = static_cast<uint64_t>(std::count(in_a.begin(), in_a.end(), 1));
    const uint64_t count_b = static_cast<uint64_t>(std::count(in_b.begin(), in_b.end(), 1));

    CylinderCheck check;
    check.base_level = n;
    check.section_level = m;
    check.vertex = v;
    for (uint64_t i = 0; i < Q->order(); ++i) {
        const Portrait p = Q->portrait(i);
        const auto ia = Qn->find(truncate(p, n));
        if (!ia) throw std::logic_error("truncation escaped the level quotient");
        if (!in_a[*ia]) continue;
        const auto ib = Qm->find(section(p, v));
        if (!ib) throw std::logic_error("section escaped the level quotient");
        if (in_b[*ib]) ++check.lhs_count;
    }
    check.lhs = ratio(check.lhs_count, Q->order());
    check.rhs = ratio(count_a, Qn->order()) * ratio(count_b, Qm->order());
    check.equal = (check.lhs == check.rhs);
    return check;
}

FppSeries fpp_report(const GroupHandle& handle, const FppConfig& config) {
    if (config.max_level < 1) throw std::invalid_argument("max level must be >= 1");
    FppSeries series;
    series.group_key = handle.key();
    series.mode = config.mode;
    const auto source = handle.source();

    std::optional<FiniteTypeRecursion> recursion;
    auto recursion_entry = [&](int level) {
        if (!handle.is_finite_type()) {
            throw std::invalid_argument("recursion mode needs a finite-type group");
        }
        if (!recursion) {
            recursion = fpp_finite_type_recursion(*handle.finite_type(), config.max_level,
                                                  config.denom_bit_budget,
                                                  config.interval_bits);
        }
        const RecursionEntry& re = recursion->series[static_cast<size_t>(level) - 1];
        FppEntry e;
        e.level = level;
        e.enclosure = re.enclosure;
        if (re.exact) {
            e.provenance = "recursion";
            e.exact_value = re.value;
        } else {
            e.provenance = "recursion-interval";
        }
        return e;
    };
    auto mc_entry = [&](int level) {
        if (!config.seed) {
            throw std::invalid_argument("seed required for monte carlo estimates");
        }
        FppEntry e;
        e.level = level;
        e.provenance = "mc";
        if (handle.is_finite_type()) {
            e.mc = fpp_mc_finite_type(*handle.finite_type(), level, config.samples,
                                      *config.seed);
        } else {
            const uint64_t wl =
                config.walk_length ? *config.walk_length : 16ull * static_cast<uint64_t>(level);
            e.mc = fpp_mc(*handle.presentation(), level, config.samples, wl, *config.seed);
        }
        return e;
    };
    auto exact_entry = [&](int level) {
        FppEntry e;
        e.level = level;
        e.provenance = "exact";
        e.quotient_order = source->quotient(level, config.element_limit)->order();
        e.exact_value = fpp_exact(*source, level, config.element_limit);
        return e;
    };

    bool exact_phase = true;
    for (int level = 1; level <= config.max_level; ++level) {
        switch (config.mode) {
            case FppMode::Exact:
                series.entries.push_back(exact_entry(level));
                break;
            case FppMode::Recursion:
                series.entries.push_back(recursion_entry(level));
                break;
            case FppMode::Mc:
                series.entries.push_back(mc_entry(level));
                break;
            case FppMode::Auto:
                if (exact_phase) {
                    try {
                        series.entries.push_back(exact_entry(level));
                        break;
                    } catch (const LimitExceeded&) {
                        exact_phase = false;
                        series.note = handle.is_finite_type()
                                          ? "switched to the closed-form recursion past the "
                                            "element limit"
                                          : "switched to walk estimates past the element limit";
                    }
                }
                series.entries.push_back(handle.is_finite_type() ? recursion_entry(level)
                                                                 : mc_entry(level));
                break;
        }
    }
    return series;
}

}  // namespace treefpp
