#include "treefpp/recursions.hpp"

#include <stdexcept>

namespace treefpp {

namespace {

mpq_class channel_step(const PermTable& table, const std::vector<uint16_t>& coset,
                       const mpq_class& q) {
    const mpq_class one = 1;
    const mpq_class miss = one - q;
    mpq_class sum = 0;
    for (uint16_t tau : coset) {
        sum += one - rational_pow(miss, static_cast<uint64_t>(table.fixed_points(tau)));
    }
    return sum / static_cast<long>(coset.size());
}

}  // namespace

FiniteTypeRecursion fpp_finite_type_recursion(const FiniteTypeSpec& spec, int max_level,
                                              size_t denom_bit_budget,
                                              unsigned interval_bits) {
    if (max_level < 1) throw std::invalid_argument("recursion needs max_level >= 1");
    const PermTable& table = PermTable::shared(spec.degree());
    const auto& cosets = spec.cosets();
    const size_t nc = cosets.size();

    FiniteTypeRecursion out;
    out.channels.assign(nc, {});

    std::vector<bool> is_exact(nc, true);
    std::vector<mpq_class> qe(nc, mpq_class(1));
    std::vector<RationalInterval> qi(nc);

    for (int n = 1; n <= max_level; ++n) {
        for (size_t c = 0; c < nc; ++c) {
            if (is_exact[c]) {
                mpq_class next = channel_step(table, cosets[c], qe[c]);
                if (denominator_bits(next) > denom_bit_budget) {
                    is_exact[c] = false;
                    qi[c] = interval_round(exact_interval(next), interval_bits);
                } else {
                    qe[c] = std::move(next);
                }
            } else {
                // the step map is increasing in q, so endpoints map to endpoints
                RationalInterval img{channel_step(table, cosets[c], qi[c].lo),
                                     channel_step(table, cosets[c], qi[c].hi)};
                qi[c] = interval_round(img, interval_bits);
            }
            RecursionEntry e;
            e.level = n;
            e.exact = is_exact[c];
            if (is_exact[c]) {
                e.value = qe[c];
                e.enclosure = exact_interval(qe[c]);
            } else {
                e.enclosure = qi[c];
            }
            out.channels[c].push_back(std::move(e));
        }

        RecursionEntry avg;
        avg.level = n;
        avg.exact = true;
        for (size_t c = 0; c < nc; ++c) avg.exact = avg.exact && is_exact[c];
        if (avg.exact) {
            mpq_class s = 0;
            for (size_t c = 0; c < nc; ++c) s += qe[c];
            avg.value = s / static_cast<long>(nc);
            avg.enclosure = exact_interval(avg.value);
        } else {
            mpq_class lo = 0;
            mpq_class hi = 0;
            for (size_t c = 0; c < nc; ++c) {
                lo += is_exact[c] ? qe[c] : qi[c].lo;
                hi += is_exact[c] ? qe[c] : qi[c].hi;
            }
            avg.enclosure = interval_round(
                {lo / static_cast<long>(nc), hi / static_cast<long>(nc)}, interval_bits);
        }
        out.series.push_back(std::move(avg));
    }
    return out;
}

}  // namespace treefpp
