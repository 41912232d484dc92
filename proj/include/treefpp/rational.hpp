#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace treefpp {

inline mpq_class make_rational(int64_t num, int64_t den) {
    mpq_class q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

inline size_t denominator_bits(const mpq_class& q) {
    return mpz_sizeinbase(q.get_den().get_mpz_t(), 2);
}

inline std::string rational_string(const mpq_class& q) { return q.get_str(); }

inline double rational_double(const mpq_class& q) { return q.get_d(); }

mpq_class rational_pow(const mpq_class& base, uint64_t e);

// A certified enclosure lo <= value <= hi with dyadic endpoints. Used when
// exact rational iteration is abandoned because denominators grow too fast;
// every arithmetic step rounds lo down and hi up to the working precision,
// so the true value always stays inside.
struct RationalInterval {
    mpq_class lo;
    mpq_class hi;

    double width() const { return rational_double(hi - lo); }
    double midpoint() const { return rational_double((lo + hi) / 2); }
    bool contains(const mpq_class& v) const { return lo <= v && v <= hi; }
};

// Largest multiple of 2^-bits that is <= q (round_down) or smallest >= q
// (round_up).
mpq_class dyadic_round_down(const mpq_class& q, unsigned bits);
mpq_class dyadic_round_up(const mpq_class& q, unsigned bits);

inline RationalInterval exact_interval(const mpq_class& q) { return {q, q}; }

RationalInterval interval_round(const RationalInterval& v, unsigned bits);

}  // namespace treefpp
