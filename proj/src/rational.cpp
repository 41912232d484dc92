#include "treefpp/rational.hpp"

namespace treefpp {

mpq_class rational_pow(const mpq_class& base, uint64_t e) {
    mpq_class acc(1);
    mpq_class b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

mpq_class dyadic_round_down(const mpq_class& q, unsigned bits) {
    mpz_class scaled_num = q.get_num() << bits;
    mpz_class floor_val;
    mpz_fdiv_q(floor_val.get_mpz_t(), scaled_num.get_mpz_t(), q.get_den().get_mpz_t());
    mpq_class out(floor_val);
    out /= mpq_class(mpz_class(1) << bits);
    out.canonicalize();
    return out;
}

mpq_class dyadic_round_up(const mpq_class& q, unsigned bits) {
    mpz_class scaled_num = q.get_num() << bits;
    mpz_class ceil_val;
    mpz_cdiv_q(ceil_val.get_mpz_t(), scaled_num.get_mpz_t(), q.get_den().get_mpz_t());
    mpq_class out(ceil_val);
    out /= mpq_class(mpz_class(1) << bits);
    out.canonicalize();
    return out;
}

RationalInterval interval_round(const RationalInterval& v, unsigned bits) {
    return {dyadic_round_down(v.lo, bits), dyadic_round_up(v.hi, bits)};
}

}  // namespace treefpp
