#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace liftlab {

inline mpz_class pow_mpz(const mpz_class& base, unsigned long exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline mpq_class pow_mpq(const mpq_class& base, unsigned long exp) {
    mpq_class r = 1;
    for (unsigned long i = 0; i < exp; ++i) r *= base;
    r.canonicalize();
    return r;
}

// Smallest d >= 0 with 2^d >= v. Requires v >= 1.
inline int ceil_log2(const mpz_class& v) {
    if (v < 1) throw std::invalid_argument("ceil_log2 requires a positive value");
    mpz_class p = 1;
    int d = 0;
    while (p < v) {
        p *= 2;
        ++d;
    }
    return d;
}

inline int ceil_log2_u64(std::uint64_t v) { return ceil_log2(mpz_class(static_cast<unsigned long>(v))); }

// ceil(2 * log_{3/2}(leaves)): smallest d with (3/2)^d >= leaves^2, i.e.
// 3^d >= leaves^2 * 2^d, decided in exact integers.
inline int rebalanced_depth_bound(std::uint64_t leaves) {
    if (leaves == 0) throw std::invalid_argument("a protocol tree has at least one leaf");
    mpz_class l2 = mpz_class(static_cast<unsigned long>(leaves));
    l2 *= l2;
    mpz_class p3 = 1, p2 = 1;
    int d = 0;
    while (p3 < l2 * p2) {
        p3 *= 3;
        p2 *= 2;
        ++d;
    }
    return d;
}

// log2 of an exact rational, as double; only for reporting, never for decisions.
inline double log2_mpq(const mpq_class& q) {
    if (q <= 0) throw std::invalid_argument("log2 of a non-positive rational");
    signed long num_exp = 0, den_exp = 0;
    double num_d = mpz_get_d_2exp(&num_exp, q.get_num().get_mpz_t());
    double den_d = mpz_get_d_2exp(&den_exp, q.get_den().get_mpz_t());
    return (std::log2(num_d) + static_cast<double>(num_exp)) - (std::log2(den_d) + static_cast<double>(den_exp));
}

}  // namespace liftlab
