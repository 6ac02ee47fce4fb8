#pragma once

// Counting matrices of a given rank in Z2^{m x n}.

#include <cstddef>

#include <boost/multiprecision/cpp_int.hpp>

namespace z2rank {

using bigint = boost::multiprecision::cpp_int;

/// Number of m x n matrices over Z2 of rank exactly k:
///
///   2^{k(k-1)/2} * prod_{i<k}(2^{m-i}-1) * prod_{i<k}(2^{n-i}-1)
///   -------------------------------------------------------------
///                    prod_{i<k}(2^{k-i}-1)
///
/// computed exactly; the quotient is integral.  Returns 1 for k = 0 and
/// 0 for k > min(m, n).
inline bigint count_matrices_of_rank(std::size_t m, std::size_t n, std::size_t k) {
    if (k == 0) return 1;
    if (k > m || k > n) return 0;
    auto pow2m1 = [](std::size_t e) { return (bigint(1) << e) - 1; };
    bigint num = bigint(1) << (k * (k - 1) / 2);
    for (std::size_t i = 0; i < k; ++i) num *= pow2m1(m - i);
    for (std::size_t i = 0; i < k; ++i) num *= pow2m1(n - i);
    bigint den = 1;
    for (std::size_t i = 0; i < k; ++i) den *= pow2m1(k - i);
    bigint q, r;
    boost::multiprecision::divide_qr(num, den, q, r);
    if (r != 0) throw std::logic_error("rank count quotient is not integral");
    return q;
}

} // namespace z2rank
