#pragma once

// Test-only oracles, independent of the library's computation paths.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include <z2rank/bit_matrix.hpp>

namespace oracle {

using z2rank::BitMatrix;
using z2rank::BitVector;

/// Rank via the definition: the number of distinct sums of column subsets is
/// 2^rank.  Only sensible for small matrices.
inline std::size_t rank_by_column_sums(const BitMatrix& m) {
    std::set<std::vector<bool>> sums;
    std::vector<bool> zero(m.n_rows(), false);
    sums.insert(zero);
    for (std::size_t c = 0; c < m.n_cols(); ++c) {
        std::vector<bool> col(m.n_rows());
        for (std::size_t r = 0; r < m.n_rows(); ++r) col[r] = m.get(r, c);
        std::set<std::vector<bool>> next = sums;
        for (const auto& s : sums) {
            std::vector<bool> t(s);
            for (std::size_t r = 0; r < m.n_rows(); ++r) t[r] = t[r] != col[r];
            next.insert(t);
        }
        sums = std::move(next);
    }
    std::size_t rank = 0;
    while ((std::size_t{1} << (rank + 1)) <= sums.size()) ++rank;
    return rank;
}

/// Determinant as the parity of the number of permutations with all-ones
/// support (the permutation-sum formula).
inline int det_permutation_sum(const BitMatrix& m) {
    const std::size_t n = m.n_rows();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    int acc = 0;
    do {
        int prod = 1;
        for (std::size_t i = 0; i < n && prod; ++i)
            if (!m.get(i, perm[i])) prod = 0;
        acc ^= prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

/// Matrix with bit (r * cols + c) of `mask` at entry (r, c).
inline BitMatrix matrix_from_mask(std::size_t rows, std::size_t cols, std::uint64_t mask) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if ((mask >> (r * cols + c)) & 1) m.set(r, c, true);
    return m;
}

/// Symmetric matrix from a mask over the upper triangle including the
/// diagonal, row-major.
inline BitMatrix symmetric_from_mask(std::size_t n, std::uint64_t mask) {
    BitMatrix m(n, n);
    std::size_t bit = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j, ++bit)
            if ((mask >> bit) & 1) {
                m.set(i, j, true);
                m.set(j, i, true);
            }
    return m;
}

/// Symmetric zero-diagonal matrix from a mask over the strict upper triangle.
inline BitMatrix even_symmetric_from_mask(std::size_t n, std::uint64_t mask) {
    BitMatrix m(n, n);
    std::size_t bit = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++bit)
            if ((mask >> bit) & 1) {
                m.set(i, j, true);
                m.set(j, i, true);
            }
    return m;
}

// The four 3x3 examples that thread through the whole text.
inline BitMatrix a1() { return BitMatrix::from_strings({"000", "000", "000"}); }
inline BitMatrix a2() { return BitMatrix::from_strings({"111", "111", "111"}); }
inline BitMatrix a3() { return BitMatrix::from_strings({"111", "101", "111"}); }
inline BitMatrix a4() { return BitMatrix::from_strings({"011", "001", "100"}); }

} // namespace oracle
