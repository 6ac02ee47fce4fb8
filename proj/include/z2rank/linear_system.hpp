#pragma once

// Solving Ax = b over Z2: particular solution plus kernel basis.

#include <optional>
#include <vector>

#include "z2rank/bit_matrix.hpp"

namespace z2rank {

/// The solution set of a consistent linear system: particular + span(kernel_basis).
/// The kernel basis vectors are linearly independent by construction.
struct AffineSpace {
    BitVector particular;
    std::vector<BitVector> kernel_basis;

    std::size_t dimension() const { return kernel_basis.size(); }

    /// Member selected by a coefficient vector over the kernel basis.
    BitVector member(const BitVector& coeffs) const {
        if (coeffs.size() != kernel_basis.size())
            throw std::invalid_argument("coefficient count mismatch");
        BitVector v = particular;
        for (std::size_t i = 0; i < kernel_basis.size(); ++i)
            if (coeffs.get(i)) v ^= kernel_basis[i];
        return v;
    }
};

/// Solves Ax = b over Z2.  Returns the full solution space, or nullopt when
/// the system is infeasible.  Reduction is Gauss-Jordan, so free variables of
/// the particular solution are zero.
inline std::optional<AffineSpace> solve_linear_system(const BitMatrix& a,
                                                      const BitVector& b) {
    if (b.size() != a.n_rows())
        throw std::invalid_argument("right-hand side length must equal row count");
    const std::size_t rows = a.n_rows(), cols = a.n_cols();
    BitMatrix m = a;
    BitVector rhs = b;
    std::vector<std::size_t> pivot_col; // pivot_col[t] = column of pivot row t
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols && rk < rows; ++c) {
        std::size_t pivot = rows;
        for (std::size_t r = rk; r < rows; ++r)
            if (m.get(r, c)) {
                pivot = r;
                break;
            }
        if (pivot == rows) continue;
        if (pivot != rk) {
            m.swap_rows(rk, pivot);
            const bool x = rhs.get(rk), y = rhs.get(pivot);
            rhs.set(rk, y);
            rhs.set(pivot, x);
        }
        const std::size_t from = c / word_bits;
        for (std::size_t r = 0; r < rows; ++r)
            if (r != rk && m.get(r, c)) {
                m.row_xor(r, rk, from);
                if (rhs.get(rk)) rhs.flip(r);
            }
        pivot_col.push_back(c);
        ++rk;
    }
    for (std::size_t r = rk; r < rows; ++r)
        if (rhs.get(r)) return std::nullopt;

    AffineSpace space;
    space.particular = BitVector(cols);
    for (std::size_t t = 0; t < rk; ++t)
        if (rhs.get(t)) space.particular.set(pivot_col[t], true);

    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        BitVector v(cols);
        v.set(f, true);
        for (std::size_t t = 0; t < rk; ++t)
            if (m.get(t, f)) v.set(pivot_col[t], true);
        space.kernel_basis.push_back(std::move(v));
    }
    return space;
}

} // namespace z2rank
