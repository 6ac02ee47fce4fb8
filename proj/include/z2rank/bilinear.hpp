#pragma once

// Classification of symmetric bilinear forms over Z2: any symmetric matrix A
// admits a basis X1,Y1,...,Xk,Yk,Z1,...,Z_{n-2k} in which the form is k
// hyperbolic blocks, then l odd diagonal ones, then zeros, with 2k+l = rk A.

#include <vector>

#include "z2rank/bit_matrix.hpp"

namespace z2rank {

/// Basis certificate for the canonical shape of a symmetric form: k
/// hyperbolic pairs, l odd vectors, and the radical.  The basis order is
/// X1,Y1,...,Xk,Yk,Z1,...,Z_{n-2k} with Z1..Zl odd and the rest radical.
struct FormDecomposition {
    std::size_t hyperbolic_pairs = 0; // k
    std::size_t odd_count = 0;        // l
    std::vector<BitVector> basis;
};

/// A(U,V) = sum_{i,j} A_{i,j} U_i V_j over Z2.
inline int evaluate_form(const BitMatrix& a, const BitVector& u, const BitVector& v) {
    if (u.size() != a.n_rows() || v.size() != a.n_cols())
        throw std::invalid_argument("vector length must match the matrix side");
    bool acc = false;
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        if (u.get(i)) acc ^= BitVector::dot(a.row(i), v);
    return acc ? 1 : 0;
}

/// P + A(X,P) X: the component of P orthogonal to an odd vector X
/// (A(X,X) = 1 required).
inline BitVector project_off_odd(const BitMatrix& a, const BitVector& x,
                                 const BitVector& p) {
    if (evaluate_form(a, x, x) != 1)
        throw std::invalid_argument("X must satisfy A(X,X) = 1");
    BitVector out = p;
    if (evaluate_form(a, x, p)) out ^= x;
    return out;
}

/// P + A(X,P) Y + A(Y,P) X: orthogonal to the hyperbolic pair X, Y
/// (A(X,Y) = 1, A(X,X) = A(Y,Y) = 0 required).
inline BitVector project_off_pair(const BitMatrix& a, const BitVector& x,
                                  const BitVector& y, const BitVector& p) {
    if (evaluate_form(a, x, y) != 1 || evaluate_form(a, x, x) != 0 ||
        evaluate_form(a, y, y) != 0)
        throw std::invalid_argument("X, Y must form a hyperbolic pair");
    BitVector out = p;
    if (evaluate_form(a, x, p)) out ^= y;
    if (evaluate_form(a, y, p)) out ^= x;
    return out;
}

/// Greedy decomposition: starting from the standard basis, split off odd
/// vectors while any generator has A(v,v) = 1, then hyperbolic pairs while
/// any pair has A(X,Y) = 1 (pair projections keep the rest even, so no odd
/// vector can reappear); what remains spans the radical.  Scanning order is
/// the current generator order with first match, so the result is
/// deterministic.
inline FormDecomposition classify_form(const BitMatrix& a) {
    if (!a.is_square()) throw std::invalid_argument("square matrix required");
    if (!a.is_symmetric()) throw std::invalid_argument("symmetric matrix required");
    const std::size_t n = a.n_rows();
    auto form = [&](const BitVector& u, const BitVector& v) {
        return evaluate_form(a, u, v) != 0;
    };

    std::vector<BitVector> gens;
    gens.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        BitVector e(n);
        e.set(i, true);
        gens.push_back(std::move(e));
    }

    std::vector<BitVector> odd;
    while (true) {
        std::size_t hit = gens.size();
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (form(gens[i], gens[i])) {
                hit = i;
                break;
            }
        if (hit == gens.size()) break;
        BitVector x = std::move(gens[hit]);
        gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(hit));
        for (BitVector& g : gens) g = project_off_odd(a, x, g);
        odd.push_back(std::move(x));
    }

    std::vector<BitVector> pairs; // X1,Y1,X2,Y2,...
    while (true) {
        std::size_t hi = gens.size(), hj = gens.size();
        for (std::size_t i = 0; i < gens.size() && hi == gens.size(); ++i)
            for (std::size_t j = i + 1; j < gens.size(); ++j)
                if (form(gens[i], gens[j])) {
                    hi = i;
                    hj = j;
                    break;
                }
        if (hi == gens.size()) break;
        BitVector y = std::move(gens[hj]);
        gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(hj));
        BitVector x = std::move(gens[hi]);
        gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(hi));
        for (BitVector& g : gens) g = project_off_pair(a, x, y, g);
        pairs.push_back(std::move(x));
        pairs.push_back(std::move(y));
    }

    FormDecomposition out;
    out.hyperbolic_pairs = pairs.size() / 2;
    out.odd_count = odd.size();
    out.basis = std::move(pairs);
    for (BitVector& z : odd) out.basis.push_back(std::move(z));
    for (BitVector& g : gens) out.basis.push_back(std::move(g));
    return out;
}

/// Gram matrix B_{ij} = A(basis_i, basis_j) of a list of vectors.
inline BitMatrix gram_matrix(const BitMatrix& a, const std::vector<BitVector>& basis) {
    BitMatrix g(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (evaluate_form(a, basis[i], basis[j])) g.set(i, j, true);
    return g;
}

} // namespace z2rank
