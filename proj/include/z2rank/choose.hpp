#pragma once

// [m choose l]-matrices: symmetric Z2 matrices indexed by l-subsets of
// {0,...,m-1} subject to triviality, linear dependence and non-triviality,
// handled as an affine subspace of the upper-triangle coordinate space.
// Provides the constraint builder, validator, solver, minimum-rank search
// with the theoretical floors, and the reduction operators.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "z2rank/bit_matrix.hpp"
#include "z2rank/linear_system.hpp"

namespace z2rank {

/// Bijection between l-subsets of {0,...,m-1} (lexicographic order) and
/// row/column indices.
class SubsetIndexer {
public:
    SubsetIndexer(std::size_t m, std::size_t l) : m_(m), l_(l) {
        if (l > m) throw std::invalid_argument("subset size exceeds ground set");
        std::vector<std::size_t> cur(l);
        for (std::size_t i = 0; i < l; ++i) cur[i] = i;
        while (true) {
            index_.emplace(cur, subsets_.size());
            subsets_.push_back(cur);
            // next combination in lexicographic order
            std::size_t i = l;
            while (i > 0 && cur[i - 1] == m - l + i - 1) --i;
            if (i == 0) break;
            ++cur[i - 1];
            for (std::size_t j = i; j < l; ++j) cur[j] = cur[j - 1] + 1;
        }
    }

    std::size_t ground_size() const { return m_; }
    std::size_t subset_size() const { return l_; }
    std::size_t count() const { return subsets_.size(); }
    const std::vector<std::size_t>& subset_at(std::size_t i) const { return subsets_[i]; }

    std::size_t index_of(const std::vector<std::size_t>& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) throw std::invalid_argument("not an l-subset of the ground set");
        return it->second;
    }

private:
    std::size_t m_, l_;
    std::vector<std::vector<std::size_t>> subsets_;
    std::map<std::vector<std::size_t>, std::size_t> index_;
};

/// A symmetric candidate matrix together with its subset indexing.
struct ChooseMatrix {
    SubsetIndexer indexer;
    BitMatrix matrix;

    bool entry(const std::vector<std::size_t>& p, const std::vector<std::size_t>& q) const {
        return matrix.get(indexer.index_of(p), indexer.index_of(q));
    }
};

namespace choose_detail {

inline bool disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) ++i; else ++j;
    }
    return true;
}

inline std::vector<std::size_t> sorted_union(std::vector<std::size_t> a,
                                             const std::vector<std::size_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
}

// Upper-triangle (including diagonal) variable index for a side-c symmetric
// matrix; i <= j.
inline std::size_t var_index(std::size_t i, std::size_t j, std::size_t c) {
    if (i > j) std::swap(i, j);
    return i * c - i * (i - 1) / 2 + (j - i);
}

inline std::size_t var_count(std::size_t c) { return c * (c + 1) / 2; }

// The unordered partitions {sigma, tau} of F (|F| = 2l-2) into halves of size
// l-1, emitted as entry index pairs (i u sigma, i u tau).
template <class Emit>
inline void for_each_partition_term(const SubsetIndexer& ix,
                                    const std::vector<std::size_t>& f,
                                    std::size_t i, Emit&& emit) {
    const std::size_t l = ix.subset_size();
    if (l == 0) return;
    if (f.size() + 2 != 2 * l) throw std::invalid_argument("F must have 2l-2 elements");
    if (f.empty()) { // l = 1: the single partition {{},{}} contributes (i,i)
        const std::size_t d = ix.index_of({i});
        emit(d, d);
        return;
    }
    // sigma ranges over (l-1)-subsets of F containing f[0]; tau is the rest.
    std::vector<std::size_t> pick(l - 2);
    std::vector<char> in_sigma(f.size(), 0);
    auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
        if (depth == l - 2) {
            std::vector<std::size_t> sigma{f[0]}, tau;
            in_sigma[0] = 1;
            for (std::size_t t = 0; t < l - 2; ++t) in_sigma[pick[t]] = 1;
            for (std::size_t t = 1; t < f.size(); ++t)
                if (!in_sigma[t]) tau.push_back(f[t]);
            for (std::size_t t = 0; t < l - 2; ++t) sigma.push_back(f[pick[t]]);
            std::fill(in_sigma.begin(), in_sigma.end(), 0);
            emit(ix.index_of(sorted_union(sigma, {i})), ix.index_of(sorted_union(tau, {i})));
            return;
        }
        for (std::size_t p = start; p + (l - 2 - depth) <= f.size(); ++p) {
            pick[depth] = p;
            self(self, depth + 1, p + 1);
        }
    };
    rec(rec, 0, 1);
}

} // namespace choose_detail

struct ConstraintSystem {
    BitMatrix lhs;  // rows x var_count(C) over the upper-triangle variables
    BitVector rhs;
};

/// Assembles the homogeneous/inhomogeneous rows of the [m choose l] axioms
/// over the upper-triangle variables of the symmetric side-C(m,l) matrix:
/// one row per triviality-forced entry, per (F,P) linear-dependence relation,
/// one rhs-1 row per (i,F) non-triviality relation, and per-diagonal rows
/// when `even`.
inline ConstraintSystem build_constraint_system(std::size_t m, std::size_t l,
                                                bool even,
                                                std::size_t max_side = 256) {
    if (l < 1 || l > m) throw std::invalid_argument("need 1 <= l <= m");
    SubsetIndexer ix(m, l);
    const std::size_t c = ix.count();
    if (c > max_side) throw std::invalid_argument("C(m,l) exceeds the configured size cap");
    const std::size_t v = choose_detail::var_count(c);

    std::vector<BitVector> rows;
    std::vector<bool> rhs_bits;
    auto new_row = [&](bool rhs) -> BitVector& {
        rows.emplace_back(v);
        rhs_bits.push_back(rhs);
        return rows.back();
    };

    // triviality: A_{P,Q} = 0 whenever P and Q are disjoint
    for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = a; b < c; ++b)
            if (choose_detail::disjoint(ix.subset_at(a), ix.subset_at(b)))
                new_row(false).set(choose_detail::var_index(a, b, c), true);

    // linear dependence: sum_{i in F} A_{F-i,P} = 0 for every (l+1)-set F
    if (l + 1 <= m) {
        SubsetIndexer fx(m, l + 1);
        for (std::size_t fi = 0; fi < fx.count(); ++fi) {
            const auto& f = fx.subset_at(fi);
            std::vector<std::size_t> facet_idx;
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                std::vector<std::size_t> q;
                for (std::size_t t = 0; t < f.size(); ++t)
                    if (t != drop) q.push_back(f[t]);
                facet_idx.push_back(ix.index_of(q));
            }
            for (std::size_t p = 0; p < c; ++p) {
                BitVector& row = new_row(false);
                for (std::size_t q : facet_idx)
                    row.flip(choose_detail::var_index(q, p, c));
            }
        }
    }

    // non-triviality: A_{F,i} = 1 for every i and (2l-2)-set F avoiding i
    if (m >= 2 * l - 1) {
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<std::size_t> rest;
            for (std::size_t x = 0; x < m; ++x)
                if (x != i) rest.push_back(x);
            SubsetIndexer fsel(rest.size(), 2 * l - 2);
            for (std::size_t fi = 0; fi < fsel.count(); ++fi) {
                std::vector<std::size_t> f;
                for (std::size_t t : fsel.subset_at(fi)) f.push_back(rest[t]);
                BitVector& row = new_row(true);
                choose_detail::for_each_partition_term(
                    ix, f, i, [&](std::size_t x, std::size_t y) {
                        row.flip(choose_detail::var_index(x, y, c));
                    });
            }
        }
    }

    if (even)
        for (std::size_t a = 0; a < c; ++a)
            new_row(false).set(choose_detail::var_index(a, a, c), true);

    ConstraintSystem sys;
    sys.lhs = BitMatrix(rows.size(), v);
    sys.rhs = BitVector(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        sys.lhs.set_row(r, rows[r]);
        if (rhs_bits[r]) sys.rhs.set(r, true);
    }
    return sys;
}

/// Packs the upper triangle (including diagonal) of a symmetric matrix into
/// the variable vector; inverse of unpack_member.
inline BitVector pack_matrix(const SubsetIndexer& ix, const BitMatrix& m) {
    const std::size_t c = ix.count();
    if (m.n_rows() != c || m.n_cols() != c)
        throw std::invalid_argument("shape mismatch with indexer");
    BitVector v(choose_detail::var_count(c));
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = i; j < c; ++j)
            if (m.get(i, j)) v.set(choose_detail::var_index(i, j, c), true);
    return v;
}

inline BitMatrix unpack_member(const SubsetIndexer& ix, const BitVector& v) {
    const std::size_t c = ix.count();
    if (v.size() != choose_detail::var_count(c))
        throw std::invalid_argument("packed length mismatch with indexer");
    BitMatrix m(c, c);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = i; j < c; ++j)
            if (v.get(choose_detail::var_index(i, j, c))) {
                m.set(i, j, true);
                m.set(j, i, true);
            }
    return m;
}

/// Solution space of the [m choose l] axioms, or nullopt when infeasible.
inline std::optional<AffineSpace> solve_choose_space(std::size_t m, std::size_t l,
                                                     bool even,
                                                     std::size_t max_side = 256) {
    const ConstraintSystem sys = build_constraint_system(m, l, even, max_side);
    return solve_linear_system(sys.lhs, sys.rhs);
}

struct Violation {
    enum class Kind { triviality, linear_dependence, nontriviality, evenness };
    Kind kind;
    // triviality: a = P, b = Q; linear dependence: a = F, b = P;
    // non-triviality: a = F, b = {i}; evenness: a = P.
    std::vector<std::size_t> a, b;
};

/// Every violated axiom of A with its witness subsets; empty iff A is a valid
/// [m choose l]-matrix (and even, when required).
inline std::vector<Violation> validate(const ChooseMatrix& a, bool require_even = false) {
    const SubsetIndexer& ix = a.indexer;
    const std::size_t c = ix.count();
    if (a.matrix.n_rows() != c || a.matrix.n_cols() != c)
        throw std::invalid_argument("shape mismatch with indexer");
    if (!a.matrix.is_symmetric())
        throw std::invalid_argument("symmetric matrix required");
    const std::size_t m = ix.ground_size(), l = ix.subset_size();
    std::vector<Violation> out;

    for (std::size_t p = 0; p < c; ++p)
        for (std::size_t q = p; q < c; ++q)
            if (choose_detail::disjoint(ix.subset_at(p), ix.subset_at(q)) &&
                a.matrix.get(p, q))
                out.push_back({Violation::Kind::triviality, ix.subset_at(p), ix.subset_at(q)});

    if (l + 1 <= m) {
        SubsetIndexer fx(m, l + 1);
        for (std::size_t fi = 0; fi < fx.count(); ++fi) {
            const auto& f = fx.subset_at(fi);
            std::vector<std::size_t> facet_idx;
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                std::vector<std::size_t> q;
                for (std::size_t t = 0; t < f.size(); ++t)
                    if (t != drop) q.push_back(f[t]);
                facet_idx.push_back(ix.index_of(q));
            }
            for (std::size_t p = 0; p < c; ++p) {
                bool sum = false;
                for (std::size_t q : facet_idx) sum ^= a.matrix.get(q, p);
                if (sum)
                    out.push_back({Violation::Kind::linear_dependence, f, ix.subset_at(p)});
            }
        }
    }

    if (m >= 2 * l - 1) {
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<std::size_t> rest;
            for (std::size_t x = 0; x < m; ++x)
                if (x != i) rest.push_back(x);
            SubsetIndexer fsel(rest.size(), 2 * l - 2);
            for (std::size_t fi = 0; fi < fsel.count(); ++fi) {
                std::vector<std::size_t> f;
                for (std::size_t t : fsel.subset_at(fi)) f.push_back(rest[t]);
                bool sum = false;
                choose_detail::for_each_partition_term(
                    ix, f, i,
                    [&](std::size_t x, std::size_t y) { sum ^= a.matrix.get(x, y); });
                if (!sum)
                    out.push_back({Violation::Kind::nontriviality, f, {i}});
            }
        }
    }

    if (require_even)
        for (std::size_t p = 0; p < c; ++p)
            if (a.matrix.get(p, p))
                out.push_back({Violation::Kind::evenness, ix.subset_at(p), {}});

    return out;
}

/// A_{F,i}: the sum of A_{i u sigma, i u tau} over unordered partitions of F
/// into (l-1)-halves.  Requires |F| = 2l-2 and i not in F.
inline int nontriviality_sum(const ChooseMatrix& a, const std::vector<std::size_t>& f,
                             std::size_t i) {
    for (std::size_t x : f)
        if (x == i) throw std::invalid_argument("i must not lie in F");
    bool sum = false;
    choose_detail::for_each_partition_term(
        a.indexer, f, i, [&](std::size_t x, std::size_t y) { sum ^= a.matrix.get(x, y); });
    return sum ? 1 : 0;
}

/// Proven lower bound on the rank of a valid [m choose l]-matrix (even
/// variant when `even`): the best of rk >= (m-4)/3 and, for even, 2(m-4)/5
/// at l = 3, and rk >= (m-2l+2)/(l-1), even 2(m-2l+2)/l, for l >= 3.
inline std::size_t choose_rank_floor(std::size_t m, std::size_t l, bool even) {
    auto ceil_pos = [](long num, long den) -> long {
        return num <= 0 ? 0 : (num + den - 1) / den;
    };
    long best = 0;
    const long lm = static_cast<long>(m), ll = static_cast<long>(l);
    if (l == 3) {
        best = std::max(best, ceil_pos(lm - 4, 3));
        if (even) best = std::max(best, ceil_pos(2 * (lm - 4), 5));
    }
    if (l >= 3) {
        best = std::max(best, ceil_pos(lm - 2 * ll + 2, ll - 1));
        if (even) best = std::max(best, ceil_pos(2 * (lm - 2 * ll + 2), ll));
    }
    return static_cast<std::size_t>(best);
}

struct SpaceMinRankOptions {
    std::size_t enumeration_threshold = 24; // exhaustive when kernel dim <= this
    std::size_t sample_count = 100000;      // random samples otherwise
    std::uint64_t seed = 0;
    std::size_t directed_u_limit = 1u << 16; // cap on low-rank search candidates
};

struct SpaceMinRank {
    std::size_t lower = 0;
    std::size_t upper = 0;
    bool exact = false;
    BitMatrix witness; // a member of rank == upper
};

namespace choose_detail {

// Data for the directed rank<=2 witness search.  Every member's columns lie
// in W, the kernel of the linear-dependence operator on single columns, so
// rank-1 members are v v^T with v in W and rank-2 members are u v^T + v u^T
// or z1 z1^T + z2 z2^T = z u^T + u z^T + u u^T (u = z1+z2) with both vectors
// in W.  For fixed u the constraints on the second vector are affine-linear.
struct LowRankSearch {
    std::vector<BitVector> w_basis;                      // vectors over C
    std::vector<std::uint32_t> colmask;                  // per index: bit j = w_basis[j][index]
    std::vector<std::pair<std::size_t, std::size_t>> disjoint_pairs;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> nontriv_terms;
};

inline LowRankSearch build_low_rank_search(const SubsetIndexer& ix) {
    const std::size_t m = ix.ground_size(), l = ix.subset_size(), c = ix.count();
    LowRankSearch s;
    if (l + 1 <= m) {
        SubsetIndexer fx(m, l + 1);
        BitMatrix lindep(fx.count(), c);
        for (std::size_t fi = 0; fi < fx.count(); ++fi) {
            const auto& f = fx.subset_at(fi);
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                std::vector<std::size_t> q;
                for (std::size_t t = 0; t < f.size(); ++t)
                    if (t != drop) q.push_back(f[t]);
                lindep.set(fi, ix.index_of(q), true);
            }
        }
        s.w_basis = solve_linear_system(lindep, BitVector(fx.count()))->kernel_basis;
    } else {
        for (std::size_t i = 0; i < c; ++i) {
            BitVector e(c);
            e.set(i, true);
            s.w_basis.push_back(std::move(e));
        }
    }
    s.colmask.assign(c, 0);
    if (s.w_basis.size() <= 32)
        for (std::size_t j = 0; j < s.w_basis.size(); ++j)
            for (std::size_t i = 0; i < c; ++i)
                if (s.w_basis[j].get(i)) s.colmask[i] |= std::uint32_t{1} << j;

    for (std::size_t p = 0; p < c; ++p)
        for (std::size_t q = p + 1; q < c; ++q)
            if (disjoint(ix.subset_at(p), ix.subset_at(q)))
                s.disjoint_pairs.emplace_back(p, q);

    if (m >= 2 * l - 1 && l >= 1) {
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<std::size_t> rest;
            for (std::size_t x = 0; x < m; ++x)
                if (x != i) rest.push_back(x);
            SubsetIndexer fsel(rest.size(), 2 * l - 2);
            for (std::size_t fi = 0; fi < fsel.count(); ++fi) {
                std::vector<std::size_t> f;
                for (std::size_t t : fsel.subset_at(fi)) f.push_back(rest[t]);
                std::vector<std::pair<std::size_t, std::size_t>> terms;
                for_each_partition_term(ix, f, i, [&](std::size_t x, std::size_t y) {
                    terms.emplace_back(x, y);
                });
                s.nontriv_terms.push_back(std::move(terms));
            }
        }
    }
    return s;
}

// Solves a small linear system over <= 32 variables given as (mask, rhs)
// rows; returns any solution.
inline std::optional<std::uint32_t>
solve_small(const std::vector<std::pair<std::uint32_t, bool>>& rows) {
    std::uint64_t pivots[33] = {};
    bool has_pivot[33] = {};
    for (const auto& [mask, rhs] : rows) {
        std::uint64_t cur = mask | (std::uint64_t{rhs} << 32);
        while (cur) {
            const int c = std::countr_zero(cur);
            if (c == 32) return std::nullopt; // 0 = 1
            if (has_pivot[c]) {
                cur ^= pivots[c];
            } else {
                pivots[c] = cur;
                has_pivot[c] = true;
                break;
            }
        }
    }
    std::uint32_t sol = 0;
    for (int c = 31; c >= 0; --c) {
        if (!has_pivot[c]) continue;
        const std::uint64_t row = pivots[c];
        bool val = (row >> 32) & 1;
        const std::uint32_t rest = static_cast<std::uint32_t>(row) & ~(std::uint32_t{1} << c);
        val ^= std::popcount(rest & sol) & 1;
        if (val) sol |= std::uint32_t{1} << c;
    }
    return sol;
}

inline BitVector combine(const std::vector<BitVector>& basis, std::uint64_t coeffs,
                         std::size_t len) {
    BitVector v(len);
    for (std::size_t j = 0; j < basis.size(); ++j)
        if ((coeffs >> j) & 1) v ^= basis[j];
    return v;
}

} // namespace choose_detail

/// Minimum rank over the affine space of valid matrices.  If the kernel
/// dimension is at most the threshold the space is enumerated exhaustively
/// (lower = upper = exact minimum, earliest witness in coefficient counting
/// order).  Otherwise lower is the proven floor and upper comes from seeded
/// random sampling improved by a directed search for rank-1 and rank-2
/// members through the column space W; the bounds match exactly when a
/// floor-rank witness exists within the searched range.
inline SpaceMinRank min_rank_over_space(const AffineSpace& space,
                                        const SubsetIndexer& ix, bool even,
                                        const SpaceMinRankOptions& options = {}) {
    const std::size_t c = ix.count();
    if (space.particular.size() != choose_detail::var_count(c))
        throw std::invalid_argument("space does not match indexer");
    const std::size_t floor = choose_rank_floor(ix.ground_size(), ix.subset_size(), even);
    const std::size_t d = space.dimension();

    if (d <= options.enumeration_threshold && d < 64) {
        BitVector cur = space.particular;
        BitMatrix best_m = unpack_member(ix, cur);
        std::size_t best = rank(best_m);
        for (std::uint64_t t = 1; t < (std::uint64_t{1} << d) && best > floor; ++t) {
            std::uint64_t changed = t ^ (t - 1);
            while (changed) {
                cur ^= space.kernel_basis[std::countr_zero(changed)];
                changed &= changed - 1;
            }
            BitMatrix m = unpack_member(ix, cur);
            const std::size_t r = rank(m);
            if (r < best) {
                best = r;
                best_m = std::move(m);
            }
        }
        return {best, best, true, std::move(best_m)};
    }

    // Fallback: sampling plus directed low-rank search.
    SpaceMinRank out;
    out.lower = floor;

    if (space.particular.none()) { // zero matrix is a member
        out.upper = 0;
        out.exact = floor == 0;
        out.witness = BitMatrix(c, c);
        return out;
    }

    BitMatrix best_m = unpack_member(ix, space.particular);
    std::size_t best = rank(best_m);
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::uint64_t> dist;
    for (std::size_t s = 0; s < options.sample_count && best > floor; ++s) {
        BitVector v = space.particular;
        for (std::size_t j = 0; j < d; ++j)
            if (dist(rng) & 1) v ^= space.kernel_basis[j];
        BitMatrix m = unpack_member(ix, v);
        const std::size_t r = rank(m);
        if (r < best) {
            best = r;
            best_m = std::move(m);
        }
    }

    // The directed searches below are complete for rank <= 2 when they cover
    // all of W: every rank-1 member is v v^T and every rank-2 member is
    // u v^T + v u^T or z1 z1^T + z2 z2^T, with all generating vectors in W.
    bool rank1_searched = even; // v v^T has diagonal v != 0, never even
    bool rank2_searched = false;
    if (best > 2) {
        const auto search = choose_detail::build_low_rank_search(ix);
        const std::size_t dw = search.w_basis.size();
        if (dw >= 1 && dw <= 26) {
            const std::uint64_t full = std::uint64_t{1} << dw;
            const std::uint64_t scan = std::min<std::uint64_t>(full, options.directed_u_limit);
            auto u_of = [&](std::uint64_t t) {
                return choose_detail::combine(search.w_basis, t, c);
            };

            // rank 1: v v^T (never even; the diagonal equals v)
            if (!even && best > 1) {
                rank1_searched = true;
                BitVector v(c);
                for (std::uint64_t t = 1; t < full && best > 1; ++t) {
                    std::uint64_t changed = t ^ (t - 1);
                    while (changed) {
                        v ^= search.w_basis[std::countr_zero(changed)];
                        changed &= changed - 1;
                    }
                    if (v.none()) continue;
                    bool ok = true;
                    for (const auto& [p, q] : search.disjoint_pairs)
                        if (v.get(p) && v.get(q)) {
                            ok = false;
                            break;
                        }
                    for (const auto& terms : search.nontriv_terms) {
                        if (!ok) break;
                        bool sum = false;
                        for (const auto& [x, y] : terms) sum ^= v.get(x) && v.get(y);
                        if (!sum) ok = false;
                    }
                    if (!ok) continue;
                    BitMatrix m(c, c);
                    for (std::size_t i = 0; i < c; ++i)
                        if (v.get(i))
                            for (std::size_t j = 0; j < c; ++j)
                                if (v.get(j)) m.set(i, j, true);
                    best = 1;
                    best_m = std::move(m);
                }
            }

            // rank 2, both shapes; the second vector solves a small linear system.
            if (best > 2)
                rank2_searched = scan == full;
            if (best > 2)
                for (int shape = 0; shape < (even ? 1 : 2) && best > 2; ++shape) {
                    // shape 0: A = u v^T + v u^T (even); shape 1: A = z u^T + u z^T + u u^T
                    for (std::uint64_t t = 1; t < scan && best > 2; ++t) {
                        const BitVector u = u_of(t);
                        if (u.none()) continue;
                        std::vector<std::pair<std::uint32_t, bool>> rows;
                        rows.reserve(search.disjoint_pairs.size() + search.nontriv_terms.size());
                        for (const auto& [p, q] : search.disjoint_pairs) {
                            std::uint32_t mask = 0;
                            if (u.get(p)) mask ^= search.colmask[q];
                            if (u.get(q)) mask ^= search.colmask[p];
                            const bool rhs = shape == 1 && u.get(p) && u.get(q);
                            rows.emplace_back(mask, rhs);
                        }
                        for (const auto& terms : search.nontriv_terms) {
                            std::uint32_t mask = 0;
                            bool rhs = true;
                            for (const auto& [x, y] : terms) {
                                if (u.get(x)) mask ^= search.colmask[y];
                                if (u.get(y)) mask ^= search.colmask[x];
                                if (shape == 1) rhs ^= u.get(x) && u.get(y);
                            }
                            rows.emplace_back(mask, rhs);
                        }
                        const auto sol = choose_detail::solve_small(rows);
                        if (!sol) continue;
                        const BitVector v = choose_detail::combine(search.w_basis, *sol, c);
                        if (v.none() || v == u) continue;
                        BitMatrix m(c, c);
                        for (std::size_t i = 0; i < c; ++i) {
                            const bool ui = u.get(i), vi = v.get(i);
                            for (std::size_t j = 0; j < c; ++j) {
                                bool bit = (ui && v.get(j)) != (vi && u.get(j));
                                if (shape == 1) bit ^= ui && u.get(j);
                                if (bit) m.set(i, j, true);
                            }
                        }
                        if (rank(m) != 2) continue;
                        best = 2;
                        best_m = std::move(m);
                    }
                }
        }
    }

    // A completed search proves the absence of low-rank members: members are
    // non-zero here (the zero vector would have been the particular
    // solution), so a failed rank-1 scan gives rank >= 2, and a failed full
    // rank-2 scan gives rank >= 3.
    if (rank1_searched && best > 1) out.lower = std::max(out.lower, std::size_t{2});
    if (rank1_searched && rank2_searched && best > 2)
        out.lower = std::max(out.lower, std::size_t{3});

    out.upper = best;
    out.witness = std::move(best_m);
    out.exact = out.lower == out.upper;
    return out;
}

/// Drops every subset containing the top ground element; the result is a
/// valid [m-1 choose l]-matrix, evenness preserved, rank non-increasing.
inline ChooseMatrix restrict_ground(const ChooseMatrix& a) {
    const std::size_t m = a.indexer.ground_size(), l = a.indexer.subset_size();
    if (m < l + 1) throw std::invalid_argument("ground set too small to restrict");
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < a.indexer.count(); ++i)
        if (a.indexer.subset_at(i).back() != m - 1) keep.push_back(i);
    return {SubsetIndexer(m - 1, l), a.matrix.submatrix(keep, keep)};
}

/// Deletes rows/columns of all subsets meeting X (and Y when given).  With
/// A_{X,X} = 1 the result B satisfies rank(A) > rank(B); with A_{X,X} =
/// A_{Y,Y} = 0 and A_{X,Y} = 1 the result C satisfies rank(A) >= rank(C)+2.
/// The inequality is asserted and its failure (impossible for valid input)
/// raises a contract error.
inline BitMatrix delete_blocks(const ChooseMatrix& a, std::vector<std::size_t> x,
                               std::optional<std::vector<std::size_t>> y = {}) {
    std::sort(x.begin(), x.end());
    const std::size_t xi = a.indexer.index_of(x);
    std::vector<std::size_t> banned = x;
    if (y) {
        std::sort(y->begin(), y->end());
        const std::size_t yi = a.indexer.index_of(*y);
        if (a.matrix.get(xi, xi) || a.matrix.get(yi, yi) || !a.matrix.get(xi, yi))
            throw std::invalid_argument("need A_{X,X} = A_{Y,Y} = 0 and A_{X,Y} = 1");
        banned = choose_detail::sorted_union(banned, *y);
    } else if (!a.matrix.get(xi, xi)) {
        throw std::invalid_argument("need A_{X,X} = 1");
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < a.indexer.count(); ++i) {
        const auto& s = a.indexer.subset_at(i);
        bool hit = false;
        for (std::size_t e : s)
            if (std::binary_search(banned.begin(), banned.end(), e)) {
                hit = true;
                break;
            }
        if (!hit) keep.push_back(i);
    }
    BitMatrix out = a.matrix.submatrix(keep, keep);
    const std::size_t ra = rank(a.matrix), ro = rank(out);
    if (y ? ra < ro + 2 : ra <= ro)
        throw std::logic_error("rank drop contract violated; input matrix is not valid");
    return out;
}

/// The odd-projection D_{P,Q} = A_{P,Q} + A_{P,X} A_{Q,X} over the relabeled
/// ground set in which X occupies the top l indices; requires A_{X,X} = 1.
/// D is a valid [m-l+1 choose l]-matrix of strictly smaller rank.
inline ChooseMatrix project_out_odd(const ChooseMatrix& a, std::vector<std::size_t> x) {
    std::sort(x.begin(), x.end());
    const std::size_t xi = a.indexer.index_of(x);
    if (!a.matrix.get(xi, xi)) throw std::invalid_argument("need A_{X,X} = 1");
    const std::size_t m = a.indexer.ground_size(), l = a.indexer.subset_size();
    if (m < l + 1) throw std::invalid_argument("ground set too small to project");

    // Relabel: non-X elements keep their order at labels 0..m-l-1, X moves to
    // the top block.  New ground for D is {0,...,m-l}, whose top label m-l is
    // the image of min(X).
    std::vector<std::size_t> old_of_new(m);
    std::size_t next = 0;
    for (std::size_t e = 0; e < m; ++e)
        if (!std::binary_search(x.begin(), x.end(), e)) old_of_new[next++] = e;
    for (std::size_t e : x) old_of_new[next++] = e;

    SubsetIndexer dx(m - l + 1, l);
    auto old_index = [&](const std::vector<std::size_t>& p_new) {
        std::vector<std::size_t> p_old;
        for (std::size_t e : p_new) p_old.push_back(old_of_new[e]);
        std::sort(p_old.begin(), p_old.end());
        return a.indexer.index_of(p_old);
    };
    BitMatrix d(dx.count(), dx.count());
    std::vector<std::size_t> old_idx(dx.count());
    for (std::size_t i = 0; i < dx.count(); ++i) old_idx[i] = old_index(dx.subset_at(i));
    for (std::size_t i = 0; i < dx.count(); ++i)
        for (std::size_t j = i; j < dx.count(); ++j) {
            bool bit = a.matrix.get(old_idx[i], old_idx[j]) !=
                       (a.matrix.get(old_idx[i], xi) && a.matrix.get(old_idx[j], xi));
            if (bit) {
                d.set(i, j, true);
                d.set(j, i, true);
            }
        }
    if (rank(d) >= rank(a.matrix))
        throw std::logic_error("rank drop contract violated; input matrix is not valid");
    return {std::move(dx), std::move(d)};
}

/// The fixed combinatorial identity behind split-independence: over the
/// ground set [5], for every i the mod-2 union of T_{i,{sigma,tau}} across
/// the unordered partitions [5]-i = sigma u tau into 2-sets equals the set of
/// disjoint pairs of 2-subsets, independently of i.
inline bool verify_partition_identity() {
    SubsetIndexer pairs(5, 2);
    const std::size_t np = pairs.count(); // 10
    auto subset_of = [&](std::size_t idx, const std::vector<std::size_t>& sup) {
        for (std::size_t e : pairs.subset_at(idx))
            if (std::find(sup.begin(), sup.end(), e) == sup.end()) return false;
        return true;
    };
    std::vector<std::vector<bool>> expected(np, std::vector<bool>(np, false));
    for (std::size_t ai = 0; ai < np; ++ai)
        for (std::size_t bi = ai + 1; bi < np; ++bi)
            expected[ai][bi] =
                choose_detail::disjoint(pairs.subset_at(ai), pairs.subset_at(bi));

    for (std::size_t i = 0; i < 5; ++i) {
        std::vector<std::size_t> rest;
        for (std::size_t x = 0; x < 5; ++x)
            if (x != i) rest.push_back(x);
        std::vector<std::vector<bool>> acc(np, std::vector<bool>(np, false));
        // the three unordered partitions of the 4-set rest into 2+2
        for (std::size_t partner = 1; partner < 4; ++partner) {
            std::vector<std::size_t> sigma{rest[0], rest[partner]}, tau;
            for (std::size_t t = 1; t < 4; ++t)
                if (t != partner) tau.push_back(rest[t]);
            const std::vector<std::size_t> si = choose_detail::sorted_union(sigma, {i});
            const std::vector<std::size_t> ti = choose_detail::sorted_union(tau, {i});
            for (std::size_t ai = 0; ai < np; ++ai)
                for (std::size_t bi = ai + 1; bi < np; ++bi) {
                    const bool member = (subset_of(ai, si) && subset_of(bi, ti)) ||
                                        (subset_of(ai, ti) && subset_of(bi, si));
                    if (member) acc[ai][bi] = !acc[ai][bi];
                }
        }
        if (acc != expected) return false;
    }
    return true;
}

} // namespace z2rank
