#pragma once

// Minimum-rank completion of a square Z2 matrix whose diagonal entries are
// free: brute-force oracle, exact fixed-k search, 2-approximation, degeneracy
// targeted completions, and the O(n^2) rank<=1 decision with forbidden-pattern
// certificates.

#include <cstdint>
#include <map>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include "z2rank/bit_matrix.hpp"

namespace z2rank {

/// A choice of diagonal entries for an n x n matrix.
struct DiagonalAssignment {
    BitVector values;
    friend bool operator==(const DiagonalAssignment&, const DiagonalAssignment&) = default;
};

struct CompletionResult {
    std::size_t achieved_rank = 0;
    DiagonalAssignment witness;
};

/// Witness that no diagonal completion of rank <= 1 exists: row indices whose
/// off-diagonal submatrix realizes one of the two forbidden patterns.
/// pattern3: edges (0,1),(0,2) present, (1,2) absent.
/// pattern4: edges (0,1),(2,3) present, all four cross entries absent.
struct Rank1Certificate {
    enum class Kind { pattern3, pattern4 };
    Kind kind;
    std::vector<std::size_t> vertices;
};

/// min_rank gave up before settling the exact value; carries the bounds
/// established so far (lower <= R(M) <= upper).
class budget_error : public std::runtime_error {
public:
    budget_error(std::size_t lower, std::size_t upper)
        : std::runtime_error("min-rank search budget exceeded"),
          lower_bound(lower), upper_bound(upper) {}
    std::size_t lower_bound;
    std::size_t upper_bound;
};

struct SearchOptions {
    unsigned threads = 1;
    std::uint64_t budget = 1'000'000'000; // approximate word-operation cap
};

/// M with its main diagonal overwritten by the assignment.
inline BitMatrix with_diagonal(const BitMatrix& m, const DiagonalAssignment& d) {
    if (!m.is_square() || d.values.size() != m.n_rows())
        throw std::invalid_argument("diagonal length must equal matrix side");
    BitMatrix out = m;
    out.set_diagonal(d.values);
    return out;
}

namespace detail {

// Runs fn(chunk, begin, end) over [0, count) split across threads.
template <class Fn>
inline void run_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        fn(0, 0, count);
        return;
    }
    const unsigned t = static_cast<unsigned>(
        std::min<std::size_t>(threads, count));
    const std::size_t per = (count + t - 1) / t;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned i = 0; i < t; ++i) {
        const std::size_t b = i * per;
        const std::size_t e = std::min(count, b + per);
        if (b >= e) break;
        pool.emplace_back([&fn, i, b, e] { fn(i, b, e); });
    }
    for (auto& th : pool) th.join();
}

// Zero-position sets of size <= k over [0, n), in lexicographic order with a
// set preceding its extensions: {}, {0}, {0,1}, ..., {0,2}, ..., {1}, ...
class ZeroSetEnumerator {
public:
    ZeroSetEnumerator(std::size_t n, std::size_t k) : n_(n), k_(k) {}

    // Appends up to `limit` candidates to out; returns false when exhausted.
    bool next_block(std::size_t limit, std::vector<std::vector<std::size_t>>& out) {
        out.clear();
        while (out.size() < limit) {
            if (done_) return false;
            out.push_back(cur_);
            advance();
        }
        return true;
    }

private:
    void advance() {
        if (cur_.size() < k_ && (cur_.empty() ? n_ > 0 : cur_.back() + 1 < n_)) {
            cur_.push_back(cur_.empty() ? 0 : cur_.back() + 1);
            return;
        }
        while (!cur_.empty()) {
            const std::size_t last = cur_.back();
            cur_.pop_back();
            if (last + 1 < n_) {
                cur_.push_back(last + 1);
                return;
            }
        }
        done_ = true;
    }

    std::size_t n_, k_;
    std::vector<std::size_t> cur_;
    bool done_ = false;
};

// Sum of C(n, i) for i <= k, saturating at cap.
inline std::uint64_t count_subsets_up_to(std::size_t n, std::size_t k,
                                         std::uint64_t cap) {
    std::uint64_t total = 1, binom = 1;
    for (std::size_t i = 1; i <= std::min(k, n); ++i) {
        if (binom > cap / (n - i + 1)) return cap;
        binom = binom * (n - i + 1) / i;
        total += binom;
        if (total >= cap) return cap;
    }
    return total;
}

} // namespace detail

/// Exhaustive oracle: minimum rank over all 2^n diagonal assignments and the
/// lexicographically least minimizing assignment (bit 0 most significant).
/// Guarded to n <= 24.
inline CompletionResult min_rank_brute_force(const BitMatrix& m,
                                             unsigned threads = 1) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    const std::size_t n = m.n_rows();
    if (n > 24) throw std::invalid_argument("oracle limit exceeded");
    const std::uint64_t total = std::uint64_t{1} << n;

    // Increasing mask with a_i = bit (n-1-i) matches lexicographic order of
    // the assignment with position 0 most significant.
    auto assignment_of = [n](std::uint64_t mask) {
        BitVector v(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> (n - 1 - i)) & 1) v.set(i, true);
        return v;
    };

    const unsigned t = std::max(1u, threads);
    std::vector<std::pair<std::size_t, std::uint64_t>> best(
        t, {m.n_rows() + 1, 0});
    detail::run_chunks(total, t, [&](std::size_t chunk, std::uint64_t b, std::uint64_t e) {
        BitMatrix work = m;
        std::size_t best_rank = n + 1;
        std::uint64_t best_mask = 0;
        for (std::uint64_t mask = b; mask < e; ++mask) {
            for (std::size_t i = 0; i < n; ++i)
                work.set(i, i, (mask >> (n - 1 - i)) & 1);
            const std::size_t r = rank(work);
            if (r < best_rank) {
                best_rank = r;
                best_mask = mask;
            }
        }
        best[chunk] = {best_rank, best_mask};
    });
    std::pair<std::size_t, std::uint64_t> winner = best[0];
    for (const auto& cand : best)
        if (cand < winner) winner = cand;
    return {winner.first, {assignment_of(winner.second)}};
}

/// Diagonal making the matrix degenerate: each diagonal bit is the parity of
/// its row's off-diagonal entries, so every completed row has even weight and
/// all columns sum to zero.
inline DiagonalAssignment complete_degenerate(const BitMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    const std::size_t n = m.n_rows();
    if (n == 0)
        throw std::invalid_argument("empty matrix has no degenerate completion");
    BitVector d(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool parity = false;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && m.get(i, j)) parity = !parity;
        d.set(i, parity);
    }
    return {d};
}

/// Diagonal making the matrix non-degenerate (det = 1): zero the diagonal,
/// then grow the non-degenerate corner one row at a time, choosing entry
/// (i,i) = 1 + det of the i x i corner with (i,i) still zero.  O(n^4).
inline DiagonalAssignment complete_nondegenerate(const BitMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    const std::size_t n = m.n_rows();
    BitMatrix work = m;
    for (std::size_t i = 0; i < n; ++i) work.set(i, i, false);
    BitVector d(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const int delta = det(work.corner(i));
        const bool bit = delta == 0;
        d.set(i - 1, bit);
        work.set(i - 1, i - 1, bit);
    }
    return {d};
}

/// 2-approximation of the minimum completion rank: k = rank(Mbar + E) where
/// Mbar is the non-degenerate completion and E the identity.  Guarantees
/// k/2 <= R(M) <= k.  O(n^4).
inline std::size_t min_rank_approx(const BitMatrix& m) {
    BitMatrix mbar = with_diagonal(m, complete_nondegenerate(m));
    for (std::size_t i = 0; i < mbar.n_rows(); ++i) mbar.flip(i, i);
    return rank(mbar);
}

/// Fixed-k decision with witness, O(n^{k+3}) for fixed k.  Completes M to the
/// non-degenerate Mbar, then tries every diagonal matrix D with at most k
/// zero diagonal entries in lexicographic order of the zero-position set; the
/// first D with rank_le(Mbar + D, k) yields the witness.  nullopt iff no
/// diagonal completion of rank <= k exists.
inline std::optional<CompletionResult>
min_rank_exact(const BitMatrix& m, std::size_t k, unsigned threads = 1) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    const std::size_t n = m.n_rows();
    const BitMatrix mbar = with_diagonal(m, complete_nondegenerate(m));

    auto completed = [&](const std::vector<std::size_t>& zeros, BitMatrix& out) {
        out = mbar;
        // D has zeros at `zeros`, ones elsewhere.
        std::size_t zi = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (zi < zeros.size() && zeros[zi] == i)
                ++zi;
            else
                out.flip(i, i);
        }
    };

    detail::ZeroSetEnumerator gen(n, std::min(k, n));
    const unsigned t = std::max(1u, threads);
    const std::size_t block = std::max<std::size_t>(1024, t * 256);
    std::vector<std::vector<std::size_t>> cands;
    bool more = true;
    while (more) {
        more = gen.next_block(block, cands);
        if (cands.empty()) break;
        std::vector<std::size_t> first_hit(t, cands.size());
        detail::run_chunks(cands.size(), t, [&](std::size_t chunk, std::size_t b, std::size_t e) {
            BitMatrix work;
            for (std::size_t i = b; i < e; ++i) {
                completed(cands[i], work);
                if (rank_le(work, k)) {
                    first_hit[chunk] = i;
                    return;
                }
            }
        });
        std::size_t hit = cands.size();
        for (std::size_t h : first_hit) hit = std::min(hit, h);
        if (hit < cands.size()) {
            BitMatrix work;
            completed(cands[hit], work);
            return CompletionResult{rank(work), {work.diagonal()}};
        }
    }
    return std::nullopt;
}

/// Exact minimum completion rank R(M) with witness: runs min_rank_exact for
/// k = ceil(approx/2), ..., approx, charging an a-priori cost estimate per k
/// against options.budget and raising budget_error with the bounds settled so
/// far when the next level would exceed it.
inline CompletionResult min_rank(const BitMatrix& m,
                                 const SearchOptions& options = {}) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    const std::size_t n = m.n_rows();
    const std::size_t apx = min_rank_approx(m);
    std::size_t k = apx / 2 + (apx % 2);
    std::uint64_t remaining = options.budget;
    const std::uint64_t unit = std::max<std::uint64_t>(
        std::max<std::size_t>(n, 1) * std::max(detail::words_for(n), std::size_t{1}), 1);
    for (;; ++k) {
        // Estimated words touched at level k: candidates * table size * n * stride.
        const std::uint64_t cands =
            detail::count_subsets_up_to(n, std::min(k, n), remaining + 1);
        const std::uint64_t table =
            std::max<std::uint64_t>(k <= 20 ? (std::uint64_t{1} << k) : n, 1);
        const bool fits = cands <= remaining / unit &&
                          cands * unit <= remaining / table;
        if (!fits) throw budget_error(k, apx);
        remaining -= cands * unit * table;
        if (auto r = min_rank_exact(m, k, options.threads)) return *r;
    }
}

/// O(n^2) decision for completion to rank <= 1 of a symmetric matrix (input
/// diagonal is ignored).  Succeeds iff the non-isolated vertices of the
/// off-diagonal graph form a clique; the witness puts 1 exactly on them.  On
/// failure returns three vertices realizing the 3x3 forbidden pattern or four
/// realizing the 4x4 one.
inline std::variant<CompletionResult, Rank1Certificate>
complete_to_rank_le1(const BitMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    if (!m.is_symmetric()) throw std::invalid_argument("symmetric matrix required");
    const std::size_t n = m.n_rows();
    auto edge = [&](std::size_t i, std::size_t j) { return i != j && m.get(i, j); };

    std::vector<std::size_t> live; // non-isolated vertices
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (edge(i, j)) {
                live.push_back(i);
                break;
            }

    // Clique check; on failure (u,v) is a non-adjacent live pair.
    std::size_t u = n, v = n;
    for (std::size_t a = 0; a < live.size() && u == n; ++a)
        for (std::size_t b = a + 1; b < live.size(); ++b)
            if (!edge(live[a], live[b])) {
                u = live[a];
                v = live[b];
                break;
            }
    if (u == n) {
        BitVector d(n);
        for (std::size_t i : live) d.set(i, true);
        return CompletionResult{live.empty() ? std::size_t{0} : std::size_t{1}, {d}};
    }

    auto neighbor = [&](std::size_t x) {
        for (std::size_t j = 0; j < n; ++j)
            if (edge(x, j)) return j;
        return n;
    };
    const std::size_t a = neighbor(u), b = neighbor(v);
    auto pattern3 = [](std::size_t center, std::size_t x, std::size_t y) {
        return Rank1Certificate{Rank1Certificate::Kind::pattern3, {center, x, y}};
    };
    if (a == b) return pattern3(a, u, v);
    if (edge(a, v)) return pattern3(a, u, v);
    if (edge(u, b)) return pattern3(b, u, v);
    if (edge(a, b)) return pattern3(a, u, b);
    return Rank1Certificate{Rank1Certificate::Kind::pattern4, {u, a, v, b}};
}

/// Checks a certificate against the matrix it was issued for.
inline bool certificate_matches(const BitMatrix& m, const Rank1Certificate& cert) {
    const auto& v = cert.vertices;
    auto e = [&](std::size_t i, std::size_t j) { return m.get(v[i], v[j]); };
    if (cert.kind == Rank1Certificate::Kind::pattern3)
        return v.size() == 3 && e(0, 1) && e(0, 2) && !e(1, 2);
    return v.size() == 4 && e(0, 1) && e(2, 3) && !e(0, 2) && !e(0, 3) &&
           !e(1, 2) && !e(1, 3);
}

/// Experiment helper for the open sharpness question: for each rank value k
/// reachable by changing diagonal entries of M, the minimum number of changed
/// entries minus |rank(M) - k|.  Asserts nothing; n <= 24.
inline std::map<std::size_t, std::size_t> diagonal_change_slack(const BitMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    const std::size_t n = m.n_rows();
    if (n > 24) throw std::invalid_argument("oracle limit exceeded");
    const std::size_t rk0 = rank(m);
    std::map<std::size_t, std::size_t> min_changes;
    BitMatrix work = m;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::size_t changes = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool bit = (mask >> i) & 1;
            if (bit != m.get(i, i)) ++changes;
            work.set(i, i, bit);
        }
        const std::size_t r = rank(work);
        auto it = min_changes.find(r);
        if (it == min_changes.end() || changes < it->second) min_changes[r] = changes;
    }
    std::map<std::size_t, std::size_t> slack;
    for (auto [r, ch] : min_changes)
        slack[r] = ch - (r > rk0 ? r - rk0 : rk0 - r);
    return slack;
}

} // namespace z2rank
