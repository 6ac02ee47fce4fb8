#pragma once

// Dense bit-packed linear algebra over Z2 = GF(2).
//
// Rows are packed LSB-first into 64-bit words, so a row XOR touches
// ceil(n_cols/64) words.  All padding bits beyond the logical width are kept
// at zero; every mutating operation restores that invariant.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace z2rank {

using word = std::uint64_t;
inline constexpr std::size_t word_bits = 64;

/// Raised when matrix/hieroglyph text input is malformed.
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::size_t words_for(std::size_t bits) {
    return (bits + word_bits - 1) / word_bits;
}

// Mask selecting the valid bits of the last word of an n-bit vector.
inline word tail_mask(std::size_t bits) {
    const std::size_t r = bits % word_bits;
    return r == 0 ? ~word{0} : ((word{1} << r) - 1);
}

} // namespace detail

/// A length-n vector over Z2.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t n) : n_(n), w_(detail::words_for(n), 0) {}

    /// Build from a string like "0110"; anything but '0'/'1' throws.
    static BitVector from_string(std::string_view s) {
        BitVector v(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1')
                v.set(i, true);
            else if (s[i] != '0')
                throw format_error("bit vector characters must be '0' or '1'");
        }
        return v;
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t i) const {
        return (w_[i / word_bits] >> (i % word_bits)) & 1;
    }
    bool operator[](std::size_t i) const { return get(i); }

    void set(std::size_t i, bool v) {
        const word m = word{1} << (i % word_bits);
        if (v)
            w_[i / word_bits] |= m;
        else
            w_[i / word_bits] &= ~m;
    }
    void flip(std::size_t i) { w_[i / word_bits] ^= word{1} << (i % word_bits); }

    BitVector& operator^=(const BitVector& o) {
        if (o.n_ != n_) throw std::invalid_argument("BitVector size mismatch");
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

    bool any() const {
        return std::any_of(w_.begin(), w_.end(), [](word x) { return x != 0; });
    }
    bool none() const { return !any(); }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (word x : w_) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }

    /// Index of the first set bit, or size() if none.
    std::size_t first_set() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return i * word_bits + static_cast<std::size_t>(std::countr_zero(w_[i]));
        return n_;
    }

    /// Parity of the AND of two vectors (the standard dot product over Z2).
    static bool dot(const BitVector& a, const BitVector& b) {
        if (a.n_ != b.n_) throw std::invalid_argument("BitVector size mismatch");
        word acc = 0;
        for (std::size_t i = 0; i < a.w_.size(); ++i) acc ^= a.w_[i] & b.w_[i];
        return std::popcount(acc) & 1;
    }

    std::span<const word> words() const { return w_; }
    std::span<word> words() { return w_; }

    std::string to_string() const {
        std::string s(n_, '0');
        for (std::size_t i = 0; i < n_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    std::size_t n_ = 0;
    std::vector<word> w_;
};

/// A dense n_rows x n_cols matrix over Z2, rows bit-packed into words.
/// The 0x0 matrix is a legal value.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), stride_(detail::words_for(cols)),
          data_(rows * stride_, 0) {}

    static BitMatrix identity(std::size_t n) {
        BitMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    /// Build from row strings, e.g. {"011","001","100"}.
    static BitMatrix from_strings(std::initializer_list<std::string_view> rows) {
        BitMatrix m(rows.size(), rows.size() ? rows.begin()->size() : 0);
        std::size_t r = 0;
        for (std::string_view s : rows) {
            if (s.size() != m.cols_) throw format_error("ragged row");
            for (std::size_t c = 0; c < s.size(); ++c)
                if (s[c] == '1')
                    m.set(r, c, true);
                else if (s[c] != '0')
                    throw format_error("matrix characters must be '0' or '1'");
            ++r;
        }
        return m;
    }

    template <class Rng>
    static BitMatrix random(std::size_t rows, std::size_t cols, Rng& rng) {
        BitMatrix m(rows, cols);
        std::uniform_int_distribution<word> dist;
        for (word& w : m.data_) w = dist(rng);
        m.mask_padding();
        return m;
    }

    std::size_t n_rows() const { return rows_; }
    std::size_t n_cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (row_ptr(r)[c / word_bits] >> (c % word_bits)) & 1;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        const word m = word{1} << (c % word_bits);
        if (v)
            row_ptr(r)[c / word_bits] |= m;
        else
            row_ptr(r)[c / word_bits] &= ~m;
    }
    void flip(std::size_t r, std::size_t c) {
        row_ptr(r)[c / word_bits] ^= word{1} << (c % word_bits);
    }

    std::span<const word> row_words(std::size_t r) const { return {row_ptr(r), stride_}; }
    std::span<word> row_words(std::size_t r) { return {row_ptr(r), stride_}; }

    /// rows[dst] ^= rows[src]; XOR may start at word `from_word`.
    void row_xor(std::size_t dst, std::size_t src, std::size_t from_word = 0) {
        word* d = row_ptr(dst);
        const word* s = row_ptr(src);
        for (std::size_t i = from_word; i < stride_; ++i) d[i] ^= s[i];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap_ranges(row_ptr(a), row_ptr(a) + stride_, row_ptr(b));
    }
    /// cols[dst] ^= cols[src] (bit-by-bit; columns are not contiguous).
    void col_xor(std::size_t dst, std::size_t src) {
        for (std::size_t r = 0; r < rows_; ++r)
            if (get(r, src)) flip(r, dst);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t r = 0; r < rows_; ++r) {
            const bool x = get(r, a), y = get(r, b);
            if (x != y) {
                set(r, a, y);
                set(r, b, x);
            }
        }
    }

    BitVector row(std::size_t r) const {
        BitVector v(cols_);
        std::copy(row_ptr(r), row_ptr(r) + stride_, v.words().begin());
        return v;
    }
    void set_row(std::size_t r, const BitVector& v) {
        if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
        std::copy(v.words().begin(), v.words().end(), row_ptr(r));
    }
    BitVector column(std::size_t c) const {
        BitVector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            if (get(r, c)) v.set(r, true);
        return v;
    }

    BitVector diagonal() const {
        const std::size_t n = std::min(rows_, cols_);
        BitVector v(n);
        for (std::size_t i = 0; i < n; ++i)
            if (get(i, i)) v.set(i, true);
        return v;
    }
    void set_diagonal(const BitVector& v) {
        if (v.size() != std::min(rows_, cols_))
            throw std::invalid_argument("diagonal length mismatch");
        for (std::size_t i = 0; i < v.size(); ++i) set(i, i, v.get(i));
    }

    BitMatrix transpose() const {
        BitMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t i = 0; i < stride_; ++i) {
                word w = row_ptr(r)[i];
                while (w) {
                    const std::size_t c = i * word_bits +
                        static_cast<std::size_t>(std::countr_zero(w));
                    t.set(c, r, true);
                    w &= w - 1;
                }
            }
        return t;
    }

    /// Entrywise sum over Z2 (XOR).
    friend BitMatrix operator+(BitMatrix a, const BitMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matrix shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] ^= b.data_[i];
        return a;
    }

    BitMatrix submatrix(std::span<const std::size_t> rows,
                        std::span<const std::size_t> cols) const {
        BitMatrix s(rows.size(), cols.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (get(rows[r], cols[c])) s.set(r, c, true);
        return s;
    }

    /// Top-left k x k corner.
    BitMatrix corner(std::size_t k) const {
        BitMatrix s(k, k);
        for (std::size_t r = 0; r < k; ++r) {
            const word* src = row_ptr(r);
            word* dst = s.row_ptr(r);
            std::copy(src, src + s.stride_, dst);
        }
        s.mask_padding();
        return s;
    }

    bool is_symmetric() const {
        if (!is_square()) return false;
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = r + 1; c < cols_; ++c)
                if (get(r, c) != get(c, r)) return false;
        return true;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](word x) { return x == 0; });
    }

    friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

private:
    void mask_padding() {
        if (stride_ == 0) return;
        const word m = detail::tail_mask(cols_);
        for (std::size_t r = 0; r < rows_; ++r) row_ptr(r)[stride_ - 1] &= m;
    }
    word* row_ptr(std::size_t r) { return data_.data() + r * stride_; }
    const word* row_ptr(std::size_t r) const { return data_.data() + r * stride_; }

    std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<word> data_;
};

/// GF(2) rank by word-packed Gaussian elimination, O(n^3 / 64).
inline std::size_t rank(const BitMatrix& m_in) {
    BitMatrix m = m_in;
    const std::size_t rows = m.n_rows(), cols = m.n_cols();
    std::size_t rk = 0;
    for (std::size_t c = 0; c < cols && rk < rows; ++c) {
        std::size_t pivot = rows;
        for (std::size_t r = rk; r < rows; ++r)
            if (m.get(r, c)) {
                pivot = r;
                break;
            }
        if (pivot == rows) continue;
        m.swap_rows(rk, pivot);
        // Rows below rk are zero in every column < c, so XOR from word c/64 on.
        const std::size_t from = c / word_bits;
        for (std::size_t r = rk + 1; r < rows; ++r)
            if (m.get(r, c)) m.row_xor(r, rk, from);
        ++rk;
    }
    return rk;
}

/// Decides rank(M) <= k by the incremental independent-column scheme: keep a
/// table of all 2^|S| sums of the chosen columns and test each new column for
/// membership.  Early-exits once k+1 independent columns are found.  Cost is
/// O(2^k n^2) words, so for k > 20 it falls back to a full rank computation.
inline bool rank_le(const BitMatrix& m, std::size_t k) {
    if (k >= std::min(m.n_rows(), m.n_cols())) return true;
    if (k > 20) return rank(m) <= k;
    std::vector<BitVector> sums;
    sums.emplace_back(m.n_rows());
    std::size_t chosen = 0;
    for (std::size_t c = 0; c < m.n_cols(); ++c) {
        const BitVector col = m.column(c);
        bool in_span = false;
        for (const BitVector& s : sums)
            if (s == col) {
                in_span = true;
                break;
            }
        if (in_span) continue;
        if (++chosen > k) return false;
        const std::size_t old = sums.size();
        sums.resize(old * 2);
        for (std::size_t i = 0; i < old; ++i) sums[old + i] = sums[i] ^ col;
    }
    return true;
}

/// Determinant over Z2: 1 iff the square matrix is non-degenerate.
/// det of the 0x0 matrix is 1 (no non-empty set of columns exists).
inline int det(const BitMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("square matrix required");
    return rank(m) == m.n_rows() ? 1 : 0;
}

/// A square matrix is degenerate iff some non-empty set of columns sums to zero.
inline bool is_degenerate(const BitMatrix& m) { return det(m) == 0; }

/// One elementary transform: a row/column swap, or row[a] ^= row[b] (resp. columns).
struct ElementaryOp {
    enum class Kind { swap_rows, swap_cols, add_row, add_col };
    Kind kind;
    std::size_t a, b;

    void apply(BitMatrix& m) const {
        switch (kind) {
        case Kind::swap_rows: m.swap_rows(a, b); break;
        case Kind::swap_cols: m.swap_cols(a, b); break;
        case Kind::add_row: m.row_xor(a, b); break;
        case Kind::add_col: m.col_xor(a, b); break;
        }
    }
};

inline BitMatrix replay(const std::vector<ElementaryOp>& ops, BitMatrix m) {
    for (const auto& op : ops) op.apply(m);
    return m;
}

/// Reduces M to a diagonal matrix (all entries (i,j), i != j, zero; rectangles
/// allowed) by row/column swaps and additions.  Returns the diagonal matrix
/// and the replayable transcript.  Rank is preserved, so the number of ones
/// equals rank(M).
inline std::pair<BitMatrix, std::vector<ElementaryOp>>
reduce_to_diagonal(const BitMatrix& m_in) {
    BitMatrix m = m_in;
    std::vector<ElementaryOp> ops;
    auto record = [&](ElementaryOp::Kind k, std::size_t a, std::size_t b) {
        ElementaryOp op{k, a, b};
        op.apply(m);
        ops.push_back(op);
    };
    const std::size_t rows = m.n_rows(), cols = m.n_cols();
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        // Find any non-zero entry in the remaining block.
        std::size_t pr = rows, pc = cols;
        for (std::size_t r = t; r < rows && pr == rows; ++r)
            for (std::size_t c = t; c < cols; ++c)
                if (m.get(r, c)) {
                    pr = r;
                    pc = c;
                    break;
                }
        if (pr == rows) break; // remaining block is zero
        if (pr != t) record(ElementaryOp::Kind::swap_rows, t, pr);
        if (pc != t) record(ElementaryOp::Kind::swap_cols, t, pc);
        for (std::size_t r = t + 1; r < rows; ++r)
            if (m.get(r, t)) record(ElementaryOp::Kind::add_row, r, t);
        for (std::size_t c = t + 1; c < cols; ++c)
            if (m.get(t, c)) record(ElementaryOp::Kind::add_col, c, t);
    }
    return {std::move(m), std::move(ops)};
}

/// Matrix text format: one row per line, characters '0'/'1' with optional
/// spaces between them; blank lines and lines starting with '#' are ignored.
/// Ragged rows are rejected.
inline BitMatrix parse_matrix(std::string_view text) {
    std::vector<std::string> rows;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.remove_suffix(1);
        std::string_view stripped = line;
        while (!stripped.empty() && (stripped.front() == ' ' || stripped.front() == '\t'))
            stripped.remove_prefix(1);
        if (stripped.empty() || stripped.front() == '#') continue;
        std::string bits;
        for (char ch : stripped) {
            if (ch == '0' || ch == '1')
                bits.push_back(ch);
            else if (ch != ' ' && ch != '\t')
                throw format_error(std::string("unexpected character '") + ch + "' in matrix");
        }
        rows.push_back(std::move(bits));
    }
    if (rows.empty()) return BitMatrix();
    const std::size_t cols = rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw format_error("ragged row in matrix");
        for (std::size_t c = 0; c < cols; ++c)
            if (rows[r][c] == '1') m.set(r, c, true);
    }
    return m;
}

inline std::string format_matrix(const BitMatrix& m) {
    std::string out;
    out.reserve(m.n_rows() * (m.n_cols() + 1));
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        for (std::size_t c = 0; c < m.n_cols(); ++c)
            out.push_back(m.get(r, c) ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

} // namespace z2rank
