#pragma once

// Hieroglyphs: non-oriented cyclic double-occurrence words, their overlap
// (interlacement) matrices, and weak realizability on the disk with k Moebius
// bands decided through minimum-rank diagonal completion of the overlap
// matrix.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "z2rank/bit_matrix.hpp"
#include "z2rank/completion.hpp"

namespace z2rank {

/// A cyclic word of length 2n in which each of n letters occurs exactly
/// twice.  Stored in canonical form: the lexicographically least token
/// sequence among all rotations of the word and of its reversal, with the
/// alphabet ordered by first occurrence in that sequence.  Canonical form is
/// what equality and hashing use; words equal up to rotation/reversal compare
/// equal.
struct Hieroglyph {
    std::vector<std::string> letters;
    std::vector<std::size_t> word; // indices into letters, length 2n

    std::size_t size() const { return letters.size(); }

    std::string to_string() const {
        bool single = true;
        for (const auto& l : letters)
            if (l.size() != 1) single = false;
        std::string out;
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (!single && i) out.push_back(' ');
            out += letters[word[i]];
        }
        return out;
    }

    friend bool operator==(const Hieroglyph&, const Hieroglyph&) = default;
    friend bool operator<(const Hieroglyph& a, const Hieroglyph& b) {
        if (a.letters != b.letters) return a.letters < b.letters;
        return a.word < b.word;
    }
};

namespace detail {

inline Hieroglyph canonicalize(std::vector<std::string> tokens) {
    // Validate double occurrence.
    std::map<std::string, int> counts;
    for (const auto& t : tokens) ++counts[t];
    for (const auto& [letter, c] : counts)
        if (c != 2)
            throw format_error("letter '" + letter + "' occurs " +
                               std::to_string(c) + " times, expected 2");

    const std::size_t len = tokens.size();
    std::vector<std::string> best = tokens;
    if (len > 0) {
        auto consider = [&](const std::vector<std::string>& w) {
            for (std::size_t s = 0; s < len; ++s) {
                bool less = false, greater = false;
                for (std::size_t i = 0; i < len && !less && !greater; ++i) {
                    const std::string& x = w[(s + i) % len];
                    if (x < best[i]) less = true;
                    else if (x > best[i]) greater = true;
                }
                if (less) {
                    std::vector<std::string> rot(len);
                    for (std::size_t i = 0; i < len; ++i) rot[i] = w[(s + i) % len];
                    best = std::move(rot);
                }
            }
        };
        consider(tokens);
        std::vector<std::string> rev(tokens.rbegin(), tokens.rend());
        consider(rev);
    }

    Hieroglyph h;
    std::map<std::string, std::size_t> index;
    for (const auto& t : best) {
        auto it = index.find(t);
        if (it == index.end()) {
            it = index.emplace(t, h.letters.size()).first;
            h.letters.push_back(t);
        }
        h.word.push_back(it->second);
    }
    return h;
}

} // namespace detail

/// Parses the compact format: a sequence of single-character tokens (letters
/// or digits), whitespace ignored.  Empty input is the legal empty hieroglyph.
inline Hieroglyph parse_hieroglyph(std::string_view text) {
    std::vector<std::string> tokens;
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
        if (!std::isalnum(static_cast<unsigned char>(ch)))
            throw format_error(std::string("unexpected character '") + ch +
                               "' in hieroglyph");
        tokens.emplace_back(1, ch);
    }
    return detail::canonicalize(std::move(tokens));
}

/// Parses the whitespace-separated multi-character token format.
inline Hieroglyph parse_hieroglyph_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
            if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return detail::canonicalize(std::move(tokens));
}

/// Overlap matrix M(H): symmetric, zero diagonal, M[i][j] = 1 iff letters i
/// and j interlace (appear cyclically as ijij, i.e. exactly one occurrence of
/// j lies strictly between the two occurrences of i).  O(n^2).
inline BitMatrix overlap_matrix(const Hieroglyph& h) {
    const std::size_t n = h.size();
    BitMatrix m(n, n);
    std::vector<std::pair<std::size_t, std::size_t>> pos(n, {0, 0});
    std::vector<bool> seen(n, false);
    for (std::size_t p = 0; p < h.word.size(); ++p) {
        const std::size_t l = h.word[p];
        if (!seen[l]) {
            pos[l].first = p;
            seen[l] = true;
        } else {
            pos[l].second = p;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> inside(n, 0);
        for (std::size_t p = pos[i].first + 1; p < pos[i].second; ++p)
            ++inside[h.word[p]];
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && inside[j] == 1) m.set(i, j, true);
    }
    return m;
}

/// Least k such that H is weakly realizable on the disk with k Moebius bands
/// (the minimum completion rank of the overlap matrix).
inline std::size_t min_genus(const Hieroglyph& h, const SearchOptions& options = {}) {
    return min_rank(overlap_matrix(h), options).achieved_rank;
}

struct RealizabilityResult {
    bool realizable = false;
    std::optional<DiagonalAssignment> witness;
};

/// Weak realizability on the disk with k Moebius bands, with the witness
/// diagonal on success (the ribbon-twist data is surfaced verbatim).
inline RealizabilityResult realizable_on(const Hieroglyph& h, std::size_t k,
                                         unsigned threads = 1) {
    auto r = min_rank_exact(overlap_matrix(h), k, threads);
    if (!r) return {};
    return {true, r->witness};
}

struct MobiusResult {
    bool realizable = false;
    std::optional<DiagonalAssignment> witness;
    std::optional<Rank1Certificate> certificate;
};

/// O(n^2) decision for weak realizability on the Moebius band: the overlap
/// matrix must complete to rank <= 1, i.e. the interlacement graph's
/// non-isolated vertices must form a clique.
inline MobiusResult mobius_realizable(const Hieroglyph& h) {
    auto r = complete_to_rank_le1(overlap_matrix(h));
    if (auto* ok = std::get_if<CompletionResult>(&r))
        return {true, ok->witness, std::nullopt};
    return {false, std::nullopt, std::get<Rank1Certificate>(r)};
}

/// All hieroglyphs on n letters, one per rotation/reversal class, letters
/// 'a', 'b', ...  Enumerates the (2n-1)!! pairings of word positions and
/// dedupes by canonical form.
inline std::vector<Hieroglyph> all_hieroglyphs(std::size_t n) {
    if (n > 8) throw std::invalid_argument("hieroglyph enumeration limited to n <= 8");
    std::set<Hieroglyph> out;
    std::vector<int> letter_at(2 * n, -1);
    auto rec = [&](auto&& self, std::size_t next_letter) -> void {
        std::size_t first = 2 * n;
        for (std::size_t p = 0; p < 2 * n; ++p)
            if (letter_at[p] < 0) {
                first = p;
                break;
            }
        if (first == 2 * n) {
            std::vector<std::string> tokens(2 * n);
            for (std::size_t p = 0; p < 2 * n; ++p)
                tokens[p] = std::string(1, static_cast<char>('a' + letter_at[p]));
            out.insert(detail::canonicalize(std::move(tokens)));
            return;
        }
        for (std::size_t q = first + 1; q < 2 * n; ++q) {
            if (letter_at[q] >= 0) continue;
            letter_at[first] = letter_at[q] = static_cast<int>(next_letter);
            self(self, next_letter + 1);
            letter_at[first] = letter_at[q] = -1;
        }
    };
    rec(rec, 0);
    return {out.begin(), out.end()};
}

} // namespace z2rank
