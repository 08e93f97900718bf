#pragma once

// Dense exact linear algebra over F_p (and echelon helpers over Z/p^N) for
// cocycle spaces, presentation ranks, and finite-level module computations.
// Matrices are row-major vectors of vectors of int64 residues.

#include <cstdint>
#include <vector>

#include "selmer/padic.hpp"

namespace selmer {

using FpVec = std::vector<i64>;
using FpMat = std::vector<FpVec>;

namespace fp {

inline i64 norm(i64 x, i64 p) {
    x %= p;
    return x < 0 ? x + p : x;
}

// Row-reduce in place over F_p; returns rank. Columns beyond `cols` untouched.
inline int row_reduce(FpMat& m, i64 p) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    for (auto& row : m)
        for (auto& x : row) x = norm(x, p);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        i64 inv = detail::invmod(m[r][c], p);
        for (std::size_t j = 0; j < cols; ++j) m[r][j] = norm(m[r][j] * inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            i64 f = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] = norm(m[i][j] - f * m[r][j], p);
        }
        ++r;
    }
    return static_cast<int>(r);
}

inline int rank(FpMat m, i64 p) { return row_reduce(m, p); }

// Basis of the right kernel {v : M v = 0} over F_p.
inline FpMat kernel(FpMat m, i64 p) {
    if (m.empty()) return {};
    const std::size_t cols = m[0].size();
    row_reduce(m, p);
    std::vector<int> pivot_of_col(cols, -1);
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::size_t c = 0;
        while (c < cols && m[i][c] == 0) ++c;
        if (c < cols) pivot_of_col[c] = static_cast<int>(i);
    }
    FpMat basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (pivot_of_col[fc] != -1) continue;
        FpVec v(cols, 0);
        v[fc] = 1;
        for (std::size_t c = 0; c < cols; ++c)
            if (pivot_of_col[c] != -1) v[c] = norm(-m[pivot_of_col[c]][fc], p);
        basis.push_back(std::move(v));
    }
    return basis;
}

// One solution of M x = b over F_p, if any.
inline std::optional<FpVec> solve(FpMat m, FpVec b, i64 p) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t i = 0; i < rows; ++i) m[i].push_back(norm(b[i], p));
    row_reduce(m, p);
    FpVec x(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        std::size_t c = 0;
        while (c < cols && m[i][c] == 0) ++c;
        if (c == cols) {
            if (m[i][cols] != 0) return std::nullopt;  // 0 = nonzero
            continue;
        }
        x[c] = m[i][cols];
    }
    return x;
}

// Does v lie in the row span of basis (over F_p)?
inline bool in_span(const FpMat& basis, const FpVec& v, i64 p) {
    FpMat m = basis;
    int r0 = rank(m, p);
    m = basis;
    m.push_back(v);
    return rank(m, p) == r0;
}

}  // namespace fp

// --- Z/p^N echelon machinery -------------------------------------------------
//
// Rows generate a subgroup of (Z/p^N)^k. `zpn::echelon` performs Smith-style
// reduction: each step picks the minimal-valuation entry of the remaining
// submatrix as pivot and clears its column (row operations, span-preserving)
// and its row (column operations, coordinate automorphisms that preserve the
// subgroup's order). The pivot valuations are the elementary divisors, so the
// subgroup order is the product of p^{N - v_i}.

namespace zpn {

struct Echelon {
    FpMat rows;                  // diagonalized generators, pivot entries p^v
    std::vector<int> pivot_col;  // pivot position of each row after reduction
    std::vector<int> pivot_val;  // valuation of each pivot
};

inline int val(i64 x, i64 p, int N) {
    if (x == 0) return N;
    int v = 0;
    while (x % p == 0 && v < N) { x /= p; ++v; }
    return v;
}

inline Echelon echelon(FpMat gens, i64 p, int N) {
    const i64 mod = detail::ipow(p, N);
    for (auto& row : gens)
        for (auto& x : row) x = fp::norm(x, mod);
    Echelon e;
    if (gens.empty()) return e;
    const std::size_t cols = gens[0].size();
    auto mulmod = [&](i64 a, i64 b) {
        return fp::norm(static_cast<i64>((static_cast<__int128>(a) * b) % mod), mod);
    };
    std::size_t r = 0;
    for (std::size_t step = 0; step < cols && r < gens.size(); ++step) {
        // pick the minimal-valuation entry of the remaining submatrix
        int best = N + 1;
        std::size_t bi = r, bj = step;
        for (std::size_t i = r; i < gens.size(); ++i)
            for (std::size_t j = step; j < cols; ++j) {
                int v = val(gens[i][j], p, N);
                if (v < best) { best = v; bi = i; bj = j; }
            }
        if (best >= N) break;
        std::swap(gens[r], gens[bi]);
        for (auto& row : gens) std::swap(row[step], row[bj]);
        // scale pivot to exactly p^best
        i64 ui = detail::invmod(gens[r][step] / detail::ipow(p, best), mod);
        for (auto& x : gens[r]) x = mulmod(x, ui);
        // clear the pivot column below (row operations)
        for (std::size_t i = r + 1; i < gens.size(); ++i) {
            if (val(gens[i][step], p, N) >= N) continue;
            i64 f = gens[i][step] / detail::ipow(p, best);
            for (std::size_t j = 0; j < cols; ++j) gens[i][j] = fp::norm(gens[i][j] - mulmod(f, gens[r][j]), mod);
        }
        // clear the pivot row to the right (column operations)
        for (std::size_t j = step + 1; j < cols; ++j) {
            if (val(gens[r][j], p, N) >= N) continue;
            i64 f = gens[r][j] / detail::ipow(p, best);
            for (std::size_t i = r; i < gens.size(); ++i) gens[i][j] = fp::norm(gens[i][j] - mulmod(f, gens[i][step]), mod);
        }
        e.rows.push_back(gens[r]);
        e.pivot_col.push_back(static_cast<int>(step));
        e.pivot_val.push_back(best);
        ++r;
    }
    return e;
}

// log_p of the order of the subgroup of (Z/p^N)^k generated by the rows.
inline long long log_order(const Echelon& e, int N) {
    long long s = 0;
    for (int v : e.pivot_val) s += N - v;
    return s;
}

}  // namespace zpn

}  // namespace selmer
