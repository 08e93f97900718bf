#pragma once

// The p-isogenous lattice pair A = V/T and A' = V/T': inertia invariants of
// the divisible module A = (Q_p/Z_p)^2, Tamagawa factors c_l and delta_l,
// H^0 finiteness, and the lattice-swap / dual-isogeny calculus. All limit
// objects are modelled by their p^N-torsion with explicit stabilization.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "selmer/conditions.hpp"
#include "selmer/fp_linalg.hpp"
#include "selmer/padic.hpp"

namespace selmer {

// Generator action on the lattice T in the basis (e1, e2), together with the
// scalar character values; the module action is by psi_sigma*S_sigma etc.
struct LocalLatticeAction {
    TrivialPrime prime;
    int n;
    Mat2 Ssigma;
    Mat2 Stau;
    PAdic psi_sigma;
    PAdic psi_tau;

    Mat2 combined_sigma() const { return psi_sigma * Ssigma; }
    Mat2 combined_tau() const { return psi_tau * Stau; }

    bool relation_holds() const {
        Mat2 Ts = combined_sigma(), Tt = combined_tau();
        return Ts * Tt * Ts.inverse() == mat_pow(Tt, prime.ell);
    }

    LocalLatticeAction reduce(int m) const {
        return {prime, m, Ssigma.reduce(m), Stau.reduce(m), psi_sigma.reduce(m), psi_tau.reduce(m)};
    }
};

// The explicit shape families: sigma acts by psi(1 0; x l) (Type II) or
// psi(1 0; x+1-l l) (Type III); tau by (1 0; y 1).
inline LocalLatticeAction type_ii_action(const TrivialPrime& prime, const PAdic& x, const PAdic& y,
                                         i64 psi_sigma, int n) {
    const i64 p = prime.p;
    return {prime, n, Mat2::from_values(p, n, 1, 0, x.zero_lift(n).value(), prime.ell),
            Mat2::from_values(p, n, 1, 0, y.zero_lift(n).value(), 1), PAdic(p, n, psi_sigma), PAdic(p, n, 1)};
}

inline LocalLatticeAction type_iii_action(const TrivialPrime& prime, const PAdic& x, const PAdic& y,
                                          i64 psi_sigma, int n) {
    const i64 p = prime.p;
    return {prime, n, Mat2::from_values(p, n, 1, 0, x.zero_lift(n).value() + 1 - prime.ell, prime.ell),
            Mat2::from_values(p, n, 1, 0, y.zero_lift(n).value(), 1), PAdic(p, n, psi_sigma), PAdic(p, n, 1)};
}

struct InertiaComponent {
    bool divisible;
    int exponent;  // meaningful for finite components: the piece p^{-a}Z/Z
};

struct InertiaStructure {
    std::vector<InertiaComponent> components;  // in the column order of V
    Mat2 V;                                    // change of basis from snf2 of (tau - 1)
};

// Structure of A^{I_l} = ker(tau - 1) on (Q_p/Z_p)^2 via the elementary
// divisors of (tau - 1). Exponent a <= n-2 is a stabilized finite component;
// "at least n" is divisible; a = n-1 is indistinguishable at this precision.
inline InertiaStructure inertia_invariants(const LocalLatticeAction& act) {
    if (!act.relation_holds()) throw std::invalid_argument("inconsistent action");
    const int n = act.n;
    Mat2 M = act.combined_tau() - Mat2::identity(act.prime.p, n);
    SnfDecomposition snf = snf2(M);
    SnfDecomposition snf_low = snf2(M.reduce(n - 1));
    int exps[2] = {snf.a1, snf.a2};
    int exps_low[2] = {snf_low.a1, snf_low.a2};
    InertiaStructure out;
    out.V = snf.V;
    for (int i = 0; i < 2; ++i) {
        if (exps[i] >= n - 1 && exps[i] < n) throw std::domain_error("raise precision");
        bool div = exps[i] >= n;
        if (!div && exps[i] != exps_low[i]) throw std::domain_error("raise precision");
        if (div && exps_low[i] < n - 1) throw std::domain_error("raise precision");
        out.components.push_back({div, div ? 0 : exps[i]});
    }
    return out;
}

struct CotorsionReport {
    std::vector<std::string> inertia_structure;  // "finite exponent p^a" / "divisible"
    i64 tamagawa_order;                          // c_l = #(A-fin / (sigma-1))
    int delta;                                   // dim_Fp of the p-torsion of that quotient
    bool h0_finite;
    i64 h0_order;  // -1 when infinite
};

namespace detail_isog {

// order of ker(rows) on (Z/p^N)^2: p^{2N} / #(column span of the stacked map)
inline long long log_kernel_order(const std::vector<FpVec>& matrix_rows, i64 p, int N) {
    // columns of the map generate the image in (Z/p^N)^{#rows}
    FpMat cols(2, FpVec(matrix_rows.size()));
    for (std::size_t r = 0; r < matrix_rows.size(); ++r)
        for (int c = 0; c < 2; ++c) cols[c][r] = matrix_rows[r][c];
    auto ech = zpn::echelon(cols, p, N);
    return 2LL * N - zpn::log_order(ech, N);
}

inline FpVec apply(const Mat2& M, const FpVec& v, i64 mod) {
    auto mm = [&](i64 a, i64 b) { return static_cast<i64>((static_cast<__int128>(a) * b) % mod); };
    return {fp::norm(mm(M.at(1, 1).value(), v[0]) + mm(M.at(1, 2).value(), v[1]), mod),
            fp::norm(mm(M.at(2, 1).value(), v[0]) + mm(M.at(2, 2).value(), v[1]), mod)};
}

}  // namespace detail_isog

// Tamagawa data at l != p: the finite part of the inertia invariants, the
// sigma-coinvariants of that finite part, and H^0 finiteness/order.
inline CotorsionReport tamagawa(const LocalLatticeAction& act) {
    const i64 p = act.prime.p;
    const int n = act.n;
    if (n < 3) throw std::domain_error("raise precision");
    const int N = n - 1;  // finite model A[p^N]
    const i64 mod = detail::ipow(p, N);
    InertiaStructure inv = inertia_invariants(act);

    Mat2 Ts = act.combined_sigma().reduce(N);
    Mat2 Tt = act.combined_tau().reduce(N);

    // generators of K = A^{I}[p^N] and of the divisible part D[p^N]
    FpMat k_gens, d_gens;
    CotorsionReport rep;
    for (int i = 0; i < 2; ++i) {
        FpVec col = {inv.V.at(1, i + 1).value() % mod, inv.V.at(2, i + 1).value() % mod};
        if (inv.components[i].divisible) {
            rep.inertia_structure.push_back("divisible");
            k_gens.push_back(col);
            d_gens.push_back(col);
        } else {
            int a = std::min(inv.components[i].exponent, N);
            rep.inertia_structure.push_back("finite exponent p^" + std::to_string(inv.components[i].exponent));
            if (a > 0) {
                i64 f = detail::ipow(p, N - a);
                k_gens.push_back({fp::norm(col[0] * f, mod), fp::norm(col[1] * f, mod)});
            }
        }
    }

    // sigma must preserve the inertia invariants
    auto kech = zpn::echelon(k_gens, p, N);
    auto in_k = [&](const FpVec& v) {
        FpMat test = k_gens;
        test.push_back(v);
        return zpn::log_order(zpn::echelon(test, p, N), N) == zpn::log_order(kech, N);
    };
    Mat2 I = Mat2::identity(p, N);
    for (const auto& g : k_gens) {
        if (!in_k(detail_isog::apply(Ts, g, mod))) throw std::domain_error("inconsistent action");
        FpVec tg = detail_isog::apply(Tt, g, mod);
        if (tg[0] != g[0] || tg[1] != g[1]) throw std::domain_error("inconsistent action");
    }

    // c = #K / #((sigma-1)K + D);  delta = log_p #K - log_p #(pK + (sigma-1)K + D)
    Mat2 Sm1 = Ts - I;
    FpMat s1 = d_gens;
    for (const auto& g : k_gens) s1.push_back(detail_isog::apply(Sm1, g, mod));
    long long logK = zpn::log_order(kech, N);
    long long logS1 = zpn::log_order(zpn::echelon(s1, p, N), N);
    FpMat s2 = s1;
    for (const auto& g : k_gens) s2.push_back({fp::norm(g[0] * p, mod), fp::norm(g[1] * p, mod)});
    long long logS2 = zpn::log_order(zpn::echelon(s2, p, N), N);

    rep.tamagawa_order = detail::ipow(p, static_cast<int>(logK - logS1));
    rep.delta = static_cast<int>(logK - logS2);
    if (rep.delta > 2) throw std::domain_error("inconsistent action");

    // H^0 = ker(sigma-1) on A^{I}: count fixed points at two consecutive
    // finite levels; equality certifies finiteness and the order.
    auto h0_log = [&](int level) {
        Mat2 s = act.combined_sigma().reduce(level);
        Mat2 t = act.combined_tau().reduce(level);
        Mat2 il = Mat2::identity(p, level);
        Mat2 ds = s - il, dt = t - il;
        std::vector<FpVec> rows = {{ds.at(1, 1).value(), ds.at(1, 2).value()},
                                   {ds.at(2, 1).value(), ds.at(2, 2).value()},
                                   {dt.at(1, 1).value(), dt.at(1, 2).value()},
                                   {dt.at(2, 1).value(), dt.at(2, 2).value()}};
        return detail_isog::log_kernel_order(rows, p, level);
    };
    long long hN = h0_log(N), hN1 = h0_log(N - 1);
    rep.h0_finite = (hN == hN1);
    rep.h0_order = rep.h0_finite ? detail::ipow(p, static_cast<int>(hN)) : -1;
    return rep;
}

// Change of lattice by (p 0; 0 1): entries (a, b; c, d) -> (a, pb; c/p, d) at
// one digit less precision.
inline LocalLatticeAction lattice_swap(const LocalLatticeAction& act) {
    const int n = act.n;
    auto swap_one = [&](const Mat2& M) {
        if (M.at(2, 1).valuation() < 1) throw std::domain_error("lattice not p-isogenous in this basis");
        return Mat2(M.at(1, 1).reduce(n - 1), (M.at(1, 2).mul_p()).reduce(n - 1), M.at(2, 1).div_p(),
                    M.at(2, 2).reduce(n - 1));
    };
    return {act.prime, n - 1, swap_one(act.Ssigma), swap_one(act.Stau), act.psi_sigma.reduce(n - 1),
            act.psi_tau.reduce(n - 1)};
}

// Swap then co-swap (conjugation by diag(1, p)) must return the original
// action at precision n-2: the isogeny composed with its dual is p.
inline bool dual_isogeny_check(const LocalLatticeAction& act) {
    LocalLatticeAction swapped = lattice_swap(act);
    const int n2 = act.n - 2;
    auto co_swap = [&](const Mat2& M) {
        if (M.at(1, 2).valuation() < 1) return std::optional<Mat2>();
        return std::optional<Mat2>(Mat2(M.at(1, 1).reduce(n2), M.at(1, 2).div_p(),
                                        (M.at(2, 1).mul_p()).reduce(n2), M.at(2, 2).reduce(n2)));
    };
    auto back_s = co_swap(swapped.Ssigma), back_t = co_swap(swapped.Stau);
    if (!back_s || !back_t) return false;
    return *back_s == act.Ssigma.reduce(n2) && *back_t == act.Stau.reduce(n2);
}

// Exhaustive delta computation on A[p^{n-1}] (test oracle): tau-fixed points,
// one-step p-divisibility inside the fixed points, and the sigma-coinvariant
// subgroup, all as explicit element sets.
inline int delta_oracle(const LocalLatticeAction& act) {
    const i64 p = act.prime.p;
    const int N = act.n - 1;
    const i64 mod = detail::ipow(p, N);
    const i64 mod_hi = detail::ipow(p, N + 1);
    Mat2 TtN = act.combined_tau().reduce(N);
    Mat2 Tt_hi = act.combined_tau();  // precision N+1 = n
    Mat2 TsN = act.combined_sigma().reduce(N);
    Mat2 IN = Mat2::identity(p, N);

    auto fixed = [&](const Mat2& T, i64 m) {
        std::set<std::pair<i64, i64>> out;
        for (i64 a = 0; a < m; ++a)
            for (i64 b = 0; b < m; ++b) {
                FpVec v = detail_isog::apply(T, {a, b}, m);
                if (v[0] == a && v[1] == b) out.insert({a, b});
            }
        return out;
    };
    auto K = fixed(TtN, mod);
    auto K_hi = fixed(Tt_hi, mod_hi);

    // multiplication by p: A[p^{N+1}] -> A[p^N] is coordinate reduction
    std::set<std::pair<i64, i64>> gens;  // D + (sigma-1)K + pK
    for (const auto& [a, b] : K_hi) gens.insert({a % mod, b % mod});
    Mat2 Sm1 = TsN - IN;
    for (const auto& [a, b] : K) {
        FpVec v = detail_isog::apply(Sm1, {a, b}, mod);
        gens.insert({v[0], v[1]});
        gens.insert({fp::norm(a * p, mod), fp::norm(b * p, mod)});
    }
    // subgroup closure under addition
    std::set<std::pair<i64, i64>> S = {{0, 0}};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<i64, i64>> cur(S.begin(), S.end());
        for (const auto& s : cur)
            for (const auto& g : gens) {
                std::pair<i64, i64> t = {fp::norm(s.first + g.first, mod), fp::norm(s.second + g.second, mod)};
                if (S.insert(t).second) grew = true;
            }
    }
    long long quot = static_cast<long long>(K.size() / S.size());
    int delta = 0;
    while (quot > 1) { quot /= p; ++delta; }
    return delta;
}

}  // namespace selmer
