#pragma once

// Arithmetic in Lambda = Z_p[[T]] at dual precision (p-adic digits N, T-degree
// D), Weierstrass preparation, the structure invariants mu/lambda/g, the
// mu = 0 equivalences, and the finite-level generator inequality for an
// exponent-p subquotient pair.

#include <string>
#include <vector>

#include "selmer/fp_linalg.hpp"
#include "selmer/padic.hpp"

namespace selmer {

struct LambdaSeries {
    i64 p;
    int N;               // p-adic precision
    int D;               // T-degree truncation: coefficients c_0..c_D
    std::vector<i64> coeffs;

    LambdaSeries(i64 p_, int N_, int D_, std::vector<i64> c = {}) : p(p_), N(N_), D(D_), coeffs(std::move(c)) {
        coeffs.resize(D + 1, 0);
        i64 m = modulus();
        for (auto& x : coeffs) x = fp::norm(x, m);
    }

    i64 modulus() const { return detail::ipow(p, N); }
    bool is_zero() const {
        for (i64 c : coeffs)
            if (c != 0) return false;
        return true;
    }
    bool is_unit() const { return coeffs[0] % p != 0; }

    LambdaSeries reduce(int N2, int D2) const {
        std::vector<i64> c(coeffs.begin(), coeffs.begin() + (D2 + 1));
        return LambdaSeries(p, N2, D2, std::move(c));
    }

    friend LambdaSeries operator+(const LambdaSeries& a, const LambdaSeries& b) {
        LambdaSeries r(a.p, a.N, a.D);
        for (int i = 0; i <= a.D; ++i) r.coeffs[i] = fp::norm(a.coeffs[i] + b.coeffs[i], r.modulus());
        return r;
    }
    friend LambdaSeries operator-(const LambdaSeries& a, const LambdaSeries& b) {
        LambdaSeries r(a.p, a.N, a.D);
        for (int i = 0; i <= a.D; ++i) r.coeffs[i] = fp::norm(a.coeffs[i] - b.coeffs[i], r.modulus());
        return r;
    }
    friend LambdaSeries operator*(const LambdaSeries& a, const LambdaSeries& b) {
        LambdaSeries r(a.p, a.N, a.D);
        i64 m = r.modulus();
        for (int i = 0; i <= a.D; ++i) {
            if (a.coeffs[i] == 0) continue;
            for (int j = 0; i + j <= a.D; ++j)
                r.coeffs[i + j] = fp::norm(r.coeffs[i + j] + static_cast<i64>((static_cast<__int128>(a.coeffs[i]) * b.coeffs[j]) % m), m);
        }
        return r;
    }
    friend bool operator==(const LambdaSeries& a, const LambdaSeries& b) { return a.coeffs == b.coeffs; }

    // inverse of a unit series (digit iteration mod p, then Hensel in p)
    LambdaSeries inverse() const {
        if (!is_unit()) throw std::domain_error("not a unit");
        LambdaSeries x(p, N, D);
        x.coeffs[0] = detail::invmod(coeffs[0], modulus());
        // Newton: x <- x(2 - a x), doubling T-accuracy; iterate enough times
        LambdaSeries two(p, N, D);
        two.coeffs[0] = 2;
        for (int it = 0; (1 << it) <= 2 * (D + 1); ++it) x = x * (two - (*this) * x);
        return x;
    }
};

struct DistinguishedPoly {
    int degree;
    std::vector<i64> coeffs;  // c_0..c_degree with c_degree = 1, others in (p)

    LambdaSeries as_series(i64 p, int N, int D) const {
        std::vector<i64> c(coeffs);
        return LambdaSeries(p, N, D, std::move(c));
    }
};

struct WeierstrassResult {
    int mu;
    LambdaSeries unit;     // at precision (N - mu, D)
    DistinguishedPoly P;
};

// p^mu * unit * P = f exactly mod (p^{N-mu}, T^{D+1}); solved digit by digit
// in p after splitting off the content p^mu.
inline WeierstrassResult weierstrass_prepare(const LambdaSeries& f) {
    const i64 p = f.p;
    if (f.is_zero()) throw std::domain_error("zero series");
    int mu = f.N;
    for (i64 c : f.coeffs)
        if (c != 0) mu = std::min(mu, zpn::val(c, p, f.N));
    const int Nw = f.N - mu;
    i64 pmu = detail::ipow(p, mu);
    LambdaSeries f1(p, Nw, f.D);
    for (int i = 0; i <= f.D; ++i) f1.coeffs[i] = (f.coeffs[i] / pmu) % f1.modulus();

    int d = -1;
    for (int i = 0; i <= f.D; ++i)
        if (f1.coeffs[i] % p != 0) { d = i; break; }
    if (d < 0) throw std::domain_error("raise T-truncation");

    // initial solution mod p: P = T^d, u = f1 / T^d
    LambdaSeries u(p, Nw, f.D);
    for (int i = d; i <= f.D; ++i) u.coeffs[i - d] = f1.coeffs[i] % p;
    LambdaSeries P(p, Nw, f.D);
    P.coeffs[d] = 1;

    for (int k = 1; k < Nw; ++k) {
        LambdaSeries E = f1 - u * P;
        i64 pk = detail::ipow(p, k);
        LambdaSeries e(p, Nw, f.D);
        for (int i = 0; i <= f.D; ++i) {
            if (E.coeffs[i] % pk != 0) throw std::logic_error("weierstrass digit loss");
            e.coeffs[i] = (E.coeffs[i] / pk) % p;
        }
        // solve u*dP + du*P = e mod p with deg dP < d: mod p, P = T^d
        LambdaSeries q = e * u.inverse();
        LambdaSeries dP(p, Nw, f.D), high(p, Nw, f.D);
        for (int i = 0; i <= f.D; ++i) (i < d ? dP.coeffs[i] : high.coeffs[i - d]) = q.coeffs[i] % p;
        LambdaSeries du = u * high;
        for (int i = 0; i <= f.D; ++i) {
            u.coeffs[i] = fp::norm(u.coeffs[i] + pk * (du.coeffs[i] % p), u.modulus());
            P.coeffs[i] = fp::norm(P.coeffs[i] + pk * (dP.coeffs[i] % p), P.modulus());
        }
    }

    DistinguishedPoly poly;
    poly.degree = d;
    poly.coeffs.assign(P.coeffs.begin(), P.coeffs.begin() + d + 1);
    return {mu, u, poly};
}

// An elementary torsion-plus-free module: Lambda^r + sum Lambda/(p^{mu_i}) +
// sum Lambda/(f_j).
struct ElementaryModule {
    int r = 0;
    std::vector<int> mu_list;
    std::vector<DistinguishedPoly> poly_list;
};

struct StructureInvariants {
    int mu, lambda, g;
};

inline StructureInvariants invariants(const ElementaryModule& m) {
    StructureInvariants out{0, 0, m.r + static_cast<int>(m.mu_list.size()), };
    for (int mu : m.mu_list) out.mu += mu;
    for (const auto& f : m.poly_list) {
        out.lambda += f.degree;
        if (f.degree >= 1) ++out.g;
    }
    return out;
}

// Lambda^a modulo the span of the columns.
struct FinitePresentation {
    int a;
    std::vector<std::vector<LambdaSeries>> columns;  // each column has a entries
};

// Nakayama: g = a - rank over F_p of the constant terms of the relations.
inline int g_from_presentation(const FinitePresentation& pres) {
    if (pres.columns.empty()) return pres.a;
    const i64 p = pres.columns[0][0].p;
    FpMat m;
    for (const auto& col : pres.columns) {
        FpVec v;
        for (const auto& s : col) v.push_back(s.coeffs[0] % p);
        m.push_back(v);
    }
    return pres.a - fp::rank(m, p);
}

inline FinitePresentation canonical_presentation(const ElementaryModule& m, i64 p, int N, int D) {
    FinitePresentation pres;
    pres.a = m.r + static_cast<int>(m.mu_list.size() + m.poly_list.size());
    int idx = m.r;
    for (int mu : m.mu_list) {
        std::vector<LambdaSeries> col(pres.a, LambdaSeries(p, N, D));
        col[idx].coeffs[0] = detail::ipow(p, std::min(mu, N));
        pres.columns.push_back(col);
        ++idx;
    }
    for (const auto& f : m.poly_list) {
        std::vector<LambdaSeries> col(pres.a, LambdaSeries(p, N, D));
        col[idx] = f.as_series(p, N, D);
        pres.columns.push_back(col);
        ++idx;
    }
    return pres;
}

struct MuZeroReport {
    bool elementary_mu_zero;      // r = 0 and all mu_i absent
    bool zp_finitely_generated;   // finite-level order stable in D
    bool p_quotient_finite;       // dim M/pM stable in D
    int mpm_dim;                  // stabilized dim of M/pM when finite
    bool equivalent;
};

namespace detail_iw {

// log_p order of (Lambda/(p^Neff, T^{D+1})) / (relations of the factor).
// D_ref pins the per-factor coefficient level: stabilization of the order in D
// is only visible once T^D lands in (p^Neff, f), which needs D-1 >= Neff*deg f,
// so the level is capped by the largest truncation the caller compares.
inline long long factor_log_order(const ElementaryModule& m, i64 p, int N, int D, int D_ref) {
    long long total = 0;
    total += static_cast<long long>(m.r) * N * (D + 1);
    for (int mu : m.mu_list) total += static_cast<long long>(std::min(mu, N)) * (D + 1);
    for (const auto& f : m.poly_list) {
        int Neff = std::max(1, std::min(N, (D_ref - 1) / std::max(1, f.degree)));
        // relations: T^j f for j = 0..D-d (computed honestly via echelon)
        FpMat rel;
        for (int j = 0; j + f.degree <= D; ++j) {
            FpVec row(D + 1, 0);
            for (int i = 0; i <= f.degree; ++i) row[i + j] = f.coeffs[i];
            rel.push_back(row);
        }
        long long rel_order = zpn::log_order(zpn::echelon(rel, p, Neff), Neff);
        total += static_cast<long long>(Neff) * (D + 1) - rel_order;
    }
    return total;
}

inline int mpm_dim(const ElementaryModule& m, i64 p, int D) {
    int dim = 0;
    dim += m.r * (D + 1);
    dim += static_cast<int>(m.mu_list.size()) * (D + 1);
    for (const auto& f : m.poly_list) {
        FpMat rel;
        for (int j = 0; j + f.degree <= D; ++j) {
            FpVec row(D + 1, 0);
            for (int i = 0; i <= f.degree; ++i) row[i + j] = f.coeffs[i] % p;
            rel.push_back(row);
        }
        dim += (D + 1) - fp::rank(rel, p);
    }
    return dim;
}

}  // namespace detail_iw

// The three mu = 0 predicates, each evaluated by finite-level stabilization,
// with the claimed pairwise equivalence asserted by the caller's tests.
inline MuZeroReport mu_zero_equivalences(const ElementaryModule& m, int N, int D, i64 p) {
    for (const auto& f : m.poly_list)
        if (f.degree > D - 2) throw std::domain_error("raise level");
    MuZeroReport rep{};
    int total_mu = 0;
    for (int mu : m.mu_list) total_mu += mu;
    rep.elementary_mu_zero = (m.r == 0 && total_mu == 0);

    long long o2 = detail_iw::factor_log_order(m, p, N, D, D);
    long long o1 = detail_iw::factor_log_order(m, p, N, D - 1, D);
    long long o0 = detail_iw::factor_log_order(m, p, N, D - 2, D);
    rep.zp_finitely_generated = (o2 == o1 && o1 == o0);

    int d2 = detail_iw::mpm_dim(m, p, D);
    int d1 = detail_iw::mpm_dim(m, p, D - 1);
    rep.p_quotient_finite = (d2 == d1);
    rep.mpm_dim = d2;
    rep.equivalent = (rep.elementary_mu_zero == rep.zp_finitely_generated) &&
                     (rep.zp_finitely_generated == rep.p_quotient_finite);
    return rep;
}

// X = Lambda^a / relations with no finite submodule by construction; Y is a
// submodule given by generators, with X/Y of exponent p.
struct SubmodulePair {
    FinitePresentation X;
    std::vector<std::vector<LambdaSeries>> y_generators;  // each an a-vector
};

struct MatsunoReport {
    int gX, gY;
    bool holds;
};

namespace detail_iw {

// flatten an a-vector of truncated series into coordinates of (Z/p^N)^{a(D+1)}
inline FpVec flatten(const std::vector<LambdaSeries>& vec, int D) {
    FpVec out;
    for (const auto& s : vec)
        for (int i = 0; i <= D; ++i) out.push_back(s.coeffs[i]);
    return out;
}

inline FpVec t_shift(const FpVec& v, int a, int D) {
    FpVec out(v.size(), 0);
    for (int blk = 0; blk < a; ++blk)
        for (int i = 0; i + 1 <= D; ++i) out[blk * (D + 1) + i + 1] = v[blk * (D + 1) + i];
    return out;
}

// Lambda-submodule generators (all T-shifts) of a list of vectors.
inline FpMat lambda_span(const std::vector<FpVec>& gens, int a, int D) {
    FpMat out;
    for (const auto& g : gens) {
        FpVec cur = g;
        for (int j = 0; j <= D; ++j) {
            out.push_back(cur);
            cur = t_shift(cur, a, D);
        }
    }
    return out;
}

}  // namespace detail_iw

inline MatsunoReport matsuno_at_level(const SubmodulePair& pair, i64 p, int N, int D) {
    const int a = pair.X.a;
    const int dim = a * (D + 1);
    std::vector<FpVec> rel_gens, y_gens;
    for (const auto& col : pair.X.columns) {
        std::vector<LambdaSeries> scaled;
        for (const auto& s : col) scaled.push_back(s.reduce(N, D));
        rel_gens.push_back(detail_iw::flatten(scaled, D));
    }
    for (const auto& g : pair.y_generators) {
        std::vector<LambdaSeries> scaled;
        for (const auto& s : g) scaled.push_back(s.reduce(N, D));
        y_gens.push_back(detail_iw::flatten(scaled, D));
    }
    FpMat R = detail_iw::lambda_span(rel_gens, a, D);
    FpMat W = detail_iw::lambda_span(y_gens, a, D);

    // exponent-p check: p * e_i must land in W + R for every generator of X
    {
        FpMat span = R;
        for (const auto& w : W) span.push_back(w);
        auto ech = zpn::echelon(span, p, N);
        long long base = zpn::log_order(ech, N);
        for (int i = 0; i < a; ++i) {
            FpVec pe(dim, 0);
            pe[i * (D + 1)] = p;
            FpMat test = span;
            test.push_back(pe);
            if (zpn::log_order(zpn::echelon(test, p, N), N) != base) throw std::domain_error("pair invalid");
        }
    }

    // gX = dim of X/(p,T)X over F_p: everything mod p, relations + T-shifts
    FpMat gx_rows;
    for (const auto& r : R) gx_rows.push_back(r);
    for (int i = 0; i < dim; ++i) {
        FpVec e(dim, 0);
        e[i] = 1;
        gx_rows.push_back(detail_iw::t_shift(e, a, D));
    }
    int gX = dim - fp::rank(gx_rows, p);

    // gY = log #((W+R)/ (pW + TW + R)): exact subgroup orders over Z/p^N
    FpMat top = R;
    for (const auto& w : W) top.push_back(w);
    FpMat bot = R;
    for (const auto& w : W) {
        FpVec pw(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) pw[i] = fp::norm(w[i] * p, detail::ipow(p, N));
        bot.push_back(pw);
        bot.push_back(detail_iw::t_shift(w, a, D));
    }
    long long gY = zpn::log_order(zpn::echelon(top, p, N), N) - zpn::log_order(zpn::echelon(bot, p, N), N);
    return {gX, static_cast<int>(gY), 2 * gX >= gY};
}

// Evaluate at two levels; the invariants must agree (stabilization) and the
// inequality 2 g(X) >= g(Y) must hold.
inline MatsunoReport matsuno_check(const SubmodulePair& pair, i64 p, int N, int D) {
    MatsunoReport lo = matsuno_at_level(pair, p, N, D);
    MatsunoReport hi = matsuno_at_level(pair, p, N + 1, D + 2);
    if (lo.gX != hi.gX || lo.gY != hi.gY) throw std::domain_error("raise level");
    return hi;
}

}  // namespace selmer
