#pragma once

// Cocycle and coboundary linear algebra for the two-generator tame group
// acting by conjugation on trace-zero 2x2 matrices over F_p, plus the
// distinguished cocycle families (f1, f2, g^nr, g^ram) and their conjugates.

#include <string>
#include <vector>

#include "selmer/conditions.hpp"
#include "selmer/fp_linalg.hpp"
#include "selmer/padic.hpp"

namespace selmer {

// Generator images mod p of the residual representation restricted to the
// decomposition group; the action on trace-zero matrices is v -> A v A^{-1}.
struct AdAction {
    i64 p;
    i64 ell;
    Mat2 Asigma;  // precision 1
    Mat2 Atau;

    static AdAction trivial(const TrivialPrime& pr) {
        return {pr.p, pr.ell, Mat2::identity(pr.p, 1), Mat2::identity(pr.p, 1)};
    }

    bool relation_holds() const {
        return Asigma * Atau * Asigma.inverse() == mat_pow(Atau, ell);
    }
};

// A 1-cocycle on the generators, valued in trace-zero matrices mod p.
struct AdCocycle {
    Mat2 Csigma;
    Mat2 Ctau;

    i64 p() const { return Csigma.p(); }

    bool trace_zero() const { return Csigma.trace().is_zero() && Ctau.trace().is_zero(); }

    // coordinates (sigma: m11, m12, m21; tau: m11, m12, m21); m22 = -m11
    FpVec coords() const {
        return {Csigma.at(1, 1).value(), Csigma.at(1, 2).value(), Csigma.at(2, 1).value(),
                Ctau.at(1, 1).value(), Ctau.at(1, 2).value(), Ctau.at(2, 1).value()};
    }

    static AdCocycle from_coords(i64 p, const FpVec& v) {
        return {Mat2::from_values(p, 1, v[0], v[1], v[2], -v[0]),
                Mat2::from_values(p, 1, v[3], v[4], v[5], -v[3])};
    }

    friend bool operator==(const AdCocycle& a, const AdCocycle& b) {
        return a.Csigma == b.Csigma && a.Ctau == b.Ctau;
    }
};

struct CocycleSpace {
    std::vector<AdCocycle> basis;
    std::string label;

    int dim() const { return static_cast<int>(basis.size()); }

    FpMat coord_rows() const {
        FpMat m;
        for (const auto& c : basis) m.push_back(c.coords());
        return m;
    }

    bool contains(const AdCocycle& c, i64 p) const { return fp::in_span(coord_rows(), c.coords(), p); }
};

namespace detail_cohom {

// Evaluate a cocycle on the relation word sigma tau sigma^-1 tau^-l via the
// crossed-homomorphism identity: f(gh) = f(g) + g.f(h), f(g^-1) = -g^-1.f(g).
inline Mat2 relation_value(const AdAction& act, const Mat2& fs, const Mat2& ft) {
    struct Letter { const Mat2* A; const Mat2* F; bool inverse; };
    std::vector<Letter> word;
    word.push_back({&act.Asigma, &fs, false});
    word.push_back({&act.Atau, &ft, false});
    word.push_back({&act.Asigma, &fs, true});
    for (i64 i = 0; i < act.ell; ++i) word.push_back({&act.Atau, &ft, true});

    Mat2 total = Mat2::zero(act.p, 1);
    Mat2 prefix = Mat2::identity(act.p, 1);
    for (const auto& L : word) {
        Mat2 term = L.inverse ? Mat2::zero(act.p, 1) - L.A->inverse() * (*L.F) * (*L.A) : *L.F;
        total = total + prefix * term * prefix.inverse();
        prefix = L.inverse ? prefix * L.A->inverse() : prefix * (*L.A);
    }
    return total;
}

inline Mat2 trace_zero_basis(i64 p, int k) {
    switch (k) {
        case 0: return Mat2::from_values(p, 1, 1, 0, 0, -1);
        case 1: return Mat2::from_values(p, 1, 0, 1, 0, 0);
        default: return Mat2::from_values(p, 1, 0, 0, 1, 0);
    }
}

}  // namespace detail_cohom

struct CocycleSpaces {
    CocycleSpace z1;
    CocycleSpace b1;
};

// Z^1 = kernel of the relation-derived linear system in the six coordinates;
// B^1 = {(sigma.m - m, tau.m - m)}.
inline CocycleSpaces cocycle_space(const AdAction& act) {
    if (!act.relation_holds()) throw std::invalid_argument("invalid action");
    const i64 p = act.p;

    // columns: 6 unknowns; rows: the 4 entries of the relation value
    FpMat sys(4, FpVec(6, 0));
    for (int u = 0; u < 6; ++u) {
        Mat2 fs = Mat2::zero(p, 1), ft = Mat2::zero(p, 1);
        (u < 3 ? fs : ft) = detail_cohom::trace_zero_basis(p, u % 3);
        Mat2 val = detail_cohom::relation_value(act, fs, ft);
        sys[0][u] = val.at(1, 1).value();
        sys[1][u] = val.at(1, 2).value();
        sys[2][u] = val.at(2, 1).value();
        sys[3][u] = val.at(2, 2).value();
    }
    CocycleSpace z1{{}, "Z1"};
    for (const auto& v : fp::kernel(sys, p)) z1.basis.push_back(AdCocycle::from_coords(p, v));

    FpMat brows;
    for (int k = 0; k < 3; ++k) {
        Mat2 m = detail_cohom::trace_zero_basis(p, k);
        AdCocycle cb{act.Asigma * m * act.Asigma.inverse() - m, act.Atau * m * act.Atau.inverse() - m};
        brows.push_back(cb.coords());
    }
    CocycleSpaces out;
    out.z1 = std::move(z1);
    out.b1.label = "B1";
    // reduce the coboundary generators to an independent basis
    FpMat red = brows;
    int rk = fp::row_reduce(red, p);
    for (int i = 0; i < rk; ++i) out.b1.basis.push_back(AdCocycle::from_coords(p, red[i]));
    return out;
}

struct HDims {
    int h0, h1, h2;
    int h1_nr;        // classes representable with trivial tau-value
    int h1_over_nr;   // dim H1 - dim H1_nr
};

// h2 comes from the vanishing local Euler characteristic (l != p).
inline HDims h_dims(const AdAction& act) {
    const i64 p = act.p;
    // invariants of the conjugation action on trace-zero matrices
    FpMat inv_sys;
    for (int k = 0; k < 3; ++k) {
        Mat2 m = detail_cohom::trace_zero_basis(p, k);
        Mat2 ds = act.Asigma * m * act.Asigma.inverse() - m;
        Mat2 dt = act.Atau * m * act.Atau.inverse() - m;
        inv_sys.push_back({ds.at(1, 1).value(), ds.at(1, 2).value(), ds.at(2, 1).value(),
                           dt.at(1, 1).value(), dt.at(1, 2).value(), dt.at(2, 1).value()});
    }
    // transpose: rows are equations, columns the 3 unknowns
    FpMat eqs(6, FpVec(3, 0));
    for (int k = 0; k < 3; ++k)
        for (int e = 0; e < 6; ++e) eqs[e][k] = inv_sys[k][e];
    int h0 = 3 - fp::rank(eqs, p);

    auto spaces = cocycle_space(act);
    int h1 = spaces.z1.dim() - spaces.b1.dim();

    // unramified subspace: cocycles with Ctau = 0, counted modulo B^1
    FpMat znr;
    for (const auto& c : spaces.z1.basis) znr.push_back(c.coords());
    // intersect with {coords 3..5 = 0}: append p*unit? Solve directly: the
    // subspace of Z1 with zero tau-part = kernel of the projection restricted
    // to Z1.
    FpMat proj;  // rows: tau-coordinates of the Z1 basis (transposed system)
    for (int e = 3; e < 6; ++e) {
        FpVec row;
        for (const auto& c : spaces.z1.basis) row.push_back(c.coords()[e]);
        proj.push_back(row);
    }
    FpMat combos = fp::kernel(proj, p);
    FpMat znr_rows;
    for (const auto& combo : combos) {
        FpVec v(6, 0);
        for (std::size_t i = 0; i < combo.size(); ++i)
            for (int e = 0; e < 6; ++e)
                v[e] = fp::norm(v[e] + combo[i] * spaces.z1.basis[i].coords()[e], p);
        znr_rows.push_back(v);
    }
    FpMat b = spaces.b1.coord_rows();
    FpMat joint = b;
    for (const auto& r : znr_rows) joint.push_back(r);
    int h1_nr = fp::rank(joint, p) - spaces.b1.dim();

    return {h0, h1, h1 - h0, h1_nr, h1 - h1_nr};
}

// The distinguished ramified-family basis for a given condition type: the
// conjugates of {f1, f2, g^nr or g^ram} by the type's conjugator.
inline CocycleSpace n_space(const ConditionType& type, const ShapeParams& params, const TrivialPrime& prime) {
    const i64 p = prime.p;
    Mat2 C = type.conjugator(p, 1);
    Mat2 Ci = C.inverse();

    auto conj = [&](const Mat2& m) { return C * m * Ci; };

    Mat2 z = Mat2::zero(p, 1);
    Mat2 e12 = Mat2::from_values(p, 1, 0, 1, 0, 0);
    Mat2 e21 = Mat2::from_values(p, 1, 0, 0, 1, 0);

    CocycleSpace space;
    space.label = std::string("N_") + type.name();
    space.basis.push_back({conj(e12), conj(z)});  // f1
    space.basis.push_back({conj(z), conj(e12)});  // f2
    if (type.base() == ShapeBase::nr) {
        space.basis.push_back({conj(e21), conj(z)});  // g^nr
    } else {
        // g^ram(tau) = diag(-y', y') with y' = y/(l-1), a unit mod p
        if (params.y.valuation() != 1) throw std::invalid_argument("shape parameter out of class");
        i64 y1 = params.y.div_p().value() % p;
        i64 lm1 = (prime.ell - 1) / p % p;
        i64 yprime = fp::norm(y1 * detail::invmod(lm1, p), p);
        Mat2 gtau = Mat2::from_values(p, 1, -yprime, 0, 0, yprime);
        space.basis.push_back({conj(e21), conj(gtau)});
    }
    return space;
}

// True iff f(sigma) is NOT of the form (-a a; b a) for any a, b in F_p.
inline bool shape_obstruction_check(const AdCocycle& f) {
    const i64 p = f.p();
    i64 a = f.Csigma.at(2, 2).value();
    bool fits = f.Csigma.at(1, 2).value() == a && f.Csigma.at(1, 1).value() == fp::norm(-a, p);
    return !fits;
}

}  // namespace selmer
