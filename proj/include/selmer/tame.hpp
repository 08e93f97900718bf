#pragma once

// Tame local deformations at trivial primes: the two-generator presentation
// (sigma, tau | sigma tau sigma^-1 = tau^l), the Type I/II/III condition
// shapes, cocycle twisting, small-extension lifting, and the obstruction
// defect of an arbitrary lift.

#include <optional>
#include <vector>

#include "selmer/cohomology.hpp"
#include "selmer/conditions.hpp"
#include "selmer/fp_linalg.hpp"
#include "selmer/padic.hpp"

namespace selmer {

struct TameDeformation {
    TrivialPrime prime;
    int n;
    Mat2 Msigma;
    Mat2 Mtau;
    i64 k = 2;
};

// l^{(k-2)/2}: integral power for even k, square-root branch s = 1 mod p
// for odd k.
inline PAdic weight_scalar(const TrivialPrime& prime, i64 k, int n) {
    PAdic ell(prime.p, n, prime.ell);
    if (k < 2) throw std::invalid_argument("weight k >= 2 required");
    if (k % 2 == 0) return ell.pow((k - 2) / 2);
    return hensel_sqrt_one(ell).pow(k - 2);
}

inline TameDeformation build_condition_member(const TrivialPrime& prime, const ConditionType& type,
                                              const ShapeParams& params, i64 k, int n) {
    if (!params.admissible_for(type.base())) throw std::domain_error("shape parameter out of class");
    const i64 p = prime.p;
    PAdic s = weight_scalar(prime, k, n);
    Mat2 Dsigma = s * Mat2(PAdic(p, n, prime.ell), params.x.zero_lift(n), PAdic(p, n, 0), PAdic(p, n, 1));
    Mat2 Ptau(PAdic(p, n, 1), params.y.zero_lift(n), PAdic(p, n, 0), PAdic(p, n, 1));
    Mat2 C = type.conjugator(p, n);
    Mat2 Ci = C.inverse();
    return {prime, n, C * Dsigma * Ci, C * Ptau * Ci, k};
}

// Relation plus the residual-triviality and determinant invariants.
inline bool check_relation(const TameDeformation& d) {
    const i64 p = d.prime.p;
    if (!d.Msigma.is_identity_mod_p() || !d.Mtau.is_identity_mod_p()) return false;
    if (d.Msigma.det() != PAdic(p, d.n, d.prime.ell).pow(d.k - 1)) return false;
    if (d.Mtau.det() != PAdic(p, d.n, 1)) return false;
    return d.Msigma * d.Mtau * d.Msigma.inverse() == mat_pow(d.Mtau, d.prime.ell);
}

struct MembershipWitness {
    Mat2 A;  // A = I mod p with A (Msigma, Mtau) A^-1 in the type's shape
    ShapeParams params;
};

namespace detail_tame {

inline i64 digit(const PAdic& x, int j) { return (x.value() / detail::ipow(x.p(), j)) % x.p(); }

// The four shape conditions after undoing the type conjugator: with
// N' = B N B^-1, require N'sigma lower-left 0, lower-right s, and N'tau
// lower-left 0, lower-right 1 (upper rows then follow from the determinants).
struct ShapeConds {
    PAdic q[4];
};

inline ShapeConds conds(const Mat2& B, const Mat2& Nsigma, const Mat2& Ntau, const PAdic& s) {
    Mat2 Bi = B.inverse();
    Mat2 Ms = B * Nsigma * Bi;
    Mat2 Mt = B * Ntau * Bi;
    PAdic one(s.p(), s.precision(), 1);
    return {{Ms.at(2, 1), Ms.at(2, 2) - s, Mt.at(2, 1), Mt.at(2, 2) - one}};
}

inline bool conds_zero_mod(const ShapeConds& c, int m) {
    for (const auto& q : c.q)
        if (q.valuation() < m) return false;
    return true;
}

// Digit-by-digit search for B = I mod p bringing (Nsigma, Ntau) into shape.
// Corrections at digit m move the conditions at digit m+1 linearly; the
// kernel of that linear map is enumerated for backtracking.
inline std::optional<Mat2> solve_conjugator(const Mat2& Nsigma, const Mat2& Ntau, const PAdic& s,
                                            int m, const Mat2& B) {
    const i64 p = Nsigma.p();
    const int n = Nsigma.precision();
    if (m > n - 2) return conds_zero_mod(conds(B, Nsigma, Ntau, s), n) ? std::optional<Mat2>(B) : std::nullopt;

    ShapeConds base = conds(B, Nsigma, Ntau, s);
    if (!conds_zero_mod(base, m + 1)) return std::nullopt;

    FpVec defect(4);
    for (int i = 0; i < 4; ++i) defect[i] = digit(base.q[i], m + 1);

    i64 pm = detail::ipow(p, m);
    FpMat L(4, FpVec(3, 0));
    std::vector<Mat2> candidates;
    for (int kk = 0; kk < 3; ++kk) {
        Mat2 E = detail_cohom::trace_zero_basis(p, kk).zero_lift(n);
        Mat2 Bk = (Mat2::identity(p, n) + PAdic(p, n, pm) * E) * B;
        ShapeConds ck = conds(Bk, Nsigma, Ntau, s);
        for (int i = 0; i < 4; ++i) L[i][kk] = fp::norm(digit(ck.q[i], m + 1) - defect[i], p);
    }
    FpVec rhs(4);
    for (int i = 0; i < 4; ++i) rhs[i] = fp::norm(-defect[i], p);
    auto part = fp::solve(L, rhs, p);
    if (!part) return std::nullopt;
    FpMat ker = fp::kernel(L, p);

    // enumerate particular + kernel combinations (backtracking points)
    std::size_t combos = 1;
    for (std::size_t i = 0; i < ker.size(); ++i) combos *= static_cast<std::size_t>(p);
    for (std::size_t c = 0; c < combos; ++c) {
        FpVec e = *part;
        std::size_t idx = c;
        for (const auto& kv : ker) {
            i64 coef = static_cast<i64>(idx % p);
            idx /= p;
            for (int j = 0; j < 3; ++j) e[j] = fp::norm(e[j] + coef * kv[j], p);
        }
        Mat2 E = Mat2::zero(p, n);
        for (int kk = 0; kk < 3; ++kk)
            E = E + PAdic(p, n, e[kk]) * detail_cohom::trace_zero_basis(p, kk).zero_lift(n);
        Mat2 Bnext = (Mat2::identity(p, n) + PAdic(p, n, pm) * E) * B;
        if (auto r = solve_conjugator(Nsigma, Ntau, s, m + 1, Bnext)) return r;
    }
    return std::nullopt;
}

inline std::optional<MembershipWitness> finish_witness(const TameDeformation& d, const ConditionType& type,
                                                       const PAdic& s, const Mat2& B) {
    const i64 p = d.prime.p;
    Mat2 C = type.conjugator(p, d.n);
    Mat2 Ms = B * (C.inverse() * d.Msigma * C) * B.inverse();
    Mat2 Mt = B * (C.inverse() * d.Mtau * C) * B.inverse();
    ShapeParams params{Ms.at(1, 2) * s.inverse(), Mt.at(1, 2)};
    if (!params.admissible_for(type.base())) return std::nullopt;
    return MembershipWitness{C * B * C.inverse(), params};
}

}  // namespace detail_tame

// Strict-equivalence membership in a condition: does some A = I mod p
// conjugate (Msigma, Mtau) into the type's shape with admissible parameters?
inline std::optional<MembershipWitness> is_in_condition(const TameDeformation& d, const ConditionType& type) {
    const i64 p = d.prime.p;
    const int n = d.n;
    PAdic s = weight_scalar(d.prime, d.k, n);
    Mat2 C = type.conjugator(p, n);
    Mat2 Ci = C.inverse();
    Mat2 Nsigma = Ci * d.Msigma * C;
    Mat2 Ntau = Ci * d.Mtau * C;

    // Conjugation by I + pE only moves entry digits >= 2, so the shape and
    // parameter-divisibility conditions mod p^2 are class invariants.
    auto base = detail_tame::conds(Mat2::identity(p, n), Nsigma, Ntau, s);
    if (!detail_tame::conds_zero_mod(base, n >= 2 ? 2 : 1)) return std::nullopt;
    if (n >= 2) {
        PAdic x2 = (Nsigma.at(1, 2) * s.inverse()).reduce(2);
        PAdic y2 = Ntau.at(1, 2).reduce(2);
        if (!ShapeParams{x2, y2}.admissible_for(type.base())) return std::nullopt;
    }

    auto B = detail_tame::solve_conjugator(Nsigma, Ntau, s, 1, Mat2::identity(p, n));
    if (!B) return std::nullopt;
    return detail_tame::finish_witness(d, type, s, *B);
}

// Exhaustive oracle: enumerate conjugators B = prod_m (I + p^m E_m) over all
// trace-zero digit matrices (p^{3(n-1)} candidates; test use only).
inline std::optional<MembershipWitness> is_in_condition_oracle(const TameDeformation& d, const ConditionType& type) {
    const i64 p = d.prime.p;
    const int n = d.n;
    PAdic s = weight_scalar(d.prime, d.k, n);
    Mat2 C = type.conjugator(p, n);
    Mat2 Ci = C.inverse();
    Mat2 Nsigma = Ci * d.Msigma * C;
    Mat2 Ntau = Ci * d.Mtau * C;

    const int digits = n - 1;
    std::size_t total = 1;
    for (int i = 0; i < 3 * digits; ++i) total *= static_cast<std::size_t>(p);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t idx = code;
        Mat2 B = Mat2::identity(p, n);
        for (int m = 1; m <= digits; ++m) {
            Mat2 E = Mat2::zero(p, n);
            for (int kk = 0; kk < 3; ++kk) {
                i64 coef = static_cast<i64>(idx % p);
                idx /= p;
                E = E + PAdic(p, n, coef) * detail_cohom::trace_zero_basis(p, kk).zero_lift(n);
            }
            B = (Mat2::identity(p, n) + PAdic(p, n, detail::ipow(p, m)) * E) * B;
        }
        if (detail_tame::conds_zero_mod(detail_tame::conds(B, Nsigma, Ntau, s), n)) {
            if (auto w = detail_tame::finish_witness(d, type, s, B)) return w;
        }
    }
    return std::nullopt;
}

// Twist by (I + p^level F) on both generator images; the result must still
// satisfy the tame relation at full precision.
inline TameDeformation twist(const TameDeformation& d, const AdCocycle& f, int level) {
    if (level < 1 || level > d.n - 1) throw std::invalid_argument("twist level out of range");
    if (!f.trace_zero()) throw std::domain_error("twist breaks relation");
    const i64 p = d.prime.p;
    i64 pl = detail::ipow(p, level);
    auto lift = [&](const Mat2& c) {
        return Mat2::from_values(p, d.n, pl * c.at(1, 1).value(), pl * c.at(1, 2).value(),
                                 pl * c.at(2, 1).value(), pl * c.at(2, 2).value());
    };
    TameDeformation out{d.prime, d.n,
                        (Mat2::identity(p, d.n) + lift(f.Csigma)) * d.Msigma,
                        (Mat2::identity(p, d.n) + lift(f.Ctau)) * d.Mtau, d.k};
    if (!(out.Msigma * out.Mtau * out.Msigma.inverse() == mat_pow(out.Mtau, d.prime.ell)))
        throw std::domain_error("twist breaks relation");
    return out;
}

// Deterministic lift across O/p^{n+1} -> O/p^n: zero-lift the shape
// parameters and the membership witness.
inline TameDeformation lift_small_extension(const TameDeformation& d, const ConditionType& type) {
    auto w = is_in_condition(d, type);
    if (!w) throw std::domain_error("cannot lift outside condition");
    int n1 = d.n + 1;
    ShapeParams lifted{w->params.x.zero_lift(n1), w->params.y.zero_lift(n1)};
    TameDeformation member = build_condition_member(d.prime, type, lifted, d.k, n1);
    Mat2 A = w->A.zero_lift(n1);
    Mat2 Ai = A.inverse();
    return {d.prime, n1, Ai * member.Msigma * A, Ai * member.Mtau * A, d.k};
}

struct ObstructionReport {
    Mat2 defect;  // D mod p, where the relation defect of the lift is I + p^n D
    bool solvable;
    Mat2 Msigma_corrected;  // valid only when solvable
    Mat2 Mtau_corrected;
};

namespace detail_tame {

inline Mat2 relation_defect(const TameDeformation& d_base, const Mat2& Ms, const Mat2& Mt) {
    Mat2 W = Ms * Mt * Ms.inverse() * mat_pow(Mt, d_base.prime.ell).inverse();
    const i64 p = d_base.prime.p;
    i64 pn = detail::ipow(p, d_base.n);
    Mat2 D = Mat2::zero(p, 1);
    Mat2 I = Mat2::identity(p, d_base.n + 1);
    for (int r = 1; r <= 2; ++r)
        for (int c = 1; c <= 2; ++c) {
            PAdic diff = W.at(r, c) - I.at(r, c);
            if (diff.valuation() < d_base.n) throw std::invalid_argument("lifts do not reduce to the deformation");
            D.at(r, c) = PAdic(p, 1, diff.value() / pn);
        }
    return D;
}

}  // namespace detail_tame

// Defect of an arbitrary determinant-fixed lift to precision n+1, and the
// linear decision whether corrections (I + p^n E) on the lifts remove it.
inline ObstructionReport obstruction_defect(const TameDeformation& d, const Mat2& Msigma_lift,
                                            const Mat2& Mtau_lift) {
    const i64 p = d.prime.p;
    const int n1 = d.n + 1;
    if (Msigma_lift.precision() != n1 || Mtau_lift.precision() != n1)
        throw std::invalid_argument("lift precision must be n+1");
    if (Msigma_lift.reduce(d.n) != d.Msigma || Mtau_lift.reduce(d.n) != d.Mtau)
        throw std::invalid_argument("lifts do not reduce to the deformation");
    if (Msigma_lift.det() != PAdic(p, n1, d.prime.ell).pow(d.k - 1) || Mtau_lift.det() != PAdic(p, n1, 1))
        throw std::invalid_argument("lift determinants are not fixed to the character values");

    Mat2 D0 = detail_tame::relation_defect(d, Msigma_lift, Mtau_lift);
    FpVec rhs = {fp::norm(-D0.at(1, 1).value(), p), fp::norm(-D0.at(1, 2).value(), p),
                 fp::norm(-D0.at(2, 1).value(), p), fp::norm(-D0.at(2, 2).value(), p)};

    // columns: corrections by each trace-zero basis matrix on sigma then tau
    i64 pn = detail::ipow(p, d.n);
    FpMat L(4, FpVec(6, 0));
    for (int u = 0; u < 6; ++u) {
        Mat2 E = detail_cohom::trace_zero_basis(p, u % 3).zero_lift(n1);
        Mat2 corr = Mat2::identity(p, n1) + PAdic(p, n1, pn) * E;
        Mat2 Ms = u < 3 ? corr * Msigma_lift : Msigma_lift;
        Mat2 Mt = u < 3 ? Mtau_lift : corr * Mtau_lift;
        Mat2 Du = detail_tame::relation_defect(d, Ms, Mt);
        L[0][u] = fp::norm(Du.at(1, 1).value() - D0.at(1, 1).value(), p);
        L[1][u] = fp::norm(Du.at(1, 2).value() - D0.at(1, 2).value(), p);
        L[2][u] = fp::norm(Du.at(2, 1).value() - D0.at(2, 1).value(), p);
        L[3][u] = fp::norm(Du.at(2, 2).value() - D0.at(2, 2).value(), p);
    }
    auto sol = fp::solve(L, rhs, p);
    ObstructionReport rep{D0, sol.has_value(), Msigma_lift, Mtau_lift};
    if (sol) {
        auto apply = [&](const FpVec& e, int off, const Mat2& M) {
            Mat2 E = Mat2::zero(p, n1);
            for (int kk = 0; kk < 3; ++kk)
                E = E + PAdic(p, n1, (*sol)[off + kk]) * detail_cohom::trace_zero_basis(p, kk).zero_lift(n1);
            return (Mat2::identity(p, n1) + PAdic(p, n1, pn) * E) * M;
        };
        rep.Msigma_corrected = apply(*sol, 0, Msigma_lift);
        rep.Mtau_corrected = apply(*sol, 3, Mtau_lift);
    }
    return rep;
}

}  // namespace selmer
