#pragma once

// Exact arithmetic in Z/p^n with explicit precision tracking, plus the 2x2
// matrix algebra and Smith normal form used throughout the toolkit.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace selmer {

using i64 = std::int64_t;

namespace detail {

inline i64 ipow(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) {
        if (r > (std::int64_t{1} << 62) / b) throw std::overflow_error("p^n overflow");
        r *= b;
    }
    return r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>((static_cast<__int128>(a) * b) % m);
}

// extended gcd based inverse mod m; m need not be prime but gcd(a,m)=1
inline i64 invmod(i64 a, i64 m) {
    i64 t = 0, nt = 1, r = m, nr = a % m;
    if (nr < 0) nr += m;
    while (nr != 0) {
        i64 q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::domain_error("not invertible");
    return t < 0 ? t + m : t;
}

}  // namespace detail

// An element of Z/p^n, canonical representative in [0, p^n).
// Arithmetic between two values requires equal p; the result carries the
// minimum of the operand precisions.
class PAdic {
public:
    PAdic() : p_(0), n_(0), v_(0) {}
    PAdic(i64 p, int n, i64 value) : p_(p), n_(n) {
        if (p < 2 || n < 1) throw std::invalid_argument("PAdic: bad (p, n)");
        i64 m = modulus();
        v_ = value % m;
        if (v_ < 0) v_ += m;
    }

    i64 p() const { return p_; }
    int precision() const { return n_; }
    i64 value() const { return v_; }
    i64 modulus() const { return detail::ipow(p_, n_); }

    // p-adic valuation, capped at n (v == n encodes "at least n", i.e. 0).
    int valuation() const {
        if (v_ == 0) return n_;
        int k = 0;
        i64 x = v_;
        while (x % p_ == 0) { x /= p_; ++k; }
        return k;
    }

    bool is_zero() const { return v_ == 0; }
    bool is_unit() const { return v_ % p_ != 0; }

    PAdic reduce(int m) const {
        if (m > n_) throw std::invalid_argument("reduce: cannot raise precision");
        return PAdic(p_, m, v_ % detail::ipow(p_, m));
    }

    // Lift the canonical representative to a higher precision (appends zero
    // digits; chooses one of the p^{m-n} possible lifts deterministically).
    PAdic zero_lift(int m) const {
        if (m < n_) throw std::invalid_argument("zero_lift: lower precision");
        return PAdic(p_, m, v_);
    }

    PAdic operator-() const { return PAdic(p_, n_, -v_); }

    friend PAdic operator+(const PAdic& a, const PAdic& b) {
        auto [p, n] = common(a, b);
        i64 m = detail::ipow(p, n);
        return PAdic(p, n, (a.v_ % m + b.v_ % m) % m);
    }
    friend PAdic operator-(const PAdic& a, const PAdic& b) { return a + (-b); }
    friend PAdic operator*(const PAdic& a, const PAdic& b) {
        auto [p, n] = common(a, b);
        i64 m = detail::ipow(p, n);
        return PAdic(p, n, detail::mulmod(a.v_ % m, b.v_ % m, m));
    }
    friend bool operator==(const PAdic& a, const PAdic& b) {
        auto [p, n] = common(a, b);
        i64 m = detail::ipow(p, n);
        return a.v_ % m == b.v_ % m;
    }
    friend bool operator!=(const PAdic& a, const PAdic& b) { return !(a == b); }

    PAdic inverse() const {
        if (!is_unit()) throw std::domain_error("not a unit");
        return PAdic(p_, n_, detail::invmod(v_, modulus()));
    }

    // Division by p: partial, loses one digit of precision.
    PAdic div_p() const {
        if (n_ < 2) throw std::domain_error("div_p: precision exhausted");
        if (v_ % p_ != 0) throw std::domain_error("div_p: valuation zero");
        return PAdic(p_, n_ - 1, v_ / p_);
    }

    PAdic mul_p() const { return PAdic(p_, n_, detail::mulmod(v_ % modulus(), p_, modulus())); }

    PAdic pow(i64 e) const {
        PAdic r(p_, n_, 1), b = *this;
        for (; e > 0; e >>= 1) {
            if (e & 1) r = r * b;
            b = b * b;
        }
        return r;
    }

private:
    static std::pair<i64, int> common(const PAdic& a, const PAdic& b) {
        if (a.p_ != b.p_) throw std::invalid_argument("PAdic: mixed primes");
        return {a.p_, a.n_ < b.n_ ? a.n_ : b.n_};
    }

    i64 p_;
    int n_;
    i64 v_;
};

// Teichmuller lift: the unique (p-1)-st root of unity congruent to u mod p,
// obtained by iterating x -> x^p to stabilization.
inline PAdic teichmuller(const PAdic& u) {
    if (!u.is_unit()) throw std::domain_error("not a unit");
    PAdic x = u;
    for (int i = 0; i < u.precision() + 1; ++i) {
        PAdic next = x.pow(u.p());
        if (next == x) break;
        x = next;
    }
    return x;
}

// Square root of an element congruent to 1 mod p, on the branch s = 1 mod p.
inline PAdic hensel_sqrt_one(const PAdic& x) {
    if ((x.value() - 1) % x.p() != 0) throw std::domain_error("wrong branch precondition");
    PAdic s(x.p(), x.precision(), 1);
    PAdic half = PAdic(x.p(), x.precision(), 2).inverse();
    for (int i = 0; i < x.precision() + 1; ++i) {
        PAdic next = half * (s + x * s.inverse());
        if (next == s) break;
        s = next;
    }
    return s;
}

// 2x2 matrix over Z/p^n. Entries share (p, n).
class Mat2 {
public:
    Mat2() = default;
    Mat2(PAdic a, PAdic b, PAdic c, PAdic d) : e_{std::move(a), std::move(b), std::move(c), std::move(d)} {}

    static Mat2 from_values(i64 p, int n, i64 a, i64 b, i64 c, i64 d) {
        return Mat2(PAdic(p, n, a), PAdic(p, n, b), PAdic(p, n, c), PAdic(p, n, d));
    }
    static Mat2 identity(i64 p, int n) { return from_values(p, n, 1, 0, 0, 1); }
    static Mat2 zero(i64 p, int n) { return from_values(p, n, 0, 0, 0, 0); }

    // 1-based (row, col) as in the usual matrix notation.
    const PAdic& at(int r, int c) const { return e_[(r - 1) * 2 + (c - 1)]; }
    PAdic& at(int r, int c) { return e_[(r - 1) * 2 + (c - 1)]; }

    i64 p() const { return e_[0].p(); }
    int precision() const { return e_[0].precision(); }

    PAdic det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
    PAdic trace() const { return e_[0] + e_[3]; }
    bool invertible() const { return det().is_unit(); }

    Mat2 inverse() const {
        PAdic di = det().inverse();
        return Mat2(di * e_[3], di * (-e_[1]), di * (-e_[2]), di * e_[0]);
    }

    Mat2 reduce(int m) const {
        return Mat2(e_[0].reduce(m), e_[1].reduce(m), e_[2].reduce(m), e_[3].reduce(m));
    }
    Mat2 zero_lift(int m) const {
        return Mat2(e_[0].zero_lift(m), e_[1].zero_lift(m), e_[2].zero_lift(m), e_[3].zero_lift(m));
    }

    // kernel-of-reduction predicate: M = Id mod p.
    bool is_identity_mod_p() const {
        Mat2 r = reduce(1);
        return r == identity(p(), 1);
    }

    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return Mat2(a.e_[0] + b.e_[0], a.e_[1] + b.e_[1], a.e_[2] + b.e_[2], a.e_[3] + b.e_[3]);
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return Mat2(a.e_[0] - b.e_[0], a.e_[1] - b.e_[1], a.e_[2] - b.e_[2], a.e_[3] - b.e_[3]);
    }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return Mat2(a.e_[0] * b.e_[0] + a.e_[1] * b.e_[2], a.e_[0] * b.e_[1] + a.e_[1] * b.e_[3],
                    a.e_[2] * b.e_[0] + a.e_[3] * b.e_[2], a.e_[2] * b.e_[1] + a.e_[3] * b.e_[3]);
    }
    friend Mat2 operator*(const PAdic& s, const Mat2& m) {
        return Mat2(s * m.e_[0], s * m.e_[1], s * m.e_[2], s * m.e_[3]);
    }
    friend bool operator==(const Mat2& a, const Mat2& b) {
        return a.e_[0] == b.e_[0] && a.e_[1] == b.e_[1] && a.e_[2] == b.e_[2] && a.e_[3] == b.e_[3];
    }
    friend bool operator!=(const Mat2& a, const Mat2& b) { return !(a == b); }

private:
    PAdic e_[4];
};

inline Mat2 mat_pow(const Mat2& m, i64 e) {
    Mat2 r = Mat2::identity(m.p(), m.precision()), b = m;
    for (; e > 0; e >>= 1) {
        if (e & 1) r = r * b;
        b = b * b;
    }
    return r;
}

// U * M * V = diag(p^a1, p^a2) with a1 <= a2, U and V invertible.
// Exponent n encodes "at least n" (the diagonal entry is 0 mod p^n).
struct SnfDecomposition {
    Mat2 U, V;
    int a1, a2;
};

inline SnfDecomposition snf2(const Mat2& m) {
    const i64 p = m.p();
    const int n = m.precision();
    Mat2 U = Mat2::identity(p, n), V = Mat2::identity(p, n), A = m;

    auto swap_rows = [&] {
        for (int c = 1; c <= 2; ++c) std::swap(A.at(1, c), A.at(2, c));
        for (int c = 1; c <= 2; ++c) std::swap(U.at(1, c), U.at(2, c));
    };
    auto swap_cols = [&] {
        for (int r = 1; r <= 2; ++r) std::swap(A.at(r, 1), A.at(r, 2));
        for (int r = 1; r <= 2; ++r) std::swap(V.at(r, 1), V.at(r, 2));
    };

    // move a minimal-valuation entry to (1,1)
    int best = A.at(1, 1).valuation(), br = 1, bc = 1;
    for (int r = 1; r <= 2; ++r)
        for (int c = 1; c <= 2; ++c)
            if (A.at(r, c).valuation() < best) { best = A.at(r, c).valuation(); br = r; bc = c; }
    if (br == 2) swap_rows();
    if (bc == 2) swap_cols();

    int a1 = A.at(1, 1).valuation();
    if (a1 >= n) return {U, V, n, n};  // zero matrix

    // normalize pivot to p^a1 by a unit row scaling
    {
        PAdic unit_part(p, n, A.at(1, 1).value() / detail::ipow(p, a1));
        PAdic ui = unit_part.inverse();
        for (int c = 1; c <= 2; ++c) A.at(1, c) = ui * A.at(1, c);
        for (int c = 1; c <= 2; ++c) U.at(1, c) = ui * U.at(1, c);
    }
    // clear the rest of row 1 and column 1; quotients are integral since the
    // pivot has minimal valuation
    {
        PAdic piv = A.at(1, 1);
        i64 pa = detail::ipow(p, a1);
        i64 q21 = A.at(2, 1).value() / pa;  // pivot is exactly p^a1
        PAdic f(p, n, q21);
        for (int c = 1; c <= 2; ++c) A.at(2, c) = A.at(2, c) - f * A.at(1, c);
        for (int c = 1; c <= 2; ++c) U.at(2, c) = U.at(2, c) - f * U.at(1, c);
        i64 q12 = A.at(1, 2).value() / pa;
        PAdic g(p, n, q12);
        for (int r = 1; r <= 2; ++r) A.at(r, 2) = A.at(r, 2) - g * A.at(r, 1);
        for (int r = 1; r <= 2; ++r) V.at(r, 2) = V.at(r, 2) - g * V.at(r, 1);
    }
    int a2 = A.at(2, 2).valuation();
    if (a2 < n) {
        PAdic unit_part(p, n, A.at(2, 2).value() / detail::ipow(p, a2));
        PAdic ui = unit_part.inverse();
        for (int c = 1; c <= 2; ++c) A.at(2, c) = ui * A.at(2, c);
        for (int c = 1; c <= 2; ++c) U.at(2, c) = ui * U.at(2, c);
    }
    return {U, V, a1, a2 > n ? n : a2};
}

}  // namespace selmer
