#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "selmer/iwasawa.hpp"

using namespace selmer;

namespace {

// independent oracle: mu = min coefficient valuation, lambda = least index
// carrying a unit after removing the content
std::pair<int, int> valuation_oracle(const LambdaSeries& f) {
    int mu = f.N;
    for (i64 c : f.coeffs)
        if (c != 0) mu = std::min(mu, zpn::val(c, f.p, f.N));
    i64 pmu = detail::ipow(f.p, mu);
    int lambda = -1;
    for (int i = 0; i <= f.D; ++i)
        if ((f.coeffs[i] / pmu) % f.p != 0) { lambda = i; break; }
    return {mu, lambda};
}

bool remultiplies(const LambdaSeries& f, const WeierstrassResult& w) {
    LambdaSeries prod = w.unit * w.P.as_series(f.p, w.unit.N, f.D);
    i64 pmu = detail::ipow(f.p, w.mu);
    for (int i = 0; i <= f.D; ++i)
        if (fp::norm(prod.coeffs[i] * pmu, f.modulus()) != f.coeffs[i]) return false;
    return true;
}

DistinguishedPoly random_distinguished(std::mt19937_64& rng, i64 p, int max_deg) {
    DistinguishedPoly f;
    f.degree = 1 + static_cast<int>(rng() % max_deg);
    for (int i = 0; i < f.degree; ++i) f.coeffs.push_back(p * static_cast<i64>(rng() % p));
    f.coeffs.push_back(1);
    return f;
}

}  // namespace

TEST_CASE("weierstrass preparation: golden decompositions") {
    {
        LambdaSeries f(5, 4, 8, {5, 1});  // T + p
        auto w = weierstrass_prepare(f);
        CHECK(w.mu == 0);
        CHECK(w.P.degree == 1);
        CHECK(w.P.coeffs == std::vector<i64>{5, 1});
        CHECK(w.unit.coeffs[0] == 1);
        CHECK(remultiplies(f, w));
    }
    {
        LambdaSeries f(5, 4, 8, {5, 5});  // p(1 + T)
        auto w = weierstrass_prepare(f);
        CHECK(w.mu == 1);
        CHECK(w.P.degree == 0);
        CHECK(w.P.coeffs == std::vector<i64>{1});
        CHECK(w.unit.coeffs[0] == 1);
        CHECK(w.unit.coeffs[1] == 1);
        CHECK(remultiplies(f, w));
    }
    {
        // pT^2 + p(1+p)T + p^2 = p * (1+T) * (T+p): content 1, then the unique
        // unit/distinguished split has P = T + p
        LambdaSeries f(5, 4, 8, {25, 30, 5});
        auto w = weierstrass_prepare(f);
        CHECK(w.mu == 1);
        CHECK(w.P.degree == 1);
        CHECK(w.P.coeffs == std::vector<i64>{5, 1});
        CHECK(w.unit.coeffs[0] == 1);
        CHECK(w.unit.coeffs[1] == 1);
        CHECK(remultiplies(f, w));
    }
    CHECK_THROWS_WITH(weierstrass_prepare(LambdaSeries(5, 4, 8)), "zero series");
}

TEST_CASE("weierstrass preparation: random round trips and determinism") {
    std::mt19937_64 rng(51);
    for (i64 p : {5, 7}) {
        for (int trial = 0; trial < 100; ++trial) {
            int N = 2 + static_cast<int>(rng() % 5);
            int D = 4 + static_cast<int>(rng() % 9);
            i64 mod = detail::ipow(p, N);
            LambdaSeries f(p, N, D);
            bool nonzero = false;
            for (auto& c : f.coeffs) { c = static_cast<i64>(rng() % mod); nonzero |= (c != 0); }
            if (!nonzero) f.coeffs[0] = 1;
            auto [mu, lambda] = valuation_oracle(f);
            if (lambda < 0) continue;  // all residual coefficients vanish at this N
            auto w = weierstrass_prepare(f);
            CHECK(w.mu == mu);
            CHECK(w.P.degree == lambda);
            CHECK(remultiplies(f, w));
            // distinguished: monic, lower coefficients in (p)
            CHECK(w.P.coeffs.back() == 1);
            for (int i = 0; i < w.P.degree; ++i) CHECK(w.P.coeffs[i] % p == 0);
            auto w2 = weierstrass_prepare(f);
            CHECK(w2.mu == w.mu);
            CHECK(w2.P.coeffs == w.P.coeffs);
            CHECK(w2.unit == w.unit);
        }
    }
}

TEST_CASE("unit multiplication does not move (mu, lambda)") {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 50; ++trial) {
        int N = 4, D = 10;
        auto f = random_distinguished(rng, 5, 4);
        LambdaSeries u(5, N, D);
        u.coeffs[0] = 1 + 5 * static_cast<i64>(rng() % 5);
        for (int i = 1; i <= D; ++i) u.coeffs[i] = static_cast<i64>(rng() % 625);
        int mu_extra = static_cast<int>(rng() % 2);
        LambdaSeries g = u * f.as_series(5, N, D);
        for (auto& c : g.coeffs) c = fp::norm(c * detail::ipow(5, mu_extra), g.modulus());
        auto w = weierstrass_prepare(g);
        CHECK(w.mu == mu_extra);
        CHECK(w.P.degree == f.degree);
    }
}

TEST_CASE("invariants of elementary modules") {
    DistinguishedPoly f{3, {5, 5, 0, 1}};  // T^3 + pT + p
    ElementaryModule m1{0, {2}, {f}};
    auto i1 = invariants(m1);
    CHECK(i1.mu == 2);
    CHECK(i1.lambda == 3);
    CHECK(i1.g == 2);

    auto i0 = invariants(ElementaryModule{});
    CHECK(i0.mu == 0);
    CHECK(i0.lambda == 0);
    CHECK(i0.g == 0);

    DistinguishedPoly t{1, {0, 1}};
    auto i2 = invariants(ElementaryModule{1, {1, 1}, {t}});
    CHECK(i2.mu == 2);
    CHECK(i2.lambda == 1);
    CHECK(i2.g == 4);
}

TEST_CASE("mu and lambda are additive over direct sums; g too") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        auto rand_mod = [&]() {
            ElementaryModule m;
            m.r = static_cast<int>(rng() % 2);
            int s = static_cast<int>(rng() % 3);
            for (int i = 0; i < s; ++i) m.mu_list.push_back(1 + static_cast<int>(rng() % 3));
            int t = static_cast<int>(rng() % 3);
            for (int i = 0; i < t; ++i) m.poly_list.push_back(random_distinguished(rng, 5, 3));
            return m;
        };
        ElementaryModule a = rand_mod(), b = rand_mod();
        ElementaryModule sum = a;
        sum.r += b.r;
        sum.mu_list.insert(sum.mu_list.end(), b.mu_list.begin(), b.mu_list.end());
        sum.poly_list.insert(sum.poly_list.end(), b.poly_list.begin(), b.poly_list.end());
        auto ia = invariants(a), ib = invariants(b), is = invariants(sum);
        CHECK(is.mu == ia.mu + ib.mu);
        CHECK(is.lambda == ia.lambda + ib.lambda);
        CHECK(is.g == ia.g + ib.g);
    }
}

TEST_CASE("g via Nakayama on presentations") {
    const i64 p = 5;
    // Lambda^2 / (p^2 e1, (T^3+pT+p) e2)
    DistinguishedPoly f{3, {5, 5, 0, 1}};
    ElementaryModule m{0, {2}, {f}};
    CHECK(g_from_presentation(canonical_presentation(m, p, 4, 8)) == 2);
    CHECK(g_from_presentation(canonical_presentation(m, p, 4, 8)) == invariants(m).g);

    // Lambda / (1)
    FinitePresentation unit_rel{1, {{LambdaSeries(p, 4, 8, {1})}}};
    CHECK(g_from_presentation(unit_rel) == 0);

    // Lambda^2 / single column (T, p)
    FinitePresentation tp_col{2, {{LambdaSeries(p, 4, 8, {0, 1}), LambdaSeries(p, 4, 8, {5})}}};
    CHECK(g_from_presentation(tp_col) == 2);
}

TEST_CASE("Nakayama consistency on random elementary modules") {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 50; ++trial) {
        ElementaryModule m;
        m.r = static_cast<int>(rng() % 2);
        for (int i = 0, s = static_cast<int>(rng() % 3); i < s; ++i)
            m.mu_list.push_back(1 + static_cast<int>(rng() % 3));
        for (int i = 0, t = static_cast<int>(rng() % 3); i < t; ++i)
            m.poly_list.push_back(random_distinguished(rng, 5, 4));
        CHECK(g_from_presentation(canonical_presentation(m, 5, 4, 8)) == invariants(m).g);
    }
}

TEST_CASE("mu-zero equivalences on the three reference modules") {
    const i64 p = 5;
    DistinguishedPoly f{3, {5, 5, 0, 1}};
    auto r1 = mu_zero_equivalences(ElementaryModule{0, {}, {f}}, 4, 8, p);
    CHECK(r1.elementary_mu_zero);
    CHECK(r1.zp_finitely_generated);
    CHECK(r1.p_quotient_finite);
    CHECK(r1.mpm_dim == 3);
    CHECK(r1.equivalent);

    auto r2 = mu_zero_equivalences(ElementaryModule{0, {1}, {}}, 4, 8, p);
    CHECK_FALSE(r2.elementary_mu_zero);
    CHECK_FALSE(r2.zp_finitely_generated);
    CHECK_FALSE(r2.p_quotient_finite);
    CHECK(r2.equivalent);

    auto r3 = mu_zero_equivalences(ElementaryModule{1, {}, {}}, 4, 8, p);
    CHECK_FALSE(r3.elementary_mu_zero);
    CHECK_FALSE(r3.zp_finitely_generated);
    CHECK_FALSE(r3.p_quotient_finite);
    CHECK(r3.equivalent);

    DistinguishedPoly big{7, {5, 0, 0, 0, 0, 0, 0, 1}};
    CHECK_THROWS_WITH(mu_zero_equivalences(ElementaryModule{0, {}, {big}}, 4, 8, p), "raise level");
}

TEST_CASE("matsuno: reference pairs") {
    const i64 p = 5;
    auto lam = [&](std::vector<i64> c) { return LambdaSeries(p, 6, 12, std::move(c)); };
    {
        // X = Lambda/(T), Y = pX: both sides are Z_p
        FinitePresentation X{1, {{lam({0, 1})}}};
        SubmodulePair pair{X, {{lam({p})}}};
        auto r = matsuno_check(pair, p, 4, 8);
        CHECK(r.gX == 1);
        CHECK(r.gY == 1);
        CHECK(r.holds);
    }
    {
        // X = Lambda/(T) + Lambda/(T), Y = <(p,0),(0,p)>
        FinitePresentation X{2, {{lam({0, 1}), lam({})}, {lam({}), lam({0, 1})}}};
        SubmodulePair pair{X, {{lam({p}), lam({})}, {lam({}), lam({p})}}};
        auto r = matsuno_check(pair, p, 4, 8);
        CHECK(r.gX == 2);
        CHECK(r.gY == 2);
        CHECK(r.holds);
    }
    {
        // degree-2 distinguished factor with an enlarged Y
        FinitePresentation X{1, {{lam({5, 5, 1})}}};
        SubmodulePair pair{X, {{lam({p})}, {lam({0, 1})}}};
        auto r = matsuno_check(pair, p, 4, 8);
        CHECK(r.holds);
        CHECK(2 * r.gX >= r.gY);
    }
    {
        // X = Lambda/(T) with Y = TX = 0: X/Y is Z_p, not exponent p
        FinitePresentation X{1, {{lam({0, 1})}}};
        SubmodulePair pair{X, {{lam({0, 1})}}};
        CHECK_THROWS_WITH(matsuno_check(pair, p, 4, 8), "pair invalid");
    }
}
