#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <set>

#include "selmer/cohomology.hpp"

using namespace selmer;

namespace {

AdCocycle combo(i64 p, const CocycleSpace& s, i64 u, i64 v, i64 w) {
    FpVec acc(6, 0);
    FpVec coefs = {u, v, w};
    for (int i = 0; i < 3; ++i) {
        FpVec b = s.basis[i].coords();
        for (int e = 0; e < 6; ++e) acc[e] = fp::norm(acc[e] + coefs[i] * b[e], p);
    }
    return AdCocycle::from_coords(p, acc);
}

}  // namespace

TEST_CASE("trivial action: Z1 and B1 dimensions") {
    for (auto [p, ell] : {std::pair<i64, i64>{5, 11}, {7, 29}}) {
        auto spaces = cocycle_space(AdAction::trivial(TrivialPrime(p, ell)));
        CHECK(spaces.z1.dim() == 6);
        CHECK(spaces.b1.dim() == 0);
    }
}

TEST_CASE("trivial action: h-dimensions and Euler identity") {
    for (auto [p, ell] : {std::pair<i64, i64>{5, 11}, {7, 29}}) {
        auto dims = h_dims(AdAction::trivial(TrivialPrime(p, ell)));
        CHECK(dims.h0 == 3);
        CHECK(dims.h1 == 6);
        CHECK(dims.h2 == 3);
        CHECK(dims.h1_nr == 3);
        CHECK(dims.h1_over_nr == 3);
        CHECK(dims.h0 - dims.h1 + dims.h2 == 0);
    }
}

TEST_CASE("quotient dimension is 3 for every trivial prime tested") {
    for (auto [p, ell] : {std::pair<i64, i64>{5, 11}, {5, 31}, {5, 41}, {7, 29}, {7, 43}}) {
        auto dims = h_dims(AdAction::trivial(TrivialPrime(p, ell)));
        CHECK(dims.h1_over_nr == 3);
    }
}

TEST_CASE("non-trivial diagonal test action: invariants drop to the diagonal") {
    // Asigma of order 2, Atau = I: the relation holds for any l; only diagonal
    // trace-zero matrices commute with Asigma.
    TrivialPrime tp(5, 11);
    AdAction act{5, 11, Mat2::from_values(5, 1, 1, 0, 0, -1), Mat2::identity(5, 1)};
    REQUIRE(act.relation_holds());
    auto dims = h_dims(act);
    CHECK(dims.h0 == 1);
    CHECK(dims.h0 - dims.h1 + dims.h2 == 0);
}

TEST_CASE("relation-violating action is rejected") {
    AdAction bad{5, 11, Mat2::from_values(5, 1, 1, 1, 0, 1), Mat2::from_values(5, 1, 1, 0, 1, 1)};
    REQUIRE_FALSE(bad.relation_holds());
    CHECK_THROWS_WITH(cocycle_space(bad), "invalid action");
}

TEST_CASE("n_space: conjugated basis values for each type") {
    TrivialPrime tp(5, 11);
    ShapeParams ram{PAdic(5, 3, 0), PAdic(5, 3, 5)};

    // Type III, conjugated f1: g(sigma) = (0 0; 1 0), g(tau) = 0
    auto n3 = n_space(ConditionType{ConditionTag::III}, ram, tp);
    REQUIRE(n3.dim() == 3);
    CHECK(n3.basis[0].Csigma == Mat2::from_values(5, 1, 0, 0, 1, 0));
    CHECK(n3.basis[0].Ctau == Mat2::zero(5, 1));

    // Type II, conjugated g^ram: sigma-part is the row swap of e21, i.e. e12
    auto n2 = n_space(ConditionType{ConditionTag::II}, ram, tp);
    REQUIRE(n2.dim() == 3);
    CHECK(n2.basis[2].Csigma == Mat2::from_values(5, 1, 0, 1, 0, 0));

    auto n1 = n_space(ConditionType{ConditionTag::I}, ShapeParams{PAdic(5, 3, 25), PAdic(5, 3, 25)}, tp);
    CHECK(n1.dim() == 3);
}

TEST_CASE("n_space basis elements are cocycles; span dimensions") {
    for (auto [p, ell] : {std::pair<i64, i64>{5, 11}, {7, 29}}) {
        TrivialPrime tp(p, ell);
        auto spaces = cocycle_space(AdAction::trivial(tp));
        ShapeParams ram{PAdic(p, 3, 0), PAdic(p, 3, p)};
        ShapeParams nr{PAdic(p, 3, p * p), PAdic(p, 3, p * p)};
        for (auto tag : {ConditionTag::I, ConditionTag::II, ConditionTag::III}) {
            ConditionType type{tag};
            auto space = n_space(type, type.base() == ShapeBase::nr ? nr : ram, tp);
            REQUIRE(space.dim() == 3);
            for (const auto& c : space.basis) CHECK(spaces.z1.contains(c, p));
            CHECK(fp::rank(space.coord_rows(), p) == 3);
            // Q = span{f1, f2} has dimension 2 inside the family
            FpMat q = {space.basis[0].coords(), space.basis[1].coords()};
            CHECK(fp::rank(q, p) == 2);
        }
    }
}

TEST_CASE("intersection of the condition spaces with the unramified subspace") {
    TrivialPrime tp(5, 11);
    // unramified = zero tau-part; count combos of the basis with vanishing
    // tau-coordinates
    auto nr_dim = [&](ConditionTag tag, PAdic y) {
        auto space = n_space(ConditionType{tag}, ShapeParams{PAdic(5, 3, 0), y}, tp);
        FpMat proj;
        for (int e = 3; e < 6; ++e) {
            FpVec row;
            for (const auto& c : space.basis) row.push_back(c.coords()[e]);
            proj.push_back(row);
        }
        return static_cast<int>(fp::kernel(proj, 5).size());
    };
    // unramified-base type: only the second generator carries a tau-part
    CHECK(nr_dim(ConditionTag::I, PAdic(5, 3, 25)) == 2);
    // ramified-base types: the second and third generators both carry
    // tau-parts, leaving a one-dimensional unramified intersection
    CHECK(nr_dim(ConditionTag::II, PAdic(5, 3, 5)) == 1);
    CHECK(nr_dim(ConditionTag::III, PAdic(5, 3, 5)) == 1);
}

TEST_CASE("Type III family: the (-a a; b a) / (c 0; d -c) pattern, all 125 elements") {
    TrivialPrime tp(5, 11);
    const i64 p = 5;
    ShapeParams ram{PAdic(p, 3, 0), PAdic(p, 3, 5)};
    auto space = n_space(ConditionType{ConditionTag::III}, ram, tp);
    // y' = (y/p) / ((l-1)/p) = 1/2 = 3 mod 5
    const i64 yprime = 3;
    std::set<std::array<i64, 4>> images;
    for (i64 u = 0; u < p; ++u)
        for (i64 v = 0; v < p; ++v)
            for (i64 w = 0; w < p; ++w) {
                AdCocycle g = combo(p, space, u, v, w);
                i64 a = g.Csigma.at(2, 2).value();
                i64 b = g.Csigma.at(2, 1).value();
                REQUIRE(g.Csigma.at(1, 1).value() == fp::norm(-a, p));
                REQUIRE(g.Csigma.at(1, 2).value() == a);
                i64 c = g.Ctau.at(1, 1).value();
                i64 d = g.Ctau.at(2, 1).value();
                REQUIRE(g.Ctau.at(1, 2).value() == 0);
                REQUIRE(g.Ctau.at(2, 2).value() == fp::norm(-c, p));
                // closed form of the pattern map
                CHECK(a == w);
                CHECK(b == fp::norm(u - w, p));
                CHECK(c == fp::norm(w * yprime, p));
                CHECK(d == fp::norm(v + 2 * w * yprime, p));
                images.insert({a, b, c, d});
            }
    // injective on 125 triples, image = {(a,b,c,d) : c = a*y'}
    CHECK(images.size() == 125);
    for (i64 a = 0; a < p; ++a)
        for (i64 b = 0; b < p; ++b)
            for (i64 d = 0; d < p; ++d)
                CHECK(images.count({a, b, fp::norm(a * yprime, p), d}) == 1);
}

TEST_CASE("n_space rejects out-of-class ramified parameters") {
    TrivialPrime tp(5, 11);
    CHECK_THROWS_WITH(n_space(ConditionType{ConditionTag::III}, ShapeParams{PAdic(5, 3, 0), PAdic(5, 3, 25)}, tp),
                      "shape parameter out of class");
}

TEST_CASE("shape obstruction check") {
    // e12: needs a = 1 (top-right) and a = 0 (diagonal) at once
    CHECK(shape_obstruction_check(AdCocycle{Mat2::from_values(5, 1, 0, 1, 0, 0), Mat2::zero(5, 1)}));
    // (-1 1; 7 1): a = 1, b = 7 fits
    CHECK_FALSE(shape_obstruction_check(AdCocycle{Mat2::from_values(5, 1, -1, 1, 7, 1), Mat2::zero(5, 1)}));
    // zero: a = b = 0 fits
    CHECK_FALSE(shape_obstruction_check(AdCocycle{Mat2::zero(5, 1), Mat2::zero(5, 1)}));
}
