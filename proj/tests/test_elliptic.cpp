#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "z12/fixtures.hpp"

using namespace z12;

namespace {
const Fixtures &fx() {
    static Fixtures f = Fixtures::load();
    return f;
}
const PrimeTable &table() {
    static PrimeTable t(fx().primes);
    return t;
}
CurveModel curve(std::array<long, 5> a) {
    CurveModel E;
    for (int i = 0; i < 5; ++i) E.a[i] = CycNum(a[i]);
    return E;
}
ResidueField prime_field(int64_t p) {
    GF k;
    k.p = p;
    return {k, k.from_int(0)};
}
}  // namespace

TEST_CASE("discriminants") {
    CHECK(discriminant(curve({0, 0, 0, 1, 0})) == CycNum(-64));
    CHECK(discriminant(curve({0, 0, 0, 0, 1})) == CycNum(-432));
    CurveModel E = fx().curves.over_F.at("441");
    CycNum u = CycNum::t();
    CycNum u12 = 1;
    for (int i = 0; i < 12; ++i) u12 *= u;
    CHECK(discriminant(scale_model(E, u)) * u12 == discriminant(E));
    CycNum two(2);
    CHECK(discriminant(scale_model(E, two)) * CycNum(4096) == discriminant(E));
}

TEST_CASE("small counts") {
    ReducedCurve c{GF{}, {}};
    c.k.p = 5;
    c.a = {GF::El{0, 0}, {0, 0}, {0, 0}, {1, 0}, {0, 0}};
    CHECK(count_points(c) == 4);
    CHECK(count_points_character(c) == 4);
}

TEST_CASE("worked a_P values") {
    const auto &E441 = *fx().curve_over_F("441");
    CHECK(count_points(E441, table().require("p13,1").residue) == 20);
    CHECK(a_P(E441, table().require("p13,1")) == -6);
    CHECK(a_P(E441, table().require("p5,1")) == -4);
    CHECK(a_P(*fx().curve_over_F("2257"), table().require("p13,4")) == -3);
}

TEST_CASE("Hasse bound, second counter, degree-2 identity") {
    for (auto &[name, E] : fx().curves.over_F) {
        for (int64_t p : {2, 3, 5, 7, 11, 13, 37}) {
            for (auto &P : table().primes_above(p)) {
                if (!has_good_reduction(E, P.residue)) continue;
                ReducedCurve c = reduce_curve(E, P.residue);
                int64_t n = count_points(c);
                int64_t a = P.norm + 1 - n;
                CHECK(double(a * a) <= 4.0 * double(P.norm));
                if (p != 2) CHECK(count_points_character(c) == n);
            }
        }
    }
    // a curve over GF(13) counted again over GF(13^2)
    const auto &E = *fx().curve_over_F("441");
    const auto &P = table().require("p13,2");
    ReducedCurve c = reduce_curve(E, P.residue);
    int64_t a = 14 - count_points(c);
    GF k2;
    k2.p = 13;
    k2.f = 2;
    // w^2 = 2 is irreducible mod 13
    k2.c0 = 11;
    k2.c1 = 0;
    ReducedCurve c2{k2, {}};
    for (int i = 0; i < 5; ++i) c2.a[i] = {c.a[i].a, 0};
    CHECK(count_points(c2) == 169 + 1 - (a * a - 2 * 13));
    CHECK(count_points_character(c2) == count_points(c2));
}

TEST_CASE("a_P does not depend on the generator") {
    const auto &E = *fx().curve_over_F("2041");
    for (const char *lab : {"p13,1", "p37,2", "p61,3"}) {
        PrimeIdealRecord P = table().require(lab);
        int64_t a = a_P(E, P);
        PrimeIdealRecord Q = table().prime_of(P.generator * CycInt(1, 1, 0, 0) * CycInt::zeta_pow(7));
        CHECK(Q.label == P.label);
        CHECK(a_P(E, Q) == a);
    }
}

TEST_CASE("bad primes are starred") {
    std::vector<std::string> violations;
    for (auto &row : fx().rational) {
        const CurveModel *E = fx().curve_over_F(row.label);
        REQUIRE(E);
        for (auto &e : row.values)
            if (!has_good_reduction(*E, table().require(e.prime).residue) && e.value) violations.push_back(row.label + " " + e.prime);
    }
    for (auto &[name, c] : fx().classes)
        for (auto &e : c.eigenvalues)
            if (!has_good_reduction(*fx().curve_over_F(name), table().require(e.prime).residue) && e.value)
                violations.push_back(name + " " + e.prime + " (class table)");
    // small-prime row of 2500a has its two p5 columns exchanged relative to the class table and the level
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "2500a p5,1");
    auto lvl = table().factor_ideal(parse_cyc_int(fx().level("2500a")->generator));
    bool has_p51 = false;
    for (auto &[P, e] : lvl.factors) has_p51 |= P.label == "p5,1";
    CHECK(has_p51);
}

TEST_CASE("residual images") {
    CHECK(residual_image(*fx().curve_over_F("441")).semisimple == ResidualImage::trivial);
    CHECK(residual_image(*fx().curve_over_F("2257")).semisimple == ResidualImage::S3);
    CHECK(residual_image(*fx().curve_over_F("2500a")).semisimple == ResidualImage::S3);
    // y^2 = x^3 - x: full rational 2-torsion
    CHECK(residual_image(curve({0, 0, 0, -1, 0})).raw == ResidualImage::trivial);
    // y^2 = x^3 + x: one root over Q but i is in F
    CHECK(residual_image(curve({0, 0, 0, 1, 0})).raw == ResidualImage::trivial);
    // y^2 = x^3 + 2: roots are cube roots of -2, none in F; disc -108 = -3 * 36 is a square in F
    CHECK(residual_image(curve({0, 0, 0, 0, 2})).raw == ResidualImage::C3);
    // y^2 = x^3 + x + 1: disc -31 not a square
    CHECK(residual_image(curve({0, 0, 0, 1, 1})).raw == ResidualImage::S3);
    // y^2 = x^3 + 2x: one root only (sqrt(-2) not in F)
    CHECK(residual_image(curve({0, 0, 0, 2, 0})).raw == ResidualImage::C2);
}

TEST_CASE("root and square finding in O") {
    CycInt r1(1, 2, -1, 3), r2(-2, 0, 1, 1), r3(5, -1, 0, 0);
    std::array<CycInt, 3> c = {-(r1 * r2 * r3), r1 * r2 + r1 * r3 + r2 * r3, -(r1 + r2 + r3)};
    auto roots = cubic_roots_in_O(c);
    CHECK(roots.size() == 3);
    CHECK(sqrt_in_O(CycInt(-3)).has_value());
    CHECK(sqrt_in_O(CycInt(3)).has_value());
    CHECK(sqrt_in_O(CycInt(-1)).has_value());
    CHECK_FALSE(sqrt_in_O(CycInt(2)).has_value());
    CHECK_FALSE(sqrt_in_O(CycInt(1, 1, 0, 0) * CycInt(7)).has_value());
    CycInt x(3, -1, 4, 2);
    CHECK(*sqrt_in_O(x * x) * *sqrt_in_O(x * x) == x * x);
}

TEST_CASE("base change formula") {
    CHECK(base_change_a(-1, 13, true) == -1);
    CHECK(base_change_a(0, 7, false) == -14);
    CHECK(subfield_residue_degree(BaseField::QSqrt3, 13) == 1);
    CHECK(subfield_residue_degree(BaseField::QSqrt3, 5) == 2);
    CHECK(subfield_residue_degree(BaseField::QSqrt3, 3) == 1);
    CHECK(subfield_residue_degree(BaseField::QSqrtMinus3, 2) == 2);
    CHECK(subfield_residue_degree(BaseField::QSqrtMinus1, 2) == 1);
    const auto &E = *fx().curve_over_subfield("484");
    for (const char *lab : {"p13,1", "p13,2", "p13,3", "p13,4"}) CHECK(base_change_local_data(E, table().require(lab)).a == -1);
}

TEST_CASE("twisted Eisenstein formula") {
    CHECK(twisted_eisenstein(4, -1) == -5);
    CHECK(twisted_eisenstein(13, 1) == 14);
}

TEST_CASE("subfield square roots") {
    for (auto b : {BaseField::QSqrt3, BaseField::QSqrtMinus1, BaseField::QSqrtMinus3}) {
        CycInt s = subfield_sqrt(b);
        CHECK(s * s == CycInt(b == BaseField::QSqrt3 ? 3 : b == BaseField::QSqrtMinus1 ? -1 : -3));
    }
    CHECK(prime_field(7).field.p == 7);
}
