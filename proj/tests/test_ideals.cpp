#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "z12/ideals.hpp"

using namespace z12;

namespace {
const PrimeTable &table() {
    static PrimeTable t(load_prime_fixtures(default_data_dir() + "/primes.json"));
    return t;
}
}  // namespace

TEST_CASE("splitting of small rational primes") {
    auto s13 = split_rational_prime(13);
    CHECK(s13.g == 4);
    CHECK(s13.f == 1);
    auto s11 = split_rational_prime(11);
    CHECK(s11.g == 2);
    CHECK(s11.f == 2);
    auto s2 = split_rational_prime(2);
    CHECK(s2.g == 1);
    CHECK(s2.e == 2);
    CHECK(s2.f == 2);
    auto s3 = split_rational_prime(3);
    CHECK(s3.e == 2);
    CHECK(s3.f == 2);
    auto s5 = split_rational_prime(5);
    CHECK(s5.g == 2);
    CHECK(s5.f == 2);
    CHECK_THROWS(split_rational_prime(15));
}

TEST_CASE("efg = 4 for primes up to 400") {
    for (int64_t p = 2; p < 400; ++p) {
        if (!is_prime(p)) continue;
        auto s = split_rational_prime(p);
        CHECK(s.e * s.f * s.g == 4);
        if (p > 3) CHECK(s.f == ((p % 12 == 1) ? 1 : 2));
    }
}

TEST_CASE("prime above 2") {
    auto &ps = table().primes_above(2);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].norm == 4);
    CHECK(ps[0].label == "p2");
    CHECK(norm(ps[0].generator) == 4);
}

TEST_CASE("every fixture generator is a prime of the table") {
    auto fx = load_prime_fixtures(default_data_dir() + "/primes.json");
    CHECK(fx.size() == 115);
    std::set<std::string> labels;
    for (auto &f : fx) {
        auto &r = table().prime_of(f.generator);
        CHECK(r.label == f.label);
        CHECK(associates(r.generator, f.generator));
        labels.insert(f.label);
    }
    CHECK(labels.size() == fx.size());
}

TEST_CASE("generators found without fixtures generate the right primes") {
    PrimeTable bare;
    for (int64_t p : {2, 3, 5, 7, 11, 13, 37, 61, 73}) {
        for (auto &r : bare.primes_above(p)) {
            CHECK(norm(r.generator) == r.norm);
            CHECK(r.residue.field.is_zero(reduce(r.generator, r.residue)));
        }
    }
}

TEST_CASE("factorization types") {
    auto f = table().factor_ideal(parse_cyc_int("5t^2-1"));
    CHECK(f.norm == 441);
    CHECK(f.type == "pq");
    CHECK(table().factor_ideal(CycInt(8)).type == "p^6");
    auto l169 = table().factor_ideal(parse_cyc_int("2t^3-3t^2-3t+2"));
    CHECK(l169.norm == 169);
    CHECK(l169.type == "pq");
    CHECK(table().factor_ideal(CycInt(1, 1, 0, 0)).type == "");
    CHECK(factorization_type({1, 2, 1}) == "p^2qr");
}

TEST_CASE("Gamma0 membership") {
    CycInt n = parse_cyc_int("5t^2-1");
    CHECK(is_in_gamma0(Mat2{1, 0, n, 1}, n));
    CHECK_FALSE(is_in_gamma0(Mat2{1, 0, 1, 1}, n));
    CHECK_FALSE(is_in_gamma0(Mat2{2, 0, 0, 1}, n));
}

TEST_CASE("residue ring") {
    CycInt n = parse_cyc_int("2t^3-3t^2-3t+2");
    ResidueRing R(n);
    CHECK(R.size() == 169);
    std::set<int64_t> seen;
    for (int64_t i = 0; i < R.size(); ++i) {
        CycInt x = R.element(i);
        CHECK(R.index(x) == i);
        CHECK(R.index(x + n * CycInt(3, -1, 2, 0)) == i);
        seen.insert(R.index(x * CycInt::t()));
    }
    CHECK(seen.size() == 169);
    int units = 0;
    for (int64_t i = 0; i < R.size(); ++i) units += R.is_unit(R.element(i));
    CHECK(units == 12 * 12);
}

TEST_CASE("matrix helpers") {
    Mat2 m{1, CycInt::t(), 0, CycInt(1, 1, 0, 0)};
    Mat2 mi = inverse_gl2(m);
    CHECK(m * mi == Mat2::identity());
    CHECK(solve_integral(m, m * Mat2{2, 1, 3, 4}) == Mat2{2, 1, 3, 4});
    CHECK_FALSE(solve_integral(Mat2{2, 0, 0, 1}, Mat2::identity()));
}
