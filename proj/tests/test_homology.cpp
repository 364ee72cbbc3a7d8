#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "z12/homology.hpp"

using namespace z12;

namespace {

const VoronoiData &vor() {
    static VoronoiData v = enumerate_perfect_forms();
    return v;
}

std::shared_ptr<const FaceTables> tables() {
    static auto t = std::make_shared<const FaceTables>(build_face_tables(vor()));
    return t;
}

const PrimeTable &primes() {
    static PrimeTable t(load_prime_fixtures(default_data_dir() + "/primes.json"));
    return t;
}

CycInt small_int(std::mt19937 &g, int r) {
    std::uniform_int_distribution<int> d(-r, r);
    return {d(g), d(g), d(g), d(g)};
}

Mat2 random_gamma0(std::mt19937 &g, const CycInt &n) {
    Mat2 m = Mat2::identity();
    for (int k = 0; k < 4; ++k) {
        Mat2 e = (k % 2) ? Mat2{1, small_int(g, 1), 0, 1} : Mat2{1, 0, n * small_int(g, 1), 1};
        m = m * e;
    }
    return m;
}

}  // namespace

TEST_CASE("sharbly normal form") {
    VertexList v{{1, 0}, {0, 1}};
    CHECK(normalize_sharbly(v) != 0);
    VertexList w{{0, 1}, {1, 0}};
    int s = normalize_sharbly(w);
    CHECK(v == w);
    VertexList x{{1, 0}, {0, 1}};
    CHECK(s == -normalize_sharbly(x));
    VertexList rep{{1, 0}, {1, 0}, {0, 1}};
    CHECK(normalize_sharbly(rep) == 0);
    VertexList line{{1, 0}, {2, 0}};
    CHECK(normalize_sharbly(line) == 0);
    CHECK(permutation_sign({1, 0, 2}) == -1);
    CHECK(permutation_sign({1, 2, 0}) == 1);
}

TEST_CASE("boundary squares to zero on random 2-sharblies") {
    std::mt19937 g(2);
    for (int trial = 0; trial < 50; ++trial) {
        SharblyChain c;
        VertexList v;
        for (int k = 0; k < 4; ++k) v.push_back({small_int(g, 2), small_int(g, 2)});
        bool zero = false;
        for (auto &x : v) zero = zero || x.is_zero();
        if (zero) continue;
        c.add(v, 1);
        if (c.empty()) continue;
        CHECK(c.boundary().boundary().empty());
    }
}

TEST_CASE("projective line sizes") {
    CHECK(ProjectiveLine(primes().require("p13,1").generator).size() == 14);
    CHECK(ProjectiveLine(parse_cyc_int("2t^3-3t^2-3t+2")).size() == 196);
    CHECK(ProjectiveLine(parse_cyc_int("5t^2-1")).size() == 500);
    CHECK(ProjectiveLine(CycInt(1)).size() == 1);
    ProjectiveLine P(parse_cyc_int("2t^3-3t^2-3t+2"));
    for (int i = 0; i < P.size(); i += 13) {
        Mat2 h = P.lift(i);
        CHECK(h.det() == CycInt(1));
        CHECK(P.coset(h) == i);
    }
}

TEST_CASE("orbit tables") {
    auto T = tables();
    CHECK(T->edges.size() == 1);
    CHECK(T->triangles.size() == 4);
    CHECK(T->cells.size() == 13);
    CHECK(T->edges[0].stabilizer.size() == 24);
    VertexList e{{1, 0}, {0, 1}};
    normalize_sharbly(e);
    auto ref = T->locate(e, 0);
    REQUIRE(ref);
    CHECK(ref->orbit == 0);
    VertexList bad{{1, 0}, {1, 2}};
    normalize_sharbly(bad);
    CHECK_FALSE(T->locate(bad, 0));
}

TEST_CASE("d1 d2 = 0") {
    OrbitComplex C(tables(), parse_cyc_int("2t^3-3t^2-3t+2"));
    for (size_t c = 0; c < C.faces().cells.size(); ++c)
        for (int x = 0; x < C.p1().size(); x += 5) {
            SparseVec b = C.d2((int)c, x);
            CHECK(C.boundary1(b).empty());
        }
}

TEST_CASE("H1 ranks") {
    struct Want {
        CycInt level;
        int rank;
    };
    std::vector<Want> cases{{primes().require("p13,1").generator, 3}, {parse_cyc_int("2t^3-3t^2-3t+2"), 8}, {CycInt(1), 1}};
    for (auto &w : cases) {
        OrbitComplex C(tables(), w.level);
        C.compute_homology();
        CHECK(C.h1_rank() == w.rank);
    }
}

TEST_CASE("coordinates of basis cycles and Gamma0 invariance") {
    CycInt n = parse_cyc_int("2t^3-3t^2-3t+2");
    OrbitComplex C(tables(), n);
    C.compute_homology();
    std::mt19937 g(9);
    for (int k = 0; k < C.h1_rank(); ++k) {
        const SparseVec &b = C.h1_basis()[k];
        CHECK(C.boundary1(b).empty());
        SharblyChain honest = C.basis_chain(b);
        auto y = C.h1_coordinates(C.to_basis(honest));
        for (int i = 0; i < C.h1_rank(); ++i) CHECK(y[i] == (i == k ? 1 : 0));
        Mat2 gamma = random_gamma0(g, n);
        REQUIRE(is_in_gamma0(gamma, n));
        CHECK(C.to_basis(honest.transformed(gamma)).e == C.to_basis(honest).e);
    }
    // a boundary has zero coordinates
    SparseVec bd = C.d2(0, 3);
    auto z = C.h1_coordinates(bd);
    for (auto &c : z) CHECK(c == 0);
    // a non-cycle is rejected
    SparseVec one;
    one.add(0, 1);
    if (!C.boundary1(one).empty()) CHECK_THROWS(C.h1_coordinates(one));
}
