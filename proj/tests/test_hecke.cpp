#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "z12/hecke.hpp"

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

Mat2 random_gl2(std::mt19937 &g, int steps) {
    Mat2 m = Mat2::identity();
    for (int k = 0; k < steps; ++k) {
        CycInt s = small_int(g, 1);
        m = m * ((k % 2) ? Mat2{1, s, 0, 1} : Mat2{1, 0, s, 1});
    }
    return m;
}

// oracle: integral, determinant an associate of nu, primitive, lower left in n
bool in_double_coset(const Mat2 &m, const CycInt &nu, const CycInt &n) {
    auto q = divide(m.det(), nu);
    if (!q || !is_unit(*q)) return false;
    if (!is_unit(gcd(gcd(m.a, m.b), gcd(m.c, m.d)))) return false;
    return divides(n, m.c);
}

// oracle: Gamma0(n) g = Gamma0(n) h iff g h^-1 lies in Gamma0(n), computed over F
bool same_coset(const Mat2 &g, const Mat2 &h, const CycInt &n) {
    Mat2 adj = h.adjugate();
    Mat2 p = g * adj;   // = g h^-1 * det h
    CycInt d = h.det();
    auto a = divide(p.a, d), b = divide(p.b, d), c = divide(p.c, d), e = divide(p.d, d);
    if (!a || !b || !c || !e) return false;
    return is_in_gamma0({*a, *b, *c, *e}, n);
}

const CycInt &level13() {
    static CycInt n = primes().require("p13,1").generator;
    return n;
}

}  // namespace

TEST_CASE("coset representatives") {
    CycInt n = parse_cyc_int("2t^3-3t^2-3t+2");
    for (std::string label : {"p13,3", "p2", "p3", "p5,1"}) {
        const auto &P = primes().require(label);
        auto H = coset_reps(P, n);
        CHECK(H.reps.size() == size_t(P.norm + 1));
        for (size_t i = 0; i < H.reps.size(); ++i) {
            CHECK(in_double_coset(H.reps[i], P.generator, n));
            for (size_t j = 0; j < i; ++j) CHECK_FALSE(same_coset(H.reps[i], H.reps[j], n));
        }
    }
    CHECK(coset_reps(primes().require("p2"), level13()).reps.size() == 5);
    CHECK_THROWS(coset_reps(primes().require("p13,1"), level13()));
}

TEST_CASE("hecke_apply") {
    auto H = coset_reps(primes().require("p2"), level13());
    CHECK(hecke_apply(H, SharblyChain()).empty());
    SharblyChain one;
    one.add({{1, 0}, {0, 1}, {1, 1}}, 1);
    CHECK(hecke_apply(H, one).size() <= 5);
}

TEST_CASE("sizes") {
    auto s = size_of(vor(), {{1, 0}, {0, 1}});
    CHECK(s.n == 1);
    CHECK(s.N == Real(1));
    VertexList u{canonical_vertex({1, 0}), canonical_vertex({1, 2})};
    auto t = size_of(vor(), u);
    CHECK(t.n == 16);
    CHECK(t.N > Real(1));
    std::mt19937 g(4);
    for (int k = 0; k < 20; ++k) {
        Mat2 h = random_gl2(g, 4);
        VertexList w{canonical_vertex(h * u[0]), canonical_vertex(h * u[1])};
        CHECK(norm_size(w) == 16);
    }
    CHECK_THROWS(size_of(vor(), {{1, 0}, {2, 0}}));
}

TEST_CASE("0-sharbly reduction") {
    VertexList e{{1, 0}, {0, 1}};
    auto same = reduce_0_sharbly(vor(), e);
    SharblyChain want;
    want.add(e, 1);
    CHECK(same == want);

    std::mt19937 g(6);
    int done = 0;
    while (done < 15) {
        Vec2 x{small_int(g, 3), small_int(g, 3)}, y{small_int(g, 3), small_int(g, 3)};
        if (x.is_zero() || y.is_zero() || det2(x, y).is_zero()) continue;
        VertexList u{canonical_vertex(x), canonical_vertex(y)};
        SharblyChain fill;
        auto r = reduce_0_sharbly(vor(), u, &fill);
        for (auto &[v, c] : r.terms()) CHECK(norm_size(v) == 1);
        SharblyChain diff = r;
        SharblyChain in;
        in.add(u, 1);
        diff.add(in, -1);
        if (!fill.empty()) diff.add(fill.boundary(), -1);
        CHECK(diff.empty());
        ++done;
    }
}

TEST_CASE("a reduced edge of norm 4 splits into unimodular parts") {
    VertexList u{canonical_vertex({1, 0}), canonical_vertex({1, 2})};
    // determinant 2 (n = 16) and determinant 1 + t^3 (n = 4)
    VertexList w{canonical_vertex({1, 0}), canonical_vertex({1, CycInt(1, 0, 0, 1)})};
    CHECK(norm_size(w) == 4);
    for (auto &e : {u, w}) {
        auto r = reduce_0_sharbly(vor(), e);
        for (auto &[v, c] : r.terms()) CHECK(norm_size(v) == 1);
    }
    std::mt19937 g(12);
    for (int k = 0; k < 30; ++k) {
        Mat2 h = random_gl2(g, 3);
        CycInt d = small_int(g, 1);
        if (norm(d) != 4) continue;
        VertexList e{canonical_vertex(h * Vec2{1, 0}), canonical_vertex(h * Vec2{small_int(g, 1), d})};
        if (norm_size(e) != 4) continue;
        Vec2 x = reducing_point(vor(), e);
        CHECK(norm(det2(e[0], x)) == 1);
        CHECK(norm(det2(x, e[1])) == 1);
    }
}

TEST_CASE("Gamma0 equivalence of edges") {
    CycInt n = parse_cyc_int("2t^3-3t^2-3t+2");
    std::mt19937 g(13);
    for (int k = 0; k < 20; ++k) {
        VertexList e{canonical_vertex({small_int(g, 2), small_int(g, 2)}), canonical_vertex({small_int(g, 2), small_int(g, 2)})};
        if (det2(e[0], e[1]).is_zero()) continue;
        Mat2 gamma = Mat2{1, small_int(g, 1), 0, 1} * Mat2{1, 0, n * small_int(g, 1), 1};
        VertexList f{canonical_vertex(gamma * e[0]), canonical_vertex(gamma * e[1])};
        bool rev = false;
        auto found = gamma0_equivalent(e, f, n, &rev);
        REQUIRE(found);
        CHECK(is_in_gamma0(*found, n));
        CHECK_FALSE(rev);
        VertexList back{f[1], f[0]};
        REQUIRE(gamma0_equivalent(e, back, n, &rev));
        CHECK(rev);
    }
}

TEST_CASE("1-cycle reduction at level p13,1") {
    OrbitComplex C(tables(), level13());
    C.compute_homology();
    REQUIRE(C.h1_rank() == 3);
    auto H = coset_reps(primes().require("p2"), level13());
    for (int k = 0; k < C.h1_rank(); ++k) {
        SharblyChain xi = C.basis_chain(C.h1_basis()[k]);
        // already totally reduced
        CHECK(reduce_1_cycle(vor(), C.faces(), xi, level13()) == xi);
        SharblyChain img = hecke_apply(H, xi);
        ReductionLog log;
        auto r = reduce_1_cycle(vor(), C.faces(), img, level13(), {}, &log);
        for (auto &[u, c] : r.terms()) CHECK(C.faces().locate(u, 1));
        auto y = C.h1_coordinates(C.to_basis(r));
        ReductionOptions rev;
        rev.reverse_order = true;
        auto y2 = C.h1_coordinates(C.to_basis(reduce_1_cycle(vor(), C.faces(), img, level13(), rev)));
        CHECK(y == y2);
        for (int i = 0; i < 3; ++i) CHECK(y[i] == (i == k ? 5 : 0));
    }
}

TEST_CASE("a chain that is not a cycle is rejected") {
    SharblyChain c;
    c.add({{1, 0}, {1, 2}, {0, 1}}, 1);
    CHECK_THROWS(reduce_1_cycle(vor(), *tables(), c, level13()));
}

TEST_CASE("Hecke matrices at level p13,1 are Eisenstein and commute") {
    OrbitComplex C(tables(), level13());
    C.compute_homology();
    std::vector<HeckeCosets> hs;
    std::map<std::string, QMatrix> ms;
    for (std::string label : {"p2", "p3"}) {
        hs.push_back(coset_reps(primes().require(label), level13()));
        ms[label] = hecke_matrix(C, vor(), hs.back());
    }
    CHECK(commute(ms["p2"], ms["p3"]));
    auto es = eigen_decompose(level13().str(), hs, ms);
    CHECK(es.eisenstein_dim == 3);
    REQUIRE(es.classes.size() == 1);
    CHECK(es.classes[0].eigenvalues.at("p3") == 10);
}

TEST_CASE("characteristic polynomials") {
    QMatrix m{{2, 1}, {0, 3}};
    auto p = charpoly(m);
    CHECK(p == std::vector<Rational>{6, -5, 1});
    CHECK(poly_str(p) == "x^2 - 5x + 6");
    CHECK(commute(m, m));
    CHECK_FALSE(commute(m, QMatrix{{0, 1}, {1, 0}}));
}
