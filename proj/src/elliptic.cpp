#include "z12/elliptic.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <set>

#include "json.hpp"

namespace z12 {

std::string base_field_name(BaseField b) {
    switch (b) {
    case BaseField::F: return "F";
    case BaseField::QSqrt3: return "Q(sqrt3)";
    case BaseField::QSqrtMinus1: return "Q(sqrt-1)";
    case BaseField::QSqrtMinus3: return "Q(sqrt-3)";
    }
    return "?";
}

BaseField parse_base_field(const std::string &s) {
    if (s == "F") return BaseField::F;
    if (s == "Q(sqrt3)") return BaseField::QSqrt3;
    if (s == "Q(sqrt-1)") return BaseField::QSqrtMinus1;
    if (s == "Q(sqrt-3)") return BaseField::QSqrtMinus3;
    throw std::invalid_argument("unknown base field: " + s);
}

int subfield_discriminant(BaseField b) {
    switch (b) {
    case BaseField::QSqrt3: return 12;
    case BaseField::QSqrtMinus1: return -4;
    case BaseField::QSqrtMinus3: return -3;
    default: return 0;
    }
}

CycInt subfield_sqrt(BaseField b) {
    switch (b) {
    case BaseField::QSqrt3: return -CycInt::sqrt3();
    case BaseField::QSqrtMinus1: return CycInt(0, 0, 0, -1);
    case BaseField::QSqrtMinus3: return CycInt(-1, 0, 2, 0);
    default: throw std::invalid_argument("F has no distinguished square root");
    }
}

std::array<CycNum, 4> CurveModel::b_invariants() const {
    const auto &[a1, a2, a3, a4, a6] = a;
    CycNum b2 = a1 * a1 + CycNum(4) * a2;
    CycNum b4 = CycNum(2) * a4 + a1 * a3;
    CycNum b6 = a3 * a3 + CycNum(4) * a6;
    CycNum b8 = a1 * a1 * a6 + CycNum(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    return {b2, b4, b6, b8};
}

CycNum discriminant(const CurveModel &E) {
    auto [b2, b4, b6, b8] = E.b_invariants();
    return -b2 * b2 * b8 - CycNum(8) * b4 * b4 * b4 - CycNum(27) * b6 * b6 + CycNum(9) * b2 * b4 * b6;
}

CurveModel other_embedding(const CurveModel &E) {
    CurveModel out = E;
    for (auto &x : out.a) {
        x.c[1] = -x.c[1];
        x.c[3] = -x.c[3];
    }
    return out;
}

CurveModel scale_model(const CurveModel &E, const CycNum &u) {
    CurveModel out = E;
    static const int w[5] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
        CycNum p = 1;
        for (int k = 0; k < w[i]; ++k) p *= u;
        out.a[i] = E.a[i] / p;
    }
    return out;
}

bool has_good_reduction(const CurveModel &E, const ResidueField &rf) {
    return !rf.field.is_zero(reduce(discriminant(E), rf, rf.field.p));
}

ReducedCurve reduce_curve(const CurveModel &E, const ResidueField &rf) {
    if (!has_good_reduction(E, rf)) throw BadReduction("bad reduction for " + E.label);
    ReducedCurve c{rf.field, {}};
    for (int i = 0; i < 5; ++i) c.a[i] = reduce(E.a[i], rf, rf.field.p);
    return c;
}

ReducedCurve restrict_to_prime_field(const ReducedCurve &c) {
    ReducedCurve out;
    out.k.p = c.k.p;
    out.k.f = 1;
    for (int i = 0; i < 5; ++i) {
        if (c.a[i].b != 0) throw std::domain_error("coefficient outside the prime field");
        out.a[i] = {c.a[i].a, 0};
    }
    return out;
}

int64_t count_points(const ReducedCurve &c) {
    const GF &k = c.k;
    const auto &[a1, a2, a3, a4, a6] = c.a;
    int64_t q = k.q(), n = 1;
    for (int64_t i = 0; i < q; ++i) {
        GF::El x = k.element(i);
        GF::El rhs = k.add(k.mul(k.add(k.mul(k.add(x, a2), x), a4), x), a6);
        GF::El lin = k.add(k.mul(a1, x), a3);
        for (int64_t j = 0; j < q; ++j) {
            GF::El y = k.element(j);
            if (k.sub(k.mul(y, k.add(y, lin)), rhs) == k.zero()) ++n;
        }
    }
    return n;
}

int64_t count_points_character(const ReducedCurve &c) {
    const GF &k = c.k;
    if (k.p == 2) throw std::domain_error("character sum counter needs odd characteristic");
    const auto &[a1, a2, a3, a4, a6] = c.a;
    int64_t n = 1;
    GF::El four = k.from_int(4);
    for (int64_t i = 0; i < k.q(); ++i) {
        GF::El x = k.element(i);
        GF::El rhs = k.add(k.mul(k.add(k.mul(k.add(x, a2), x), a4), x), a6);
        GF::El lin = k.add(k.mul(a1, x), a3);
        n += 1 + k.quadratic_character(k.add(k.mul(lin, lin), k.mul(four, rhs)));
    }
    return n;
}

int64_t count_points(const CurveModel &E, const ResidueField &rf) { return count_points(reduce_curve(E, rf)); }

int64_t a_P(const CurveModel &E, const PrimeIdealRecord &P) {
    return P.norm + 1 - count_points(E, P.residue);
}

LocalCurveData local_data(const CurveModel &E, const PrimeIdealRecord &P) {
    LocalCurveData d;
    d.prime = P.label;
    d.norm = P.norm;
    d.good = has_good_reduction(E, P.residue);
    if (d.good) {
        d.count = count_points(E, P.residue);
        d.a = P.norm + 1 - d.count;
    }
    return d;
}

int subfield_residue_degree(BaseField b, int64_t p) {
    int D = subfield_discriminant(b);
    if (D == 0) throw std::invalid_argument("not a subfield");
    if (D % p == 0) return 1;
    if (p == 2) {
        int r = ((D % 8) + 8) % 8;
        return (r == 1) ? 1 : 2;
    }
    GF k;
    k.p = p;
    return k.quadratic_character(k.from_int(D)) == 1 ? 1 : 2;
}

LocalCurveData base_change_local_data(const CurveModel &E, const PrimeIdealRecord &P) {
    LocalCurveData d;
    d.prime = P.label;
    d.good = has_good_reduction(E, P.residue);
    if (!d.good) return d;
    int fq = subfield_residue_degree(E.base, P.p);
    ReducedCurve c = reduce_curve(E, P.residue);
    if (fq < P.f) c = restrict_to_prime_field(c);
    int64_t qn = c.k.q();
    d.norm = qn;
    d.count = count_points(c);
    d.a = base_change_a(qn + 1 - d.count, qn, fq == P.f);
    return d;
}

int64_t base_change_a(int64_t aq, int64_t q_norm, bool splits) { return splits ? aq : aq * aq - 2 * q_norm; }

int64_t twisted_eisenstein(int64_t norm, int chi) { return chi * (norm + 1); }

std::string residual_image_name(ResidualImage r) {
    switch (r) {
    case ResidualImage::trivial: return "trivial";
    case ResidualImage::C2: return "C2";
    case ResidualImage::C3: return "C3";
    case ResidualImage::S3: return "S3";
    }
    return "?";
}

namespace {

using cld = std::complex<long double>;

cld embed_ld(const CycInt &x, Embedding v) {
    const long double pi = 3.141592653589793238462643383279502884L;
    cld z = std::polar(1.0L, (v == Embedding::v1 ? 1 : 5) * pi / 6);
    cld acc = 0, pw = 1;
    for (int i = 0; i < 4; ++i) {
        acc += (long double)x.c[i] * pw;
        pw *= z;
    }
    return acc;
}

// Durand-Kerner for a monic cubic
std::array<cld, 3> complex_cubic_roots(const std::array<cld, 3> &c) {
    auto p = [&](cld x) { return ((x + c[2]) * x + c[1]) * x + c[0]; };
    long double r = 1;
    for (auto &v : c) r = std::max(r, 1 + std::abs(v));
    std::array<cld, 3> z = {cld(0.4L, 0.9L), cld(0.4L, 0.9L) * cld(0.4L, 0.9L), cld(0.4L, 0.9L) * cld(0.4L, 0.9L) * cld(0.4L, 0.9L)};
    for (auto &v : z) v *= r;
    for (int it = 0; it < 2000; ++it) {
        long double delta = 0;
        for (int i = 0; i < 3; ++i) {
            cld den = 1;
            for (int j = 0; j < 3; ++j)
                if (j != i) den *= z[i] - z[j];
            if (std::abs(den) == 0) den = 1e-30L;
            cld step = p(z[i]) / den;
            z[i] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-17L * r) break;
    }
    return z;
}

// solve for integer coordinates with prescribed images under v1 and v2
std::optional<CycInt> from_embeddings(cld z1, cld z2) {
    long double m[4][5];
    cld pw1 = 1, pw2 = 1;
    cld w1 = embed_ld(CycInt::t(), Embedding::v1), w2 = embed_ld(CycInt::t(), Embedding::v2);
    for (int k = 0; k < 4; ++k) {
        m[0][k] = pw1.real();
        m[1][k] = pw1.imag();
        m[2][k] = pw2.real();
        m[3][k] = pw2.imag();
        pw1 *= w1;
        pw2 *= w2;
    }
    m[0][4] = z1.real();
    m[1][4] = z1.imag();
    m[2][4] = z2.real();
    m[3][4] = z2.imag();
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            long double f = m[r][col] / m[col][col];
            for (int j = col; j < 5; ++j) m[r][j] -= f * m[col][j];
        }
    }
    CycInt out;
    for (int k = 0; k < 4; ++k) {
        long double v = m[k][4] / m[k][k];
        if (std::abs(v) > 9e15L) return std::nullopt;
        out.c[k] = (int64_t)std::llround(v);
    }
    return out;
}

}  // namespace

std::vector<CycInt> cubic_roots_in_O(const std::array<CycInt, 3> &c) {
    std::array<cld, 3> c1, c2;
    for (int i = 0; i < 3; ++i) {
        c1[i] = embed_ld(c[i], Embedding::v1);
        c2[i] = embed_ld(c[i], Embedding::v2);
    }
    auto r1 = complex_cubic_roots(c1), r2 = complex_cubic_roots(c2);
    std::set<CycInt> roots;
    for (auto &z1 : r1)
        for (auto &z2 : r2) {
            auto x = from_embeddings(z1, z2);
            if (!x) continue;
            // exact certificate
            if ((((*x + c[2]) * *x + c[1]) * *x + c[0]).is_zero()) roots.insert(*x);
        }
    return {roots.begin(), roots.end()};
}

std::optional<CycInt> sqrt_in_O(const CycInt &x) {
    if (x.is_zero()) return CycInt(0);
    cld s1 = std::sqrt(embed_ld(x, Embedding::v1)), s2 = std::sqrt(embed_ld(x, Embedding::v2));
    for (int e = 0; e < 2; ++e) {
        auto r = from_embeddings(s1, e ? -s2 : s2);
        if (r && *r * *r == x) return r;
    }
    return std::nullopt;
}

ResidualImageReport residual_image(const CurveModel &E) {
    if (E.base != BaseField::F) throw std::invalid_argument("residual_image expects a curve over F");
    auto [b2, b4, b6, b8] = E.b_invariants();
    (void)b8;
    // X = 4x turns 4x^3 + b2 x^2 + 2 b4 x + b6 into X^3 + b2 X^2 + 8 b4 X + 16 b6
    CycNum c2 = b2, c1 = CycNum(8) * b4, c0 = CycNum(16) * b6;
    for (auto *v : {&c0, &c1, &c2})
        if (!v->is_integral()) throw std::domain_error("non-integral model");
    std::array<CycInt, 3> c = {c0.to_int(), c1.to_int(), c2.to_int()};
    ResidualImageReport rep;
    rep.two_torsion_x = cubic_roots_in_O(c);
    const CycInt &C0 = c[0], &C1 = c[1], &C2 = c[2];
    rep.cubic_discriminant = C2 * C2 * C1 * C1 - CycInt(4) * C1 * C1 * C1 - CycInt(4) * C2 * C2 * C2 * C0 - CycInt(27) * C0 * C0 +
                             CycInt(18) * C2 * C1 * C0;
    rep.discriminant_is_square = sqrt_in_O(rep.cubic_discriminant).has_value();
    switch (rep.two_torsion_x.size()) {
    case 3:
        rep.raw = rep.semisimple = ResidualImage::trivial;
        break;
    case 1:
        rep.raw = ResidualImage::C2;
        rep.semisimple = ResidualImage::trivial;
        break;
    default:
        rep.raw = rep.semisimple = rep.discriminant_is_square ? ResidualImage::C3 : ResidualImage::S3;
    }
    return rep;
}

CurveFixtures load_curve_fixtures(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open curve fixtures: " + path);
    nlohmann::json j;
    in >> j;
    CurveFixtures out;
    auto load_F = [&](const nlohmann::json &arr) {
        for (auto &e : arr) {
            CurveModel E;
            E.label = e.at("class").get<std::string>();
            for (int i = 0; i < 5; ++i) E.a[i] = parse_cyc(e.at("a")[i].get<std::string>());
            out.over_F[E.label] = E;
        }
    };
    load_F(j.at("over_F"));
    if (j.contains("base_change_over_F")) load_F(j.at("base_change_over_F"));
    for (auto &e : j.at("over_subfield")) {
        CurveModel E;
        E.label = e.at("class").get<std::string>();
        E.base = parse_base_field(e.at("base_field").get<std::string>());
        CycNum s(subfield_sqrt(E.base));
        for (int i = 0; i < 5; ++i) {
            Rational x(e.at("a")[i][0].get<std::string>()), y(e.at("a")[i][1].get<std::string>());
            x.canonicalize();
            y.canonicalize();
            E.a[i] = CycNum(x) + CycNum(y) * s;
        }
        out.over_subfield[E.label] = E;
    }
    return out;
}

}  // namespace z12
