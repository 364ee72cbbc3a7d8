#include "z12/cone.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace z12 {

const char *const kVoronoiFormat = "z12-voronoi-v1";

namespace {

const std::array<int, 8> kWeight{2, 2, 4, 4, 2, 2, 4, 4};

using RVec = std::vector<Real>;
using RMat = std::vector<RVec>;

RVec as_vec(const ConePoint &p) { return RVec(p.c.begin(), p.c.end()); }

ConePoint as_point(const RVec &v) {
    ConePoint p;
    for (int k = 0; k < 8; ++k) p.c[k] = v[k];
    return p;
}

Real dot(const RVec &a, const RVec &b) {
    Real s;
    for (size_t k = 0; k < a.size(); ++k)
        if (!a[k].is_zero() && !b[k].is_zero()) s += a[k] * b[k];
    return s;
}

// row echelon in place; returns pivot columns
std::vector<int> echelon(RMat &m, int ncols) {
    std::vector<int> piv;
    size_t r = 0;
    for (int c = 0; c < ncols && r < m.size(); ++c) {
        size_t p = r;
        while (p < m.size() && m[p][c].is_zero()) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Real inv = Real(1) / m[r][c];
        for (int k = c; k < (int)m[r].size(); ++k) m[r][k] *= inv;
        for (size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            Real f = m[i][c];
            for (int k = c; k < (int)m[i].size(); ++k)
                if (!m[r][k].is_zero()) m[i][k] -= f * m[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

Real floor_real(const Real &c) {
    long n = (long)std::floor(c.to_double());
    while (Real(n) > c) --n;
    while (Real(n + 1) <= c) ++n;
    return Real(n);
}

Vec2 vec_of(const std::array<long, 8> &z) { return {CycInt(z[0], z[1], z[2], z[3]), CycInt(z[4], z[5], z[6], z[7])}; }

std::vector<int> bits_to_list(const std::vector<uint64_t> &b, int n) {
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (b[i / 64] >> (i % 64) & 1) out.push_back(i);
    return out;
}

std::optional<Mat2> solve_right(const Mat2 &w, const Mat2 &v) {
    // h with h v = w
    CycInt d = v.det();
    if (d.is_zero()) return std::nullopt;
    Mat2 p = w * v.adjugate();
    auto a = divide(p.a, d), b = divide(p.b, d), c = divide(p.c, d), e = divide(p.d, d);
    if (!a || !b || !c || !e) return std::nullopt;
    return Mat2{*a, *b, *c, *e};
}

std::string real_str(const Real &r) { return r.a.get_str() + "|" + r.b.get_str(); }
Real real_parse(const std::string &s) {
    auto bar = s.find('|');
    return Real(Rational(s.substr(0, bar)), Rational(s.substr(bar + 1)));
}

}  // namespace

// ---- ConePoint

ConePoint ConePoint::identity() {
    ConePoint p;
    p.c[0] = p.c[1] = p.c[4] = p.c[5] = 1;
    return p;
}

ConePoint ConePoint::from_hermitian(const std::array<CycNum, 3> &h1, const std::array<CycNum, 3> &h2) {
    ConePoint p;
    const std::array<CycNum, 3> *h[2] = {&h1, &h2};
    for (int i = 0; i < 2; ++i) {
        p.c[4 * i] = to_real((*h[i])[0]);
        p.c[4 * i + 1] = to_real((*h[i])[1]);
        auto [re, im] = re_im((*h[i])[2]);
        p.c[4 * i + 2] = re;
        p.c[4 * i + 3] = im;
    }
    return p;
}

std::array<CycNum, 3> ConePoint::hermitian(int i) const {
    return {c[4 * i].to_cyc(), c[4 * i + 1].to_cyc(), from_re_im(c[4 * i + 2], c[4 * i + 3])};
}

bool ConePoint::key_less(const ConePoint &o) const {
    for (int k = 0; k < 8; ++k) {
        if (c[k].a != o.c[k].a) return c[k].a < o.c[k].a;
        if (c[k].b != o.c[k].b) return c[k].b < o.c[k].b;
    }
    return false;
}

ConePoint &ConePoint::operator+=(const ConePoint &o) {
    for (int k = 0; k < 8; ++k) c[k] += o.c[k];
    return *this;
}
ConePoint &ConePoint::operator-=(const ConePoint &o) {
    for (int k = 0; k < 8; ++k) c[k] -= o.c[k];
    return *this;
}
ConePoint &ConePoint::operator*=(const Real &s) {
    for (auto &x : c) x *= s;
    return *this;
}

std::string ConePoint::str() const {
    std::ostringstream os;
    os << "([" << c[0].str() << ", " << from_re_im(c[2], c[3]).str() << "; " << c[1].str() << "], [" << c[4].str()
       << ", " << from_re_im(c[6], c[7]).str() << "; " << c[5].str() << "])";
    return os.str();
}

Real inner(const ConePoint &p, const ConePoint &q) {
    Real s;
    for (int k = 0; k < 8; ++k)
        if (!p.c[k].is_zero() && !q.c[k].is_zero()) s += Real(kWeight[k]) * p.c[k] * q.c[k];
    return s;
}

ConePoint q_point(const Vec2 &x) {
    if (x.is_zero()) throw std::invalid_argument("q of the zero vector");
    ConePoint p;
    CycNum u[2] = {CycNum(x.x), CycNum(x.y)};
    for (int i = 0; i < 2; ++i) {
        CycNum a = i == 0 ? u[0] : sigma(u[0]);
        CycNum b = i == 0 ? u[1] : sigma(u[1]);
        p.c[4 * i] = abs2(a);
        p.c[4 * i + 1] = abs2(b);
        auto [re, im] = re_im(a * conj(b));
        p.c[4 * i + 2] = re;
        p.c[4 * i + 3] = im;
    }
    return p;
}

ConePoint act(const Mat2 &h, const ConePoint &p) {
    std::array<CycNum, 3> out[2];
    for (int i = 0; i < 2; ++i) {
        auto H = p.hermitian(i);
        CycNum A = i == 0 ? CycNum(h.a) : sigma(CycNum(h.a));
        CycNum B = i == 0 ? CycNum(h.b) : sigma(CycNum(h.b));
        CycNum C = i == 0 ? CycNum(h.c) : sigma(CycNum(h.c));
        CycNum D = i == 0 ? CycNum(h.d) : sigma(CycNum(h.d));
        // M = [[A,B],[C,D]] [[a,b],[conj b,d]]
        CycNum m00 = A * H[0] + B * conj(H[2]), m01 = A * H[2] + B * H[1];
        CycNum m10 = C * H[0] + D * conj(H[2]), m11 = C * H[2] + D * H[1];
        // times M* columns: conj(A), conj(B) / conj(C), conj(D)
        out[i][0] = m00 * conj(A) + m01 * conj(B);
        out[i][1] = m10 * conj(C) + m11 * conj(D);
        out[i][2] = m00 * conj(C) + m01 * conj(D);
    }
    return ConePoint::from_hermitian(out[0], out[1]);
}

bool is_positive_definite(const ConePoint &p) {
    for (int i = 0; i < 2; ++i) {
        const Real &a = p.c[4 * i], &d = p.c[4 * i + 1], &x = p.c[4 * i + 2], &y = p.c[4 * i + 3];
        if (a.sign() <= 0) return false;
        if ((a * d - x * x - y * y).sign() <= 0) return false;
    }
    return true;
}

Vec2 torsion_normalize(const Vec2 &x) {
    if (x.is_zero()) throw std::invalid_argument("torsion_normalize of the zero vector");
    int k = torsion_normalize_power(x.x.is_zero() ? x.y : x.x);
    return CycInt::zeta_pow(k) * x;
}

Vec2 canonical_vertex(const Vec2 &x) {
    if (x.is_zero()) throw std::invalid_argument("zero vertex");
    CycInt g = canonical_generator(gcd(x.x, x.y));
    Vec2 y{*divide(x.x, g), *divide(x.y, g)};
    return torsion_normalize(y);
}

// ---- short vectors

std::vector<std::pair<Vec2, Real>> short_vectors(const ConePoint &p, const Real &bound) {
    if (!is_positive_definite(p)) throw std::domain_error("short_vectors: form is not positive definite");
    const int n = 8;
    auto Q = [&](const std::array<long, 8> &z) {
        Vec2 v = vec_of(z);
        return v.is_zero() ? Real() : inner(p, q_point(v));
    };
    RMat G(n, RVec(n));
    std::vector<Real> diag(n);
    for (int i = 0; i < n; ++i) {
        std::array<long, 8> z{};
        z[i] = 1;
        diag[i] = Q(z);
    }
    for (int i = 0; i < n; ++i) {
        G[i][i] = diag[i];
        for (int j = i + 1; j < n; ++j) {
            std::array<long, 8> z{};
            z[i] = 1;
            z[j] = 1;
            G[i][j] = G[j][i] = (Q(z) - diag[i] - diag[j]) * Real(Rational(1, 2));
        }
    }
    // G = U^T D U, U unit upper triangular
    std::vector<Real> D(n);
    RMat U(n, RVec(n));
    for (int i = 0; i < n; ++i) {
        Real s = G[i][i];
        for (int k = 0; k < i; ++k) s -= D[k] * U[k][i] * U[k][i];
        D[i] = s;
        if (D[i].sign() <= 0) throw std::domain_error("short_vectors: Gram matrix not positive definite");
        U[i][i] = 1;
        for (int j = i + 1; j < n; ++j) {
            Real t = G[i][j];
            for (int k = 0; k < i; ++k) t -= D[k] * U[k][i] * U[k][j];
            U[i][j] = t / D[i];
        }
    }
    std::vector<std::pair<Vec2, Real>> out;
    std::set<Vec2> seen;
    std::array<long, 8> x{};
    // exact outward walk from the centre at every level: the feasible set
    // of each coordinate is an interval containing the centre
    std::function<void(int, const Real &)> rec = [&](int i, const Real &partial) {
        Real c;
        for (int j = i + 1; j < n; ++j)
            if (x[j] != 0 && !U[i][j].is_zero()) c -= U[i][j] * Real(x[j]);
        Real rem = bound - partial;
        auto value = [&](long v) {
            Real d = Real(v) - c;
            return partial + D[i] * d * d;
        };
        auto visit = [&](long v) {
            Real val = value(v);
            if (val > bound) return false;
            x[i] = v;
            if (i == 0) {
                bool zero = std::all_of(x.begin(), x.end(), [](long a) { return a == 0; });
                if (!zero) {
                    Vec2 w = torsion_normalize(vec_of(x));
                    if (seen.insert(w).second) out.push_back({w, val});
                }
            } else {
                rec(i - 1, val);
            }
            return true;
        };
        long f = (long)floor_real(c).a.get_num().get_si();
        for (long v = f + 1; visit(v); ++v) {
        }
        for (long v = f; visit(v); --v) {
        }
        x[i] = 0;
        (void)rem;
    };
    rec(n - 1, Real());
    std::sort(out.begin(), out.end(), [](auto &a, auto &b) { return a.first < b.first; });
    return out;
}

ShortVectors minimum_and_minvecs(const ConePoint &p) {
    if (!is_positive_definite(p)) throw std::domain_error("minimum: form is not positive definite");
    Real bound = std::min(inner(p, q_point({1, 0})), inner(p, q_point({0, 1})));
    auto sv = short_vectors(p, bound);
    ShortVectors r;
    r.minimum = bound;
    for (auto &[v, val] : sv)
        if (val < r.minimum) r.minimum = val;
    for (auto &[v, val] : sv)
        if (val == r.minimum) r.vectors.push_back(v);
    return r;
}

int rank_of(const std::vector<ConePoint> &pts) {
    RMat m;
    for (auto &p : pts) m.push_back(as_vec(p));
    return (int)echelon(m, 8).size();
}

bool is_perfect(const ConePoint &p) {
    auto mv = minimum_and_minvecs(p);
    std::vector<ConePoint> q;
    for (auto &v : mv.vectors) q.push_back(q_point(v));
    return rank_of(q) == 8;
}

// ---- facets by double description

std::vector<Facet> pyramid_facets(const std::vector<Vec2> &minvecs) {
    const int m = (int)minvecs.size();
    const int words = (m + 63) / 64;
    std::vector<RVec> rows;
    for (auto &v : minvecs) rows.push_back(as_vec(q_point(v)));
    // constraint a_i . D >= 0 where D is in weighted coordinates
    for (auto &r : rows)
        for (int k = 0; k < 8; ++k) r[k] *= Real(kWeight[k]);

    std::vector<int> basis;
    {
        RMat acc;
        for (int i = 0; i < m && (int)basis.size() < 8; ++i) {
            RMat t = acc;
            t.push_back(rows[i]);
            if ((int)echelon(t, 8).size() > (int)acc.size()) {
                acc.push_back(rows[i]);
                basis.push_back(i);
            }
        }
        if ((int)basis.size() < 8) throw std::domain_error("pyramid_facets: minimal vectors do not span");
    }
    struct Ray {
        RVec v;
        std::vector<uint64_t> zero;
    };
    auto normalize = [](RVec &v) {
        for (auto &x : v)
            if (!x.is_zero()) {
                Real s = x.sign() > 0 ? x : -x;
                Real inv = Real(1) / s;
                for (auto &y : v) y *= inv;
                return;
            }
    };
    std::vector<Ray> rays;
    {
        // inverse of the basis rows: columns are the initial rays
        RMat aug;
        for (int r = 0; r < 8; ++r) {
            RVec row = rows[basis[r]];
            row.resize(16);
            row[8 + r] = 1;
            aug.push_back(row);
        }
        echelon(aug, 8);
        for (int j = 0; j < 8; ++j) {
            Ray ray;
            ray.v.resize(8);
            for (int i = 0; i < 8; ++i) ray.v[i] = aug[i][8 + j];
            normalize(ray.v);
            ray.zero.assign(words, 0);
            for (int r = 0; r < 8; ++r)
                if (r != j) ray.zero[basis[r] / 64] |= 1ull << (basis[r] % 64);
            rays.push_back(std::move(ray));
        }
    }
    std::vector<bool> done(m, false);
    for (int b : basis) done[b] = true;
    for (int i = 0; i < m; ++i) {
        if (done[i]) continue;
        done[i] = true;
        std::vector<int> pos, neg, zer;
        std::vector<Real> val(rays.size());
        for (size_t r = 0; r < rays.size(); ++r) {
            val[r] = dot(rows[i], rays[r].v);
            int s = val[r].sign();
            (s > 0 ? pos : s < 0 ? neg : zer).push_back((int)r);
        }
        if (neg.empty()) {
            for (int r : zer) rays[r].zero[i / 64] |= 1ull << (i % 64);
            continue;
        }
        std::vector<Ray> next;
        for (int r : pos) next.push_back(rays[r]);
        for (int r : zer) {
            Ray ray = rays[r];
            ray.zero[i / 64] |= 1ull << (i % 64);
            next.push_back(std::move(ray));
        }
        for (int a : pos)
            for (int b : neg) {
                std::vector<uint64_t> common(words);
                int cnt = 0;
                for (int w = 0; w < words; ++w) {
                    common[w] = rays[a].zero[w] & rays[b].zero[w];
                    cnt += __builtin_popcountll(common[w]);
                }
                if (cnt < 6) continue;
                bool adjacent = true;
                for (size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if ((int)r == a || (int)r == b) continue;
                    bool contains = true;
                    for (int w = 0; w < words; ++w)
                        if ((common[w] & rays[r].zero[w]) != common[w]) {
                            contains = false;
                            break;
                        }
                    if (contains) adjacent = false;
                }
                if (!adjacent) continue;
                Ray ray;
                ray.v.resize(8);
                for (int k = 0; k < 8; ++k) ray.v[k] = val[a] * rays[b].v[k] - val[b] * rays[a].v[k];
                normalize(ray.v);
                ray.zero = common;
                ray.zero[i / 64] |= 1ull << (i % 64);
                next.push_back(std::move(ray));
            }
        rays = std::move(next);
    }
    std::vector<Facet> out;
    for (auto &r : rays) {
        Facet f;
        f.vertices = bits_to_list(r.zero, m);
        // back to cone coordinates: the normal N satisfies <N, q> = a . D
        RVec nv(8);
        for (int k = 0; k < 8; ++k) nv[k] = r.v[k];
        f.normal = as_point(nv);
        out.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end(), [](const Facet &a, const Facet &b) { return a.vertices < b.vertices; });
    return out;
}

// ---- perfect forms

namespace {

struct MinvecIndex {
    std::map<Vec2, int> idx;
    explicit MinvecIndex(const std::vector<Vec2> &mv) {
        for (size_t i = 0; i < mv.size(); ++i) idx[mv[i]] = (int)i;
    }
    int find(const Vec2 &v) const {
        auto it = idx.find(torsion_normalize(v));
        return it == idx.end() ? -1 : it->second;
    }
};

std::pair<int, int> base_pair(const std::vector<Vec2> &mv) {
    std::pair<int, int> best{-1, -1};
    int64_t bn = 0;
    for (size_t i = 0; i < mv.size(); ++i)
        for (size_t j = 0; j < mv.size(); ++j) {
            if (i == j) continue;
            CycInt d = det2(mv[i], mv[j]);
            if (d.is_zero()) continue;
            int64_t n = norm(d);
            if (best.first < 0 || n < bn) {
                bn = n;
                best = {(int)i, (int)j};
            }
        }
    return best;
}

// all h with h*a = b as sets mod torsion (first only if `first`)
std::vector<Mat2> transports(const std::vector<Vec2> &a, const std::vector<Vec2> &b, bool first) {
    std::vector<Mat2> out;
    if (a.size() != b.size() || a.empty()) return out;
    auto [i, j] = base_pair(a);
    Mat2 V = Mat2::columns(a[i], a[j]);
    int64_t nv = norm(V.det());
    MinvecIndex bi(b);
    for (size_t k = 0; k < b.size(); ++k)
        for (size_t l = 0; l < b.size(); ++l) {
            if (k == l) continue;
            CycInt d = det2(b[k], b[l]);
            if (d.is_zero() || norm(d) != nv) continue;
            for (int beta = 0; beta < 12; ++beta) {
                Mat2 W = Mat2::columns(b[k], CycInt::zeta_pow(beta) * b[l]);
                auto h = solve_right(W, V);
                if (!h || !is_unit(h->det())) continue;
                bool ok = true;
                for (auto &v : a)
                    if (bi.find(*h * v) < 0) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                out.push_back(*h);
                if (first) return out;
            }
        }
    return out;
}

// smallest rho > 0 at which Phi + rho D acquires a vector of value 1; bisects
// between a positive definite lower end and a degenerate upper end
std::optional<Real> flip_distance(const ConePoint &phi, const ConePoint &D, int max_iters) {
    Real lo(0), u(1);
    std::optional<Real> hi;
    for (int k = 0; k < max_iters; ++k) {
        ConePoint p = phi + u * D;
        if (!is_positive_definite(p)) {
            hi = u;
            u = (lo + u) * Real(Rational(1, 2));
            continue;
        }
        std::optional<Real> rho;
        for (auto &[v, val] : short_vectors(p, Real(1))) {
            if (!(val < Real(1))) continue;
            ConePoint qv = q_point(v);
            Real cand = (inner(phi, qv) - Real(1)) / -inner(D, qv);
            if (!rho || cand < *rho) rho = cand;
        }
        if (rho) return rho;
        lo = u;
        u = hi ? (lo + *hi) * Real(Rational(1, 2)) : u * Real(2);
    }
    return std::nullopt;
}

}  // namespace

std::vector<Mat2> stabilizer_of(const PerfectForm &a) { return transports(a.minvecs, a.minvecs, false); }

std::optional<Mat2> minvec_transport(const PerfectForm &a, const PerfectForm &b) {
    auto t = transports(a.minvecs, b.minvecs, true);
    if (t.empty()) return std::nullopt;
    return t.front();
}

std::optional<Mat2> forms_equivalent(const PerfectForm &a, const PerfectForm &b) {
    auto h = minvec_transport(a, b);
    if (!h) return std::nullopt;
    Mat2 g = star(inverse_gl2(*h));
    if (!(act(g, a.form) == b.form)) return std::nullopt;
    return g;
}

PerfectForm make_perfect_form(const ConePoint &p) {
    auto mv = minimum_and_minvecs(p);
    if (mv.minimum != Real(1)) throw std::domain_error("make_perfect_form: minimum is not 1");
    PerfectForm f;
    f.form = p;
    f.minvecs = mv.vectors;
    f.facets = pyramid_facets(f.minvecs);
    f.stabilizer = stabilizer_of(f);
    return f;
}

PerfectForm find_initial_perfect_form(int max_iters) {
    ConePoint phi = ConePoint::identity();
    phi *= Real(Rational(1, 4));
    std::vector<Vec2> probes;
    for (int k = 0; k < 4; ++k) probes.push_back({1, CycInt::zeta_pow(k)});
    for (int k = 0; k < 4; ++k) probes.push_back({1, CycInt(1) + CycInt::zeta_pow(k)});
    for (int k = 0; k < 4; ++k) probes.push_back({1, CycInt(2) * CycInt::zeta_pow(k)});
    for (int it = 0; it < max_iters; ++it) {
        auto mv = minimum_and_minvecs(phi);
        std::vector<ConePoint> qs;
        for (auto &v : mv.vectors) qs.push_back(q_point(v));
        RMat basis;
        for (auto &q : qs) basis.push_back(as_vec(q));
        int r = (int)echelon(basis, 8).size();
        if (r == 8) return make_perfect_form(phi);
        basis.resize(r);
        // D = -(q(x) - its projection onto span q(M)) for the first probe x off the span
        RMat gram(r, RVec(r));
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) gram[a][b] = inner(as_point(basis[a]), as_point(basis[b]));
        ConePoint D;
        for (auto &x : probes) {
            ConePoint ref = q_point(x);
            RMat g = gram;
            for (int a = 0; a < r; ++a) g[a].push_back(inner(as_point(basis[a]), ref));
            echelon(g, r);
            ConePoint proj;
            for (int a = 0; a < r; ++a) proj += g[a][r] * as_point(basis[a]);
            D = proj - ref;
            if (std::any_of(D.c.begin(), D.c.end(), [](const Real &z) { return !z.is_zero(); })) break;
        }
        // walk Phi + u D until new vectors drop below 1
        auto rho = flip_distance(phi, D, 400);
        if (!rho) throw std::runtime_error("find_initial_perfect_form: walk did not acquire new vectors");
        phi += *rho * D;
    }
    throw std::runtime_error("find_initial_perfect_form: iteration cap exceeded");
}

ConePoint neighbor(const PerfectForm &f, const Facet &facet, int max_iters) {
    auto rho = flip_distance(f.form, facet.normal, max_iters);
    if (!rho) throw std::runtime_error("neighbor: no flip found");
    return f.form + *rho * facet.normal;
}

std::vector<std::vector<int>> pyramid_faces(const PerfectForm &f, int dim) {
    const int m = (int)f.minvecs.size();
    std::vector<ConePoint> qs;
    for (auto &v : f.minvecs) qs.push_back(q_point(v));
    auto closure = [&](const std::vector<int> &s) {
        std::vector<bool> in(m, true);
        bool any = false;
        for (auto &fa : f.facets) {
            if (!std::includes(fa.vertices.begin(), fa.vertices.end(), s.begin(), s.end())) continue;
            any = true;
            std::vector<bool> mark(m, false);
            for (int v : fa.vertices) mark[v] = true;
            for (int i = 0; i < m; ++i) in[i] = in[i] && mark[i];
        }
        std::vector<int> out;
        for (int i = 0; i < m; ++i)
            if (!any || in[i]) out.push_back(i);
        return out;
    };
    std::set<std::vector<int>> cur;
    for (int i = 0; i < m; ++i) cur.insert({i});
    for (int d = 1; d <= dim; ++d) {
        std::set<std::vector<int>> nxt;
        for (auto &F : cur)
            for (int v = 0; v < m; ++v) {
                if (std::binary_search(F.begin(), F.end(), v)) continue;
                std::vector<int> s = F;
                s.insert(std::upper_bound(s.begin(), s.end(), v), v);
                auto c = closure(s);
                if (nxt.count(c)) continue;
                std::vector<ConePoint> pts;
                for (int i : c) pts.push_back(qs[i]);
                if (rank_of(pts) == d + 1) nxt.insert(c);
            }
        cur = std::move(nxt);
    }
    return {cur.begin(), cur.end()};
}

// ---- enumeration

VoronoiData enumerate_perfect_forms(int max_forms) {
    VoronoiData data;
    data.version = kVoronoiFormat;
    data.forms.push_back(find_initial_perfect_form());
    for (size_t j = 0; j < data.forms.size(); ++j) {
        // facet orbits under the stabilizer
        const int nf = (int)data.forms[j].facets.size();
        std::map<std::vector<int>, int> fidx;
        for (int k = 0; k < nf; ++k) fidx[data.forms[j].facets[k].vertices] = k;
        std::vector<bool> done(nf, false);
        for (int k = 0; k < nf; ++k) {
            if (done[k]) continue;
            PerfectForm cur = data.forms[j];
            ConePoint nb = neighbor(cur, cur.facets[k]);
            auto mv = minimum_and_minvecs(nb);
            if (mv.minimum != Real(1)) throw std::runtime_error("neighbor lost the normalization");
            int cls = -1;
            Mat2 tr = Mat2::identity();
            PerfectForm probe;
            probe.form = nb;
            probe.minvecs = mv.vectors;
            for (size_t c = 0; c < data.forms.size() && cls < 0; ++c) {
                if (data.forms[c].minvecs.size() != probe.minvecs.size()) continue;
                auto h = transports(data.forms[c].minvecs, probe.minvecs, true);
                if (!h.empty()) {
                    cls = (int)c;
                    tr = h.front();
                }
            }
            if (cls < 0) {
                if ((int)data.forms.size() >= max_forms) throw std::runtime_error("enumerate_perfect_forms: traversal cap");
                data.forms.push_back(make_perfect_form(nb));
                cls = (int)data.forms.size() - 1;
            }
            auto &F = data.forms[j];
            MinvecIndex mi(F.minvecs);
            for (auto &s : F.stabilizer) {
                std::vector<int> img;
                for (int v : F.facets[k].vertices) img.push_back(mi.find(s * F.minvecs[v]));
                std::sort(img.begin(), img.end());
                int k2 = fidx.at(img);
                if (done[k2]) continue;
                done[k2] = true;
                F.facets[k2].neighbor = cls;
                F.facets[k2].transport = s * tr;
            }
        }
    }
    return data;
}

// ---- containing pyramid

PyramidHit containing_pyramid(const VoronoiData &v, const ConePoint &p, int max_steps) {
    if (v.forms.empty()) throw std::logic_error("containing_pyramid: no perfect forms");
    PyramidHit hit;
    hit.cls = 0;
    hit.h = Mat2::identity();
    for (int step = 0; step < max_steps; ++step) {
        const PerfectForm &F = v.forms[hit.cls];
        ConePoint local = act(inverse_gl2(hit.h), p);
        int bad = -1;
        std::vector<int> tight;
        for (size_t k = 0; k < F.facets.size(); ++k) {
            int s = inner(F.facets[k].normal, local).sign();
            if (s < 0) {
                bad = (int)k;
                break;
            }
            if (s == 0) tight.push_back((int)k);
        }
        if (bad < 0) {
            std::vector<bool> in(F.minvecs.size(), true);
            for (int k : tight) {
                std::vector<bool> mark(F.minvecs.size(), false);
                for (int x : F.facets[k].vertices) mark[x] = true;
                for (size_t i = 0; i < in.size(); ++i) in[i] = in[i] && mark[i];
            }
            for (size_t i = 0; i < in.size(); ++i)
                if (in[i]) hit.face.push_back((int)i);
            for (auto &m : F.minvecs) hit.vertices.push_back(torsion_normalize(hit.h * m));
            hit.steps = step;
            return hit;
        }
        const Facet &fa = F.facets[bad];
        if (fa.neighbor < 0) throw std::logic_error("containing_pyramid: facet without neighbour data");
        hit.h = hit.h * fa.transport;
        hit.cls = fa.neighbor;
    }
    throw std::runtime_error("containing_pyramid: step cap exceeded");
}

// ---- cache

namespace {
using nlohmann::json;

json vec_json(const Vec2 &v) {
    return json::array({v.x.c[0], v.x.c[1], v.x.c[2], v.x.c[3], v.y.c[0], v.y.c[1], v.y.c[2], v.y.c[3]});
}
Vec2 vec_from(const json &j) {
    std::array<long, 8> z;
    for (int k = 0; k < 8; ++k) z[k] = j.at(k).get<long>();
    return vec_of(z);
}
json cyc_json(const CycInt &c) { return json::array({c.c[0], c.c[1], c.c[2], c.c[3]}); }
CycInt cyc_from(const json &j) { return {j.at(0).get<int64_t>(), j.at(1).get<int64_t>(), j.at(2).get<int64_t>(), j.at(3).get<int64_t>()}; }
json mat_json(const Mat2 &m) { return json::array({cyc_json(m.a), cyc_json(m.b), cyc_json(m.c), cyc_json(m.d)}); }
Mat2 mat_from(const json &j) { return {cyc_from(j.at(0)), cyc_from(j.at(1)), cyc_from(j.at(2)), cyc_from(j.at(3))}; }
json point_json(const ConePoint &p) {
    json a = json::array();
    for (auto &x : p.c) a.push_back(real_str(x));
    return a;
}
ConePoint point_from(const json &j) {
    ConePoint p;
    for (int k = 0; k < 8; ++k) p.c[k] = real_parse(j.at(k).get<std::string>());
    return p;
}
}  // namespace

std::string voronoi_to_json(const VoronoiData &v) {
    json j;
    j["format"] = v.version;
    j["forms"] = json::array();
    for (auto &f : v.forms) {
        json jf;
        jf["form"] = point_json(f.form);
        jf["minvecs"] = json::array();
        for (auto &m : f.minvecs) jf["minvecs"].push_back(vec_json(m));
        jf["facets"] = json::array();
        for (auto &fa : f.facets) {
            jf["facets"].push_back({{"vertices", fa.vertices},
                                    {"normal", point_json(fa.normal)},
                                    {"neighbor", fa.neighbor},
                                    {"transport", mat_json(fa.transport)}});
        }
        jf["stabilizer"] = json::array();
        for (auto &s : f.stabilizer) jf["stabilizer"].push_back(mat_json(s));
        j["forms"].push_back(jf);
    }
    return j.dump();
}

VoronoiData voronoi_from_json(const std::string &text) {
    json j = json::parse(text);
    VoronoiData v;
    v.version = j.at("format").get<std::string>();
    if (v.version != kVoronoiFormat) throw std::runtime_error("voronoi cache: format mismatch " + v.version);
    for (auto &jf : j.at("forms")) {
        PerfectForm f;
        f.form = point_from(jf.at("form"));
        for (auto &m : jf.at("minvecs")) f.minvecs.push_back(vec_from(m));
        for (auto &jfa : jf.at("facets")) {
            Facet fa;
            fa.vertices = jfa.at("vertices").get<std::vector<int>>();
            fa.normal = point_from(jfa.at("normal"));
            fa.neighbor = jfa.at("neighbor").get<int>();
            fa.transport = mat_from(jfa.at("transport"));
            f.facets.push_back(std::move(fa));
        }
        for (auto &s : jf.at("stabilizer")) f.stabilizer.push_back(mat_from(s));
        v.forms.push_back(std::move(f));
    }
    return v;
}

VoronoiData load_or_enumerate(const std::string &cache_dir) {
    std::filesystem::path path;
    if (!cache_dir.empty()) {
        path = std::filesystem::path(cache_dir) / "perfect_forms.json";
        std::ifstream in(path);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                return voronoi_from_json(ss.str());
            } catch (const std::exception &) {
                // stale or foreign cache: recompute
            }
        }
    }
    VoronoiData v = enumerate_perfect_forms();
    if (!cache_dir.empty()) {
        std::filesystem::create_directories(cache_dir);
        std::ofstream out(path);
        out << voronoi_to_json(v);
    }
    return v;
}

}  // namespace z12
