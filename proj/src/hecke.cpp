#include "z12/hecke.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace z12 {

// ---- cosets

HeckeCosets coset_reps(const PrimeIdealRecord &P, const CycInt &level) {
    if (!is_unit(gcd(P.generator, level))) throw std::domain_error("coset_reps: " + P.label + " divides the level");
    HeckeCosets H;
    H.label = P.label;
    H.nu = P.generator;
    H.norm = P.norm;
    ResidueRing R(P.generator);
    for (int64_t i = 0; i < R.size(); ++i) H.reps.push_back({1, R.element(i), 0, P.generator});
    H.reps.push_back({P.generator, 0, 0, 1});
    return H;
}

SharblyChain hecke_apply(const HeckeCosets &H, const SharblyChain &c) {
    SharblyChain out;
    for (auto &g : H.reps) out.add(c.transformed(g));
    return out;
}

// ---- sizes

namespace {

int64_t edge_n(const Vec2 &a, const Vec2 &b) { return norm(det2(a, b)); }

ConePoint barycenter(const VertexList &u) {
    ConePoint b;
    for (auto &x : u) b += q_point(x);
    return Real(Rational(1, (long)u.size())) * b;
}

}  // namespace

int64_t norm_size(const VertexList &u) {
    int64_t m = 0;
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = i + 1; j < u.size(); ++j) m = std::max(m, edge_n(u[i], u[j]));
    return m;
}

SizePair size_of(const VoronoiData &v, const VertexList &u) {
    if (u.size() < 2) throw std::invalid_argument("size_of: need at least two vertices");
    SizePair s;
    s.n = norm_size(u);
    if (s.n == 0) throw std::domain_error("size_of: degenerate sharbly");
    ConePoint b = barycenter(u);
    auto hit = containing_pyramid(v, b);
    s.N = inner(v.forms[hit.cls].form, act(inverse_gl2(hit.h), b));
    return s;
}

// ---- Gamma0(n)

namespace {

// orient: +1 keeps the vertex order, -1 swaps, 0 either
std::optional<Mat2> find_gamma(const VertexList &e, const VertexList &f, const CycInt &level, int orient, bool *reversed) {
    Mat2 V = Mat2::columns(e[0], e[1]);
    CycInt dv = V.det();
    if (dv.is_zero() || norm(dv) != edge_n(f[0], f[1])) return std::nullopt;
    Mat2 adj = V.adjugate();
    for (int swap = 0; swap < 2; ++swap) {
        if ((swap && orient > 0) || (!swap && orient < 0)) continue;
        const Vec2 &g0 = swap ? f[1] : f[0];
        const Vec2 &g1 = swap ? f[0] : f[1];
        for (int b = 0; b < 12; ++b) {
            Mat2 W = Mat2::columns(g0, CycInt::zeta_pow(b) * g1);
            Mat2 P = W * adj;
            auto c = divide(P.c, dv);
            if (!c || !divides(level, *c)) continue;
            auto a = divide(P.a, dv), bb = divide(P.b, dv), d = divide(P.d, dv);
            if (!a || !bb || !d) continue;
            Mat2 g{*a, *bb, *c, *d};
            if (!is_unit(g.det())) continue;
            if (reversed) *reversed = swap;
            return g;
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Mat2> gamma0_equivalent(const VertexList &e, const VertexList &f, const CycInt &level, bool *reversed) {
    return find_gamma(e, f, level, 0, reversed);
}

// ---- reducing points

namespace {

Vec2 euclid_point(const Vec2 &u, const Vec2 &v) {
    auto [g, r, s] = xgcd(u.x, u.y);
    if (!is_unit(g)) throw std::domain_error("euclid_point: vertex is not primitive");
    CycInt gi = *divide(CycInt(1), g);
    r = r * gi;
    s = s * gi;
    Mat2 A{u.x, -s, u.y, r};   // det 1, A e1 = u
    Vec2 w = inverse_gl2(A) * v;
    auto [q, rem] = euclid_div(w.x, w.y);
    return canonical_vertex(A * Vec2{q, 1});
}

struct Score {
    int64_t worst = 0, total = 0;
    auto operator<=>(const Score &) const = default;
};

std::optional<Score> score_point(const Vec2 &x, const Vec2 &a, const Vec2 &b) {
    int64_t s1 = edge_n(a, x), s2 = edge_n(x, b);
    if (s1 == 0 || s2 == 0) return std::nullopt;
    return Score{std::max(s1, s2), s1 + s2};
}

}  // namespace

Vec2 reducing_point(const VoronoiData &v, const VertexList &edge) {
    const Vec2 &a = edge[0], &b = edge[1];
    int64_t n = edge_n(a, b);
    if (n <= 1) throw std::invalid_argument("reducing_point: edge is already totally reduced");
    auto hit = containing_pyramid(v, barycenter(edge));
    std::optional<std::pair<Score, Vec2>> best;
    for (auto &x : hit.vertices) {
        auto s = score_point(x, a, b);
        if (!s || s->worst >= n) continue;
        if (!best || std::tie(*s, x) < std::tie(best->first, best->second)) best = {{*s, x}};
    }
    if (best) return best->second;
    Vec2 x = euclid_point(a, b);
    auto s = score_point(x, a, b);
    if (!s || s->worst >= n) throw std::logic_error("reducing_point: Euclidean step failed to reduce " + a.str() + " " + b.str());
    return x;
}

SharblyChain reduce_0_sharbly(const VoronoiData &v, const VertexList &u, SharblyChain *filling, int max_iters) {
    SharblyChain out;
    std::vector<std::pair<VertexList, Rational>> todo{{u, 1}};
    int iters = 0;
    while (!todo.empty()) {
        if (++iters > max_iters) throw std::runtime_error("reduce_0_sharbly: iteration cap reached");
        auto [e, c] = todo.back();
        todo.pop_back();
        int64_t n = edge_n(e[0], e[1]);
        if (n == 0) continue;
        if (n == 1) {
            out.add(e, c);
            continue;
        }
        Vec2 x = reducing_point(v, e);
        if (filling) filling->add({e[1], e[0], x}, c);
        todo.push_back({{e[0], x}, c});
        todo.push_back({{x, e[1]}, c});
    }
    return out;
}

// ---- 1-cycles

namespace {

using Options = std::vector<std::pair<Vec2, Rational>>;   // reducing point(s) with weights

struct EdgeClass {
    VertexList rep;
    std::vector<Vec2> opposite;   // opposite vertices of the occurrences, in the frame of rep
    Options points;
    Rational balance = 0;         // signed coefficient sum of occurrences
    std::optional<Mat2> flip;     // element of Gamma0(n) reversing rep
};

struct Occurrence {
    int cls = -1;
    Mat2 gamma;    // edge = gamma * rep as vertex sets
    int orient = 1;
};

struct EdgeStore {
    const CycInt &level;
    std::vector<EdgeClass> classes;
    std::map<std::array<int64_t, 3>, std::vector<int>> buckets;
    std::map<VertexList, Occurrence> seen;

    std::array<int64_t, 3> key(const VertexList &e) const {
        int64_t g0 = norm(gcd(e[0].y, level)), g1 = norm(gcd(e[1].y, level));
        return {edge_n(e[0], e[1]), std::min(g0, g1), std::max(g0, g1)};
    }

    const Occurrence &classify(const VertexList &e) {
        auto it = seen.find(e);
        if (it != seen.end()) return it->second;
        auto &bucket = buckets[key(e)];
        for (int id : bucket) {
            bool rev = false;
            auto g = find_gamma(classes[id].rep, e, level, 0, &rev);
            if (g) return seen[e] = {id, *g, rev ? -1 : 1};
        }
        EdgeClass c;
        c.rep = e;
        c.flip = find_gamma(e, e, level, -1, nullptr);
        bucket.push_back((int)classes.size());
        classes.push_back(c);
        return seen[e] = {(int)classes.size() - 1, Mat2::identity(), 1};
    }

    Options transported(const VertexList &e) const {
        const Occurrence &o = seen.at(e);
        Options out;
        for (auto &[x, w] : classes[o.cls].points) out.push_back({canonical_vertex(o.gamma * x), w});
        return out;
    }
};

// point for an edge class; besides shrinking the edge it keeps the new edges to the
// opposite vertices small
Vec2 choose_point(const VoronoiData &v, const VertexList &edge, const std::vector<Vec2> &opposite) {
    const Vec2 &a = edge[0], &b = edge[1];
    int64_t n = edge_n(a, b);
    std::set<Vec2> cand;
    for (auto &x : containing_pyramid(v, barycenter(edge)).vertices) cand.insert(x);
    for (size_t k = 0; k < opposite.size() && k < 4; ++k)
        for (auto &x : containing_pyramid(v, barycenter({a, b, opposite[k]})).vertices) cand.insert(x);
    for (int side = 0; side < 2; ++side) {
        const Vec2 &u = side ? b : a, &w = side ? a : b;
        auto [g, r, s] = xgcd(u.x, u.y);
        CycInt gi = *divide(CycInt(1), g);
        Mat2 A{u.x, -(s * gi), u.y, r * gi};
        Vec2 z = inverse_gl2(A) * w;
        auto [q, rem] = euclid_div(z.x, z.y);
        cand.insert(canonical_vertex(A * Vec2{q, 1}));
        for (int k = 0; k < 12; ++k) cand.insert(canonical_vertex(A * Vec2{q + CycInt::zeta_pow(k), 1}));
    }
    std::optional<std::tuple<int64_t, int64_t, int64_t, Vec2>> best;
    for (auto &x : cand) {
        auto s = score_point(x, a, b);
        if (!s || s->worst >= n) continue;
        int64_t far = s->worst;
        for (auto &d : opposite) far = std::max(far, edge_n(x, d));
        std::tuple<int64_t, int64_t, int64_t, Vec2> key{far, s->worst, s->total, x};
        if (!best || key < *best) best = key;
    }
    if (!best) return reducing_point(v, edge);
    return std::get<3>(*best);
}

// edge i of [u1, u2, u3] is the one opposite u_i, oriented as in the boundary
VertexList edge_of(const VertexList &u, int i) { return {u[(i + 1) % 3], u[(i + 2) % 3]}; }

void add_term(SharblyChain &out, const Rational &c, std::initializer_list<Vec2> v) { out.add(VertexList(v), c); }

// u = new + cross (as honest chains), cross collects [edge, x_edge]
void subdivide(const VertexList &u, const Rational &c, const std::array<const Options *, 3> &opt, SharblyChain &out,
               SharblyChain &cross) {
    std::vector<int> present;
    for (int i = 0; i < 3; ++i)
        if (opt[i]) present.push_back(i);
    // expand weighted choices
    std::array<size_t, 3> idx{0, 0, 0};
    while (true) {
        Rational w = c;
        std::array<Vec2, 3> x;
        for (int i : present) {
            x[i] = (*opt[i])[idx[i]].first;
            w *= (*opt[i])[idx[i]].second;
        }
        if (present.size() == 3) {
            add_term(out, w, {u[0], x[2], x[1]});
            add_term(out, w, {u[1], x[0], x[2]});
            add_term(out, w, {u[2], x[1], x[0]});
            add_term(out, w, {x[0], x[1], x[2]});
        } else if (present.size() == 2) {
            int m = 3 - present[0] - present[1];   // edge without a point
            const Vec2 &a = u[(m + 1) % 3], &b = u[(m + 2) % 3], &d = u[m];
            const Vec2 &p = x[(m + 1) % 3], &q = x[(m + 2) % 3];
            add_term(out, w, {a, b, p});
            add_term(out, w, {a, p, q});
            add_term(out, w, {d, q, p});
        } else if (present.size() == 1) {
            int k = present[0];
            const Vec2 &a = u[(k + 1) % 3], &b = u[(k + 2) % 3], &d = u[k];
            add_term(out, w, {a, x[k], d});
            add_term(out, w, {x[k], b, d});
        }
        for (int i : present) {
            VertexList e = edge_of(u, i);
            add_term(cross, w, {e[0], e[1], x[i]});
        }
        // next combination
        int j = 0;
        for (; j < (int)present.size(); ++j) {
            int i = present[j];
            if (++idx[i] < opt[i]->size()) break;
            idx[i] = 0;
        }
        if (j == (int)present.size()) break;
    }
}

// e = torsion * (1 + t)^k
int unit_exponent(const CycInt &e) {
    auto z = embed(CycNum(e), Embedding::v1);
    double le = std::log(std::hypot(z[0], z[1]));
    auto w = embed(CycNum(CycInt(1, 1, 0, 0)), Embedding::v1);
    int k = (int)std::lround(le / std::log(std::hypot(w[0], w[1])));
    CycInt eta = CycInt(1, 1, 0, 0), inv = *divide(CycInt(1), eta), r = e;
    for (int i = 0; i < std::abs(k); ++i) r = r * (k > 0 ? inv : eta);
    if (torsion_normalize(r) != torsion_normalize(CycInt(1))) throw std::logic_error("unit_exponent: not a unit power");
    return k;
}

// [a, e a, b] with e a unit: telescope through the points (1+t)^i a
bool split_collinear(const VertexList &u, const Rational &c, SharblyChain &out) {
    for (int i = 0; i < 3; ++i) {
        const Vec2 &a = u[(i + 1) % 3], &b = u[(i + 2) % 3], &d = u[i];
        if (!det2(a, b).is_zero()) continue;
        CycInt e = a.x.is_zero() ? *divide(b.y, a.y) : *divide(b.x, a.x);
        int k = unit_exponent(e);
        if (std::abs(k) < 2) return false;
        CycInt step = k > 0 ? CycInt(1, 1, 0, 0) : *divide(CycInt(1), CycInt(1, 1, 0, 0));
        Vec2 p = a;
        for (int j = 0; j < std::abs(k); ++j) {
            Vec2 q = j + 1 == std::abs(k) ? b : canonical_vertex(step * p);
            add_term(out, c, {p, q, d});
            p = q;
        }
        return true;
    }
    return false;
}

// all three edges totally reduced, the triangle is not a face: cone from a pyramid vertex
bool cone_exceptional(const VoronoiData &v, const FaceTables &faces, const VertexList &u, const Rational &c, SharblyChain &out) {
    auto hit = containing_pyramid(v, barycenter(u));
    std::optional<std::tuple<int, int64_t, Vec2>> best;
    for (auto &y : hit.vertices) {
        if (y == u[0] || y == u[1] || y == u[2]) continue;
        int bad = 0;
        int64_t worst = 0;
        bool degenerate = false;
        for (int i = 0; i < 3; ++i) {
            VertexList t{u[i], u[(i + 1) % 3], y};
            if (normalize_sharbly(t) == 0) {
                degenerate = true;
                break;
            }
            if (!faces.locate(t, 1)) ++bad;
            worst = std::max(worst, edge_n(u[i], y));
        }
        if (degenerate) continue;
        std::tuple<int, int64_t, Vec2> s{bad, worst, y};
        if (!best || s < *best) best = s;
    }
    if (!best) return false;
    const Vec2 &y = std::get<2>(*best);
    for (int i = 0; i < 3; ++i) add_term(out, c, {u[i], u[(i + 1) % 3], y});
    return true;
}

}  // namespace

SharblyChain reduce_1_cycle(const VoronoiData &v, const FaceTables &faces, const SharblyChain &xi, const CycInt &level,
                            const ReductionOptions &opt, ReductionLog *log) {
    SharblyChain cur = xi;
    ReductionLog local;
    ReductionLog &L = log ? *log : local;
    for (int pass = 0;; ++pass) {
        std::vector<std::pair<VertexList, Rational>> bad;
        SharblyChain next;
        int64_t maxn = 0;
        for (auto &[u, c] : cur.terms()) {
            maxn = std::max(maxn, norm_size(u));
            if (faces.locate(u, 1))
                next.add(u, c);
            else
                bad.push_back({u, c});
        }
        L.max_n.push_back(maxn);
        if (bad.empty()) {
            L.passes = pass;
            return cur;
        }
        if (pass >= opt.max_iters) {
            std::ostringstream os;
            os << "reduce_1_cycle: no convergence after " << pass << " passes; " << bad.size()
               << " sharblies not totally reduced, e.g. [" << bad[0].first[0].str() << ", " << bad[0].first[1].str() << ", "
               << bad[0].first[2].str() << "] with n = " << norm_size(bad[0].first);
            throw std::runtime_error(os.str());
        }
        if (opt.reverse_order) std::reverse(bad.begin(), bad.end());

        EdgeStore store{level, {}, {}, {}};
        // classify edges and collect what each class sees opposite to it
        std::vector<std::array<std::optional<VertexList>, 3>> edges(bad.size());
        for (size_t t = 0; t < bad.size(); ++t) {
            auto &[u, c] = bad[t];
            for (int i = 0; i < 3; ++i) {
                VertexList s = edge_of(u, i);
                int sign = normalize_sharbly(s);
                // degenerate edges (two vertices on one line) are zero chains
                if (sign == 0 || edge_n(s[0], s[1]) == 1) continue;
                const Occurrence &o = store.classify(s);
                EdgeClass &cl = store.classes[o.cls];
                cl.balance += c * sign * o.orient;
                cl.opposite.push_back(canonical_vertex(inverse_gl2(o.gamma) * u[i]));
                edges[t][i] = s;
            }
        }
        for (auto &cl : store.classes) {
            Vec2 x = choose_point(v, cl.rep, cl.opposite);
            if (cl.flip) {
                // reversed by Gamma0(n): average the point over the flip
                cl.points = {{x, Rational(1, 2)}, {canonical_vertex(*cl.flip * x), Rational(1, 2)}};
            } else {
                cl.points = {{x, 1}};
            }
        }
        std::map<VertexList, Options> points;
        for (auto &[e, o] : store.seen) points[e] = store.transported(e);

        SharblyChain cross;
        for (size_t t = 0; t < bad.size(); ++t) {
            auto &[u, c] = bad[t];
            std::array<const Options *, 3> o{nullptr, nullptr, nullptr};
            for (int i = 0; i < 3; ++i)
                if (edges[t][i]) o[i] = &points.at(*edges[t][i]);
            ++L.subdivided;
            if (!o[0] && !o[1] && !o[2]) {
                ++L.exceptional;
                if (opt.check_boundaries) {
                    SharblyChain piece;
                    if (!split_collinear(u, c, piece) && !cone_exceptional(v, faces, u, c, piece))
                        throw std::runtime_error("reduce_1_cycle: no cone point for a reduced non-face triangle");
                    SharblyChain diff = piece;
                    diff.add(u, -c);
                    if (!diff.boundary().empty()) throw std::logic_error("reduce_1_cycle: exceptional split changed the boundary");
                    next.add(piece);
                    continue;
                }
                if (!split_collinear(u, c, next) && !cone_exceptional(v, faces, u, c, next))
                    throw std::runtime_error("reduce_1_cycle: no cone point for a reduced non-face triangle");
                continue;
            }
            SharblyChain piece, piece_cross;
            subdivide(u, c, o, piece, piece_cross);
            if (opt.check_boundaries) {
                SharblyChain diff = piece;
                diff.add(piece_cross);
                diff.add(u, -c);
                if (!diff.boundary().empty()) throw std::logic_error("reduce_1_cycle: subdivision changed the boundary");
            }
            next.add(piece);
            cross.add(piece_cross);
        }
        // cross terms vanish in the coinvariants once every class balances
        for (auto &cl : store.classes) {
            if (cl.flip) continue;
            if (cl.balance != 0)
                throw std::domain_error("reduce_1_cycle: input is not a cycle modulo Gamma0(n) (edge " + cl.rep[0].str() + " " +
                                        cl.rep[1].str() + ")");
        }
        L.edge_classes += (int)store.classes.size();
        for (auto &cl : store.classes) L.antisymmetric += cl.flip.has_value();
        cur = std::move(next);
    }
}

// ---- matrices

namespace {

QMatrix identity(int n) {
    QMatrix m(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMatrix mul(const QMatrix &a, const QMatrix &b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMatrix c(n, std::vector<Rational>(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

// reduced row echelon in place; returns pivot columns
std::vector<int> rref(QMatrix &m) {
    std::vector<int> piv;
    size_t rows = m.size(), cols = rows ? m[0].size() : 0, r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational inv = 1 / m[r][c];
        for (auto &x : m[r]) x *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        piv.push_back((int)c);
        ++r;
    }
    return piv;
}

// basis of the kernel, as columns of the returned list
std::vector<std::vector<Rational>> kernel(QMatrix m) {
    size_t cols = m.empty() ? 0 : m[0].size();
    auto piv = rref(m);
    std::vector<bool> is_piv(cols, false);
    for (int p : piv) is_piv[p] = true;
    std::vector<std::vector<Rational>> out;
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<Rational> v(cols, 0);
        v[f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
        out.push_back(v);
    }
    return out;
}

QMatrix shifted(const QMatrix &m, const Rational &s) {
    QMatrix r = m;
    for (size_t i = 0; i < r.size(); ++i) r[i][i] -= s;
    return r;
}

// matrix of m restricted to the invariant span of basis (vectors)
QMatrix restrict_to(const QMatrix &m, const std::vector<std::vector<Rational>> &basis) {
    size_t n = m.size(), k = basis.size();
    // solve B R = M B columnwise via rref of [B | M B]
    QMatrix aug(n, std::vector<Rational>(2 * k, 0));
    for (size_t j = 0; j < k; ++j) {
        for (size_t i = 0; i < n; ++i) {
            aug[i][j] = basis[j][i];
            Rational s = 0;
            for (size_t l = 0; l < n; ++l) s += m[i][l] * basis[j][l];
            aug[i][k + j] = s;
        }
    }
    auto piv = rref(aug);
    if (piv.size() != k || (k && piv.back() >= (int)k)) throw std::logic_error("restrict_to: subspace is not invariant");
    QMatrix r(k, std::vector<Rational>(k, 0));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) r[i][j] = aug[i][k + j];
    return r;
}

Rational poly_eval(const std::vector<Rational> &p, const Rational &x) {
    Rational r = 0;
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

// divide by (x - r)
std::vector<Rational> deflate(const std::vector<Rational> &p, const Rational &r) {
    std::vector<Rational> q(p.size() - 1, 0);
    Rational carry = 0;
    for (size_t i = p.size(); i-- > 1;) {
        carry = p[i] + carry * r;
        q[i - 1] = carry;
    }
    return q;
}

QMatrix poly_at(const std::vector<Rational> &p, const QMatrix &m) {
    QMatrix r(m.size(), std::vector<Rational>(m.size(), 0));
    for (size_t i = p.size(); i-- > 0;) {
        r = mul(r, m);
        for (size_t k = 0; k < m.size(); ++k) r[k][k] += p[i];
    }
    return r;
}

}  // namespace

bool commute(const QMatrix &a, const QMatrix &b) { return mul(a, b) == mul(b, a); }

std::vector<Rational> charpoly(const QMatrix &m) {
    // Faddeev-LeVerrier
    int n = (int)m.size();
    std::vector<Rational> c(n + 1, 0);
    c[n] = 1;
    QMatrix M(n, std::vector<Rational>(n, 0));
    for (int k = 1; k <= n; ++k) {
        M = mul(m, M);
        for (int i = 0; i < n; ++i) M[i][i] += c[n - k + 1];
        QMatrix AM = mul(m, M);
        Rational tr = 0;
        for (int i = 0; i < n; ++i) tr += AM[i][i];
        c[n - k] = -tr / k;
    }
    return c;
}

std::string poly_str(const std::vector<Rational> &p) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = p.size(); i-- > 0;) {
        if (p[i] == 0) continue;
        Rational a = abs(p[i]);
        if (!first) os << (p[i] < 0 ? " - " : " + ");
        else if (p[i] < 0) os << "-";
        if (a != 1 || i == 0) os << a.get_str();
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
        first = false;
    }
    return first ? "0" : os.str();
}

QMatrix hecke_matrix(const OrbitComplex &cx, const VoronoiData &v, const HeckeCosets &H, const ReductionOptions &opt, int jobs) {
    int d = cx.h1_rank();
    std::vector<SharblyChain> images(d);
    for (int j = 0; j < d; ++j) images[j] = hecke_apply(H, cx.basis_chain(cx.h1_basis()[j]));
    QMatrix m(d, std::vector<Rational>(d, 0));
    std::vector<std::string> errors(d);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int j; (j = next++) < d;) {
            try {
                SharblyChain r = reduce_1_cycle(v, cx.faces(), images[j], cx.level(), opt);
                auto y = cx.h1_coordinates(cx.to_basis(r));
                for (int i = 0; i < d; ++i) m[i][j] = y[i];
            } catch (const std::exception &e) {
                errors[j] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(1, jobs); ++t) pool.emplace_back(work);
    work();
    for (auto &t : pool) t.join();
    for (auto &e : errors)
        if (!e.empty()) throw std::runtime_error("hecke_matrix " + H.label + ": " + e);
    return m;
}

EigenSystem eigen_decompose(const std::string &level, const std::vector<HeckeCosets> &primes,
                            const std::map<std::string, QMatrix> &matrices) {
    EigenSystem es;
    es.level = level;
    es.matrices = matrices;
    for (auto &H : primes) es.primes.push_back(H.label);
    if (primes.empty()) throw std::invalid_argument("eigen_decompose: no primes");
    const QMatrix &first = matrices.at(primes[0].label);
    int n = (int)first.size();
    es.dim = n;
    for (size_t i = 0; i < primes.size(); ++i)
        for (size_t j = i + 1; j < primes.size(); ++j)
            if (!commute(matrices.at(primes[i].label), matrices.at(primes[j].label)))
                throw std::runtime_error("eigen_decompose: T_" + primes[i].label + " and T_" + primes[j].label + " do not commute");
    if (n == 0) return es;

    // generic combination separates the systems
    QMatrix T(n, std::vector<Rational>(n, 0));
    Rational bound = 0;
    for (size_t k = 0; k < primes.size(); ++k) {
        const QMatrix &M = matrices.at(primes[k].label);
        long w = (long)k * 7 + 1;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) T[i][j] += w * M[i][j];
        bound += w * (primes[k].norm + 1);
    }
    std::vector<Rational> cp = charpoly(T);
    std::vector<std::pair<Rational, int>> roots;
    for (long x = -bound.get_num().get_si(); x <= bound.get_num().get_si(); ++x) {
        int mult = 0;
        while (cp.size() > 1 && poly_eval(cp, x) == 0) {
            cp = deflate(cp, x);
            ++mult;
        }
        if (mult) roots.push_back({x, mult});
    }
    auto describe = [&](const std::vector<std::vector<Rational>> &basis, bool rational) {
        EigenClass cl;
        cl.dim = (int)basis.size();
        cl.rational = rational;
        bool eis = true;
        for (auto &H : primes) {
            QMatrix r = restrict_to(matrices.at(H.label), basis);
            bool scalar = true;
            for (int i = 0; i < cl.dim; ++i)
                for (int j = 0; j < cl.dim; ++j)
                    if (r[i][j] != (i == j ? r[0][0] : Rational(0))) scalar = false;
            if (scalar && rational) {
                cl.eigenvalues[H.label] = r[0][0];
                if (r[0][0] != H.norm + 1) eis = false;
            } else {
                cl.rational = false;
                cl.charpolys[H.label] = charpoly(r);
                eis = false;
            }
        }
        cl.eisenstein = eis && cl.rational;
        if (cl.eisenstein) es.eisenstein_dim += cl.dim;
        es.classes.push_back(cl);
    };
    for (auto &[r, mult] : roots) {
        QMatrix S = shifted(T, r), P = identity(n);
        for (int k = 0; k < mult; ++k) P = mul(P, S);
        describe(kernel(P), true);
    }
    if (cp.size() > 1) describe(kernel(poly_at(cp, T)), false);
    return es;
}

}  // namespace z12
