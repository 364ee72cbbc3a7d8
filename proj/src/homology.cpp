#include "z12/homology.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>

namespace z12 {

// ---- sharblies

int permutation_sign(const std::vector<int> &perm) {
    std::vector<bool> seen(perm.size(), false);
    int s = 1;
    for (size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        size_t len = 0;
        for (size_t j = i; !seen[j]; j = perm[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) s = -s;
    }
    return s;
}

int normalize_sharbly(VertexList &v) {
    for (auto &x : v) x = canonical_vertex(x);
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    VertexList s;
    for (int i : idx) s.push_back(v[i]);
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] == s[i - 1]) return 0;
    bool line = true;
    for (size_t i = 1; i < s.size() && line; ++i)
        if (!det2(s[0], s[i]).is_zero()) line = false;
    if (line) return 0;
    int sign = permutation_sign(idx);
    v = std::move(s);
    return sign;
}

void SharblyChain::add(VertexList v, const Rational &c) {
    if (c == 0) return;
    int s = normalize_sharbly(v);
    if (s == 0) return;
    auto &slot = terms_[v];
    slot += s * c;
    if (slot == 0) terms_.erase(v);
}

void SharblyChain::add(const SharblyChain &o, const Rational &c) {
    for (auto &[v, a] : o.terms_) {
        auto &slot = terms_[v];
        slot += a * c;
        if (slot == 0) terms_.erase(v);
    }
}

int SharblyChain::degree() const { return terms_.empty() ? -1 : (int)terms_.begin()->first.size() - 2; }

SharblyChain SharblyChain::boundary() const {
    if (degree() == 0) throw std::domain_error("boundary of a 0-sharbly chain");
    SharblyChain out;
    for (auto &[v, c] : terms_)
        for (size_t i = 0; i < v.size(); ++i) {
            VertexList f;
            for (size_t j = 0; j < v.size(); ++j)
                if (j != i) f.push_back(v[j]);
            out.add(std::move(f), (i % 2 ? -1 : 1) * c);
        }
    return out;
}

SharblyChain SharblyChain::transformed(const Mat2 &g) const {
    SharblyChain out;
    for (auto &[v, c] : terms_) {
        VertexList w;
        for (auto &x : v) w.push_back(g * x);
        out.add(std::move(w), c);
    }
    return out;
}

// ---- P^1(O/n)

ProjectiveLine::ProjectiveLine(const CycInt &level) : ring_(level) {
    const int64_t N = ring_.size();
    if (N > 4096) throw std::domain_error("ProjectiveLine: level norm too large for the table");
    std::vector<CycInt> elems(N), units;
    for (int64_t i = 0; i < N; ++i) {
        elems[i] = ring_.element(i);
        if (ring_.is_unit(elems[i])) units.push_back(elems[i]);
    }
    table_.assign(N * N, -1);
    std::vector<char> prim(N * N, 0);
    for (int64_t i = 0; i < N; ++i)
        for (int64_t j = 0; j < N; ++j) {
            CycInt g = gcd(gcd(elems[i], elems[j]), level);
            prim[i * N + j] = is_unit(g) || N == 1;
        }
    for (int64_t k = 0; k < N * N; ++k) {
        if (!prim[k] || table_[k] >= 0) continue;
        int id = (int)points_.size();
        const CycInt &c = elems[k / N], &d = elems[k % N];
        points_.push_back({c, d});
        for (auto &u : units) table_[ring_.index(u * c) * N + ring_.index(u * d)] = id;
        if (N == 1) table_[k] = id;
    }
    lifts_.resize(points_.size());
}

int ProjectiveLine::index(const CycInt &c, const CycInt &d) const {
    const int64_t N = ring_.size();
    return table_[ring_.index(c) * N + ring_.index(d)];
}

int ProjectiveLine::act(int i, const Mat2 &s) const {
    auto [c, d] = points_[i];
    return index(c * s.a + d * s.c, c * s.b + d * s.d);
}

Mat2 ProjectiveLine::lift(int i) const {
    if (lifts_[i]) return *lifts_[i];
    auto [c, d] = points_[i];
    const CycInt &n = level();
    std::vector<CycInt> shifts{0};
    for (int r = 1; r <= 2; ++r)
        for (int k = 0; k < 12; ++k) shifts.push_back(CycInt(r) * CycInt::zeta_pow(k));
    for (int k = 0; k < 12; ++k) shifts.push_back(CycInt(1) + CycInt::zeta_pow(k));
    for (auto &m1 : shifts)
        for (auto &m2 : shifts) {
            CycInt c1 = c + m1 * n, d1 = d + m2 * n;
            auto [g, u, v] = xgcd(c1, d1);
            if (!is_unit(g)) continue;
            CycInt gi = *divide(CycInt(1), g);
            Mat2 h{v * gi, -(u * gi), c1, d1};
            if (h.det() != CycInt(1)) throw std::logic_error("lift: determinant");
            lifts_[i] = h;
            return h;
        }
    throw std::runtime_error("ProjectiveLine::lift: no coprime lift found");
}

// ---- standardization

int transport_sign(const Mat2 &A, const VertexList &key, const VertexList &target) {
    std::vector<int> perm;
    for (auto &k : key) {
        Vec2 w = torsion_normalize(A * k);
        auto it = std::lower_bound(target.begin(), target.end(), w);
        if (it == target.end() || !(*it == w)) throw std::logic_error("transport_sign: vertex sets differ");
        perm.push_back((int)(it - target.begin()));
    }
    return permutation_sign(perm);
}

std::optional<Standard> standardize(const VertexList &v) {
    std::optional<Standard> best;
    for (size_t i = 0; i < v.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) {
            if (i == j || !is_unit(det2(v[i], v[j]))) continue;
            for (int a = 0; a < 12; ++a) {
                Mat2 A = Mat2::columns(v[i], CycInt::zeta_pow(a) * v[j]);
                Mat2 Ai = inverse_gl2(A);
                VertexList img;
                for (auto &x : v) img.push_back(torsion_normalize(Ai * x));
                std::sort(img.begin(), img.end());
                if (!best || img < best->key) {
                    best = Standard{img, {A}};
                } else if (img == best->key) {
                    best->maps.push_back(A);
                }
            }
        }
    return best;
}

std::optional<FaceRef> FaceTables::locate(const VertexList &sorted, int degree) const {
    const auto &index = degree == 0 ? edge_index : triangle_index;
    const auto &orbits = degree == 0 ? edges : triangles;
    if (degree == 0 && !is_unit(det2(sorted[0], sorted[1]))) return std::nullopt;
    auto st = standardize(sorted);
    if (!st) return std::nullopt;
    auto it = index.find(st->key);
    if (it == index.end()) return std::nullopt;
    FaceRef r;
    r.orbit = it->second;
    r.map = st->maps.front();
    r.sign = transport_sign(r.map, orbits[r.orbit].rep, sorted);
    return r;
}

namespace {

int add_orbit(const VertexList &face, std::vector<FaceOrbit> &orbits, std::map<VertexList, int> &index) {
    auto st = standardize(face);
    if (!st) throw std::logic_error("pyramid face without a unimodular pair");
    auto it = index.find(st->key);
    if (it != index.end()) return it->second;
    FaceOrbit o;
    o.rep = st->key;
    auto self = standardize(o.rep);
    for (auto &A : self->maps) o.stabilizer.push_back({A, transport_sign(A, o.rep, o.rep)});
    int id = (int)orbits.size();
    orbits.push_back(std::move(o));
    index[st->key] = id;
    return id;
}

// oriented triangulation of a 3-dimensional cell by pulling its first vertex
SharblyChain cell_chain(const VertexList &cell, const std::vector<VertexList> &triangles) {
    if (cell.size() == 4) {
        SharblyChain c;
        c.add(cell, 1);
        return c;
    }
    std::vector<ConePoint> q;
    for (auto &v : cell) q.push_back(q_point(v));
    // coordinates of the 4-dimensional span: pivot columns of the q-matrix
    std::vector<std::vector<Real>> m;
    for (auto &p : q) m.push_back(std::vector<Real>(p.c.begin(), p.c.end()));
    std::vector<int> cols;
    {
        auto t = m;
        size_t r = 0;
        for (int c = 0; c < 8 && r < t.size(); ++c) {
            size_t p = r;
            while (p < t.size() && t[p][c].is_zero()) ++p;
            if (p == t.size()) continue;
            std::swap(t[p], t[r]);
            for (size_t i = r + 1; i < t.size(); ++i) {
                if (t[i][c].is_zero()) continue;
                Real f = t[i][c] / t[r][c];
                for (int k = c; k < 8; ++k) t[i][k] -= f * t[r][k];
            }
            cols.push_back(c);
            ++r;
        }
    }
    if (cols.size() != 4) throw std::logic_error("cell_chain: cell is not 3-dimensional");
    auto det4 = [&](const std::vector<int> &rows) {
        std::vector<std::vector<Real>> a(4, std::vector<Real>(4));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a[i][j] = m[rows[i]][cols[j]];
        Real det(1);
        for (int c = 0; c < 4; ++c) {
            int p = c;
            while (p < 4 && a[p][c].is_zero()) ++p;
            if (p == 4) return Real(0);
            if (p != c) {
                std::swap(a[p], a[c]);
                det = -det;
            }
            det *= a[c][c];
            for (int i = c + 1; i < 4; ++i) {
                Real f = a[i][c] / a[c][c];
                for (int k = c; k < 4; ++k) a[i][k] -= f * a[c][k];
            }
        }
        return det;
    };
    SharblyChain c;
    for (auto &t : triangles) {
        if (std::find(t.begin(), t.end(), cell[0]) != t.end()) continue;
        std::vector<int> rows{0};
        for (auto &x : t) rows.push_back((int)(std::find(cell.begin(), cell.end(), x) - cell.begin()));
        int s = det4(rows).sign();
        if (s == 0) throw std::logic_error("cell_chain: flat simplex");
        VertexList simplex{cell[0], t[0], t[1], t[2]};
        c.add(simplex, s);
    }
    return c;
}

}  // namespace

FaceTables build_face_tables(const VoronoiData &v) {
    FaceTables T;
    T.voronoi_version = v.version;
    for (auto &F : v.forms) {
        auto verts = [&](const std::vector<int> &idx) {
            VertexList out;
            for (int i : idx) out.push_back(F.minvecs[i]);
            return out;
        };
        auto e = pyramid_faces(F, 1), t = pyramid_faces(F, 2), c = pyramid_faces(F, 3);
        for (auto &x : e) {
            VertexList ev = verts(x);
            // two minimal vectors on one F-line give a degenerate edge
            if (det2(ev[0], ev[1]).is_zero()) continue;
            add_orbit(ev, T.edges, T.edge_index);
        }
        for (auto &x : t) add_orbit(verts(x), T.triangles, T.triangle_index);
        for (auto &x : c) {
            VertexList cell = verts(x);
            auto st = standardize(cell);
            if (!st) throw std::logic_error("cell without a unimodular pair");
            if (T.cell_index.count(st->key)) continue;
            FaceOrbit o;
            o.rep = st->key;
            T.cell_index[o.rep] = (int)T.cells.size();
            // boundary triangles of the cell are the pyramid triangles inside it
            std::vector<VertexList> inside;
            for (auto &y : t)
                if (std::includes(x.begin(), x.end(), y.begin(), y.end())) {
                    VertexList tri = verts(y);
                    VertexList img;
                    Mat2 Ai = inverse_gl2(st->maps.front());
                    for (auto &w : tri) img.push_back(torsion_normalize(Ai * w));
                    std::sort(img.begin(), img.end());
                    inside.push_back(img);
                }
            SharblyChain ch = cell_chain(o.rep, inside);
            SharblyChain bd = ch.boundary();
            for (auto &[tri, coef] : bd.terms()) {
                auto ref = T.locate(tri, 1);
                if (!ref) throw std::logic_error("cell boundary leaves the totally reduced complex");
                o.boundary.push_back({(int)coef.get_num().get_si(), *ref});
            }
            T.cells.push_back(std::move(o));
        }
    }
    for (auto &o : T.triangles)
        for (size_t i = 0; i < 3; ++i) {
            VertexList f;
            for (size_t j = 0; j < 3; ++j)
                if (j != i) f.push_back(o.rep[j]);
            if (det2(f[0], f[1]).is_zero()) continue;
            auto ref = T.locate(f, 0);
            if (!ref) throw std::logic_error("triangle edge is not totally reduced");
            o.boundary.push_back({i % 2 ? -1 : 1, *ref});
        }
    return T;
}

// ---- OrbitComplex

void SparseVec::add(int i, const Rational &c) {
    if (c == 0) return;
    auto &s = e[i];
    s += c;
    if (s == 0) e.erase(i);
}

OrbitComplex::OrbitComplex(std::shared_ptr<const FaceTables> faces, const CycInt &level)
    : faces_(std::move(faces)), p1_(level) {
    build_coords(0, faces_->edges, c0_, b0_, n0_);
    build_coords(1, faces_->triangles, c1_, b1_, n1_);
}

void OrbitComplex::build_coords(int, const std::vector<FaceOrbit> &orbits, std::vector<std::vector<OrbitCoordinate>> &out,
                                std::vector<std::pair<int, int>> &basis, int &count) {
    const int P = p1_.size();
    out.assign(orbits.size(), std::vector<OrbitCoordinate>(P));
    for (size_t o = 0; o < orbits.size(); ++o) {
        std::vector<int> val(P, 0);
        for (int x0 = 0; x0 < P; ++x0) {
            if (val[x0] != 0) continue;
            std::vector<int> members{x0};
            val[x0] = 1;
            bool killed = false;
            for (size_t k = 0; k < members.size(); ++k) {
                int x = members[k];
                for (auto &[s, eps] : orbits[o].stabilizer) {
                    // (rep, x s) = eps (rep, x)
                    int y = p1_.act(x, s);
                    int vy = eps * val[x];
                    if (val[y] == 0) {
                        val[y] = vy;
                        members.push_back(y);
                    } else if (val[y] != vy) {
                        killed = true;
                    }
                }
            }
            int id = killed ? -1 : count++;
            if (!killed) basis.push_back({(int)o, x0});
            for (int x : members) out[o][x] = {id, killed ? 1 : val[x]};
        }
    }
}

OrbitCoordinate OrbitComplex::coord(int degree, int orbit, int point) const {
    return degree == 0 ? c0_[orbit][point] : c1_[orbit][point];
}

int OrbitComplex::count_killed(int degree) const {
    int n = 0;
    for (auto &row : degree == 0 ? c0_ : c1_)
        for (auto &c : row) n += c.index < 0;
    return n;
}

SparseVec OrbitComplex::d1(int b) const {
    auto [o, x] = b1_[b];
    SparseVec r;
    for (auto &[coef, f] : faces_->triangles[o].boundary) {
        int y = p1_.act(x, f.map);
        auto c = c0_[f.orbit][y];
        if (c.index >= 0) r.add(c.index, coef * f.sign * c.sign);
    }
    return r;
}

SparseVec OrbitComplex::d2(int cell, int x) const {
    SparseVec r;
    for (auto &[coef, f] : faces_->cells[cell].boundary) {
        int y = p1_.act(x, f.map);
        auto c = c1_[f.orbit][y];
        if (c.index >= 0) r.add(c.index, coef * f.sign * c.sign);
    }
    return r;
}

SparseVec OrbitComplex::boundary1(const SparseVec &v) const {
    SparseVec r;
    for (auto &[b, c] : v.e)
        for (auto &[i, a] : d1(b).e) r.add(i, a * c);
    return r;
}

VertexList OrbitComplex::representative(int degree, int b) const {
    auto [o, x] = degree == 0 ? b0_[b] : b1_[b];
    const auto &rep = degree == 0 ? faces_->edges[o].rep : faces_->triangles[o].rep;
    Mat2 h = p1_.lift(x);
    VertexList v;
    for (auto &u : rep) v.push_back(h * u);
    return v;
}

void OrbitComplex::compute_homology() {
    pivots_.clear();
    // im d2 in row echelon form, pivot = smallest column; short rows first
    std::vector<SparseVec> rows;
    for (size_t c = 0; c < faces_->cells.size(); ++c)
        for (int x = 0; x < p1_.size(); ++x) {
            SparseVec r = d2((int)c, x);
            if (!r.empty()) rows.push_back(std::move(r));
        }
    std::stable_sort(rows.begin(), rows.end(), [](const SparseVec &a, const SparseVec &b) { return a.e.size() < b.e.size(); });
    // reduced echelon: pivot rows only mention non-pivot columns besides their own
    std::map<int, std::set<int>> uses;   // non-pivot column -> pivot rows mentioning it
    std::set<std::map<int, Rational>> seen;
    for (auto &r : rows) {
        if (!seen.insert(r.e).second) continue;
        SparseVec red;
        for (auto &[k, a] : r.e) {
            auto it = pivots_.find(k);
            if (it == pivots_.end()) {
                red.add(k, a);
                continue;
            }
            for (auto &[j, b] : it->second.e)
                if (j != k) red.add(j, -a * b);
        }
        if (red.empty()) continue;
        // pivot: the column used by the fewest existing rows, ties to the larger index
        int col = -1;
        size_t best = SIZE_MAX;
        for (auto &[k, a] : red.e) {
            auto u = uses.find(k);
            size_t n = u == uses.end() ? 0 : u->second.size();
            if (n <= best) {
                best = n;
                col = k;
            }
        }
        Rational inv = 1 / red.e.at(col);
        for (auto &[k, a] : red.e) a *= inv;
        // eliminate col from the rows that mention it
        auto u = uses.find(col);
        if (u != uses.end()) {
            for (int pr : u->second) {
                SparseVec &row = pivots_.at(pr);
                Rational f = row.e.at(col);
                for (auto &[k, a] : red.e) {
                    if (k == col) continue;
                    bool had = row.e.count(k);
                    row.add(k, -f * a);
                    bool has = row.e.count(k);
                    if (!had && has) uses[k].insert(pr);
                    if (had && !has) uses[k].erase(pr);
                }
                row.e.erase(col);
            }
            uses.erase(u);
        }
        for (auto &[k, a] : red.e)
            if (k != col) uses[k].insert(col);
        // stored with pivot entry 1: col + sum a_k k = 0 after negation below
        pivots_.emplace(col, std::move(red));
    }
    rank_b_ = (int)pivots_.size();
    free_.clear();
    free_pos_.clear();
    for (int j = 0; j < n1_; ++j)
        if (!pivots_.count(j)) {
            free_pos_[j] = (int)free_.size();
            free_.push_back(j);
        }
    // d1 on the free generators
    const int nf = (int)free_.size();
    std::vector<std::vector<Rational>> D(n0_, std::vector<Rational>(nf));
    for (int j = 0; j < nf; ++j)
        for (auto &[i, a] : d1(free_[j]).e) D[i][j] = a;
    // reduced row echelon of D
    std::vector<int> piv;
    size_t r = 0;
    for (int c = 0; c < nf && r < D.size(); ++c) {
        size_t p = r;
        while (p < D.size() && D[p][c] == 0) ++p;
        if (p == D.size()) continue;
        std::swap(D[p], D[r]);
        Rational inv = 1 / D[r][c];
        for (int k = c; k < nf; ++k) D[r][k] *= inv;
        for (size_t i = 0; i < D.size(); ++i) {
            if (i == r || D[i][c] == 0) continue;
            Rational f = D[i][c];
            for (int k = c; k < nf; ++k)
                if (D[r][k] != 0) D[i][k] -= f * D[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    std::vector<bool> is_piv(nf, false);
    for (int c : piv) is_piv[c] = true;
    kernel_.clear();
    kernel_pivot_.clear();
    kernel_chains_.clear();
    for (int j = 0; j < nf; ++j) {
        if (is_piv[j]) continue;
        std::vector<Rational> k(nf);
        k[j] = 1;
        for (size_t rr = 0; rr < piv.size(); ++rr) k[piv[rr]] = -D[rr][j];
        SparseVec chain;
        for (int i = 0; i < nf; ++i) chain.add(free_[i], k[i]);
        kernel_.push_back(std::move(k));
        kernel_pivot_.push_back(j);
        kernel_chains_.push_back(std::move(chain));
    }
}

SparseVec OrbitComplex::project(int col) const {
    SparseVec v;
    auto f = free_pos_.find(col);
    if (f != free_pos_.end()) {
        v.add(f->second, 1);
        return v;
    }
    // col + sum a_k k = 0 with every other k free
    for (auto &[k, a] : pivots_.at(col).e)
        if (k != col) v.add(free_pos_.at(k), -a);
    return v;
}

std::vector<Rational> OrbitComplex::h1_coordinates(const SparseVec &cycle) const {
    std::vector<Rational> y(free_.size());
    for (auto &[col, c] : cycle.e)
        for (auto &[i, b] : project(col).e) y[i] += c * b;
    // y lies in the kernel: its entries at the kernel's free positions are the coordinates
    std::vector<Rational> out;
    for (size_t k = 0; k < kernel_.size(); ++k) out.push_back(y[kernel_pivot_[k]]);
    // exactness check: y equals the combination of kernel vectors
    for (size_t i = 0; i < y.size(); ++i) {
        Rational s = 0;
        for (size_t k = 0; k < kernel_.size(); ++k) s += out[k] * kernel_[k][i];
        if (s != y[i]) throw std::domain_error("h1_coordinates: chain is not a cycle");
    }
    return out;
}

SparseVec OrbitComplex::to_basis(const SharblyChain &c) const {
    SparseVec out;
    for (auto &[v, a] : c.terms()) {
        auto ref = faces_->locate(v, 1);
        if (!ref) throw std::domain_error("to_basis: sharbly is not totally reduced");
        int x = p1_.coset(ref->map);
        auto cc = c1_[ref->orbit][x];
        if (cc.index >= 0) out.add(cc.index, a * ref->sign * cc.sign);
    }
    return out;
}

SharblyChain OrbitComplex::basis_chain(const SparseVec &v) const {
    SharblyChain c;
    for (auto &[b, a] : v.e) c.add(representative(1, b), a);
    return c;
}

}  // namespace z12
