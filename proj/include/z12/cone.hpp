#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "z12/field.hpp"
#include "z12/matrix.hpp"

namespace z12 {

using Real = RealQuadNum;

// Point of Herm2(C) x Herm2(C). Coordinates (a1, d1, x1, y1, a2, d2, x2, y2):
// component i is [[a_i, x_i + y_i*i], [conj, d_i]]. Component 2 stores the
// sigma-image of the v2 matrix so that every coordinate is read through v1.
struct ConePoint {
    std::array<Real, 8> c;

    static ConePoint identity();
    static ConePoint from_hermitian(const std::array<CycNum, 3> &h1, const std::array<CycNum, 3> &h2);
    // (a, d, b) over F for component i in {0, 1}
    std::array<CycNum, 3> hermitian(int i) const;

    bool operator==(const ConePoint &o) const { return c == o.c; }
    // serialized order on (rational, sqrt3) pairs, used only for tie-breaking
    bool key_less(const ConePoint &o) const;

    ConePoint &operator+=(const ConePoint &o);
    ConePoint &operator-=(const ConePoint &o);
    ConePoint &operator*=(const Real &s);
    friend ConePoint operator+(ConePoint a, const ConePoint &b) { return a += b; }
    friend ConePoint operator-(ConePoint a, const ConePoint &b) { return a -= b; }
    friend ConePoint operator*(const Real &s, ConePoint a) { return a *= s; }
    std::string str() const;
};

// <P, Q> = 2 Tr(P1 Q1 + P2 Q2)
Real inner(const ConePoint &p, const ConePoint &q);
ConePoint q_point(const Vec2 &x);
// h.P = h P h* with sigma(h) on the second component; <h.P, q(x)> = <P, q(h* x)>
ConePoint act(const Mat2 &h, const ConePoint &p);
bool is_positive_definite(const ConePoint &p);

// primitive, torsion-normalized representative of the F-line direction of x
Vec2 torsion_normalize(const Vec2 &x);
Vec2 canonical_vertex(const Vec2 &x);

struct ShortVectors {
    Real minimum;
    std::vector<Vec2> vectors;   // torsion-normalized, sorted
};

// all x (mod torsion) with <P, q(x)> <= bound; P positive definite
std::vector<std::pair<Vec2, Real>> short_vectors(const ConePoint &p, const Real &bound);
ShortVectors minimum_and_minvecs(const ConePoint &p);
int rank_of(const std::vector<ConePoint> &pts);
bool is_perfect(const ConePoint &p);

struct Facet {
    std::vector<int> vertices;   // indices into the minimal vectors
    ConePoint normal;            // <normal, q(v)> >= 0 on the pyramid, = 0 on the facet
    int neighbor = -1;           // class of the form across the facet
    Mat2 transport;              // M(neighbor form) = transport * M(class rep)
};

struct PerfectForm {
    ConePoint form;
    std::vector<Vec2> minvecs;
    std::vector<Facet> facets;
    std::vector<Mat2> stabilizer;   // h with h M = M, scalars included
};

// facets of cone{q(v)} by exact double description
std::vector<Facet> pyramid_facets(const std::vector<Vec2> &minvecs);

PerfectForm make_perfect_form(const ConePoint &p);
PerfectForm find_initial_perfect_form(int max_iters = 64);
// Phi + rho D across a facet; the result is perfect with minimum 1
ConePoint neighbor(const PerfectForm &f, const Facet &facet, int max_iters = 200);

// h in GL2(O) with h M(a) = M(b) mod torsion; the form map is g = (h*)^-1
std::optional<Mat2> minvec_transport(const PerfectForm &a, const PerfectForm &b);
std::optional<Mat2> forms_equivalent(const PerfectForm &a, const PerfectForm &b);
std::vector<Mat2> stabilizer_of(const PerfectForm &a);

struct VoronoiData {
    std::vector<PerfectForm> forms;
    std::string version;
};

VoronoiData enumerate_perfect_forms(int max_forms = 200);
// cached at dir/perfect_forms.json when dir is nonempty
VoronoiData load_or_enumerate(const std::string &cache_dir);
std::string voronoi_to_json(const VoronoiData &v);
VoronoiData voronoi_from_json(const std::string &text);
extern const char *const kVoronoiFormat;

struct PyramidHit {
    int cls = -1;
    Mat2 h;                        // pyramid = h . pyramid(class rep)
    std::vector<Vec2> vertices;    // h * minvecs
    std::vector<int> face;         // indices of the smallest face containing P
    int steps = 0;
};

PyramidHit containing_pyramid(const VoronoiData &v, const ConePoint &p, int max_steps = 10000);

// faces of dimension k (k+1 = rank of the vertex set) as sorted index sets
std::vector<std::vector<int>> pyramid_faces(const PerfectForm &f, int dim);

}  // namespace z12
