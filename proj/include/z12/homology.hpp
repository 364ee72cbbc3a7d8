#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "z12/cone.hpp"
#include "z12/ideals.hpp"

namespace z12 {

// ---- sharblies

using VertexList = std::vector<Vec2>;

// sorts canonical vertices; returns the sign of the sorting permutation,
// 0 when the sharbly is degenerate (repeated vertex or all vertices on one line)
int normalize_sharbly(VertexList &v);
int permutation_sign(const std::vector<int> &perm);

class SharblyChain {
public:
    void add(VertexList v, const Rational &c);
    void add(const SharblyChain &o, const Rational &c = 1);
    const std::map<VertexList, Rational> &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    int degree() const;   // k for (k+2)-vertex sharblies, -1 when empty
    SharblyChain boundary() const;
    SharblyChain transformed(const Mat2 &g) const;
    bool operator==(const SharblyChain &o) const { return terms_ == o.terms_; }

private:
    std::map<VertexList, Rational> terms_;
};

// ---- P^1(O/n)

class ProjectiveLine {
public:
    explicit ProjectiveLine(const CycInt &level);
    int size() const { return (int)points_.size(); }
    const CycInt &level() const { return ring_.modulus(); }
    // -1 when (c, d) does not generate the unit ideal modulo n
    int index(const CycInt &c, const CycInt &d) const;
    std::pair<CycInt, CycInt> point(int i) const { return points_[i]; }
    int coset(const Mat2 &h) const { return index(h.c, h.d); }
    int act(int i, const Mat2 &s) const;   // (c : d) * s
    Mat2 lift(int i) const;                // det 1, bottom row congruent to the point
    const ResidueRing &ring() const { return ring_; }

private:
    ResidueRing ring_;
    std::vector<std::pair<CycInt, CycInt>> points_;
    std::vector<int> table_;   // pair index -> point
    mutable std::vector<std::optional<Mat2>> lifts_;
};

// ---- GL2(O)-orbits of pyramid faces

struct Standard {
    VertexList key;            // sorted vertices of the standard representative
    std::vector<Mat2> maps;    // every A (mod torsion scalars) with A * key = input as sets
};
// nullopt when no unimodular vertex pair exists
std::optional<Standard> standardize(const VertexList &v);
// sign of the vertex permutation induced by A * key -> sorted target
int transport_sign(const Mat2 &A, const VertexList &key, const VertexList &target);

struct FaceRef {
    int orbit = -1;
    Mat2 map;        // face = map * rep
    int sign = 1;    // orientation of map * rep against the sorted face
};

struct FaceOrbit {
    VertexList rep;
    std::vector<std::pair<Mat2, int>> stabilizer;   // (s, orientation sign)
    std::vector<std::pair<int, FaceRef>> boundary;  // coefficient, face in the orbit list one degree down
};

struct FaceTables {
    std::vector<FaceOrbit> edges, triangles, cells;
    std::map<VertexList, int> edge_index, triangle_index, cell_index;
    std::string voronoi_version;

    // locate a face of the given degree (0 edge, 1 triangle); nullopt if not totally reduced
    std::optional<FaceRef> locate(const VertexList &sorted, int degree) const;
};

FaceTables build_face_tables(const VoronoiData &v);

// ---- level-n complex

struct OrbitCoordinate {
    int index = -1;   // -1: the element vanishes (orientation-killed)
    int sign = 1;
};

struct SparseVec {
    std::map<int, Rational> e;
    void add(int i, const Rational &c);
    bool empty() const { return e.empty(); }
};

class OrbitComplex {
public:
    OrbitComplex(std::shared_ptr<const FaceTables> faces, const CycInt &level);

    const CycInt &level() const { return p1_.level(); }
    const ProjectiveLine &p1() const { return p1_; }
    const FaceTables &faces() const { return *faces_; }
    int dim(int k) const { return k == 0 ? n0_ : n1_; }
    OrbitCoordinate coord(int degree, int orbit, int point) const;

    // d1 applied to a C1 basis vector, d2 applied to the cell (orbit, point)
    SparseVec d1(int basis) const;
    SparseVec d2(int cell, int point) const;
    // basis element back to an honest sharbly: lift(point) * rep
    VertexList representative(int degree, int basis) const;

    // H1
    int h1_rank() const { return (int)kernel_.size(); }
    int count_killed(int degree) const;
    const std::vector<SparseVec> &h1_basis() const { return kernel_chains_; }
    // coordinates of a C1 cycle (in basis terms) in the H1 basis
    std::vector<Rational> h1_coordinates(const SparseVec &cycle) const;
    // express a totally reduced 1-chain of honest sharblies in C1 basis terms
    SparseVec to_basis(const SharblyChain &c) const;
    SharblyChain basis_chain(const SparseVec &v) const;
    // d1 of an arbitrary C1 vector
    SparseVec boundary1(const SparseVec &v) const;
    void compute_homology();
    int d2_rank() const { return rank_b_; }

private:
    void build_coords(int degree, const std::vector<FaceOrbit> &orbits, std::vector<std::vector<OrbitCoordinate>> &out,
                      std::vector<std::pair<int, int>> &basis, int &count);
    SparseVec project(int col) const;   // C1 basis vector modulo im d2, on free columns

    std::shared_ptr<const FaceTables> faces_;
    ProjectiveLine p1_;
    std::vector<std::vector<OrbitCoordinate>> c0_, c1_;
    std::vector<std::pair<int, int>> b0_, b1_;   // basis -> (orbit, point)
    int n0_ = 0, n1_ = 0;

    // im d2 in reduced echelon form keyed by pivot column
    std::map<int, SparseVec> pivots_;
    std::vector<int> free_;
    std::map<int, int> free_pos_;
    int rank_b_ = 0;
    // kernel of d1 on C1 / im d2, columns over free_ positions, echelon by pivot
    std::vector<std::vector<Rational>> kernel_;
    std::vector<int> kernel_pivot_;
    std::vector<SparseVec> kernel_chains_;
};

}  // namespace z12
