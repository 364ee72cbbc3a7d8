#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "z12/cone.hpp"
#include "z12/homology.hpp"

namespace z12 {

struct HeckeCosets {
    std::string label;
    CycInt nu;                 // generator of the prime
    int64_t norm = 0;
    std::vector<Mat2> reps;    // Gamma0(n) g_i, disjoint
};

// [[1, r], [0, nu]] over O/P, then [[nu, 0], [0, 1]]; throws if P divides n
HeckeCosets coset_reps(const PrimeIdealRecord &P, const CycInt &level);
SharblyChain hecke_apply(const HeckeCosets &H, const SharblyChain &c);

struct SizePair {
    Real N;          // <Phi, barycenter> for the pyramid containing the barycenter
    int64_t n = 0;   // |Norm det| (max over edges for 1-sharblies)
};
int64_t norm_size(const VertexList &u);
SizePair size_of(const VoronoiData &v, const VertexList &u);

// gamma in Gamma0(n) with gamma e = f up to torsion on each vertex; reversed set when
// gamma swaps the two vertices
std::optional<Mat2> gamma0_equivalent(const VertexList &e, const VertexList &f, const CycInt &level, bool *reversed = nullptr);

// a point x with max n([u1, x], [x, u2]) < n(u); pyramid candidates first, then the Euclidean one
Vec2 reducing_point(const VoronoiData &v, const VertexList &edge);

// replaces u by totally reduced parts; filling receives a 1-chain with u + d(filling) = result
SharblyChain reduce_0_sharbly(const VoronoiData &v, const VertexList &u, SharblyChain *filling = nullptr, int max_iters = 10000);

struct ReductionOptions {
    int max_iters = 200;
    bool check_boundaries = true;   // exact check that every step adds a boundary
    bool reverse_order = false;     // process edges in reverse order (test hook)
};

struct ReductionLog {
    int passes = 0;
    int subdivided = 0;        // 1-sharblies replaced
    int exceptional = 0;       // all edges reduced, triangle not a face
    int edge_classes = 0;      // Gamma0(n) classes of edges that needed a point
    int antisymmetric = 0;     // classes reversed by Gamma0(n), points averaged
    std::vector<int64_t> max_n;   // max n over the support after each pass
};

// xi must be a cycle in the Gamma0(n)-coinvariants
SharblyChain reduce_1_cycle(const VoronoiData &v, const FaceTables &faces, const SharblyChain &xi, const CycInt &level,
                            const ReductionOptions &opt = {}, ReductionLog *log = nullptr);

// ---- eigen systems

using QMatrix = std::vector<std::vector<Rational>>;

QMatrix hecke_matrix(const OrbitComplex &cx, const VoronoiData &v, const HeckeCosets &H, const ReductionOptions &opt = {},
                     int jobs = 1);
bool commute(const QMatrix &a, const QMatrix &b);
std::vector<Rational> charpoly(const QMatrix &m);   // monic, low to high
std::string poly_str(const std::vector<Rational> &p);

struct EigenClass {
    int dim = 0;
    bool eisenstein = false;
    bool rational = true;
    std::map<std::string, Rational> eigenvalues;                  // rational classes
    std::map<std::string, std::vector<Rational>> charpolys;       // otherwise
};

struct EigenSystem {
    std::string level;
    int dim = 0;
    std::vector<std::string> primes;
    std::map<std::string, QMatrix> matrices;
    std::vector<EigenClass> classes;
    int eisenstein_dim = 0;
};

EigenSystem eigen_decompose(const std::string &level, const std::vector<HeckeCosets> &primes,
                            const std::map<std::string, QMatrix> &matrices);

}  // namespace z12
