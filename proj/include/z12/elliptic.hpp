#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "z12/ideals.hpp"

namespace z12 {

enum class BaseField { F, QSqrt3, QSqrtMinus1, QSqrtMinus3 };

std::string base_field_name(BaseField b);
BaseField parse_base_field(const std::string &s);
// discriminant of the quadratic subfield (12, -4, -3); 0 for F itself
int subfield_discriminant(BaseField b);
// sqrt(d) as an element of O, for the embedding of the subfield used by the curve fixtures:
// t -> -t applied to 2t - t^3, t^3, 2t^2 - 1
CycInt subfield_sqrt(BaseField b);

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, coefficients embedded in F
struct CurveModel {
    BaseField base = BaseField::F;
    std::array<CycNum, 5> a;   // a1, a2, a3, a4, a6
    std::string label;

    std::array<CycNum, 4> b_invariants() const;   // b2, b4, b6, b8
};

CycNum discriminant(const CurveModel &E);
// apply t -> -t to every coefficient; for a subfield curve this is the other embedding of the subfield
CurveModel other_embedding(const CurveModel &E);
CurveModel scale_model(const CurveModel &E, const CycNum &u);   // x -> u^2 x, y -> u^3 y

class BadReduction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LocalCurveData {
    std::string prime;
    bool good = false;
    int64_t norm = 0;       // norm of the prime counted over
    int64_t count = 0;
    int64_t a = 0;
};

// reduction of the model over a residue field; throws BadReduction
struct ReducedCurve {
    GF k;
    std::array<GF::El, 5> a;
};
bool has_good_reduction(const CurveModel &E, const ResidueField &rf);
ReducedCurve reduce_curve(const CurveModel &E, const ResidueField &rf);
// the same curve viewed over the prime subfield GF(p); coefficients must lie there
ReducedCurve restrict_to_prime_field(const ReducedCurve &c);

int64_t count_points(const ReducedCurve &c);              // full (x, y) sweep
int64_t count_points_character(const ReducedCurve &c);    // odd characteristic only
int64_t count_points(const CurveModel &E, const ResidueField &rf);

int64_t a_P(const CurveModel &E, const PrimeIdealRecord &P);
LocalCurveData local_data(const CurveModel &E, const PrimeIdealRecord &P);

// residue degree of the prime of the subfield lying under a prime above p
int subfield_residue_degree(BaseField b, int64_t p);
// a_P for the base change to F of a curve defined over a subfield
LocalCurveData base_change_local_data(const CurveModel &E, const PrimeIdealRecord &P);

int64_t base_change_a(int64_t aq, int64_t q_norm, bool splits);
int64_t twisted_eisenstein(int64_t norm, int chi);

enum class ResidualImage { trivial, C2, C3, S3 };
std::string residual_image_name(ResidualImage r);
struct ResidualImageReport {
    ResidualImage raw = ResidualImage::S3;
    ResidualImage semisimple = ResidualImage::S3;   // C2 collapses to trivial
    std::vector<CycInt> two_torsion_x;   // roots of the scaled 2-division cubic
    CycInt cubic_discriminant;
    bool discriminant_is_square = false;
};
ResidualImageReport residual_image(const CurveModel &E);

// exact roots in O of a monic cubic with coefficients in O (c0 + c1 x + c2 x^2 + x^3)
std::vector<CycInt> cubic_roots_in_O(const std::array<CycInt, 3> &c);
std::optional<CycInt> sqrt_in_O(const CycInt &x);

// fixture loading
struct CurveFixtures {
    std::map<std::string, CurveModel> over_F;
    std::map<std::string, CurveModel> over_subfield;
};
CurveFixtures load_curve_fixtures(const std::string &path);

}  // namespace z12
