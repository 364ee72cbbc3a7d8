#include "z12/matrix.hpp"

#include <stdexcept>

namespace z12 {

Mat2 inverse_gl2(const Mat2 &m) {
    CycInt d = m.det();
    auto inv = divide(CycInt(1), d);
    if (!inv) throw std::domain_error("matrix not in GL2(O): det " + d.str());
    Mat2 a = m.adjugate();
    return {a.a * *inv, a.b * *inv, a.c * *inv, a.d * *inv};
}

std::optional<Mat2> solve_integral(const Mat2 &m, const Mat2 &n) {
    CycInt d = m.det();
    if (d.is_zero()) return std::nullopt;
    Mat2 p = m.adjugate() * n;
    auto a = divide(p.a, d), b = divide(p.b, d), c = divide(p.c, d), e = divide(p.d, d);
    if (!a || !b || !c || !e) return std::nullopt;
    return Mat2{*a, *b, *c, *e};
}

}  // namespace z12
