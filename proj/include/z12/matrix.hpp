#pragma once

#include <optional>
#include <string>

#include "z12/field.hpp"

namespace z12 {

struct Vec2 {
    CycInt x, y;
    bool operator==(const Vec2 &) const = default;
    auto operator<=>(const Vec2 &) const = default;
    bool is_zero() const { return x.is_zero() && y.is_zero(); }
    std::string str() const { return "(" + x.str() + ", " + y.str() + ")"; }
};

inline Vec2 operator*(const CycInt &s, const Vec2 &v) { return {s * v.x, s * v.y}; }
inline Vec2 operator+(const Vec2 &a, const Vec2 &b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(const Vec2 &a, const Vec2 &b) { return {a.x - b.x, a.y - b.y}; }

// [[a, b], [c, d]]
struct Mat2 {
    CycInt a, b, c, d;

    static Mat2 identity() { return {1, 0, 0, 1}; }
    static Mat2 columns(const Vec2 &u, const Vec2 &v) { return {u.x, v.x, u.y, v.y}; }
    bool operator==(const Mat2 &) const = default;
    auto operator<=>(const Mat2 &) const = default;

    CycInt det() const { return a * d - b * c; }
    Mat2 adjugate() const { return {d, -b, -c, a}; }
    Vec2 col0() const { return {a, c}; }
    Vec2 col1() const { return {b, d}; }
    std::string str() const { return "[[" + a.str() + ", " + b.str() + "], [" + c.str() + ", " + d.str() + "]]"; }
};

inline Mat2 operator*(const Mat2 &m, const Mat2 &n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}
inline Vec2 operator*(const Mat2 &m, const Vec2 &v) { return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y}; }

// conjugate transpose
inline Mat2 star(const Mat2 &m) { return {conj(m.a), conj(m.c), conj(m.b), conj(m.d)}; }

// inverse of a matrix with unit determinant
Mat2 inverse_gl2(const Mat2 &m);
// m^-1 * n when integral, otherwise nullopt
std::optional<Mat2> solve_integral(const Mat2 &m, const Mat2 &n);
inline CycInt det2(const Vec2 &u, const Vec2 &v) { return u.x * v.y - u.y * v.x; }

}  // namespace z12
