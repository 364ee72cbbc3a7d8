#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace z12 {

using Rational = mpq_class;

class ArithmeticOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// a0 + a1*t + a2*t^2 + a3*t^3 with t = zeta_12, t^4 = t^2 - 1.
struct CycInt {
    std::array<int64_t, 4> c{};

    CycInt() = default;
    CycInt(int64_t a) : c{a, 0, 0, 0} {}
    CycInt(int64_t a0, int64_t a1, int64_t a2, int64_t a3) : c{a0, a1, a2, a3} {}

    static CycInt t() { return {0, 1, 0, 0}; }
    static CycInt sqrt3() { return {0, 2, 0, -1}; }
    static CycInt zeta_pow(int k);

    int64_t operator[](int i) const { return c[i]; }
    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
    auto operator<=>(const CycInt &) const = default;
    bool operator==(const CycInt &) const = default;

    CycInt operator-() const;
    CycInt &operator+=(const CycInt &o);
    CycInt &operator-=(const CycInt &o);
    CycInt &operator*=(const CycInt &o);
    friend CycInt operator+(CycInt a, const CycInt &b) { return a += b; }
    friend CycInt operator-(CycInt a, const CycInt &b) { return a -= b; }
    friend CycInt operator*(CycInt a, const CycInt &b) { return a *= b; }

    CycInt mul_t() const;
    std::string str() const;
};

// Rational element of F.
struct CycNum {
    std::array<Rational, 4> c;

    CycNum() : c{0, 0, 0, 0} {}
    CycNum(const Rational &a) : c{a, 0, 0, 0} {}
    CycNum(long a) : c{a, 0, 0, 0} {}
    CycNum(Rational a0, Rational a1, Rational a2, Rational a3) : c{a0, a1, a2, a3} {}
    CycNum(const CycInt &x) : c{Rational(x.c[0]), Rational(x.c[1]), Rational(x.c[2]), Rational(x.c[3])} {}

    static CycNum t() { return {0, 1, 0, 0}; }

    bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }
    bool is_integral() const;
    CycInt to_int() const;
    bool operator==(const CycNum &o) const { return c == o.c; }

    CycNum operator-() const;
    CycNum &operator+=(const CycNum &o);
    CycNum &operator-=(const CycNum &o);
    CycNum &operator*=(const CycNum &o);
    friend CycNum operator+(CycNum a, const CycNum &b) { return a += b; }
    friend CycNum operator-(CycNum a, const CycNum &b) { return a -= b; }
    friend CycNum operator*(CycNum a, const CycNum &b) { return a *= b; }
    friend CycNum operator/(const CycNum &a, const CycNum &b);
    CycNum inverse() const;

    std::string str() const;
};

// a + b*sqrt(3), real subfield E.
struct RealQuadNum {
    Rational a, b;

    RealQuadNum() : a(0), b(0) {}
    RealQuadNum(const Rational &x) : a(x), b(0) {}
    RealQuadNum(long x) : a(x), b(0) {}
    RealQuadNum(Rational x, Rational y) : a(std::move(x)), b(std::move(y)) {}

    int sign() const;
    bool is_zero() const { return a == 0 && b == 0; }
    bool operator==(const RealQuadNum &o) const { return a == o.a && b == o.b; }
    std::strong_ordering operator<=>(const RealQuadNum &o) const;

    RealQuadNum operator-() const { return {-a, -b}; }
    RealQuadNum &operator+=(const RealQuadNum &o) { a += o.a; b += o.b; return *this; }
    RealQuadNum &operator-=(const RealQuadNum &o) { a -= o.a; b -= o.b; return *this; }
    RealQuadNum &operator*=(const RealQuadNum &o);
    friend RealQuadNum operator+(RealQuadNum x, const RealQuadNum &y) { return x += y; }
    friend RealQuadNum operator-(RealQuadNum x, const RealQuadNum &y) { return x -= y; }
    friend RealQuadNum operator*(RealQuadNum x, const RealQuadNum &y) { return x *= y; }
    friend RealQuadNum operator/(const RealQuadNum &x, const RealQuadNum &y);
    RealQuadNum conj() const { return {a, -b}; }   // sqrt3 -> -sqrt3
    Rational norm() const { return a * a - 3 * b * b; }
    double to_double() const;
    CycNum to_cyc() const;
    std::string str() const;
};

enum class Embedding { v1, v2 };

// Galois structure
CycInt conj(const CycInt &x);
CycInt sigma(const CycInt &x);
CycNum conj(const CycNum &x);
CycNum sigma(const CycNum &x);

int64_t norm(const CycInt &x);
Rational norm(const CycNum &x);
int64_t trace(const CycInt &x);
Rational trace(const CycNum &x);

bool is_unit(const CycInt &x);
// canonical member of {t^k x : 0 <= k < 12}
CycInt torsion_normalize(const CycInt &x);
int torsion_normalize_power(const CycInt &x);   // the k that achieves it

// x * conj(x) read as an element of E
RealQuadNum abs2(const CycInt &x);
RealQuadNum abs2(const CycNum &x);
// element of E as RealQuadNum; throws if x is not in E
RealQuadNum to_real(const CycNum &x);
// x = alpha + beta*t^3 with alpha, beta in E  (real and imaginary parts under v1)
std::pair<RealQuadNum, RealQuadNum> re_im(const CycNum &x);
CycNum from_re_im(const RealQuadNum &re, const RealQuadNum &im);

// floating point images, heuristics only
std::array<double, 2> embed(const CycNum &x, Embedding v);

// exact division in O, nullopt if b does not divide a
std::optional<CycInt> divide(const CycInt &a, const CycInt &b);
bool divides(const CycInt &b, const CycInt &a);
// a = q*b + r with norm(r) < norm(b)
std::pair<CycInt, CycInt> euclid_div(const CycInt &a, const CycInt &b);
CycInt gcd(CycInt a, CycInt b);
// g = u*a + v*b
std::array<CycInt, 3> xgcd(const CycInt &a, const CycInt &b);
// unit-balanced representative of the ideal (x): fixed under multiplication by units
CycInt canonical_generator(const CycInt &x);
bool associates(const CycInt &a, const CycInt &b);

// "2t^3-3t^2-3t+2" style
CycNum parse_cyc(const std::string &s);
CycInt parse_cyc_int(const std::string &s);

}  // namespace z12
