#include "z12/field.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace z12 {

namespace {

using i128 = __int128;

int64_t narrow(i128 v) {
    if (v > std::numeric_limits<int64_t>::max() || v < std::numeric_limits<int64_t>::min())
        throw ArithmeticOverflow("cyclotomic integer coefficient overflow");
    return static_cast<int64_t>(v);
}

// reduce a degree-6 product via t^4 = t^2 - 1, t^5 = t^3 - t, t^6 = -1
template <class T>
std::array<T, 4> fold(const std::array<T, 7> &p) {
    return {p[0] - p[4] - p[6], p[1] - p[5], p[2] + p[4], p[3] + p[5]};
}

template <class T>
std::string poly_str(const std::array<T, 4> &c) {
    std::ostringstream os;
    bool first = true;
    for (int k = 3; k >= 0; --k) {
        if (c[k] == 0) continue;
        T a = c[k];
        bool neg = a < 0;
        if (neg) a = -a;
        if (neg) os << "-";
        else if (!first) os << "+";
        if (k == 0 || a != 1) os << a;
        if (k >= 1) os << "t";
        if (k >= 2) os << "^" << k;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace

// ---- CycInt

CycInt CycInt::zeta_pow(int k) {
    k = ((k % 12) + 12) % 12;
    CycInt r(1);
    for (int i = 0; i < k; ++i) r = r.mul_t();
    return r;
}

CycInt CycInt::operator-() const { return {narrow(-(i128)c[0]), narrow(-(i128)c[1]), narrow(-(i128)c[2]), narrow(-(i128)c[3])}; }

CycInt &CycInt::operator+=(const CycInt &o) {
    for (int i = 0; i < 4; ++i) c[i] = narrow((i128)c[i] + o.c[i]);
    return *this;
}

CycInt &CycInt::operator-=(const CycInt &o) {
    for (int i = 0; i < 4; ++i) c[i] = narrow((i128)c[i] - o.c[i]);
    return *this;
}

CycInt &CycInt::operator*=(const CycInt &o) {
    std::array<i128, 7> p{};
    for (int i = 0; i < 4; ++i)
        if (c[i])
            for (int j = 0; j < 4; ++j) p[i + j] += (i128)c[i] * o.c[j];
    auto r = fold(p);
    for (int i = 0; i < 4; ++i) c[i] = narrow(r[i]);
    return *this;
}

CycInt CycInt::mul_t() const { return {narrow(-(i128)c[3]), c[0], narrow((i128)c[1] + c[3]), c[2]}; }

std::string CycInt::str() const { return poly_str(c); }

// ---- CycNum

bool CycNum::is_integral() const {
    for (auto &x : c)
        if (x.get_den() != 1) return false;
    return true;
}

CycInt CycNum::to_int() const {
    if (!is_integral()) throw std::domain_error("element is not integral: " + str());
    CycInt r;
    for (int i = 0; i < 4; ++i) {
        if (!c[i].get_num().fits_slong_p()) throw ArithmeticOverflow("coefficient too large for machine integer");
        r.c[i] = c[i].get_num().get_si();
    }
    return r;
}

CycNum CycNum::operator-() const { return {-c[0], -c[1], -c[2], -c[3]}; }

CycNum &CycNum::operator+=(const CycNum &o) {
    for (int i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
}

CycNum &CycNum::operator-=(const CycNum &o) {
    for (int i = 0; i < 4; ++i) c[i] -= o.c[i];
    return *this;
}

CycNum &CycNum::operator*=(const CycNum &o) {
    std::array<Rational, 7> p{0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i)
        if (c[i] != 0)
            for (int j = 0; j < 4; ++j)
                if (o.c[j] != 0) p[i + j] += c[i] * o.c[j];
    c = fold(p);
    return *this;
}

CycNum CycNum::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    // x^-1 = conj(x) sigma(x) sigma(conj(x)) / N(x)
    CycNum cx = conj(*this);
    CycNum rest = cx * sigma(*this) * sigma(cx);
    Rational n = norm(*this);
    for (auto &v : rest.c) v /= n;
    return rest;
}

CycNum operator/(const CycNum &a, const CycNum &b) { return a * b.inverse(); }

std::string CycNum::str() const { return poly_str(c); }

// ---- RealQuadNum

int RealQuadNum::sign() const {
    int sa = sgn(a), sb = sgn(b);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    Rational lhs = a * a, rhs = 3 * b * b;
    if (lhs > rhs) return sa;
    if (lhs < rhs) return sb;
    return 0;   // unreachable for rationals since sqrt3 is irrational
}

std::strong_ordering RealQuadNum::operator<=>(const RealQuadNum &o) const {
    int s = (*this - o).sign();
    return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

RealQuadNum &RealQuadNum::operator*=(const RealQuadNum &o) {
    Rational na = a * o.a + 3 * b * o.b;
    Rational nb = a * o.b + b * o.a;
    a = std::move(na);
    b = std::move(nb);
    return *this;
}

RealQuadNum operator/(const RealQuadNum &x, const RealQuadNum &y) {
    Rational n = y.norm();
    if (n == 0) throw std::domain_error("division by zero in Q(sqrt3)");
    RealQuadNum r = x * y.conj();
    r.a /= n;
    r.b /= n;
    return r;
}

double RealQuadNum::to_double() const { return a.get_d() + b.get_d() * std::sqrt(3.0); }

CycNum RealQuadNum::to_cyc() const { return {a, 2 * b, 0, -b}; }

std::string RealQuadNum::str() const {
    std::ostringstream os;
    if (b == 0) {
        os << a;
        return os.str();
    }
    if (a != 0) os << a << (b > 0 ? "+" : "");
    if (b == -1) os << "-";
    else if (b != 1) os << b << "*";
    os << "sqrt3";
    return os.str();
}

// ---- Galois

CycInt conj(const CycInt &x) {
    auto &a = x.c;
    return {narrow((i128)a[0] + a[2]), a[1], narrow(-(i128)a[2]), narrow(-(i128)a[1] - a[3])};
}

CycInt sigma(const CycInt &x) {
    auto &a = x.c;
    return {narrow((i128)a[0] + a[2]), narrow(-(i128)a[1]), narrow(-(i128)a[2]), narrow((i128)a[1] + a[3])};
}

CycNum conj(const CycNum &x) {
    auto &a = x.c;
    return {a[0] + a[2], a[1], -a[2], -a[1] - a[3]};
}

CycNum sigma(const CycNum &x) {
    auto &a = x.c;
    return {a[0] + a[2], -a[1], -a[2], a[1] + a[3]};
}

RealQuadNum to_real(const CycNum &x) {
    if (x.c[2] != 0 || x.c[1] != -2 * x.c[3]) throw std::domain_error("element not in Q(sqrt3): " + x.str());
    return {x.c[0], -x.c[3]};
}

RealQuadNum abs2(const CycNum &x) { return to_real(x * conj(x)); }
RealQuadNum abs2(const CycInt &x) { return abs2(CycNum(x)); }

Rational norm(const CycNum &x) { return abs2(x).norm(); }

int64_t norm(const CycInt &x) {
    CycInt r = x * conj(x);
    // r = alpha + beta*sqrt3 with alpha = r0, beta = -r3
    i128 a = r.c[0], b = -(i128)r.c[3];
    return narrow(a * a - 3 * b * b);
}

int64_t trace(const CycInt &x) { return narrow(4 * (i128)x.c[0] + 2 * (i128)x.c[2]); }
Rational trace(const CycNum &x) { return 4 * x.c[0] + 2 * x.c[2]; }

bool is_unit(const CycInt &x) { return !x.is_zero() && norm(x) == 1; }

namespace {
std::array<int64_t, 4> order_key(const CycInt &x) { return {x.c[3], x.c[2], x.c[1], x.c[0]}; }
}  // namespace

int torsion_normalize_power(const CycInt &x) {
    if (x.is_zero()) throw std::domain_error("torsion_normalize of zero");
    CycInt cur = x, best = x;
    int bk = 0;
    for (int k = 1; k < 12; ++k) {
        cur = cur.mul_t();
        if (order_key(cur) > order_key(best)) {
            best = cur;
            bk = k;
        }
    }
    return bk;
}

CycInt torsion_normalize(const CycInt &x) { return CycInt::zeta_pow(torsion_normalize_power(x)) * x; }

std::pair<RealQuadNum, RealQuadNum> re_im(const CycNum &x) {
    auto &a = x.c;
    RealQuadNum re(a[0] + a[2] / 2, a[1] / 2);
    RealQuadNum im(a[1] / 2 + a[3], a[2] / 2);
    return {re, im};
}

CycNum from_re_im(const RealQuadNum &re, const RealQuadNum &im) {
    return re.to_cyc() + im.to_cyc() * CycNum(0, 0, 0, 1);
}

std::array<double, 2> embed(const CycNum &x, Embedding v) {
    double ang = (v == Embedding::v1 ? 1.0 : 5.0) * std::numbers::pi / 6.0;
    double re = 0, im = 0;
    for (int k = 0; k < 4; ++k) {
        re += x.c[k].get_d() * std::cos(k * ang);
        im += x.c[k].get_d() * std::sin(k * ang);
    }
    return {re, im};
}

// ---- division

namespace {
// conj(b) * sigma(b) * sigma(conj(b)), so that b * cofactor = N(b)
CycInt cofactor(const CycInt &b) {
    CycInt cb = conj(b);
    return cb * sigma(b) * sigma(cb);
}
}  // namespace

std::optional<CycInt> divide(const CycInt &a, const CycInt &b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    int64_t n = norm(b);
    CycInt num = a * cofactor(b);
    CycInt q;
    for (int i = 0; i < 4; ++i) {
        if (num.c[i] % n != 0) return std::nullopt;
        q.c[i] = num.c[i] / n;
    }
    return q;
}

bool divides(const CycInt &b, const CycInt &a) { return divide(a, b).has_value(); }

std::pair<CycInt, CycInt> euclid_div(const CycInt &a, const CycInt &b) {
    if (b.is_zero()) throw std::domain_error("division by zero");
    int64_t n = norm(b);
    CycInt num = a * cofactor(b);
    CycInt q0;
    for (int i = 0; i < 4; ++i) {
        // nearest integer to num/n
        i128 v = num.c[i], d = n;
        i128 fl = v >= 0 ? v / d : -((-v + d - 1) / d);
        if (2 * (v - fl * d) >= d) fl += 1;
        q0.c[i] = narrow(fl);
    }
    CycInt best_q = q0, best_r = a - q0 * b;
    int64_t best_n = norm(best_r);
    if (best_n < n) return {best_q, best_r};
    for (int d0 = -1; d0 <= 1; ++d0)
        for (int d1 = -1; d1 <= 1; ++d1)
            for (int d2 = -1; d2 <= 1; ++d2)
                for (int d3 = -1; d3 <= 1; ++d3) {
                    CycInt q = q0 + CycInt(d0, d1, d2, d3);
                    CycInt r = a - q * b;
                    int64_t rn = norm(r);
                    if (rn < best_n) {
                        best_n = rn;
                        best_q = q;
                        best_r = r;
                    }
                }
    if (best_n >= n) throw std::logic_error("euclidean step failed for " + a.str() + " / " + b.str());
    return {best_q, best_r};
}

CycInt gcd(CycInt a, CycInt b) {
    while (!b.is_zero()) {
        auto [q, r] = euclid_div(a, b);
        a = b;
        b = r;
    }
    return a;
}

std::array<CycInt, 3> xgcd(const CycInt &a0, const CycInt &b0) {
    // invariant: a = ua*a0 + va*b0, b = ub*a0 + vb*b0
    CycInt a = a0, b = b0, ua(1), va(0), ub(0), vb(1);
    while (!b.is_zero()) {
        auto [q, r] = euclid_div(a, b);
        CycInt nu = ua - q * ub, nv = va - q * vb;
        a = b;
        ua = ub;
        va = vb;
        b = r;
        ub = nu;
        vb = nv;
    }
    return {a, ua, va};
}

CycInt canonical_generator(const CycInt &x0) {
    if (x0.is_zero()) return x0;
    const CycInt fu(1, 1, 0, 0);                 // 1+t, fundamental unit
    const CycInt fu_inv = *divide(CycInt(1), fu);
    const RealQuadNum eps(2, 1);                 // |1+t|^2 under v1
    const RealQuadNum eps_inv(2, -1);
    CycInt x = x0;
    for (int guard = 0; guard < 10000; ++guard) {
        RealQuadNum r = abs2(x);
        RealQuadNum r1 = r, r2 = r.conj();   // v1 and v2 sizes
        if (r1 >= eps * r2) x *= fu_inv;
        else if (r1 < eps_inv * r2) x *= fu;
        else return torsion_normalize(x);
    }
    throw std::logic_error("unit balancing did not converge");
}

bool associates(const CycInt &a, const CycInt &b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    auto q = divide(a, b);
    return q && is_unit(*q);
}

// ---- parsing

CycNum parse_cyc(const std::string &s0) {
    std::string s;
    for (size_t i = 0; i < s0.size(); ++i) {
        unsigned char ch = s0[i];
        if (std::isspace(ch) || ch == '*') continue;
        // unicode minus
        if (ch == 0xE2 && i + 2 < s0.size() && (unsigned char)s0[i + 1] == 0x88 && (unsigned char)s0[i + 2] == 0x92) {
            s += '-';
            i += 2;
            continue;
        }
        s += (char)ch;
    }
    if (s.empty()) throw std::invalid_argument("empty polynomial string");
    CycNum out;
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        }
        std::string num;
        while (i < s.size() && (std::isdigit((unsigned char)s[i]) || s[i] == '/')) num += s[i++];
        Rational coef = num.empty() ? Rational(1) : Rational(num);
        coef.canonicalize();
        int deg = 0;
        if (i < s.size() && (s[i] == 't' || s[i] == 'x')) {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string e;
                while (i < s.size() && std::isdigit((unsigned char)s[i])) e += s[i++];
                if (e.empty()) throw std::invalid_argument("bad exponent in '" + s0 + "'");
                deg = std::stoi(e);
            }
        } else if (num.empty()) {
            throw std::invalid_argument("cannot parse '" + s0 + "'");
        }
        CycNum term(coef * sign);
        for (int k = 0; k < deg; ++k) term *= CycNum::t();
        out += term;
    }
    return out;
}

CycInt parse_cyc_int(const std::string &s) { return parse_cyc(s).to_int(); }

}  // namespace z12
