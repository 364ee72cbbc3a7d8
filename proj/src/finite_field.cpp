#include "z12/finite_field.hpp"

#include <stdexcept>

namespace z12 {

int64_t pos_mod(int64_t a, int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
}

int64_t mod_inverse(int64_t a, int64_t p) {
    int64_t g = p, x = 0, y = 1, r = pos_mod(a, p);
    if (r == 0) throw std::domain_error("inverse of zero mod p");
    // extended euclid on (p, r)
    while (r != 0) {
        int64_t q = g / r;
        int64_t t = g - q * r;
        g = r;
        r = t;
        t = x - q * y;
        x = y;
        y = t;
    }
    if (g != 1) throw std::domain_error("not invertible");
    return pos_mod(x, p);
}

GF::El GF::from_int(int64_t v) const { return {pos_mod(v, p), 0}; }

GF::El GF::add(El x, El y) const { return {(x.a + y.a) % p, (x.b + y.b) % p}; }

GF::El GF::sub(El x, El y) const { return {pos_mod(x.a - y.a, p), pos_mod(x.b - y.b, p)}; }

GF::El GF::neg(El x) const { return {pos_mod(-x.a, p), pos_mod(-x.b, p)}; }

GF::El GF::mul(El x, El y) const {
    if (f == 1) return {x.a * y.a % p, 0};
    // (a + bw)(c + dw) = ac + (ad + bc) w + bd w^2, w^2 = -c1 w - c0
    int64_t ac = x.a * y.a % p, bd = x.b * y.b % p;
    int64_t mid = (x.a * y.b + x.b * y.a) % p;
    return {pos_mod(ac - bd * c0, p), pos_mod(mid - bd * c1, p)};
}

GF::El GF::pow(El x, uint64_t e) const {
    El r = one();
    while (e) {
        if (e & 1) r = mul(r, x);
        x = mul(x, x);
        e >>= 1;
    }
    return r;
}

GF::El GF::inv(El x) const {
    if (is_zero(x)) throw std::domain_error("inverse of zero in GF(q)");
    return pow(x, q() - 2);
}

int GF::quadratic_character(El x) const {
    if (is_zero(x)) return 0;
    if (p == 2) return 1;
    El r = pow(x, (q() - 1) / 2);
    return r == one() ? 1 : -1;
}

std::string GF::str(El x) const {
    if (f == 1) return std::to_string(x.a);
    return std::to_string(x.a) + "+" + std::to_string(x.b) + "w";
}

}  // namespace z12
