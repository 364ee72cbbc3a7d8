#pragma once

#include <cstdint>
#include <string>

namespace z12 {

// GF(p^f), f in {1,2}. Degree 2 as GF(p)[w]/(w^2 + c1*w + c0).
struct GF {
    int64_t p = 2;
    int f = 1;
    int64_t c0 = 0, c1 = 0;

    struct El {
        int64_t a = 0, b = 0;   // a + b*w
        bool operator==(const El &) const = default;
        auto operator<=>(const El &) const = default;
    };

    int64_t q() const { return f == 1 ? p : p * p; }
    El zero() const { return {0, 0}; }
    El one() const { return {1 % p, 0}; }
    El from_int(int64_t v) const;
    El gen() const { return {0, 1}; }   // w, only meaningful for f = 2
    El add(El x, El y) const;
    El sub(El x, El y) const;
    El neg(El x) const;
    El mul(El x, El y) const;
    El pow(El x, uint64_t e) const;
    El inv(El x) const;
    bool is_zero(El x) const { return x.a == 0 && x.b == 0; }
    // +1 nonzero square, -1 non-square, 0 zero
    int quadratic_character(El x) const;
    // enumerate elements by index 0..q-1
    El element(int64_t i) const { return {i % p, f == 2 ? i / p : 0}; }
    int64_t index(El x) const { return x.a + (f == 2 ? x.b * p : 0); }
    std::string str(El x) const;
};

int64_t mod_inverse(int64_t a, int64_t p);
int64_t pos_mod(int64_t a, int64_t p);

}  // namespace z12
