#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "z12/field.hpp"
#include "z12/finite_field.hpp"
#include "z12/matrix.hpp"

namespace z12 {

struct ResidueField {
    GF field;
    GF::El image_of_t;
};

struct PrimeIdealRecord {
    std::string label;
    CycInt generator;
    int64_t p = 0;
    int e = 1, f = 1;
    int64_t norm = 0;
    ResidueField residue;
};

struct SplittingPattern {
    int e = 1, f = 1, g = 1;
};

struct IdealFactorization {
    std::vector<std::pair<PrimeIdealRecord, int>> factors;
    std::string type;   // "pq", "p^2q", ...
    int64_t norm = 1;
};

bool is_prime(int64_t n);
std::vector<int64_t> factor_integer(int64_t n);   // distinct prime factors

SplittingPattern split_rational_prime(int64_t p);

// monic factors of x^4 - x^2 + 1 over GF(p), each given as low-to-high coefficients
std::vector<std::vector<int64_t>> cyclotomic_factors_mod(int64_t p);

GF::El reduce(const CycNum &x, const ResidueField &rf, int64_t p);
GF::El reduce(const CycInt &x, const ResidueField &rf);

// labelled generators read from a fixture file
struct PrimeFixture {
    std::string label;
    CycInt generator;
};
std::vector<PrimeFixture> load_prime_fixtures(const std::string &path);
std::string default_data_dir();

class PrimeTable {
public:
    explicit PrimeTable(std::vector<PrimeFixture> fixtures = {});

    const std::vector<PrimeIdealRecord> &primes_above(int64_t p) const;
    std::vector<PrimeIdealRecord> primes_up_to(int64_t max_norm) const;
    // the prime containing a given element of prime norm power
    const PrimeIdealRecord &prime_of(const CycInt &pi) const;
    std::optional<PrimeIdealRecord> by_label(const std::string &label) const;
    const PrimeIdealRecord &require(const std::string &label) const;

    IdealFactorization factor_ideal(const CycInt &n) const;
    int valuation(const CycInt &x, const PrimeIdealRecord &P) const;

    int search_bound() const { return search_bound_; }

private:
    void build(int64_t p) const;
    CycInt find_generator(int64_t p, int f, const ResidueField &rf) const;

    std::vector<PrimeFixture> fixtures_;
    mutable std::map<int64_t, std::vector<PrimeIdealRecord>> cache_;
    int search_bound_ = 12;
};

std::string factorization_type(std::vector<int> exponents);

bool is_in_gamma0(const Mat2 &m, const CycInt &level);

// O/n as a finite ring; elements indexed 0..norm-1 through a Hermite basis of nO in Z^4
class ResidueRing {
public:
    explicit ResidueRing(const CycInt &n);
    int64_t size() const { return size_; }
    const CycInt &modulus() const { return n_; }
    CycInt reduce(const CycInt &x) const;
    int64_t index(const CycInt &x) const;
    CycInt element(int64_t idx) const;
    bool is_unit(const CycInt &x) const;

private:
    CycInt n_;
    std::array<std::array<int64_t, 4>, 4> h_{};   // upper triangular rows
    int64_t size_ = 1;
};

}  // namespace z12
