#include "z12/ideals.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "json.hpp"

#ifndef Z12_DATA_DIR
#define Z12_DATA_DIR "data"
#endif

namespace z12 {

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<int64_t> factor_integer(int64_t n) {
    std::vector<int64_t> out;
    if (n < 0) n = -n;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

// x^4 - x^2 + 1 low-to-high
const std::vector<int64_t> kPhi12 = {1, 0, -1, 0, 1};

// remainder of a by monic b over GF(p)
std::vector<int64_t> poly_rem(std::vector<int64_t> a, const std::vector<int64_t> &b, int64_t p) {
    for (auto &x : a) x = pos_mod(x, p);
    int db = (int)b.size() - 1;
    for (int i = (int)a.size() - 1; i >= db; --i) {
        int64_t c = a[i];
        if (!c) continue;
        for (int j = 0; j <= db; ++j) a[i - db + j] = pos_mod(a[i - db + j] - c * b[j], p);
    }
    a.resize(db);
    return a;
}

bool divides_phi(const std::vector<int64_t> &g, int64_t p) {
    auto r = poly_rem(kPhi12, g, p);
    return std::all_of(r.begin(), r.end(), [](int64_t v) { return v == 0; });
}

}  // namespace

std::vector<std::vector<int64_t>> cyclotomic_factors_mod(int64_t p) {
    std::vector<std::vector<int64_t>> out;
    for (int64_t r = 0; r < p; ++r) {
        std::vector<int64_t> g = {pos_mod(-r, p), 1};
        if (divides_phi(g, p)) out.push_back(g);
    }
    if (!out.empty()) return out;
    for (int64_t c1 = 0; c1 < p; ++c1)
        for (int64_t c0 = 0; c0 < p; ++c0) {
            std::vector<int64_t> g = {c0, c1, 1};
            if (divides_phi(g, p)) out.push_back(g);
        }
    return out;
}

SplittingPattern split_rational_prime(int64_t p) {
    if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
    auto fac = cyclotomic_factors_mod(p);
    int f = (int)fac[0].size() - 1;
    int g = (int)fac.size();
    int e = 4 / (f * g);
    return {e, f, g};
}

GF::El reduce(const CycNum &x, const ResidueField &rf, int64_t p) {
    const GF &k = rf.field;
    GF::El acc = k.zero(), pw = k.one();
    for (int i = 0; i < 4; ++i) {
        const Rational &c = x.c[i];
        mpz_class num = c.get_num() % p, den = c.get_den() % p;
        if (den == 0) throw std::domain_error("denominator divisible by the prime");
        int64_t v = pos_mod(num.get_si(), p) * mod_inverse(den.get_si(), p) % p;
        acc = k.add(acc, k.mul(k.from_int(v), pw));
        pw = k.mul(pw, rf.image_of_t);
    }
    return acc;
}

GF::El reduce(const CycInt &x, const ResidueField &rf) {
    const GF &k = rf.field;
    GF::El acc = k.zero(), pw = k.one();
    for (int i = 0; i < 4; ++i) {
        acc = k.add(acc, k.mul(k.from_int(x.c[i]), pw));
        pw = k.mul(pw, rf.image_of_t);
    }
    return acc;
}

std::string default_data_dir() {
    if (const char *env = std::getenv("Z12_FIXTURES")) return env;
    return Z12_DATA_DIR;
}

std::vector<PrimeFixture> load_prime_fixtures(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open prime fixtures: " + path);
    nlohmann::json j;
    in >> j;
    std::vector<PrimeFixture> out;
    for (auto &e : j) out.push_back({e.at("label").get<std::string>(), parse_cyc_int(e.at("generator").get<std::string>())});
    return out;
}

PrimeTable::PrimeTable(std::vector<PrimeFixture> fixtures) : fixtures_(std::move(fixtures)) {}

CycInt PrimeTable::find_generator(int64_t p, int f, const ResidueField &rf) const {
    int64_t target = f == 1 ? p : p * p;
    for (int r = 1; r <= search_bound_; ++r) {
        std::vector<CycInt> hits;
        for (int a0 = -r; a0 <= r; ++a0)
            for (int a1 = -r; a1 <= r; ++a1)
                for (int a2 = -r; a2 <= r; ++a2)
                    for (int a3 = -r; a3 <= r; ++a3) {
                        if (std::max({std::abs(a0), std::abs(a1), std::abs(a2), std::abs(a3)}) != r) continue;
                        CycInt x(a0, a1, a2, a3);
                        if (norm(x) != target) continue;
                        if (!rf.field.is_zero(reduce(x, rf))) continue;
                        hits.push_back(canonical_generator(x));
                    }
        if (!hits.empty()) return *std::min_element(hits.begin(), hits.end());
    }
    throw std::runtime_error("generator search exhausted for a prime above " + std::to_string(p) + " with coefficient bound " +
                             std::to_string(search_bound_));
}

void PrimeTable::build(int64_t p) const {
    auto fac = cyclotomic_factors_mod(p);
    SplittingPattern pat = split_rational_prime(p);
    std::vector<PrimeIdealRecord> recs;
    int idx = 0;
    for (auto &g : fac) {
        PrimeIdealRecord rec;
        rec.p = p;
        rec.e = pat.e;
        rec.f = pat.f;
        rec.norm = pat.f == 1 ? p : p * p;
        GF k;
        k.p = p;
        k.f = pat.f;
        if (pat.f == 1) {
            rec.residue = {k, k.from_int(-g[0])};
        } else {
            k.c0 = g[0];
            k.c1 = g[1];
            rec.residue = {k, k.gen()};
        }
        ++idx;
        for (auto &fx : fixtures_) {
            if (norm(fx.generator) != rec.norm) continue;
            if (rec.residue.field.is_zero(reduce(fx.generator, rec.residue))) {
                rec.label = fx.label;
                rec.generator = fx.generator;
                break;
            }
        }
        if (rec.label.empty()) {
            rec.label = fac.size() == 1 ? "p" + std::to_string(p) : "p" + std::to_string(p) + ",#" + std::to_string(idx);
            rec.generator = find_generator(p, pat.f, rec.residue);
        }
        recs.push_back(rec);
    }
    std::sort(recs.begin(), recs.end(), [](const auto &a, const auto &b) {
        bool ha = a.label.find('#') == std::string::npos, hb = b.label.find('#') == std::string::npos;
        if (ha != hb) return ha;
        if (a.label.size() != b.label.size()) return a.label.size() < b.label.size();
        return a.label < b.label;
    });
    cache_[p] = std::move(recs);
}

const std::vector<PrimeIdealRecord> &PrimeTable::primes_above(int64_t p) const {
    if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
    if (!cache_.count(p)) build(p);
    return cache_.at(p);
}

std::vector<PrimeIdealRecord> PrimeTable::primes_up_to(int64_t max_norm) const {
    std::vector<PrimeIdealRecord> out;
    for (int64_t p = 2; p <= max_norm; ++p) {
        if (!is_prime(p)) continue;
        for (auto &r : primes_above(p))
            if (r.norm <= max_norm) out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.norm < b.norm; });
    return out;
}

const PrimeIdealRecord &PrimeTable::prime_of(const CycInt &pi) const {
    int64_t n = norm(pi);
    auto ps = factor_integer(n);
    if (ps.size() != 1) throw std::invalid_argument("not a prime power norm: " + pi.str());
    for (auto &r : primes_above(ps[0]))
        if (r.norm == n && r.residue.field.is_zero(reduce(pi, r.residue))) return r;
    throw std::invalid_argument("element does not generate a prime: " + pi.str());
}

std::optional<PrimeIdealRecord> PrimeTable::by_label(const std::string &label) const {
    // labels look like p13,2 or p2
    if (label.size() < 2 || label[0] != 'p') return std::nullopt;
    int64_t p = std::stoll(label.substr(1, label.find(',') == std::string::npos ? std::string::npos : label.find(',') - 1));
    if (!is_prime(p)) return std::nullopt;
    for (auto &r : primes_above(p))
        if (r.label == label) return r;
    for (auto &fx : fixtures_)
        if (fx.label == label) {
            PrimeIdealRecord r = prime_of(fx.generator);
            r.label = label;
            r.generator = fx.generator;
            return r;
        }
    return std::nullopt;
}

const PrimeIdealRecord &PrimeTable::require(const std::string &label) const {
    int64_t p = std::stoll(label.substr(1, label.find(',') == std::string::npos ? std::string::npos : label.find(',') - 1));
    for (auto &r : primes_above(p))
        if (r.label == label) return r;
    throw std::invalid_argument("unknown prime label: " + label);
}

int PrimeTable::valuation(const CycInt &x0, const PrimeIdealRecord &P) const {
    if (x0.is_zero()) throw std::domain_error("valuation of zero");
    int v = 0;
    CycInt x = x0;
    while (auto q = divide(x, P.generator)) {
        x = *q;
        ++v;
    }
    return v;
}

std::string factorization_type(std::vector<int> exps) {
    std::sort(exps.rbegin(), exps.rend());
    std::string out;
    const char letters[] = "pqrsuvw";
    for (size_t i = 0; i < exps.size(); ++i) {
        out += letters[std::min<size_t>(i, 6)];
        if (exps[i] > 1) out += "^" + std::to_string(exps[i]);
    }
    return out;
}

IdealFactorization PrimeTable::factor_ideal(const CycInt &n) const {
    if (n.is_zero()) throw std::invalid_argument("zero ideal");
    IdealFactorization out;
    out.norm = norm(n);
    CycInt rest = n;
    std::vector<int> exps;
    for (int64_t p : factor_integer(out.norm)) {
        for (auto &P : primes_above(p)) {
            int v = 0;
            while (auto q = divide(rest, P.generator)) {
                rest = *q;
                ++v;
            }
            if (v) {
                out.factors.push_back({P, v});
                exps.push_back(v);
            }
        }
    }
    if (!is_unit(rest)) throw std::logic_error("incomplete factorization of " + n.str());
    out.type = factorization_type(exps);
    return out;
}

bool is_in_gamma0(const Mat2 &m, const CycInt &level) { return is_unit(m.det()) && divides(level, m.c); }

// ---- ResidueRing

ResidueRing::ResidueRing(const CycInt &n) : n_(n) {
    if (n.is_zero()) throw std::invalid_argument("zero modulus");
    std::array<std::array<__int128, 4>, 4> m{};
    CycInt b = n;
    for (int k = 0; k < 4; ++k) {
        for (int j = 0; j < 4; ++j) m[k][j] = b.c[j];
        b = b.mul_t();
    }
    // row-style Hermite reduction, column by column
    for (int col = 0; col < 4; ++col) {
        for (int r = col + 1; r < 4; ++r) {
            while (m[r][col] != 0) {
                __int128 q = m[col][col] / m[r][col];
                for (int j = 0; j < 4; ++j) m[col][j] -= q * m[r][j];
                std::swap(m[col], m[r]);
            }
        }
        if (m[col][col] < 0)
            for (int j = 0; j < 4; ++j) m[col][j] = -m[col][j];
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) h_[i][j] = (int64_t)m[i][j];
        size_ *= h_[i][i];
    }
    if (size_ != norm(n)) throw std::logic_error("Hermite basis has wrong covolume");
}

CycInt ResidueRing::reduce(const CycInt &x) const {
    std::array<__int128, 4> v = {x.c[0], x.c[1], x.c[2], x.c[3]};
    for (int i = 0; i < 4; ++i) {
        __int128 d = h_[i][i];
        __int128 q = v[i] / d;
        if (v[i] - q * d < 0) q -= 1;
        for (int j = i; j < 4; ++j) v[j] -= q * h_[i][j];
    }
    return {(int64_t)v[0], (int64_t)v[1], (int64_t)v[2], (int64_t)v[3]};
}

int64_t ResidueRing::index(const CycInt &x) const {
    CycInt r = reduce(x);
    int64_t idx = 0;
    for (int i = 3; i >= 0; --i) idx = idx * h_[i][i] + r.c[i];
    return idx;
}

CycInt ResidueRing::element(int64_t idx) const {
    CycInt r;
    for (int i = 0; i < 4; ++i) {
        r.c[i] = idx % h_[i][i];
        idx /= h_[i][i];
    }
    return r;
}

bool ResidueRing::is_unit(const CycInt &x) const { return z12::is_unit(gcd(reduce(x), n_)) || size_ == 1; }

}  // namespace z12
