#include "z12/fixtures.hpp"

#include <fstream>

#include "json.hpp"

namespace z12 {

namespace {

using ojson = nlohmann::ordered_json;

ojson read_json(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fixture file: " + path);
    return ojson::parse(in);
}

std::vector<EigenEntry> entries(const ojson &obj) {
    std::vector<EigenEntry> out;
    for (auto &[k, v] : obj.items()) {
        EigenEntry e{k, std::nullopt};
        if (v.is_number_integer()) e.value = v.get<int64_t>();
        else if (!(v.is_string() && v.get<std::string>() == "*"))
            throw std::runtime_error("bad eigenvalue cell at " + k);
        out.push_back(e);
    }
    return out;
}

std::vector<std::string> strings(const ojson &arr) {
    std::vector<std::string> out;
    for (auto &x : arr) out.push_back(x.get<std::string>());
    return out;
}

std::vector<TableRow> rows(const ojson &arr) {
    std::vector<TableRow> out;
    for (auto &r : arr) {
        TableRow row;
        row.label = r.at("class").get<std::string>();
        row.values = entries(r.at("values"));
        if (r.contains("base_field")) row.base_field = r["base_field"].get<std::string>();
        if (r.contains("original")) row.original = r["original"].get<std::string>();
        out.push_back(row);
    }
    return out;
}

std::optional<int64_t> find_entry(const std::vector<EigenEntry> &v, const std::string &p, bool *present) {
    for (auto &e : v)
        if (e.prime == p) {
            if (present) *present = true;
            return e.value;
        }
    if (present) *present = false;
    return std::nullopt;
}

}  // namespace

std::optional<int64_t> TableRow::lookup(const std::string &prime, bool *present) const { return find_entry(values, prime, present); }

bool ClassRecord::lists(const std::string &prime) const {
    bool a = false, b = false;
    find_entry(eigenvalues, prime, &a);
    find_entry(small_primes, prime, &b);
    return a || b;
}

std::optional<int64_t> ClassRecord::eigenvalue(const std::string &prime) const {
    bool present = false;
    auto v = find_entry(eigenvalues, prime, &present);
    if (present) return v;
    v = find_entry(small_primes, prime, &present);
    if (present) return v;
    throw std::out_of_range("no eigenvalue listed for " + label + " at " + prime);
}

Fixtures Fixtures::load(const std::string &dir) {
    Fixtures fx;
    fx.dir = dir;
    fx.primes = load_prime_fixtures(dir + "/primes.json");
    fx.curves = load_curve_fixtures(dir + "/curves.json");
    ojson tables = read_json(dir + "/eigen_tables.json");
    fx.rational = rows(tables.at("rational_classes"));
    fx.base_change = rows(tables.at("base_change"));
    fx.base_change_nonrational = rows(tables.at("base_change_nonrational"));
    fx.twisted = rows(tables.at("twisted_eisenstein"));
    fx.old_classes = rows(tables.at("old_classes"));
    for (auto &l : tables.at("levels"))
        fx.levels.push_back({l.at("level").get<std::string>(), l.at("generator").get<std::string>(), l.at("type").get<std::string>(),
                             l.at("d").get<int>()});
    for (auto &[k, v] : tables.at("eisenstein_dimension_by_type").items()) fx.eisenstein_dimension[k] = v.get<int>();

    for (auto &c : read_json(dir + "/classes.json")) {
        ClassRecord r;
        r.label = c.at("class").get<std::string>();
        r.residual_claim = c.at("residual_claim").get<std::string>();
        r.eigenvalues = entries(c.at("eigenvalues"));
        r.S1 = strings(c.at("S1"));
        r.S2 = strings(c.at("S2"));
        if (c.contains("note") && c["note"].is_string()) r.note = c["note"].get<std::string>();
        if (c.contains("staging")) {
            r.has_staging = true;
            r.quadratic_stage = strings(c["staging"].at("quadratic"));
            r.cubic_stage = strings(c["staging"].at("cubic"));
        }
        for (auto &row : fx.rational)
            if (row.label == r.label) r.small_primes = row.values;
        if (auto *l = fx.level(r.label)) r.level_generator = l->generator;
        fx.classes[r.label] = r;
    }
    return fx;
}

const ClassRecord &Fixtures::require_class(const std::string &label) const {
    auto it = classes.find(label);
    if (it == classes.end()) throw std::invalid_argument("unknown class: " + label);
    return it->second;
}

namespace {
const CurveModel *find_curve(const std::map<std::string, CurveModel> &m, const std::string &label) {
    if (auto it = m.find(label); it != m.end()) return &it->second;
    std::string s = label;
    while (!s.empty() && s.back() == 'i') s.pop_back();
    if (s != label)
        if (auto it = m.find(s); it != m.end()) return &it->second;
    return nullptr;
}
}  // namespace

const CurveModel *Fixtures::curve_over_F(const std::string &label) const { return find_curve(curves.over_F, label); }
const CurveModel *Fixtures::curve_over_subfield(const std::string &label) const { return find_curve(curves.over_subfield, label); }

const LevelRow *Fixtures::level(const std::string &label) const {
    for (auto &l : levels)
        if (l.label == label) return &l;
    return nullptr;
}

}  // namespace z12
