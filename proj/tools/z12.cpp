// z12: command-line workbench over Q(zeta12)
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "z12/fixtures.hpp"
#include "z12/hecke.hpp"
#include "z12/verification.hpp"

using namespace z12;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char *kCacheFormat = "z12-cache-1";

enum Exit { OK = 0, COMPUTE = 1, MISMATCH = 2 };

struct Config {
    std::string cache_dir;
    std::string fixtures = default_data_dir();
    int max_iters = 200;
    int jobs = 1;
    bool json = false, markdown = false;
};

// jobs is left out: output must not depend on it
ojson echo(const Config &c) {
    return {{"cache_dir", c.cache_dir}, {"fixtures", c.fixtures}, {"max_iters", c.max_iters}};
}

std::string fnv1a(const std::string &s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

// envelope: {format, config_hash, payload}; anything else is a miss
std::optional<ojson> cache_read(const Config &c, const std::string &name, const std::string &hash) {
    if (c.cache_dir.empty()) return std::nullopt;
    std::ifstream in(std::filesystem::path(c.cache_dir) / name);
    if (!in) return std::nullopt;
    try {
        ojson j = ojson::parse(in);
        if (j.at("format") != kCacheFormat || j.at("config_hash") != hash) return std::nullopt;
        return j.at("payload");
    } catch (const std::exception &) {
        return std::nullopt;
    }
}

void cache_write(const Config &c, const std::string &name, const std::string &hash, const ojson &payload) {
    if (c.cache_dir.empty()) return;
    std::filesystem::create_directories(c.cache_dir);
    std::ofstream out(std::filesystem::path(c.cache_dir) / name);
    out << ojson{{"format", kCacheFormat}, {"config_hash", hash}, {"payload", payload}}.dump(1) << "\n";
}

std::string file_key(std::string s) {
    for (auto &ch : s)
        if (!std::isalnum((unsigned char)ch)) ch = '_';
    return s;
}

std::string q(const Rational &r) { return r.get_str(); }

struct Context {
    Config cfg;
    std::optional<Fixtures> fx;
    std::optional<PrimeTable> primes;

    const Fixtures &fixtures() {
        if (!fx) fx = Fixtures::load(cfg.fixtures);
        return *fx;
    }
    const PrimeTable &table() {
        if (!primes) primes.emplace(fixtures().primes);
        return *primes;
    }
    // level label, prime label or polynomial in t
    std::pair<std::string, CycInt> level(const std::string &s) {
        if (auto *l = fixtures().level(s)) return {s, parse_cyc_int(l->generator)};
        if (auto P = table().by_label(s)) return {s, P->generator};
        CycInt n = parse_cyc_int(s);
        if (n.is_zero()) throw std::invalid_argument("level must be nonzero");
        return {n.str(), n};
    }
};

void emit(const Context &ctx, const ojson &j, const std::string &text) {
    if (ctx.cfg.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

// ---- field-info

int cmd_field_info(Context &ctx) {
    CycInt t = CycInt::t();
    ojson emb = ojson::array();
    std::ostringstream txt;
    txt << "field       Q(t), t^4 - t^2 + 1 = 0\n"
        << "degree      4\n";
    for (auto v : {Embedding::v1, Embedding::v2}) {
        auto z = embed(CycNum(t), v);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.12f%+.12fi", z[0], z[1]);
        std::string name = v == Embedding::v1 ? "v1" : "v2";
        emb.push_back({{"name", name}, {"t", buf}});
        txt << "embedding   " << name << ": t -> " << buf << "\n";
    }
    CycInt s3 = CycInt::sqrt3();
    CycInt u{1, 1, 0, 0};
    txt << "sqrt3       " << s3.str() << "  (square " << (s3 * s3).str() << ")\n"
        << "i           " << (t * t * t).str() << "\n"
        << "conj(t)     " << conj(t).str() << "\n"
        << "unit        " << u.str() << "  (norm " << norm(u) << ")\n"
        << "torsion     <t>, order 12\n";
    if (ctx.cfg.markdown) {
        txt.str("");
        txt << "| item | value |\n|---|---|\n| minimal polynomial | t^4 - t^2 + 1 |\n| degree | 4 |\n| sqrt3 | " << s3.str()
            << " |\n| conj(t) | " << conj(t).str() << " |\n| fundamental unit | " << u.str() << " |\n";
    }
    ojson j{{"minimal_polynomial", "t^4 - t^2 + 1"}, {"degree", 4},     {"embeddings", emb},
            {"sqrt3", s3.str()},                     {"i", (t * t * t).str()}, {"conj_t", conj(t).str()},
            {"fundamental_unit", u.str()},           {"torsion_order", 12}, {"config", echo(ctx.cfg)}};
    emit(ctx, j, txt.str());
    return OK;
}

// ---- primes

int cmd_primes(Context &ctx, int64_t max_norm) {
    auto ps = max_norm >= 2 ? ctx.table().primes_up_to(max_norm) : std::vector<PrimeIdealRecord>{};
    ojson rows = ojson::array();
    std::ostringstream txt;
    if (ctx.cfg.markdown) txt << "| label | p | e | f | norm | generator |\n|---|---|---|---|---|---|\n";
    for (auto &P : ps) {
        rows.push_back({{"label", P.label}, {"p", P.p}, {"e", P.e}, {"f", P.f}, {"norm", P.norm}, {"generator", P.generator.str()}});
        if (ctx.cfg.markdown)
            txt << "| " << P.label << " | " << P.p << " | " << P.e << " | " << P.f << " | " << P.norm << " | " << P.generator.str() << " |\n";
        else
            txt << P.label << "\t" << P.norm << "\t" << P.generator.str() << "\n";
    }
    if (!ctx.cfg.markdown) txt << ps.size() << " primes of norm <= " << max_norm << "\n";
    emit(ctx, {{"max_norm", max_norm}, {"count", ps.size()}, {"primes", rows}, {"config", echo(ctx.cfg)}}, txt.str());
    return OK;
}

// ---- perfect forms

const VoronoiData &voronoi(Context &ctx) {
    static std::optional<VoronoiData> v;
    if (!v) v = load_or_enumerate(ctx.cfg.cache_dir);
    return *v;
}

int cmd_perfect_forms(Context &ctx) {
    const auto &v = voronoi(ctx);
    ojson forms = ojson::array();
    std::ostringstream txt;
    for (size_t i = 0; i < v.forms.size(); ++i) {
        auto &f = v.forms[i];
        std::map<size_t, int> sizes;
        for (auto &fa : f.facets) sizes[fa.vertices.size()]++;
        ojson fs = ojson::object();
        for (auto &[k, c] : sizes) fs[std::to_string(k)] = c;
        std::map<int, int> nb;
        for (auto &fa : f.facets) nb[fa.neighbor]++;
        ojson nbj = ojson::object();
        for (auto &[k, c] : nb) nbj[std::to_string(k)] = c;
        forms.push_back({{"index", i},
                         {"minimal_vectors", f.minvecs.size()},
                         {"facets", f.facets.size()},
                         {"facet_sizes", fs},
                         {"neighbours", nbj},
                         {"stabilizer", f.stabilizer.size()},
                         {"form", f.form.str()}});
        txt << "form " << i << ": " << f.minvecs.size() << " minimal vectors, " << f.facets.size() << " facets, stabilizer "
            << f.stabilizer.size() << "\n  " << f.form.str() << "\n";
    }
    emit(ctx, {{"format", v.version}, {"classes", v.forms.size()}, {"forms", forms}, {"config", echo(ctx.cfg)}}, txt.str());
    return OK;
}

// ---- homology

std::shared_ptr<const FaceTables> face_tables(Context &ctx) {
    static std::shared_ptr<const FaceTables> t;
    if (!t) t = std::make_shared<const FaceTables>(build_face_tables(voronoi(ctx)));
    return t;
}

std::optional<int> eisenstein_dimension(Context &ctx, const CycInt &n) {
    if (is_unit(n)) return std::nullopt;
    auto type = ctx.table().factor_ideal(n).type;
    auto &m = ctx.fixtures().eisenstein_dimension;
    if (auto it = m.find(type); it != m.end()) return it->second;
    return std::nullopt;
}

int cmd_homology(Context &ctx, const std::string &arg) {
    auto [label, n] = ctx.level(arg);
    std::string hash = fnv1a(ojson{{"level", n.str()}, {"voronoi", voronoi(ctx).version}}.dump());
    std::string file = "homology_" + file_key(n.str()) + ".json";
    ojson payload;
    if (auto hit = cache_read(ctx.cfg, file, hash)) {
        payload = *hit;
    } else {
        OrbitComplex C(face_tables(ctx), n);
        C.compute_homology();
        ojson basis = ojson::array();
        for (auto &b : C.h1_basis()) {
            ojson v = ojson::array();
            for (auto &[i, c] : b.e) v.push_back({i, q(c)});
            basis.push_back(v);
        }
        payload = {{"level", n.str()},  {"p1_size", C.p1().size()}, {"c0", C.dim(0)},      {"c1", C.dim(1)},
                   {"d2_rank", C.d2_rank()}, {"h1_rank", C.h1_rank()}, {"basis", basis}};
        cache_write(ctx.cfg, file, hash, payload);
    }
    int rank = payload["h1_rank"].get<int>();
    auto eis = eisenstein_dimension(ctx, n);
    ojson j{{"level", label}, {"generator", n.str()}};
    for (auto &[k, v] : payload.items())
        if (k != "basis" && k != "level") j[k] = v;
    if (eis) j["eisenstein_dimension"] = *eis;
    if (auto *l = ctx.fixtures().level(label)) j["cuspidal_dimension_listed"] = l->cuspidal_dimension;
    j["config"] = echo(ctx.cfg);

    std::ostringstream txt;
    txt << "level " << label << " (" << n.str() << "), |P1| = " << payload["p1_size"] << "\n"
        << "H1 rank " << rank;
    if (eis) txt << ", Eisenstein " << *eis << ", cuspidal " << rank - *eis;
    txt << "\n";
    emit(ctx, j, txt.str());
    if (eis && rank < *eis) {
        std::cerr << "error: rank below the Eisenstein dimension\n";
        return COMPUTE;
    }
    return OK;
}

// ---- hecke

ojson matrix_json(const QMatrix &m) {
    ojson a = ojson::array();
    for (auto &row : m) {
        ojson r = ojson::array();
        for (auto &x : row) r.push_back(q(x));
        a.push_back(r);
    }
    return a;
}

ojson eigen_json(const EigenSystem &es) {
    ojson cls = ojson::array();
    for (auto &c : es.classes) {
        ojson ev = ojson::object(), cp = ojson::object();
        for (auto &[p, v] : c.eigenvalues) ev[p] = q(v);
        for (auto &[p, v] : c.charpolys) cp[p] = poly_str(v);
        cls.push_back({{"dim", c.dim}, {"eisenstein", c.eisenstein}, {"rational", c.rational}, {"eigenvalues", ev}, {"charpolys", cp}});
    }
    ojson mats = ojson::object(), polys = ojson::object();
    for (auto &[p, m] : es.matrices) {
        mats[p] = matrix_json(m);
        polys[p] = poly_str(charpoly(m));
    }
    return {{"level", es.level}, {"dim", es.dim},          {"primes", es.primes},      {"eisenstein_dim", es.eisenstein_dim},
            {"classes", cls},    {"charpolys", polys}, {"matrices", mats}};
}

int cmd_hecke(Context &ctx, const std::string &arg, std::vector<std::string> labels, int64_t max_norm) {
    auto [label, n] = ctx.level(arg);
    if (labels.empty())
        for (auto &P : ctx.table().primes_up_to(max_norm))
            if (!divides(P.generator, n)) labels.push_back(P.label);
    if (labels.empty()) throw std::invalid_argument("no primes");
    std::string hash = fnv1a(ojson{{"level", n.str()}, {"primes", labels}, {"max_iters", ctx.cfg.max_iters},
                                   {"voronoi", voronoi(ctx).version}}
                                 .dump());
    std::string file = "hecke_" + file_key(n.str()) + "_" + hash.substr(0, 8) + ".json";
    ojson payload;
    if (auto hit = cache_read(ctx.cfg, file, hash)) {
        payload = *hit;
    } else {
        OrbitComplex C(face_tables(ctx), n);
        C.compute_homology();
        ReductionOptions opt;
        opt.max_iters = ctx.cfg.max_iters;
        std::vector<HeckeCosets> hs;
        std::map<std::string, QMatrix> ms;
        for (auto &l : labels) {
            hs.push_back(coset_reps(ctx.table().require(l), n));
            ms[l] = hecke_matrix(C, voronoi(ctx), hs.back(), opt, ctx.cfg.jobs);
        }
        payload = eigen_json(eigen_decompose(n.str(), hs, ms));
        cache_write(ctx.cfg, file, hash, payload);
    }
    ojson j = payload;
    j["label"] = label;
    j["config"] = echo(ctx.cfg);

    std::ostringstream txt;
    if (ctx.cfg.markdown) {
        txt << "| class | dim |";
        for (auto &l : labels) txt << " " << l << " |";
        txt << "\n|---|---|";
        for (size_t i = 0; i < labels.size(); ++i) txt << "---|";
        txt << "\n";
    } else {
        txt << "level " << label << " (" << n.str() << "), H1 rank " << payload["dim"] << ", Eisenstein " << payload["eisenstein_dim"]
            << "\n";
    }
    for (auto &c : payload["classes"]) {
        std::string kind = c["eisenstein"].get<bool>() ? "eisenstein" : "cuspidal";
        if (ctx.cfg.markdown) txt << "| " << kind << " | " << c["dim"] << " |";
        else txt << kind << " dim " << c["dim"] << ":";
        for (auto &l : labels) {
            std::string v = c["eigenvalues"].contains(l) ? c["eigenvalues"][l].get<std::string>()
                                                         : "[" + c["charpolys"][l].get<std::string>() + "]";
            txt << (ctx.cfg.markdown ? " " + v + " |" : "  " + l + "=" + v);
        }
        txt << "\n";
    }
    emit(ctx, j, txt.str());
    return OK;
}

// ---- curves and verification

int finish(Context &ctx, std::vector<VerificationReport> reps, const std::string &subject) {
    bool pass = true;
    ojson arr = ojson::array();
    std::ostringstream txt;
    for (auto &r : reps) {
        pass = pass && r.pass;
        arr.push_back(ojson::parse(r.to_json()));
        if (ctx.cfg.markdown) {
            txt << r.to_markdown() << "\n";
        } else {
            txt << r.check << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.rows.size() << " rows)\n";
            for (auto *f : r.failures())
                txt << "  " << f->prime << " [" << f->source << "] expected " << (f->expected ? std::to_string(*f->expected) : "-")
                    << " got " << (f->actual ? std::to_string(*f->actual) : "-") << " " << f->detail << "\n";
            for (auto &nt : r.notes) txt << "  note: " << nt << "\n";
        }
    }
    if (!ctx.cfg.markdown) txt << subject << ": " << (pass ? "PASS" : "FAIL") << "\n";
    emit(ctx, {{"subject", subject}, {"pass", pass}, {"reports", arr}, {"config", echo(ctx.cfg)}}, txt.str());
    return pass ? OK : MISMATCH;
}

const TableRow *find_row(const std::vector<TableRow> &rows, const std::string &label) {
    for (auto &r : rows)
        if (r.label == label) return &r;
    return nullptr;
}

int cmd_curve_ap(Context &ctx, const std::string &label, int64_t max_norm) {
    auto &fx = ctx.fixtures();
    if (max_norm > 0) {
        const CurveModel *E = fx.curve_over_F(label);
        bool sub = false;
        if (!E) {
            E = fx.curve_over_subfield(label);
            sub = true;
        }
        if (!E) throw std::invalid_argument("no curve for " + label);
        ojson rows = ojson::array();
        std::ostringstream txt;
        for (auto &P : ctx.table().primes_up_to(max_norm)) {
            auto d = sub ? base_change_local_data(*E, P) : local_data(*E, P);
            rows.push_back({{"prime", P.label}, {"norm", P.norm}, {"good", d.good}, {"a", d.a}});
            txt << P.label << "\t" << (d.good ? std::to_string(d.a) : "*") << "\n";
        }
        emit(ctx, {{"class", label}, {"base_change", sub}, {"rows", rows}, {"config", echo(ctx.cfg)}}, txt.str());
        return OK;
    }
    // against the tables: small-prime row, then base-change row
    std::vector<VerificationReport> reps;
    if (auto *row = find_row(fx.rational, label); row && fx.curve_over_F(label))
        reps.push_back(compare_row(*row, *fx.curve_over_F(label), ctx.table()));
    for (auto *rows : {&fx.base_change, &fx.base_change_nonrational})
        if (auto *row = find_row(*rows, label); row && fx.curve_over_subfield(label))
            reps.push_back(crosscheck_base_change(*row, *fx.curve_over_subfield(label), ctx.table()));
    if (reps.empty()) {
        const auto &cls = fx.require_class(label);
        const CurveModel *E = fx.curve_over_F(label);
        if (!E) throw std::invalid_argument("no curve for " + label);
        reps.push_back(verify_trace_match(cls, *E, ctx.table(), TraceScope::AllListed));
    }
    return finish(ctx, reps, label);
}

int cmd_verify(Context &ctx, const std::string &label) {
    auto &fx = ctx.fixtures();
    std::vector<VerificationReport> reps;
    if (fx.classes.count(label)) {
        const auto &cls = fx.require_class(label);
        const CurveModel *E = fx.curve_over_F(label);
        if (!E) throw std::invalid_argument("no curve for " + label);
        reps.push_back(verify_trace_match(cls, *E, ctx.table()));
        reps.push_back(parity_residual_check(cls, ctx.table(), E));
    } else if (auto *tw = find_row(fx.twisted, label)) {
        std::string base = label;
        while (!base.empty() && base.back() == 'i') base.pop_back();
        auto *l = fx.level(base);
        if (!l) throw std::invalid_argument("no level for " + label);
        LevelCharacter chi(parse_cyc_int(l->generator), ctx.table());
        reps.push_back(crosscheck_twist(*tw, chi, ctx.table()));
    } else {
        const TableRow *row = find_row(fx.base_change, label);
        if (!row) row = find_row(fx.base_change_nonrational, label);
        if (!row || !fx.curve_over_subfield(label)) throw std::invalid_argument("unknown class: " + label);
        reps.push_back(crosscheck_base_change(*row, *fx.curve_over_subfield(label), ctx.table()));
    }
    return finish(ctx, reps, label);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hecke eigenvalues and elliptic curves over Q(zeta12)"};
    app.set_config("--config", "", "TOML/INI config file");
    app.require_subcommand(1);
    app.fallthrough();
    Context ctx;
    auto &c = ctx.cfg;
    app.add_option("--cache-dir", c.cache_dir, "cache directory (empty: no cache)")->envname("Z12_CACHE_DIR");
    app.add_option("--max-iters", c.max_iters, "reduction pass cap")->envname("Z12_MAX_ITERS")->check(CLI::PositiveNumber);
    app.add_option("--jobs", c.jobs, "worker threads")->envname("Z12_JOBS")->check(CLI::PositiveNumber);
    app.add_option("--fixtures", c.fixtures, "fixture directory")->envname("Z12_FIXTURES")->check(CLI::ExistingDirectory);
    auto *fj = app.add_flag("--json", c.json, "JSON output")->envname("Z12_JSON");
    app.add_flag("--markdown", c.markdown, "markdown output")->envname("Z12_MARKDOWN")->excludes(fj);

    std::string level, label;
    int64_t max_norm = 25, ap_norm = 0;
    std::vector<std::string> prime_labels;

    auto *fi = app.add_subcommand("field-info", "minimal polynomial, embeddings, units");
    auto *pr = app.add_subcommand("primes", "prime ideals up to a norm bound");
    pr->add_option("--max-norm", max_norm, "norm bound")->envname("Z12_MAX_NORM");
    auto *pf = app.add_subcommand("perfect-forms", "perfect forms and their facets");
    auto *ho = app.add_subcommand("homology", "H1 rank at a level");
    ho->add_option("level", level, "level label, prime label or generator in t")->required();
    auto *he = app.add_subcommand("hecke", "Hecke matrices and eigenvalues at a level");
    he->add_option("level", level, "level label, prime label or generator in t")->required();
    he->add_option("--primes", prime_labels, "prime labels, space separated (default: good primes of norm <= --max-norm)")->delimiter(' ')->envname("Z12_PRIMES");
    he->add_option("--max-norm", max_norm, "norm bound for the default prime set")->envname("Z12_MAX_NORM");
    auto *ca = app.add_subcommand("curve-ap", "a_P of a fixture curve, compared with the tables");
    ca->add_option("class", label, "class label")->required();
    ca->add_option("--max-norm", ap_norm, "list a_P for all primes up to this norm instead")->envname("Z12_AP_NORM");
    auto *ve = app.add_subcommand("verify", "trace and parity checks for a class");
    ve->add_option("class", label, "class label")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*fi) return cmd_field_info(ctx);
        if (*pr) return cmd_primes(ctx, max_norm);
        if (*pf) return cmd_perfect_forms(ctx);
        if (*ho) return cmd_homology(ctx, level);
        if (*he) return cmd_hecke(ctx, level, prime_labels, max_norm);
        if (*ca) return cmd_curve_ap(ctx, label, ap_norm);
        if (*ve) return cmd_verify(ctx, label);
    } catch (const std::exception &e) {
        if (c.json)
            std::cout << ojson{{"error", e.what()}, {"code", "computation_failed"}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return COMPUTE;
    }
    return COMPUTE;
}
