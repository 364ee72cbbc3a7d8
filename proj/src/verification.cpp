#include "z12/verification.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace z12 {

std::string evidence_name(Evidence e) {
    switch (e) {
    case Evidence::RECOMPUTED: return "RECOMPUTED";
    case Evidence::FIXTURE: return "FIXTURE";
    case Evidence::ASSUMED: return "ASSUMED";
    }
    return "?";
}

std::string row_status_name(RowStatus s) {
    switch (s) {
    case RowStatus::match: return "match";
    case RowStatus::mismatch: return "MISMATCH";
    case RowStatus::skipped: return "skipped";
    case RowStatus::holds: return "holds";
    case RowStatus::violated: return "VIOLATED";
    }
    return "?";
}

void VerificationReport::finalize() { pass = failures().empty(); }

std::vector<const ReportRow *> VerificationReport::failures() const {
    std::vector<const ReportRow *> out;
    for (auto &r : rows)
        if (r.status == RowStatus::mismatch || r.status == RowStatus::violated) out.push_back(&r);
    return out;
}

std::string VerificationReport::to_json(int indent) const {
    nlohmann::ordered_json j;
    j["subject"] = subject;
    j["check"] = check;
    j["verdict"] = pass ? "PASS" : "FAIL";
    auto &rs = j["rows"] = nlohmann::ordered_json::array();
    for (auto &r : rows) {
        nlohmann::ordered_json x;
        x["prime"] = r.prime;
        x["source"] = r.source;
        x["expected"] = r.expected ? nlohmann::ordered_json(*r.expected) : nlohmann::ordered_json("*");
        x["actual"] = r.actual ? nlohmann::ordered_json(*r.actual) : nlohmann::ordered_json(nullptr);
        x["status"] = row_status_name(r.status);
        x["evidence"] = evidence_name(r.evidence);
        if (!r.detail.empty()) x["detail"] = r.detail;
        rs.push_back(x);
    }
    j["notes"] = notes;
    j["assumptions"] = assumptions;
    return j.dump(indent);
}

std::string VerificationReport::to_markdown() const {
    std::ostringstream o;
    o << "### " << subject << " (" << check << "): " << (pass ? "PASS" : "FAIL") << "\n\n";
    o << "| prime | source | expected | actual | status | evidence |\n|---|---|---|---|---|---|\n";
    for (auto &r : rows) {
        o << "| " << r.prime << " | " << r.source << " | " << (r.expected ? std::to_string(*r.expected) : "*") << " | "
          << (r.actual ? std::to_string(*r.actual) : "") << " | " << row_status_name(r.status)
          << (r.detail.empty() ? "" : " (" + r.detail + ")") << " | " << evidence_name(r.evidence) << " |\n";
    }
    for (auto &n : notes) o << "\n- note: " << n;
    for (auto &a : assumptions) o << "\n- assumed: " << a;
    o << "\n";
    return o.str();
}

namespace {

ReportRow compare_one(const std::string &prime, const std::string &source, std::optional<int64_t> expected, const LocalCurveData &d) {
    ReportRow r;
    r.prime = prime;
    r.source = source;
    r.expected = expected;
    r.evidence = Evidence::RECOMPUTED;
    if (!expected) {
        r.status = RowStatus::skipped;
        r.detail = d.good ? "starred, curve has good reduction" : "starred, bad reduction";
        if (d.good) r.actual = d.a;
        return r;
    }
    if (!d.good) {
        r.status = RowStatus::mismatch;
        r.detail = "curve has bad reduction";
        return r;
    }
    r.actual = d.a;
    r.status = (d.a == *expected) ? RowStatus::match : RowStatus::mismatch;
    return r;
}

}  // namespace

VerificationReport verify_trace_match(const ClassRecord &cls, const CurveModel &E, const PrimeTable &T, TraceScope scope) {
    VerificationReport rep;
    rep.subject = cls.label;
    rep.check = scope == TraceScope::S2 ? "trace-match (S2)" : "trace-match (all listed)";
    std::vector<std::pair<std::string, std::string>> todo;   // prime, source
    if (scope == TraceScope::S2) {
        for (auto &p : cls.S2) {
            if (!cls.lists(p)) throw MissingData("no eigenvalue for " + cls.label + " at " + p);
            todo.push_back({p, "class table"});
        }
    } else {
        for (auto &e : cls.eigenvalues) todo.push_back({e.prime, "class table"});
        for (auto &e : cls.small_primes) todo.push_back({e.prime, "small-prime table"});
    }
    for (auto &[p, src] : todo) {
        std::optional<int64_t> expected;
        if (src == "class table") {
            expected = cls.eigenvalue(p);
        } else {
            for (auto &e : cls.small_primes)
                if (e.prime == p) expected = e.value;
        }
        rep.rows.push_back(compare_one(p, src, expected, local_data(E, T.require(p))));
    }
    rep.assumptions.push_back("the listed prime sets are sufficient (ray class group computations not redone)");
    rep.finalize();
    return rep;
}

VerificationReport compare_row(const TableRow &row, const CurveModel &E, const PrimeTable &T) {
    VerificationReport rep;
    rep.subject = row.label;
    rep.check = E.base == BaseField::F ? "trace-match" : "base-change";
    for (auto &e : row.values) {
        const auto &P = T.require(e.prime);
        LocalCurveData d = E.base == BaseField::F ? local_data(E, P) : base_change_local_data(E, P);
        rep.rows.push_back(compare_one(e.prime, E.base == BaseField::F ? "row" : "row via " + base_field_name(E.base), e.value, d));
    }
    rep.finalize();
    return rep;
}

VerificationReport crosscheck_base_change(const TableRow &row, const CurveModel &sub, const PrimeTable &T) {
    if (sub.base == BaseField::F) throw std::invalid_argument("base change check needs a subfield curve");
    if (!row.base_field.empty() && parse_base_field(row.base_field) != sub.base)
        throw std::invalid_argument("row " + row.label + " is tagged " + row.base_field + " but the curve lives over " + base_field_name(sub.base));
    VerificationReport rep = compare_row(row, sub, T);
    rep.notes.push_back("split/inert decided by comparing residue degrees over " + base_field_name(sub.base));
    rep.assumptions.push_back("subfield embedded by sqrt(d) -> image of the standard root under t -> -t");
    return rep;
}

VerificationReport parity_residual_check(const ClassRecord &cls, const PrimeTable &T, const CurveModel *E) {
    VerificationReport rep;
    rep.subject = cls.label;
    rep.check = "parity (" + cls.residual_claim + ")";
    rep.assumptions.push_back("character bases of the relevant ray class groups, and the prime sets chosen from them");
    if (cls.S1.empty()) {
        if (cls.note.empty()) throw MissingData("no residual prime set for " + cls.label);
        rep.notes.push_back("vacuous: " + cls.note);
        rep.finalize();
        return rep;
    }
    auto parity_row = [&](const std::string &p, const std::string &stage, bool want_odd) {
        ReportRow r;
        r.prime = p;
        r.source = stage;
        r.evidence = Evidence::FIXTURE;
        auto v = cls.eigenvalue(p);
        if (!v) throw MissingData("starred eigenvalue in the residual prime set at " + p);
        r.expected = *v;
        bool odd = (*v % 2) != 0;
        r.status = (odd == want_odd) ? RowStatus::holds : RowStatus::violated;
        r.detail = want_odd ? "needs odd" : "needs even";
        rep.rows.push_back(r);
        if (E) {
            ReportRow c = r;
            c.source = stage + ", curve";
            c.evidence = Evidence::RECOMPUTED;
            auto d = local_data(*E, T.require(p));
            if (!d.good) {
                c.status = RowStatus::violated;
                c.detail = "curve has bad reduction";
            } else {
                c.actual = d.a;
                c.status = (((d.a % 2) != 0) == want_odd) ? RowStatus::holds : RowStatus::violated;
            }
            rep.rows.push_back(c);
        }
    };
    if (cls.residual_claim == "trivial") {
        for (auto &p : cls.S1) parity_row(p, "trivial image", false);
    } else if (cls.residual_claim == "S3" || cls.residual_claim == "C3") {
        if (!cls.has_staging) throw MissingData("staging metadata missing for " + cls.label);
        for (auto &p : cls.quadratic_stage) parity_row(p, "quadratic stage", true);
        for (auto &p : cls.cubic_stage) parity_row(p, "cubic stage", false);
        std::vector<std::string> staged = cls.quadratic_stage;
        staged.insert(staged.end(), cls.cubic_stage.begin(), cls.cubic_stage.end());
        for (auto &p : cls.S1)
            if (std::find(staged.begin(), staged.end(), p) == staged.end()) throw MissingData("prime " + p + " has no stage");
        rep.notes.push_back("stage attribution is fixture metadata; exclusion and final cubic stages share the even-trace condition");
    } else {
        throw MissingData("unknown residual claim " + cls.residual_claim);
    }
    rep.finalize();
    return rep;
}

LevelCharacter::LevelCharacter(const CycInt &level, const PrimeTable &T) {
    auto f = T.factor_ideal(level);
    if (f.factors.size() != 1) throw std::invalid_argument("level is not a prime power");
    P_ = f.factors[0].first;
    const GF &k = P_.residue.field;
    if (k.p == 2) throw std::invalid_argument("no odd quadratic character in characteristic 2");
    // must be trivial on O^x = <t> x <1+t>
    for (const CycInt &u : {CycInt::t(), CycInt(1, 1, 0, 0)})
        if (k.quadratic_character(reduce(u, P_.residue)) != 1)
            throw std::domain_error("residue symbol is not trivial on units at " + P_.label);
}

int LevelCharacter::operator()(const PrimeIdealRecord &Q) const {
    if (Q.label == P_.label) return 0;
    return P_.residue.field.quadratic_character(reduce(Q.generator, P_.residue));
}

VerificationReport crosscheck_twist(const TableRow &row, const LevelCharacter &chi, const PrimeTable &T) {
    VerificationReport rep;
    rep.subject = row.label;
    rep.check = "twisted Eisenstein";
    for (auto &e : row.values) {
        const auto &Q = T.require(e.prime);
        ReportRow r;
        r.prime = e.prime;
        r.source = "row";
        r.expected = e.value;
        r.evidence = Evidence::RECOMPUTED;
        int c = chi(Q);
        r.detail = "chi = " + std::to_string(c);
        if (!e.value) {
            r.status = RowStatus::skipped;
        } else {
            r.actual = twisted_eisenstein(Q.norm, c);
            r.status = *r.actual == *e.value ? RowStatus::match : RowStatus::mismatch;
        }
        rep.rows.push_back(r);
    }
    rep.notes.push_back("chi is the residue symbol modulo " + chi.prime().label);
    rep.finalize();
    return rep;
}

}  // namespace z12
