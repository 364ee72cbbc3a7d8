#pragma once

#include <optional>
#include <string>
#include <vector>

#include "z12/elliptic.hpp"
#include "z12/fixtures.hpp"

namespace z12 {

enum class Evidence { RECOMPUTED, FIXTURE, ASSUMED };
std::string evidence_name(Evidence e);

enum class RowStatus { match, mismatch, skipped, holds, violated };
std::string row_status_name(RowStatus s);

struct ReportRow {
    std::string prime;
    std::string source;   // which table or stage the expected value came from
    std::optional<int64_t> expected, actual;
    RowStatus status = RowStatus::skipped;
    std::string detail;
    Evidence evidence = Evidence::FIXTURE;
};

struct VerificationReport {
    std::string subject;   // class label
    std::string check;     // trace-match, parity, base-change, twist
    std::vector<ReportRow> rows;
    std::vector<std::string> notes;
    std::vector<std::string> assumptions;
    bool pass = false;

    void finalize();   // pass iff no mismatch/violated row
    std::vector<const ReportRow *> failures() const;
    std::string to_json(int indent = 2) const;
    std::string to_markdown() const;
};

class MissingData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TraceScope { S2, AllListed };

// a_P of the curve against the eigenvalues of the class
VerificationReport verify_trace_match(const ClassRecord &cls, const CurveModel &E, const PrimeTable &T,
                                      TraceScope scope = TraceScope::S2);
// trace match for an arbitrary table row, optionally with a subfield curve (then base change is applied)
VerificationReport compare_row(const TableRow &row, const CurveModel &E, const PrimeTable &T);

// parity protocol over S1; the curve, when given, contributes recomputed parity rows
VerificationReport parity_residual_check(const ClassRecord &cls, const PrimeTable &T, const CurveModel *E = nullptr);

VerificationReport crosscheck_base_change(const TableRow &row, const CurveModel &subfield_curve, const PrimeTable &T);

// quadratic character of (O/P^k)^x, trivial on units, for a level that is a prime power
class LevelCharacter {
public:
    LevelCharacter(const CycInt &level, const PrimeTable &T);
    int operator()(const PrimeIdealRecord &Q) const;
    const PrimeIdealRecord &prime() const { return P_; }

private:
    PrimeIdealRecord P_;
};

VerificationReport crosscheck_twist(const TableRow &row, const LevelCharacter &chi, const PrimeTable &T);

}  // namespace z12
