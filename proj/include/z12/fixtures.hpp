#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "z12/elliptic.hpp"
#include "z12/ideals.hpp"

namespace z12 {

// one table cell: a value or "*"
struct EigenEntry {
    std::string prime;
    std::optional<int64_t> value;
};

struct TableRow {
    std::string label;
    std::vector<EigenEntry> values;
    std::string base_field;   // base change rows
    std::string original;     // old-class rows
    std::optional<int64_t> lookup(const std::string &prime, bool *present = nullptr) const;
};

struct ClassRecord {
    std::string label;
    std::string level_generator;
    std::string residual_claim;   // "trivial", "C3", "S3"
    std::vector<EigenEntry> eigenvalues;    // per-class table
    std::vector<EigenEntry> small_primes;   // row of the small-prime table, when the class has one
    std::vector<std::string> S1, S2;
    std::string note;
    bool has_staging = false;
    std::vector<std::string> quadratic_stage, cubic_stage;

    // value from the class table, falling back to the small-prime row; throws if unlisted
    std::optional<int64_t> eigenvalue(const std::string &prime) const;
    bool lists(const std::string &prime) const;
};

struct LevelRow {
    std::string label;
    std::string generator;
    std::string type;
    int cuspidal_dimension = 0;
};

struct Fixtures {
    std::string dir;
    std::vector<PrimeFixture> primes;
    CurveFixtures curves;
    std::map<std::string, ClassRecord> classes;
    std::vector<TableRow> rational, base_change, base_change_nonrational, twisted, old_classes;
    std::vector<LevelRow> levels;
    std::map<std::string, int> eisenstein_dimension;

    static Fixtures load(const std::string &dir = default_data_dir());
    const ClassRecord &require_class(const std::string &label) const;
    // curve for a table label; "5476i" falls back to "5476"
    const CurveModel *curve_over_F(const std::string &label) const;
    const CurveModel *curve_over_subfield(const std::string &label) const;
    const LevelRow *level(const std::string &label) const;
};

}  // namespace z12
