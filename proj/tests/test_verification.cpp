#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "z12/verification.hpp"

using namespace z12;

namespace {
const Fixtures &fx() {
    static Fixtures f = Fixtures::load();
    return f;
}
const PrimeTable &table() {
    static PrimeTable t(fx().primes);
    return t;
}
void set_eigen(ClassRecord &c, const std::string &p, int64_t v) {
    for (auto &e : c.eigenvalues)
        if (e.prime == p) e.value = v;
}
}  // namespace

TEST_CASE("class 441 over S2") {
    const auto &c = fx().require_class("441");
    CHECK(c.S2.size() == 31);
    auto rep = verify_trace_match(c, *fx().curve_over_F("441"), table());
    CHECK(rep.pass);
    auto find = [&](const std::string &p) {
        for (auto &r : rep.rows)
            if (r.prime == p) return *r.actual;
        return int64_t(99999);
    };
    CHECK(find("p17,1") == -20);
    CHECK(find("p313,1") == 34);
}

TEST_CASE("fault injection names exactly one row") {
    ClassRecord c = fx().require_class("441");
    std::mt19937 g(1);
    for (int trial = 0; trial < 5; ++trial) {
        ClassRecord d = c;
        const std::string &p = d.S2[g() % d.S2.size()];
        auto v = d.eigenvalue(p);
        if (!v) continue;
        set_eigen(d, p, *v + 1);
        auto rep = verify_trace_match(d, *fx().curve_over_F("441"), table());
        CHECK_FALSE(rep.pass);
        REQUIRE(rep.failures().size() == 1);
        CHECK(rep.failures()[0]->prime == p);
    }
}

TEST_CASE("order independence") {
    ClassRecord c = fx().require_class("2500a");
    auto base = verify_trace_match(c, *fx().curve_over_F("2500a"), table());
    CHECK(base.pass);
    std::mt19937 g(4);
    std::shuffle(c.S2.begin(), c.S2.end(), g);
    CHECK(verify_trace_match(c, *fx().curve_over_F("2500a"), table()).pass == base.pass);
}

TEST_CASE("missing data") {
    ClassRecord c = fx().require_class("1156");
    c.S2.push_back("p601,3");
    CHECK_THROWS_AS(verify_trace_match(c, *fx().curve_over_F("1156"), table()), MissingData);
}

TEST_CASE("parity checks") {
    auto r441 = parity_residual_check(fx().require_class("441"), table(), fx().curve_over_F("441"));
    CHECK(r441.pass);
    CHECK(r441.rows.size() == 24);
    auto r3328 = parity_residual_check(fx().require_class("3328"), table());
    CHECK(r3328.pass);
    CHECK(r3328.rows.empty());
    REQUIRE(!r3328.notes.empty());
    CHECK(r3328.notes[0].find("immediately deduce") != std::string::npos);
    CHECK(parity_residual_check(fx().require_class("1156"), table()).pass);
    ClassRecord s3 = fx().require_class("2257");
    s3.has_staging = false;
    CHECK_THROWS_AS(parity_residual_check(s3, table()), MissingData);
}

TEST_CASE("parity fault injection") {
    for (auto &[name, c] : fx().classes) {
        if (c.S1.empty()) continue;
        CHECK_MESSAGE(parity_residual_check(c, table(), fx().curve_over_F(name)).pass, name);
        ClassRecord d = c;
        auto v = d.eigenvalue(d.S1[0]);
        set_eigen(d, d.S1[0], *v + 1);
        CHECK_MESSAGE(!parity_residual_check(d, table()).pass, name);
    }
}

TEST_CASE("base change rows") {
    for (const char *lab : {"484", "5329d", "2209"}) {
        const TableRow *row = nullptr;
        for (auto &r : fx().base_change)
            if (r.label == lab) row = &r;
        REQUIRE(row);
        CHECK(crosscheck_base_change(*row, *fx().curve_over_subfield(lab), table()).pass);
    }
}

TEST_CASE("twist") {
    LevelCharacter chi(parse_cyc_int("t^3+5t^2+3t-9"), table());
    CHECK(chi.prime().label == "p73,1");
    CHECK(chi(table().require("p2")) == -1);
    CHECK(chi(table().require("p37,3")) == 1);
    for (auto &row : fx().twisted) CHECK(crosscheck_twist(row, chi, table()).pass);
    TableRow bad = fx().twisted[0];
    bad.values[0].value = 5;
    auto rep = crosscheck_twist(bad, chi, table());
    CHECK_FALSE(rep.pass);
    CHECK(rep.failures().size() == 1);
}

TEST_CASE("report rendering is deterministic") {
    auto a = verify_trace_match(fx().require_class("1156"), *fx().curve_over_F("1156"), table());
    auto b = verify_trace_match(fx().require_class("1156"), *fx().curve_over_F("1156"), table());
    CHECK(a.to_json() == b.to_json());
    CHECK(a.to_markdown().find("PASS") != std::string::npos);
}
