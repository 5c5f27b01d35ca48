#include <catch2/catch_amalgamated.hpp>

#include "ahtlab/verify.hpp"

using namespace ahtlab;

TEST_CASE("verify_aht accepts a monochromatic apart witness") {
    auto c = Coloring::from_expr(2, 100, "lam(n) % 2");
    auto v = verify_aht(c, {2, 8, 32}, 1, true);
    CHECK(v.ok());
    CHECK(describe(v) == "ok");
}

TEST_CASE("verify_aht reports the first offending run") {
    auto c = Coloring::from_expr(2, 100, "lam(n) % 2");
    auto v = verify_aht(c, {1, 2}, 0, true);
    REQUIRE(v.kind == VerdictKind::Fail);
    REQUIRE(v.run.has_value());
    CHECK(v.run->first == 2);
    CHECK(v.run->last == 2);
    CHECK(v.actual == 1);
    CHECK(v.claimed == 0);
}

TEST_CASE("verify_aht never trusts the claimed color") {
    auto c = Coloring::from_expr(2, 100, "lam(n) % 2");
    auto v = verify_aht(c, {2, 8, 32}, 0, true);
    REQUIRE(v.kind == VerdictKind::Fail);
    REQUIRE(v.run.has_value());
    CHECK(v.run->first == 1);
    CHECK(v.run->last == 1);
    CHECK(v.claimed == 0);
    CHECK(v.actual == 1);
}

TEST_CASE("verify_aht enforces apartness when required") {
    auto c = Coloring::from_expr(2, 100, "0");
    auto v = verify_aht(c, {1, 3}, 0, true);
    REQUIRE(v.kind == VerdictKind::Fail);
    CHECK(v.reason.find("apartness") != std::string::npos);

    // Without the requirement the same witness is judged on sums only:
    // lam of 1, 3, 4 are all even, so {1,3} is monochromatic for lam%2.
    CHECK(verify_aht(c, {1, 3}, 0, false).ok());
    auto cl = Coloring::from_expr(2, 100, "lam(n) % 2");
    CHECK(verify_aht(cl, {1, 3}, 0, false).ok());
    // mu of 3 is 1, so mu%2 rejects the same witness at run (2,2).
    auto cm = Coloring::from_expr(2, 100, "mu(n) % 2");
    auto w = verify_aht(cm, {1, 3}, 0, false);
    REQUIRE(w.kind == VerdictKind::Fail);
    CHECK(w.run->first == 2);
    CHECK(w.run->last == 2);
}

TEST_CASE("verify_aht rejects structural defects") {
    auto c = Coloring::from_expr(2, 100, "0");
    CHECK(verify_aht(c, {}, 0, true).kind == VerdictKind::Fail);
    CHECK(verify_aht(c, {0, 2}, 0, true).kind == VerdictKind::Fail);
    CHECK(verify_aht(c, {4, 2}, 0, true).kind == VerdictKind::Fail);
    CHECK(verify_aht(c, {2, 2}, 0, true).kind == VerdictKind::Fail);
}

TEST_CASE("verify_aht is undecidable when a run escapes the domain") {
    auto c = Coloring::from_expr(2, 9, "0");
    auto v = verify_aht(c, {2, 8}, 0, true);
    REQUIRE(v.kind == VerdictKind::Undecidable);
    REQUIRE(v.run.has_value());
    CHECK(v.run->first == 1);
    CHECK(v.run->last == 2);

    // Same witness, domain one larger: decidable and ok.
    auto c10 = Coloring::from_expr(2, 10, "0");
    CHECK(verify_aht(c10, {2, 8}, 0, true).ok());
}

TEST_CASE("verify_rt2 checks all increasing index pairs") {
    auto f = PairColoring::from_expr(2, 10, "(j - i) % 2");
    CHECK(verify_rt2(f, {0, 2, 4}, 0).ok());

    auto one = PairColoring::from_expr(2, 10, "1");
    auto v = verify_rt2(one, {1, 2, 3}, 0);
    REQUIRE(v.kind == VerdictKind::Fail);
    REQUIRE(v.pair.has_value());
    CHECK(v.pair->first == 1);
    CHECK(v.pair->second == 2);
    CHECK(v.actual == 1);
}

TEST_CASE("verify_rt2 singleton is vacuously ok") {
    auto f = PairColoring::from_expr(2, 10, "1");
    CHECK(verify_rt2(f, {7}, 0).ok());
    CHECK(verify_rt2(f, {}, 0).kind == VerdictKind::Fail);
    CHECK(verify_rt2(f, {2, 2}, 0).kind == VerdictKind::Fail);
}

TEST_CASE("verify_rt2 is undecidable outside the pair domain") {
    auto f = PairColoring::from_expr(2, 3, "0");
    auto v = verify_rt2(f, {0, 1, 5}, 0);
    REQUIRE(v.kind == VerdictKind::Undecidable);
    REQUIRE(v.pair.has_value());
    CHECK(v.pair->first == 0);
    CHECK(v.pair->second == 5);
}

TEST_CASE("verify_ipt2 constrains only increasing cross pairs") {
    auto f = PairColoring::from_expr(2, 10, "i % 2");
    CHECK(verify_ipt2(f, {0}, {1}, 0).ok());

    auto v = verify_ipt2(f, {1}, {2}, 0);
    REQUIRE(v.kind == VerdictKind::Fail);
    REQUIRE(v.pair.has_value());
    CHECK(v.pair->first == 1);
    CHECK(v.pair->second == 2);
    CHECK(v.actual == 1);

    // No increasing pair at all: vacuously ok.
    CHECK(verify_ipt2(f, {5}, {3}, 0).ok());
    CHECK(verify_ipt2(f, {5}, {3}, 1).ok());
}

TEST_CASE("verify_ipt2 reports the first offender in row-major order") {
    auto f = PairColoring::from_expr(2, 10, "i % 2");
    auto v = verify_ipt2(f, {0, 3}, {2, 5}, 0);
    REQUIRE(v.kind == VerdictKind::Fail);
    CHECK(v.pair->first == 3);
    CHECK(v.pair->second == 5);
}

TEST_CASE("verify_ipt2 structural and domain rules") {
    auto f = PairColoring::from_expr(2, 4, "0");
    CHECK(verify_ipt2(f, {}, {1}, 0).kind == VerdictKind::Fail);
    CHECK(verify_ipt2(f, {1}, {}, 0).kind == VerdictKind::Fail);
    CHECK(verify_ipt2(f, {2, 1}, {3}, 0).kind == VerdictKind::Fail);
    auto v = verify_ipt2(f, {0}, {9}, 0);
    REQUIRE(v.kind == VerdictKind::Undecidable);
    CHECK(v.pair->second == 9);
}

TEST_CASE("verify_hil checks every nonempty family union") {
    auto zero = Coloring::from_expr(1, 100, "0");
    CHECK(verify_hil(zero, {1, 2}, 0).ok());

    auto parity = Coloring::from_expr(2, 100, "pop(n) % 2");
    auto v = verify_hil(parity, {1, 2}, 1);
    REQUIRE(v.kind == VerdictKind::Fail);
    CHECK(v.family == std::vector<int>{1, 2});
    CHECK(v.actual == 0);
    CHECK(v.claimed == 1);
}

TEST_CASE("verify_hil rejects structural defects") {
    auto c = Coloring::from_expr(2, 100, "0");
    auto v = verify_hil(c, {1, 1}, 0);
    REQUIRE(v.kind == VerdictKind::Fail);
    CHECK(v.reason.find("distinct") != std::string::npos);
    CHECK(verify_hil(c, {}, 0).kind == VerdictKind::Fail);
    CHECK(verify_hil(c, {0, 1}, 0).kind == VerdictKind::Fail);
    // Disjointness is not required: overlapping sets are legal.
    CHECK(verify_hil(c, {3, 1}, 0).ok());
}

TEST_CASE("verify_hil is undecidable when a union escapes") {
    auto parity = Coloring::from_expr(2, 3, "pop(n) % 2");
    auto v = verify_hil(parity, {1, 4}, 1);
    REQUIRE(v.kind == VerdictKind::Undecidable);
    CHECK(v.family == std::vector<int>{2});
}

TEST_CASE("verdict descriptions are labeled by kind") {
    auto c = Coloring::from_expr(2, 100, "lam(n) % 2");
    CHECK(describe(verify_aht(c, {2, 8, 32}, 1, true)) == "ok");
    CHECK(describe(verify_aht(c, {1, 2}, 0, true)).rfind("fail:", 0) == 0);
    auto c9 = Coloring::from_expr(2, 9, "0");
    CHECK(describe(verify_aht(c9, {2, 8}, 0, true)).rfind("undecidable:", 0) == 0);
}
