#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ahtlab/certificate.hpp"
#include "ahtlab/solvers.hpp"
#include "support/generators.hpp"

using namespace ahtlab;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name)
        : path((std::filesystem::temp_directory_path() / name).string()) {}
    ~TempFile() { std::remove(path.c_str()); }
};

Certificate solved_aht_cert(const std::string& src, PosInt n, int m) {
    auto c = Coloring::from_expr(2, n, src);
    auto r = solve_aht(c, {.bound = n, .target_size = m});
    REQUIRE(r.found());
    return make_aht_certificate(c, *r.witness, true, true);
}

// Assembles the staged certificate the RT2-to-blocks pipeline emits:
// an RT2 run on the induced pair coloring plus the block-set result.
Certificate staged_blocks_cert(const Coloring& c, int m, PosInt rt2_bound) {
    PairColoring f = induced_pair_coloring(c);
    auto r = solve_rt2(f, {.bound = rt2_bound, .target_size = m + 1});
    REQUIRE(r.found());
    std::vector<PosInt> h = blocks_from_rt2(r.witness->j);

    Certificate cert;
    cert.principle = "RT2_TO_AHT";
    InstanceExtras extras;
    extras.rt2_size = m + 1;
    detail::describe_instance(cert, c, m, extras);
    cert.witness.emplace_back("h", detail::format_list(h));
    cert.color = r.witness->color;
    cert.exhaustive = true;
    cert.stages.push_back(
        make_rt2_certificate(f, *r.witness, true, kDefaultBitBudget, rt2_bound));
    return cert;
}

} // namespace

TEST_CASE("certificates serialize in canonical key order", "[certificate]") {
    Certificate cert = solved_aht_cert("lam(n) % 2", 64, 3);
    std::string text = write_certificate(cert);
    CHECK(text ==
          "principle = AHT\n"
          "instance.colors = 2\n"
          "instance.bound = 64\n"
          "instance.size = 3\n"
          "instance.require_apart = true\n"
          "instance.coloring = expr:lam(n) % 2\n"
          "witness.h = 1,4,16\n"
          "color = 0\n"
          "exhaustive = true\n");
}

TEST_CASE("write-read-write is byte identical", "[certificate]") {
    SECTION("plain certificate") {
        Certificate cert = solved_aht_cert("lam(n) % 2", 64, 3);
        std::string text = write_certificate(cert);
        Certificate back = read_certificate(text);
        CHECK(back == cert);
        CHECK(write_certificate(back) == text);
    }
    SECTION("staged certificate") {
        auto c = Coloring::from_expr(2, 1022, "mu(n) % 2");
        Certificate cert = staged_blocks_cert(c, 3, 10);
        std::string text = write_certificate(cert);
        Certificate back = read_certificate(text);
        CHECK(back == cert);
        CHECK(write_certificate(back) == text);
    }
    SECTION("random solver corpus") {
        std::mt19937_64 rng(515);
        int round_trips = 0;
        while (round_trips < 60) {
            const PosInt n = 4 + rng() % 29;
            const int m = 1 + int(rng() % 2);
            auto c = Coloring::from_expr(2 + int(rng() % 3), n,
                                         testgen::random_expr(rng, 3));
            auto r = solve_aht(c, {.bound = n, .target_size = m});
            if (!r.found()) continue;
            Certificate cert = make_aht_certificate(c, *r.witness, true, true);
            std::string text = write_certificate(cert);
            CHECK(read_certificate(text) == cert);
            CHECK(write_certificate(read_certificate(text)) == text);
            ++round_trips;
        }
    }
}

TEST_CASE("verification accepts solver output and rejects tampering", "[certificate]") {
    Certificate cert = solved_aht_cert("lam(n) % 2", 64, 3);
    CHECK(verify_certificate(cert).ok());

    SECTION("hand-edited color") {
        Certificate bad = cert;
        bad.color = 1;
        Verdict v = verify_certificate(bad);
        REQUIRE_FALSE(v.ok());
        CHECK(v.kind == VerdictKind::Fail);
        REQUIRE(v.run.has_value());  // concrete counterexample run
    }
    SECTION("dropped witness element") {
        Certificate bad = cert;
        bad.witness[0].second = "1,4";
        Verdict v = verify_certificate(bad);
        REQUIRE_FALSE(v.ok());
        CHECK_THAT(v.reason, Catch::Matchers::ContainsSubstring("size"));
    }
    SECTION("apartness-breaking element") {
        Certificate bad = cert;
        bad.witness[0].second = "1,4,20";  // mu(4) = lam(20) = 2
        Verdict v = verify_certificate(bad);
        REQUIRE_FALSE(v.ok());
        CHECK_THAT(v.reason, Catch::Matchers::ContainsSubstring("apart"));
    }
    SECTION("color out of range") {
        Certificate bad = cert;
        bad.color = 7;
        CHECK_THAT(verify_certificate(bad).reason,
                   Catch::Matchers::ContainsSubstring("range"));
    }
    SECTION("witness outside a recorded search bound") {
        auto c = Coloring::from_expr(2, 64, "lam(n) % 2");
        auto r = solve_aht(c, {.bound = 64, .target_size = 3});
        Certificate narrow =
            make_aht_certificate(c, *r.witness, true, true, kDefaultBitBudget, PosInt(8));
        CHECK_THAT(verify_certificate(narrow).reason,
                   Catch::Matchers::ContainsSubstring("search_bound"));
    }
}

TEST_CASE("staged certificates cross-check their stages", "[certificate]") {
    auto c = Coloring::from_expr(2, 1022, "mu(n) % 2");
    Certificate cert = staged_blocks_cert(c, 3, 10);
    CHECK(verify_certificate(cert).ok());

    // Every stage stands on its own.
    for (const Certificate& stage : cert.stages) CHECK(verify_certificate(stage).ok());

    SECTION("stage witness inconsistent with the block set") {
        Certificate bad = cert;
        bad.witness[0].second = "2,4,8";
        Verdict v = verify_certificate(bad);
        REQUIRE_FALSE(v.ok());
    }
    SECTION("stage color inconsistent with the final color") {
        Certificate bad = cert;
        bad.stages[0].color = 1 - bad.stages[0].color;
        CHECK_FALSE(verify_certificate(bad).ok());
    }
    SECTION("stage coloring must derive from the instance") {
        Certificate bad = cert;
        for (auto& [key, value] : bad.stages[0].instance)
            if (key == "coloring") value = "expr:(j - i) % 2";
        CHECK_THAT(verify_certificate(bad).reason,
                   Catch::Matchers::ContainsSubstring("derive"));
    }
    SECTION("missing stage") {
        Certificate bad = cert;
        bad.stages.clear();
        CHECK_THAT(verify_certificate(bad).reason,
                   Catch::Matchers::ContainsSubstring("stage"));
    }
}

TEST_CASE("table-backed certificates pin the table digest", "[certificate]") {
    TempFile tf("ahtlab_cert_table.txt");
    {
        auto base = Coloring::from_expr(2, 12, "mu(n) % 2");
        write_coloring_table_file(materialize(base), tf.path);
    }
    Coloring c = read_coloring_table_file(tf.path);
    auto r = solve_aht(c, {.bound = 12, .target_size = 2});
    REQUIRE(r.found());
    Certificate cert = make_aht_certificate(c, *r.witness, true, true);
    REQUIRE(cert.instance_value("coloring_digest") != nullptr);
    CHECK(verify_certificate(cert).ok());

    // Corrupt the file: same length, different colors.
    {
        Coloring flipped = Coloring::from_expr(2, 12, "(mu(n) + 1) % 2");
        write_coloring_table_file(materialize(flipped), tf.path);
    }
    Verdict v = verify_certificate(cert);
    REQUIRE_FALSE(v.ok());
    CHECK_THAT(v.reason, Catch::Matchers::ContainsSubstring("digest"));
}

TEST_CASE("word certificates check the period claim", "[certificate]") {
    Word w(1, {0, 1, 2}, 3);
    Coloring d = word_block_coloring(w);

    // Window [0,2] and window [3,5] both span one full period.
    AhtWitness witness{{7, 56}, 2};
    Certificate cert = make_word_certificate(d, witness, true, false);
    CHECK(verify_certificate(cert).ok());

    SECTION("letter must equal the period maximum") {
        Certificate bad = cert;
        bad.color = 1;
        Verdict v = verify_certificate(bad);
        REQUIRE_FALSE(v.ok());
    }
    SECTION("window too narrow for the period") {
        AhtWitness thin{{3}, 1};  // D(3) = max(0,1) = 1, but span 2 < period 3
        Certificate bad = make_word_certificate(d, thin, true, false);
        Verdict v = verify_certificate(bad);
        REQUIRE_FALSE(v.ok());
        CHECK_THAT(v.reason, Catch::Matchers::ContainsSubstring("period"));
    }
    SECTION("no claim, no period check") {
        AhtWitness thin{{3}, 1};
        Certificate modest = make_word_certificate(d, thin, false, false);
        CHECK(verify_certificate(modest).ok());
    }
}

TEST_CASE("certificate parse errors carry line numbers", "[certificate]") {
    const std::string good = write_certificate(solved_aht_cert("lam(n) % 2", 64, 3));

    SECTION("truncation") {
        std::string cut = good.substr(0, good.find("color ="));
        try {
            read_certificate(cut);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("color"));
        }
    }
    SECTION("bad indentation") {
        try {
            read_certificate("principle = AHT\n instance.colors = 2\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SECTION("tabs rejected") {
        CHECK_THROWS_AS(read_certificate("principle = AHT\n\tcolor = 0\n"), ParseError);
    }
    SECTION("unknown principle") {
        CHECK_THROWS_AS(read_certificate("principle = ZFC\ncolor = 0\nexhaustive = true\n"),
                        ParseError);
    }
    SECTION("missing separator") {
        try {
            read_certificate("principle = AHT\ncolor 0\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SECTION("duplicate scalar") {
        std::string dup = good + "color = 0\n";
        CHECK_THROWS_AS(read_certificate(dup), ParseError);
    }
    SECTION("trailing content") {
        std::string two = good + good;
        CHECK_THROWS_AS(read_certificate(two), ParseError);
    }
    SECTION("stages marker without a stage") {
        std::string dangling = good + "stages:\n";
        CHECK_THROWS_AS(read_certificate(dangling), ParseError);
    }
}

TEST_CASE("certificate files round-trip through disk", "[certificate]") {
    auto c = Coloring::from_expr(2, 1022, "mu(n) % 2");
    Certificate cert = staged_blocks_cert(c, 3, 10);
    TempFile tf("ahtlab_cert_roundtrip.txt");
    write_certificate_file(cert, tf.path);
    Certificate back = read_certificate_file(tf.path);
    CHECK(back == cert);
    CHECK(verify_certificate(back).ok());
    CHECK(certificate_digest(back) == certificate_digest(cert));
}
