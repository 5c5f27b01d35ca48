// Acceptance suite: one pass/fail line per criterion, exit code is the
// number of failed criteria. Each criterion is self-contained and uses
// independent random streams with fixed seeds.
#include <algorithm>
#include <chrono>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ahtlab/ahtlab.hpp"
#include "support/generators.hpp"
#include "support/naive_oracles.hpp"

using namespace ahtlab;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        ok = false;
        if (detail.empty()) detail = why;
    }
};

int failures = 0;

void report(int index, const std::string& name, const Outcome& o, double seconds,
            double budget_seconds) {
    bool in_budget = budget_seconds <= 0 || seconds < budget_seconds;
    bool ok = o.ok && in_budget;
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << index << ". " << name << ": " << o.detail;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " (" << seconds << "s";
    if (budget_seconds > 0) line << " / " << budget_seconds << "s budget";
    line << ")";
    if (!in_budget) line << " [over budget]";
    std::cout << line.str() << "\n";
    if (!ok) ++failures;
}

template <typename F>
void criterion(int index, const std::string& name, double budget_seconds, F body) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    body(o);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(index, name, o, seconds, budget_seconds);
}

void set_value(std::vector<std::pair<std::string, std::string>>& kv, const std::string& key,
               const std::string& value) {
    for (auto& [k, v] : kv)
        if (k == key) {
            v = value;
            return;
        }
    kv.emplace_back(key, value);
}

bool rejected(const Certificate& cert) {
    Verdict v = verify_certificate(cert);
    return !v.ok() && describe(v).starts_with("fail:") && describe(v).size() > 6;
}

// --- 1: RT2 => AHT block pipeline over random colorings ------------------

void prop3_suite(Outcome& o) {
    std::mt19937_64 rng(0x31);
    int completed = 0;
    for (int it = 0; it < 200; ++it) {
        int k = 2 + int(rng() % 2);
        Coloring c = Coloring::from_expr(k, 4094, testgen::random_expr(rng));
        auto r = reduce_rt2_to_aht(c, 3, 12);
        if (!r.found()) continue;
        ++completed;
        const auto& h = r.witness->h;
        if (!is_apart(h)) return o.fail("block set is not apart");
        for (const Run& run : adjacent_sums(h))
            if (c(run.sum) != r.witness->color)
                return o.fail("AS(H) is not monochromatic with the stage color");
        if (r.certificate->stages[0].color != r.witness->color)
            return o.fail("stage color disagrees with the block color");
        if (!verify_certificate(*r.certificate).ok())
            return o.fail("pipeline certificate does not verify");
    }
    o.detail = "200 colorings, " + std::to_string(completed) + " completed, 0 violations";
}

// --- 2: AHT => IPT2 via the full chain ------------------------------------

void prop4_suite(Outcome& o) {
    std::mt19937_64 rng(0x32);
    int completed = 0;
    for (int it = 0; it < 200; ++it) {
        PairColoring f = PairColoring::from_expr(2, 10, testgen::random_pair_expr(rng));
        auto r = reduce_aht_to_ipt2(f, 3, AhtStageKind::Chain);
        if (!r.found()) continue;
        ++completed;
        const auto& w = *r.witness;
        for (PosInt x1 : w.h1)
            for (PosInt x2 : w.h2)
                if (x1 < x2 && f(x1, x2) != w.color)
                    return o.fail("increasing cross pair off the stage color");
        if (r.certificate->stages[0].color != w.color)
            return o.fail("stage color disagrees with the projected color");
        if (!verify_certificate(*r.certificate).ok())
            return o.fail("chain certificate does not verify");
    }
    o.detail = "200 pair colorings, " + std::to_string(completed) + " completed, 0 violations";
}

// --- 3: apartness-sum identity --------------------------------------------

void apartness_identity(Outcome& o) {
    std::mt19937_64 rng(0x33);
    for (int it = 0; it < 10000; ++it) {
        int m = 1 + int(rng() % 8);
        auto h = testgen::random_apart_set(rng, m);
        auto runs = adjacent_sums(h);
        if (runs.size() != std::size_t(m) * (m + 1) / 2)
            return o.fail("|AS(H)| != m(m+1)/2");
        std::set<PosInt> sums;
        for (const Run& r : runs) {
            if (lam(r.sum) != lam(h[r.first - 1])) return o.fail("lam(run) != lam(h_i)");
            if (mu(r.sum) != mu(h[r.last - 1])) return o.fail("mu(run) != mu(h_j)");
            sums.insert(r.sum);
        }
        if (sums.size() != runs.size()) return o.fail("adjacent sums collide");
    }
    o.detail = "10000 apart sets, sizes 1-8, identity holds";
}

// --- 4: pruned search equals naive enumeration ----------------------------

void oracle_equivalence(Outcome& o) {
    std::mt19937_64 rng(0x34);
    long long cells = 0;
    for (PosInt n = 1; n <= 16; ++n) {
        for (int m = 1; m <= 2; ++m) {
            for (int it = 0; it < 100; ++it) {
                int k = 2 + int(rng() % 2);
                bool apart = (it % 2) == 0;
                Coloring c = materialize(Coloring::from_expr(k, n, testgen::random_expr(rng)));
                auto fast = solve_aht(c, {.bound = n, .target_size = m, .require_apart = apart});
                auto slow = testgen::naive_solve_aht(c, n, m, apart);
                if (fast.found() != slow.has_value() ||
                    (fast.found() && !(*fast.witness == *slow)))
                    return o.fail("aht disagreement at n=" + std::to_string(n));

                if (n >= 2) {
                    PairColoring f = materialize(
                        PairColoring::from_expr(k, n, testgen::random_pair_expr(rng)));
                    auto fr = solve_rt2(f, {.bound = n, .target_size = m});
                    auto nr = testgen::naive_solve_rt2(f, n, m);
                    if (fr.found() != nr.has_value() || (fr.found() && !(*fr.witness == *nr)))
                        return o.fail("rt2 disagreement at n=" + std::to_string(n));

                    auto fi = solve_ipt2(f, {.bound = n, .target_size = m});
                    auto ni = testgen::naive_solve_ipt2(f, n, m);
                    if (fi.found() != ni.has_value() || (fi.found() && !(*fi.witness == *ni)))
                        return o.fail("ipt2 disagreement at n=" + std::to_string(n));
                }

                ++cells;
            }
        }
    }
    for (int base = 1; base <= 4; ++base) {
        for (int m = 1; m <= 2; ++m) {
            for (int it = 0; it < 100; ++it) {
                int k = 2 + int(rng() % 2);
                PosInt bound = (PosInt{1} << base) - 1;
                Coloring c =
                    materialize(Coloring::from_expr(k, bound, testgen::random_expr(rng)));
                auto fast = solve_hil(c, {.bound = PosInt(base), .target_size = m});
                auto slow = testgen::naive_solve_hil(c, base, m);
                if (fast.found() != slow.has_value() ||
                    (fast.found() && !(*fast.witness == *slow)))
                    return o.fail("hil disagreement at base=" + std::to_string(base));
                ++cells;
            }
        }
    }
    o.detail = std::to_string(cells) + " solver/oracle cells agree";
}

// --- 5: word pipeline ------------------------------------------------------

void word_pipeline(Outcome& o) {
    std::mt19937_64 rng(0x35);
    for (int it = 0; it < 100; ++it) {
        int alphabet = 2 + int(rng() % 5);
        int prefix = int(rng() % 9);
        int period = 1 + int(rng() % 12);
        std::vector<int> letters;
        for (int i = 0; i < prefix + period; ++i) letters.push_back(int(rng() % alphabet));
        Word w(alphabet - 2, letters, period);

        auto r = word_highest_letter(w, 2);
        if (!r.found()) return o.fail("pipeline found no witness");
        bool past_prefix = true;
        for (PosInt x : r.witness->h)
            if (lam(x) < w.prefix_length()) past_prefix = false;
        if (!past_prefix) continue;
        int period_max = 0;
        for (int t = w.prefix_length(); t < w.length(); ++t)
            period_max = std::max(period_max, letters[std::size_t(t)]);
        if (r.letter != period_max) return o.fail("letter differs from the period maximum");
        if (!r.infinitely_often) return o.fail("claim missing for a periodic witness");
        if (!verify_certificate(*r.certificate).ok())
            return o.fail("word certificate does not verify");
    }
    o.detail = "100 eventually periodic words, letter = period maximum";
}

// --- 6: adversarial mutations are rejected ---------------------------------

void adversarial_suite(Outcome& o) {
    std::mt19937_64 rng(0x36);
    int aht = 0, rt2 = 0, ipt2 = 0, hil = 0, mutations = 0;
    auto flip_color = [&](Certificate cert, int k) {
        cert.color = (cert.color + 1) % k;
        return cert;
    };

    for (int attempt = 0; attempt < 4000 && (aht < 100 || rt2 < 100 || ipt2 < 100 || hil < 100);
         ++attempt) {
        int k = 2 + int(rng() % 2);
        if (aht < 100) {
            Coloring c = Coloring::from_expr(k, 64, testgen::random_expr(rng));
            auto r = solve_aht(c, {.bound = 64, .target_size = 3});
            if (r.found()) {
                ++aht;
                Certificate cert = make_aht_certificate(c, *r.witness, true, true);
                if (!verify_certificate(cert).ok()) return o.fail("valid aht witness rejected");

                if (!rejected(flip_color(cert, k))) return o.fail("aht color flip accepted");
                Certificate drop = cert;
                auto h = r.witness->h;
                h.erase(h.begin() + 1);
                set_value(drop.witness, "h", detail::format_list(h));
                if (!rejected(drop)) return o.fail("aht element drop accepted");
                Certificate insert = cert;
                h = r.witness->h;
                h.push_back(3 * h.front());
                std::sort(h.begin(), h.end());
                set_value(insert.witness, "h", detail::format_list(h));
                set_value(insert.instance, "size", std::to_string(h.size()));
                if (!rejected(insert)) return o.fail("apartness-breaking insertion accepted");
                mutations += 3;
            }
        }
        if (rt2 < 100) {
            PairColoring f = PairColoring::from_expr(k, 8, testgen::random_pair_expr(rng));
            auto r = solve_rt2(f, {.bound = 8, .target_size = 3});
            if (r.found()) {
                ++rt2;
                Certificate cert = make_rt2_certificate(f, *r.witness, true);
                if (!verify_certificate(cert).ok()) return o.fail("valid rt2 witness rejected");
                if (!rejected(flip_color(cert, k))) return o.fail("rt2 color flip accepted");
                Certificate drop = cert;
                auto j = r.witness->j;
                j.pop_back();
                set_value(drop.witness, "j", detail::format_list(j));
                if (!rejected(drop)) return o.fail("rt2 element drop accepted");
                mutations += 2;
            }
        }
        if (ipt2 < 100) {
            PairColoring f = PairColoring::from_expr(k, 6, testgen::random_pair_expr(rng));
            auto r = solve_ipt2(f, {.bound = 6, .target_size = 2});
            if (r.found()) {
                ++ipt2;
                Certificate cert = make_ipt2_certificate(f, *r.witness, true);
                if (!verify_certificate(cert).ok()) return o.fail("valid ipt2 witness rejected");
                if (!rejected(flip_color(cert, k))) return o.fail("ipt2 color flip accepted");
                Certificate drop = cert;
                auto h1 = r.witness->h1;
                h1.pop_back();
                set_value(drop.witness, "h1", detail::format_list(h1));
                if (!rejected(drop)) return o.fail("ipt2 element drop accepted");
                mutations += 2;
            }
        }
        if (hil < 100) {
            Coloring c = Coloring::from_expr(k, 7, testgen::random_expr(rng));
            auto r = solve_hil(c, {.bound = 3, .target_size = 2});
            if (r.found()) {
                ++hil;
                Certificate cert = make_hil_certificate(c, 3, *r.witness, true);
                if (!verify_certificate(cert).ok()) return o.fail("valid hil witness rejected");
                if (!rejected(flip_color(cert, k))) return o.fail("hil color flip accepted");
                Certificate drop = cert;
                auto sets = r.witness->sets;
                sets.pop_back();
                set_value(drop.witness, "sets", detail::format_list(sets));
                if (!rejected(drop)) return o.fail("hil element drop accepted");
                mutations += 2;
            }
        }
    }
    if (aht < 100 || rt2 < 100 || ipt2 < 100 || hil < 100)
        return o.fail("could not collect 100 witnesses per principle");
    o.detail = "400 witnesses, " + std::to_string(mutations) + " mutations all rejected";
}

// --- 7: format stability ----------------------------------------------------

void format_stability(Outcome& o) {
    std::mt19937_64 rng(0x37);
    std::vector<Certificate> corpus;

    while (corpus.size() < 25) {
        int k = 2 + int(rng() % 2);
        Coloring c = Coloring::from_expr(k, 64, testgen::random_expr(rng));
        auto r = solve_aht(c, {.bound = 64, .target_size = 2});
        if (r.found()) corpus.push_back(make_aht_certificate(c, *r.witness, true, true));
        PairColoring f = PairColoring::from_expr(k, 8, testgen::random_pair_expr(rng));
        auto q = solve_rt2(f, {.bound = 8, .target_size = 3});
        if (q.found()) corpus.push_back(make_rt2_certificate(f, *q.witness, true));
        auto p = solve_ipt2(f, {.bound = 8, .target_size = 2});
        if (p.found()) corpus.push_back(make_ipt2_certificate(f, *p.witness, true));
    }
    while (corpus.size() < 45) {
        int k = 2 + int(rng() % 2);
        Coloring c = Coloring::from_expr(k, 1022, testgen::random_expr(rng));
        auto r = reduce_rt2_to_aht(c, 2, 10);
        if (r.found()) corpus.push_back(*r.certificate);
        PairColoring f = PairColoring::from_expr(2, 8, testgen::random_pair_expr(rng));
        auto q = chain_rt2_to_ipt2(f, 2);
        if (q.found()) corpus.push_back(*q.certificate);
    }
    while (corpus.size() < 55) {
        Word w(int(rng() % 2), {int(rng() % 2), int(rng() % 2), 1}, 1 + int(rng() % 3));
        auto r = word_highest_letter(w, 2);
        if (r.found()) corpus.push_back(*r.certificate);
    }

    for (const Certificate& cert : corpus) {
        std::string first = write_certificate(cert);
        Certificate reread = read_certificate(first);
        if (!(reread == cert)) return o.fail("certificate changed across read");
        if (write_certificate(reread) != first) return o.fail("serialization not stable");
    }

    int round_trips = 0;
    for (int it = 0; it < 60; ++it) {
        std::string src = testgen::random_expr(rng);
        std::string one = print_expr(parse_expr(src, {"n"}));
        if (print_expr(parse_expr(one, {"n"})) != one) return o.fail("point DSL drifted");
        std::string pair_src = testgen::random_pair_expr(rng);
        std::string two = print_expr(parse_expr(pair_src, {"i", "j"}));
        if (print_expr(parse_expr(two, {"i", "j"})) != two) return o.fail("pair DSL drifted");
        round_trips += 2;
    }
    o.detail = std::to_string(corpus.size()) + " certificates byte-stable, " +
               std::to_string(round_trips) + " DSL round trips";
}

} // namespace

int main() {
    criterion(1, "rt2-to-aht pipeline suite", 10.0, prop3_suite);
    criterion(2, "aht-to-ipt2 chain suite", 30.0, prop4_suite);
    criterion(3, "apartness-sum identity", 5.0, apartness_identity);
    criterion(4, "solver/oracle equivalence", 60.0, oracle_equivalence);
    criterion(5, "word pipeline", 10.0, word_pipeline);
    criterion(6, "verifier adversarial suite", 0.0, adversarial_suite);
    criterion(7, "format stability", 0.0, format_stability);
    return failures;
}
