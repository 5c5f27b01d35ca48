#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ahtlab/coloring.hpp"
#include "ahtlab/numeric.hpp"

// Independent witness verifiers. They share three rules:
//
//  * The claimed color is never trusted: the first constraint's color
//    is recomputed and everything (claim included) is checked against
//    it, so claimed-vs-actual mismatches surface with both values.
//  * Constraints are processed in canonical enumeration order and the
//    first offender is reported, which makes rejections reproducible.
//  * A constraint that escapes the coloring's domain yields the
//    distinct verdict "undecidable at this bound", never "ok".
//
// Structural defects in the witness (wrong ordering, duplicates,
// broken apartness) are Fail verdicts, not exceptions.
namespace ahtlab {

enum class VerdictKind { Ok, Fail, Undecidable };

struct Verdict {
    VerdictKind kind = VerdictKind::Ok;
    std::string reason;

    // Offending constraint, when one exists.
    std::optional<Run> run;                            // AHT
    std::optional<std::pair<PosInt, PosInt>> pair;     // RT2 / IPT2
    std::vector<int> family;                           // HIL (1-based indices)
    std::optional<int> claimed;
    std::optional<int> actual;

    bool ok() const { return kind == VerdictKind::Ok; }

    static Verdict pass() { return {}; }

    static Verdict fail(std::string why) {
        Verdict v;
        v.kind = VerdictKind::Fail;
        v.reason = std::move(why);
        return v;
    }

    static Verdict undecidable(std::string why) {
        Verdict v;
        v.kind = VerdictKind::Undecidable;
        v.reason = std::move(why);
        return v;
    }
};

inline std::string describe(const Verdict& v) {
    switch (v.kind) {
        case VerdictKind::Ok: return "ok";
        case VerdictKind::Fail: return "fail: " + v.reason;
        case VerdictKind::Undecidable: return "undecidable: " + v.reason;
    }
    return "unknown";
}

namespace detail {

inline bool strictly_increasing(const std::vector<PosInt>& xs) {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (xs[i] >= xs[i + 1]) return false;
    return true;
}

inline std::string join(const std::vector<PosInt>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(xs[i]);
    }
    return out;
}

// Mismatch/escape reporting shared by all four verifiers.
inline Verdict color_mismatch(std::string where, int claimed, int actual, bool first) {
    Verdict v = Verdict::fail(std::move(where) +
                              (first ? " has color " : " breaks the monochrome color: ") +
                              std::to_string(actual) + ", claimed " + std::to_string(claimed));
    v.claimed = claimed;
    v.actual = actual;
    return v;
}

} // namespace detail

inline Verdict verify_aht(const Coloring& c, const std::vector<PosInt>& h, int color,
                          bool require_apart) {
    if (h.empty()) return Verdict::fail("witness is empty");
    for (PosInt x : h)
        if (x == 0) return Verdict::fail("witness elements must be positive");
    if (!detail::strictly_increasing(h))
        return Verdict::fail("witness elements must be strictly increasing");
    if (require_apart)
        for (std::size_t i = 0; i + 1 < h.size(); ++i)
            if (mu(h[i]) >= lam(h[i + 1]))
                return Verdict::fail(
                    "apartness violation between positions " + std::to_string(i + 1) + " and " +
                    std::to_string(i + 2) + ": mu(" + std::to_string(h[i]) +
                    ")=" + std::to_string(mu(h[i])) + " >= lam(" + std::to_string(h[i + 1]) +
                    ")=" + std::to_string(lam(h[i + 1])));

    bool first = true;
    for (std::size_t len = 1; len <= h.size(); ++len)
        for (std::size_t start = 0; start + len <= h.size(); ++start) {
            Run run{start + 1, start + len, 0};
            bool wrapped = false;
            for (std::size_t t = start; t < start + len; ++t) {
                PosInt next = run.sum + h[t];
                if (next < run.sum) { wrapped = true; break; }
                run.sum = next;
            }
            int actual;
            if (wrapped) {
                actual = -1;
            } else {
                try {
                    actual = c(run.sum);
                } catch (const std::out_of_range&) {
                    wrapped = true;
                    actual = -1;
                } catch (const BudgetError&) {
                    wrapped = true;
                    actual = -1;
                }
            }
            if (wrapped) {
                Verdict v = Verdict::undecidable(
                    "run (" + std::to_string(run.first) + "," + std::to_string(run.last) +
                    ") sums outside the coloring domain");
                v.run = run;
                return v;
            }
            if (actual != color) {
                Verdict v = detail::color_mismatch(
                    "run (" + std::to_string(run.first) + "," + std::to_string(run.last) +
                        ") = " + std::to_string(run.sum),
                    color, actual, first);
                v.run = run;
                return v;
            }
            first = false;
        }
    return Verdict::pass();
}

inline Verdict verify_rt2(const PairColoring& f, const std::vector<PosInt>& j, int color) {
    if (j.empty()) return Verdict::fail("witness is empty");
    if (!detail::strictly_increasing(j))
        return Verdict::fail("witness elements must be strictly increasing");

    bool first = true;
    for (std::size_t a = 0; a + 1 < j.size(); ++a)
        for (std::size_t b = a + 1; b < j.size(); ++b) {
            int actual;
            try {
                actual = f(j[a], j[b]);
            } catch (const std::out_of_range&) {
                Verdict v = Verdict::undecidable(
                    "pair (" + std::to_string(j[a]) + "," + std::to_string(j[b]) +
                    ") is outside the pair coloring domain");
                v.pair = {j[a], j[b]};
                return v;
            } catch (const BudgetError&) {
                Verdict v = Verdict::undecidable(
                    "pair (" + std::to_string(j[a]) + "," + std::to_string(j[b]) +
                    ") is outside the pair coloring domain");
                v.pair = {j[a], j[b]};
                return v;
            }
            if (actual != color) {
                Verdict v = detail::color_mismatch(
                    "pair (" + std::to_string(j[a]) + "," + std::to_string(j[b]) + ")", color,
                    actual, first);
                v.pair = {j[a], j[b]};
                return v;
            }
            first = false;
        }
    return Verdict::pass();
}

inline Verdict verify_ipt2(const PairColoring& f, const std::vector<PosInt>& h1,
                           const std::vector<PosInt>& h2, int color) {
    if (h1.empty() || h2.empty()) return Verdict::fail("witness sides must be nonempty");
    if (!detail::strictly_increasing(h1) || !detail::strictly_increasing(h2))
        return Verdict::fail("witness sides must be strictly increasing");

    bool first = true;
    for (PosInt x1 : h1)
        for (PosInt x2 : h2) {
            if (x1 >= x2) continue;  // not an increasing tuple: no constraint
            int actual;
            try {
                actual = f(x1, x2);
            } catch (const std::out_of_range&) {
                Verdict v = Verdict::undecidable(
                    "pair (" + std::to_string(x1) + "," + std::to_string(x2) +
                    ") is outside the pair coloring domain");
                v.pair = {x1, x2};
                return v;
            } catch (const BudgetError&) {
                Verdict v = Verdict::undecidable(
                    "pair (" + std::to_string(x1) + "," + std::to_string(x2) +
                    ") is outside the pair coloring domain");
                v.pair = {x1, x2};
                return v;
            }
            if (actual != color) {
                Verdict v = detail::color_mismatch(
                    "pair (" + std::to_string(x1) + "," + std::to_string(x2) + ")", color,
                    actual, first);
                v.pair = {x1, x2};
                return v;
            }
            first = false;
        }
    return Verdict::pass();
}

// Sets are bitmask-encoded: bit t set means the natural number t is in
// the set, and the coloring is evaluated on the mask value.
inline Verdict verify_hil(const Coloring& c, const std::vector<PosInt>& sets, int color) {
    if (sets.empty()) return Verdict::fail("witness is empty");
    if (sets.size() > 24) throw std::invalid_argument("verify_hil: too many sets");
    for (PosInt s : sets)
        if (s == 0) return Verdict::fail("witness sets must be nonempty");
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j)
            if (sets[i] == sets[j])
                return Verdict::fail("witness sets must be distinct: positions " +
                                     std::to_string(i + 1) + " and " + std::to_string(j + 1));

    auto family_of = [](std::uint32_t fm) {
        std::vector<int> out;
        for (int t = 0; fm != 0; ++t, fm >>= 1)
            if (fm & 1) out.push_back(t + 1);
        return out;
    };

    bool first = true;
    const std::uint32_t families = (std::uint32_t(1) << sets.size()) - 1;
    for (std::uint32_t fm = 1; fm <= families; ++fm) {
        PosInt u = 0;
        for (std::size_t t = 0; t < sets.size(); ++t)
            if (fm & (std::uint32_t(1) << t)) u |= sets[t];
        int actual;
        try {
            actual = c(u);
        } catch (const std::out_of_range&) {
            Verdict v = Verdict::undecidable("family union " + std::to_string(u) +
                                             " is outside the coloring domain");
            v.family = family_of(fm);
            return v;
        } catch (const BudgetError&) {
            Verdict v = Verdict::undecidable("family union " + std::to_string(u) +
                                             " is outside the coloring domain");
            v.family = family_of(fm);
            return v;
        }
        if (actual != color) {
            auto fam = family_of(fm);
            Verdict v = detail::color_mismatch("family {" + [&] {
                std::string s;
                for (std::size_t t = 0; t < fam.size(); ++t) {
                    if (t) s.push_back(',');
                    s += std::to_string(fam[t]);
                }
                return s;
            }() + "} union " + std::to_string(u),
                                               color, actual, first);
            v.family = fam;
            return v;
        }
        first = false;
    }
    return Verdict::pass();
}

} // namespace ahtlab
