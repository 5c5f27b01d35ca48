#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ahtlab/certificate.hpp"
#include "ahtlab/coloring.hpp"
#include "ahtlab/numeric.hpp"
#include "ahtlab/solvers.hpp"
#include "ahtlab/verify.hpp"
#include "ahtlab/word.hpp"

// Executable reductions between the principles: each pipeline composes
// a derived coloring, a solver stage, and a witness transform, verifies
// the final witness independently, and emits a staged certificate. A
// failed pipeline names its failing stage; certificates are only
// produced for verified witnesses.
namespace ahtlab {

struct PipelineOptions {
    std::optional<std::uint64_t> node_limit;
    int threads = 1;
    int bit_budget = kDefaultBitBudget;
    std::optional<PosInt> aht_bound;  // cap for the AHT search stage
    std::optional<PosInt> rt2_bound;  // cap for the RT2 stage inside a chain
};

template <typename W>
struct PipelineResult {
    SearchStatus status = SearchStatus::None;
    std::optional<W> witness;
    std::optional<Certificate> certificate;
    std::uint64_t nodes = 0;
    std::string failed_stage;  // empty on success

    bool found() const { return status == SearchStatus::Found; }
};

namespace detail {

// The pipelines re-verify their own output; the constructions make
// failure impossible, so a failure is an internal defect, not an input
// condition.
inline void require_pipeline_invariant(const Verdict& v, const char* what) {
    if (!v.ok())
        throw std::logic_error(std::string(what) + ": " + describe(v));
}

} // namespace detail

// RT2 => AHT blocks: find a homogeneous exponent set J of size m+1 for
// the induced pair coloring f(i,j) = c(2^{j+1} - 2^{i+1}), then take
// the m blocks spanning consecutive exponents of J. Every adjacent run
// of the blocks is itself such a block, so AS(H) inherits J's color.
inline PipelineResult<AhtWitness> reduce_rt2_to_aht(const Coloring& c, int m,
                                                    PosInt rt2_bound,
                                                    const PipelineOptions& opt = {}) {
    if (m < 1) throw std::invalid_argument("reduce_rt2_to_aht: size must be >= 1");
    PairColoring f = induced_pair_coloring(c);
    if (rt2_bound > f.bound())
        throw std::invalid_argument(
            "reduce_rt2_to_aht: rt2 bound needs a larger base coloring bound");

    PipelineResult<AhtWitness> out;
    auto r = solve_rt2(f, {.bound = rt2_bound,
                           .target_size = m + 1,
                           .node_limit = opt.node_limit,
                           .threads = opt.threads});
    out.nodes = r.nodes;
    if (!r.found()) {
        out.status = r.status;
        out.failed_stage = "rt2";
        return out;
    }

    std::vector<PosInt> h = blocks_from_rt2(r.witness->j);
    const int color = r.witness->color;
    detail::require_pipeline_invariant(verify_aht(c, h, color, true),
                                       "reduce_rt2_to_aht: block set failed verification");

    Certificate cert;
    cert.principle = "RT2_TO_AHT";
    InstanceExtras extras;
    extras.rt2_size = m + 1;
    extras.bit_budget = opt.bit_budget;
    detail::describe_instance(cert, c, m, extras);
    cert.witness.emplace_back("h", detail::format_list(h));
    cert.color = color;
    cert.exhaustive = true;
    cert.stages.push_back(
        make_rt2_certificate(f, *r.witness, true, opt.bit_budget, rt2_bound));

    out.status = SearchStatus::Found;
    out.witness = AhtWitness{std::move(h), color};
    out.certificate = std::move(cert);
    return out;
}

// Which pipeline discharges the AHT stage of reduce_aht_to_ipt2.
enum class AhtStageKind { Search, Chain };

namespace detail {

inline PosInt default_aht_bound(const Coloring& g, const PipelineOptions& opt) {
    if (opt.aht_bound) {
        if (*opt.aht_bound > g.bound())
            throw std::invalid_argument("aht bound exceeds the projected coloring domain");
        return *opt.aht_bound;
    }
    if (g.bound() > (PosInt{1} << 20))
        throw std::invalid_argument(
            "projected domain too large for an implicit search bound; pass one explicitly");
    return g.bound();
}

inline PipelineResult<Ipt2Witness> project_stage_result(const PairColoring& f, int m,
                                                        const AhtWitness& witness,
                                                        Certificate stage_cert,
                                                        bool exhaustive,
                                                        std::uint64_t nodes) {
    auto [h1, h2] = project_aht_witness(witness.h);
    detail::require_pipeline_invariant(
        verify_ipt2(f, h1, h2, witness.color),
        "reduce_aht_to_ipt2: projected witness failed verification");

    Certificate cert;
    cert.principle = "AHT_TO_IPT2";
    InstanceExtras extras;
    detail::describe_instance(cert, f, m, extras);
    cert.witness.emplace_back("h1", detail::format_list(h1));
    cert.witness.emplace_back("h2", detail::format_list(h2));
    cert.color = witness.color;
    cert.exhaustive = exhaustive;
    cert.stages.push_back(std::move(stage_cert));

    PipelineResult<Ipt2Witness> out;
    out.status = SearchStatus::Found;
    out.witness = Ipt2Witness{std::move(h1), std::move(h2), witness.color};
    out.certificate = std::move(cert);
    out.nodes = nodes;
    return out;
}

} // namespace detail

// AHT => IPT2: color points by g(n) = f(lam(n), mu(n)), obtain an apart
// AHT witness H for g, and project to H1 = lam images, H2 = mu images.
// Every strictly increasing cross pair is the endpoint pair of an
// adjacent run of H, so its f-color is H's g-color; pairs with
// lam = mu are not strictly increasing and impose nothing.
inline PipelineResult<Ipt2Witness> reduce_aht_to_ipt2(const PairColoring& f, int m,
                                                      AhtStageKind stage = AhtStageKind::Search,
                                                      const PipelineOptions& opt = {}) {
    if (m < 1) throw std::invalid_argument("reduce_aht_to_ipt2: size must be >= 1");
    Coloring g = projected_point_coloring(f, opt.bit_budget);

    if (stage == AhtStageKind::Search) {
        const PosInt bound = detail::default_aht_bound(g, opt);
        auto r = solve_aht(g, {.bound = bound,
                               .target_size = m,
                               .node_limit = opt.node_limit,
                               .threads = opt.threads});
        if (!r.found()) {
            PipelineResult<Ipt2Witness> out;
            out.status = r.status;
            out.nodes = r.nodes;
            out.failed_stage = "aht";
            return out;
        }
        Certificate stage_cert =
            make_aht_certificate(g, *r.witness, true, true, opt.bit_budget, bound);
        return detail::project_stage_result(f, m, *r.witness, std::move(stage_cert), true,
                                            r.nodes);
    }

    const PosInt rt2_bound =
        opt.rt2_bound ? *opt.rt2_bound : induced_pair_coloring(g).bound();
    auto rc = reduce_rt2_to_aht(g, m, rt2_bound, opt);
    if (!rc.found()) {
        PipelineResult<Ipt2Witness> out;
        out.status = rc.status;
        out.nodes = rc.nodes;
        out.failed_stage = rc.failed_stage.empty() ? "aht" : "aht/" + rc.failed_stage;
        return out;
    }
    return detail::project_stage_result(f, m, *rc.witness, std::move(*rc.certificate), true,
                                        rc.nodes);
}

// Same implication with the AHT witness supplied by the caller; it is
// checked against g before projection, and the certificate says the
// search space was not exhausted.
inline PipelineResult<Ipt2Witness> reduce_aht_to_ipt2_supplied(
    const PairColoring& f, const std::vector<PosInt>& h,
    const PipelineOptions& opt = {}) {
    Coloring g = projected_point_coloring(f, opt.bit_budget);

    PipelineResult<Ipt2Witness> out;
    if (h.empty() || h.front() == 0 || h.front() > g.bound()) {
        out.failed_stage = "aht";
        return out;
    }
    const int color = g(h.front());
    Verdict v = verify_aht(g, h, color, true);
    if (!v.ok()) {
        out.failed_stage = "aht";
        return out;
    }
    AhtWitness witness{h, color};
    Certificate stage_cert = make_aht_certificate(g, witness, true, false, opt.bit_budget);
    return detail::project_stage_result(f, int(h.size()), witness, std::move(stage_cert),
                                        false, 0);
}

// RT2 => AHT => IPT2, all three stages recorded.
inline PipelineResult<Ipt2Witness> chain_rt2_to_ipt2(const PairColoring& f, int m,
                                                     const PipelineOptions& opt = {}) {
    PipelineResult<Ipt2Witness> out = reduce_aht_to_ipt2(f, m, AhtStageKind::Chain, opt);
    if (out.certificate) out.certificate->principle = "CHAIN";
    return out;
}

// --- Word pipeline ---------------------------------------------------

struct WordLetterResult {
    SearchStatus status = SearchStatus::None;
    std::optional<AhtWitness> witness;
    std::optional<Certificate> certificate;
    int letter = -1;
    bool infinitely_often = false;
    std::uint64_t nodes = 0;

    bool found() const { return status == SearchStatus::Found; }
};

namespace detail {

// AHT search over a word-block coloring, walking exponent intervals
// instead of raw values. D(n) depends only on (lam(n), mu(n)), so each
// element is an interval [a, b] realized by its least value 2^a + 2^b
// (or 2^a when a = b), and the interval order by least value — b
// ascending, bare power first, then a ascending — makes the result the
// lexicographically least value witness. Constraints a >= min_a and
// b - a + 1 >= min_span carve out the windows that cover a full period
// beyond the prefix.
struct IntervalSearch {
    const Coloring& d;
    std::size_t m;
    int min_a;
    int min_span;
    int max_b;
    std::uint64_t limit;

    int target = 0;
    std::vector<std::pair<int, int>> iv;
    std::uint64_t nodes = 0;
    bool budget_hit = false;

    static PosInt least_value(int a, int b) {
        return (PosInt{1} << a) | (PosInt{1} << b);
    }

    Walk extend() {
        if (iv.size() == m) return Walk::Found;
        const int lo_a = iv.empty() ? min_a : std::max(min_a, iv.back().second + 1);
        for (int b = lo_a + min_span - 1; b <= max_b; ++b) {
            if (min_span == 1) {
                Walk w = try_interval(b, b);
                if (w != Walk::None) return w;
            }
            const int hi_a = std::min(b - min_span + 1, b - 1);
            for (int a = lo_a; a <= hi_a; ++a) {
                Walk w = try_interval(a, b);
                if (w != Walk::None) return w;
            }
        }
        return Walk::None;
    }

    Walk try_interval(int a, int b) {
        if (++nodes > limit) {
            budget_hit = true;
            return Walk::Abort;
        }
        int own = d(least_value(a, b));
        if (iv.empty()) {
            target = own;
        } else {
            if (own != target) return Walk::None;
            for (const auto& [ai, bi] : iv)
                if (d(least_value(ai, b)) != target) return Walk::None;
        }
        iv.emplace_back(a, b);
        Walk w = extend();
        if (w == Walk::None) iv.pop_back();
        return w;
    }
};

inline std::optional<AhtWitness> run_interval_search(const Coloring& d, int m, int min_a,
                                                     int min_span, int max_b,
                                                     std::uint64_t limit,
                                                     std::uint64_t& nodes, bool& budget_hit) {
    IntervalSearch s{d, std::size_t(m), min_a, min_span, max_b, limit};
    Walk w = s.extend();
    nodes += s.nodes;
    budget_hit = budget_hit || s.budget_hit;
    if (w != Walk::Found) return std::nullopt;
    std::vector<PosInt> h;
    h.reserve(s.iv.size());
    for (const auto& [a, b] : s.iv) h.push_back(IntervalSearch::least_value(a, b));
    return AhtWitness{std::move(h), s.target};
}

} // namespace detail

// Highest letter of a word via the block coloring D(n) = max letter on
// the window [lam(n), mu(n)]. For eventually periodic words the search
// is constrained to windows that cover a full period beyond the prefix,
// so the witness color is exactly the period's maximum letter — the
// letter occurring infinitely often. Finite words get the unconstrained
// witness and no "infinitely often" claim.
inline WordLetterResult word_highest_letter(const Word& w, int m,
                                            const PipelineOptions& opt = {}) {
    if (m < 2) throw std::invalid_argument("word_highest_letter: size must be >= 2");
    Coloring d = word_block_coloring(w, opt.bit_budget);

    const int max_b =
        w.periodic() ? opt.bit_budget - 1 : std::min(w.length(), opt.bit_budget) - 1;
    const std::uint64_t limit =
        opt.node_limit ? *opt.node_limit : UINT64_MAX;

    WordLetterResult out;
    bool budget_hit = false;

    if (w.periodic()) {
        std::optional<AhtWitness> witness = detail::run_interval_search(
            d, m, w.prefix_length(), *w.period(), max_b, limit, out.nodes, budget_hit);
        if (witness) {
            out.status = SearchStatus::Found;
            out.infinitely_often = true;
            out.letter = witness->color;
            out.certificate =
                make_word_certificate(d, *witness, true, false, opt.bit_budget);
            out.witness = std::move(witness);
            return out;
        }
        if (budget_hit) {
            out.status = SearchStatus::BudgetExceeded;
            return out;
        }
        // The constrained geometry does not fit the bit budget; fall
        // through to an unconstrained witness without the claim.
    }

    std::optional<AhtWitness> witness =
        detail::run_interval_search(d, m, 0, 1, max_b, limit, out.nodes, budget_hit);
    if (!witness) {
        out.status = budget_hit ? SearchStatus::BudgetExceeded : SearchStatus::None;
        return out;
    }
    out.status = SearchStatus::Found;
    out.letter = witness->color;
    out.certificate = make_word_certificate(d, *witness, false, true, opt.bit_budget);
    out.witness = std::move(witness);
    return out;
}

} // namespace ahtlab
