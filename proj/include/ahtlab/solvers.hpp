#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "ahtlab/coloring.hpp"
#include "ahtlab/numeric.hpp"

// Exhaustive, pruned witness search. All four solvers return the
// lexicographically least witness, a definitive "none within bound",
// or "budget exceeded" — three distinct states, so exhaustiveness is
// never claimed for an aborted search.
//
// The search fans out over the choice of first element ("branches").
// Branches are explored depth-first and folded in ascending order, so
// the first Found is the least witness and a None answer means every
// branch completed. With threads > 1 the branches run concurrently,
// but the fold order, the per-branch node limit, and therefore the
// result (witness, status, and node count) are identical to the
// sequential run. node_limit caps the nodes of each branch, not the
// whole search.
namespace ahtlab {

struct SearchBudget {
    PosInt bound = 1;                          // N; universe [1..N] or exponents [0..N)
    int target_size = 1;                       // m
    std::optional<std::uint64_t> node_limit;   // per-branch DFS node cap
    bool require_apart = true;                 // AHT only
    int threads = 1;
};

enum class SearchStatus { Found, None, BudgetExceeded };

template <typename W>
struct SearchResult {
    SearchStatus status = SearchStatus::None;
    std::optional<W> witness;
    std::uint64_t nodes = 0;

    bool found() const { return status == SearchStatus::Found; }
};

struct AhtWitness {
    std::vector<PosInt> h;
    int color = 0;
    bool operator==(const AhtWitness&) const = default;
};

struct Rt2Witness {
    std::vector<PosInt> j;
    int color = 0;
    bool operator==(const Rt2Witness&) const = default;
};

struct Ipt2Witness {
    std::vector<PosInt> h1, h2;
    int color = 0;
    bool operator==(const Ipt2Witness&) const = default;
};

struct HilWitness {
    std::vector<PosInt> sets;  // bitmask-encoded, ascending
    int color = 0;
    bool operator==(const HilWitness&) const = default;
};

namespace detail {

enum class Walk { None, Found, Abort };

struct BranchControl {
    std::uint64_t limit;
    const std::atomic<bool>* stop;
    std::uint64_t nodes = 0;
    bool budget_hit = false;

    // Counts one DFS node; false means the branch must unwind.
    bool tick() {
        ++nodes;
        if (nodes > limit) {
            budget_hit = true;
            return false;
        }
        if (stop && (nodes & 0x3ff) == 0 && stop->load(std::memory_order_relaxed))
            return false;
        return true;
    }
};

template <typename W>
struct BranchResult {
    SearchStatus status = SearchStatus::None;
    std::optional<W> witness;
    std::uint64_t nodes = 0;
};

// Runs branch(v) for v in [lo, hi] and folds results in ascending
// order: first Found wins, a BudgetExceeded before any Found poisons
// the whole search, None requires every branch to complete.
template <typename W, typename Fn>
SearchResult<W> run_branches(PosInt lo, PosInt hi, int threads, Fn&& branch) {
    SearchResult<W> out;
    if (lo > hi) return out;

    const PosInt nb = hi - lo + 1;
    if (threads <= 1 || nb == 1) {
        for (PosInt v = lo;; ++v) {
            BranchResult<W> r = branch(v, nullptr);
            out.nodes += r.nodes;
            if (r.status != SearchStatus::None) {
                out.status = r.status;
                out.witness = std::move(r.witness);
                return out;
            }
            if (v == hi) break;
        }
        return out;
    }

    const std::size_t nchunks = std::size_t(std::min<PosInt>(nb, PosInt(threads) * 4));
    std::vector<std::optional<BranchResult<W>>> results(nchunks);
    std::mutex mx;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr error;

    const PosInt width = nb / nchunks, extra = nb % nchunks;
    auto chunk_range = [&](std::size_t ci) {
        PosInt a = lo + width * PosInt(ci) + std::min<PosInt>(PosInt(ci), extra);
        PosInt b = a + width - 1 + (PosInt(ci) < extra ? 1 : 0);
        return std::pair<PosInt, PosInt>(a, b);
    };

    auto worker = [&] {
        try {
            for (;;) {
                if (stop.load(std::memory_order_relaxed)) return;
                std::size_t ci = next.fetch_add(1, std::memory_order_relaxed);
                if (ci >= nchunks) return;
                auto [a, b] = chunk_range(ci);
                BranchResult<W> agg;
                for (PosInt v = a;; ++v) {
                    if (stop.load(std::memory_order_relaxed)) break;
                    BranchResult<W> r = branch(v, &stop);
                    agg.nodes += r.nodes;
                    if (r.status != SearchStatus::None) {
                        agg.status = r.status;
                        agg.witness = std::move(r.witness);
                        break;
                    }
                    if (v == b) break;
                }
                {
                    std::lock_guard<std::mutex> lock(mx);
                    results[ci] = std::move(agg);
                }
                cv.notify_all();
            }
        } catch (...) {
            {
                std::lock_guard<std::mutex> lock(mx);
                if (!error) error = std::current_exception();
            }
            stop.store(true, std::memory_order_relaxed);
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    const int nthreads = int(std::min<std::size_t>(std::size_t(threads), nchunks));
    pool.reserve(std::size_t(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

    bool decided = false;
    for (std::size_t ci = 0; ci < nchunks && !decided; ++ci) {
        std::optional<BranchResult<W>> r;
        {
            std::unique_lock<std::mutex> lock(mx);
            cv.wait(lock, [&] { return results[ci].has_value() || error; });
            if (results[ci].has_value()) r = std::move(*results[ci]);
        }
        if (!r) break;  // a worker failed
        out.nodes += r->nodes;
        if (r->status != SearchStatus::None) {
            out.status = r->status;
            out.witness = std::move(r->witness);
            decided = true;
        }
    }
    stop.store(true, std::memory_order_relaxed);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

inline void validate_budget(const SearchBudget& b) {
    if (b.target_size < 1) throw std::invalid_argument("search: target size must be >= 1");
    if (b.bound < 1) throw std::invalid_argument("search: bound must be >= 1");
    if (b.threads < 1) throw std::invalid_argument("search: thread count must be >= 1");
}

inline std::uint64_t branch_limit(const SearchBudget& b) {
    return b.node_limit ? *b.node_limit : UINT64_MAX;
}

// --- AHT ---------------------------------------------------------------

struct AhtSearch {
    const Coloring& c;
    PosInt n;
    std::size_t m;
    bool apart;
    int target = 0;
    std::vector<PosInt> elems;
    BranchControl ctl;

    Walk extend() {
        if (elems.size() == m) return Walk::Found;
        const PosInt last = elems.back();
        if (apart) {
            // Apartness forces lam(next) > mu(last), i.e. next is a
            // multiple of 2^{mu(last)+1}.
            const int shift = mu(last) + 1;
            if (shift >= 63) return Walk::None;
            const PosInt step = PosInt{1} << shift;
            if (step > n) return Walk::None;
            for (PosInt h = step;; h += step) {
                bool escape = false;
                Walk w = try_candidate(h, escape);
                if (w != Walk::None) return w;
                if (escape) break;  // run sums only grow with h
                if (h > n - step) break;
            }
            return Walk::None;
        }
        if (last >= n) return Walk::None;
        for (PosInt h = last + 1;; ++h) {
            bool escape = false;
            Walk w = try_candidate(h, escape);
            if (w != Walk::None) return w;
            if (escape) break;
            if (h == n) break;
        }
        return Walk::None;
    }

    // Tries elems + {h}. Sets escape when a run sum left the domain,
    // which is monotone in h and ends the candidate loop.
    Walk try_candidate(PosInt h, bool& escape) {
        if (!ctl.tick()) return Walk::Abort;
        PosInt sum = 0;
        // Runs closing at the new position, shortest first.
        for (std::size_t t = elems.size() + 1; t-- > 0;) {
            PosInt add = t == elems.size() ? h : elems[t];
            PosInt next = sum + add;
            if (next < sum || next > n) {
                escape = true;
                return Walk::None;
            }
            sum = next;
            if (c(sum) != target) return Walk::None;
        }
        elems.push_back(h);
        Walk w = extend();
        if (w == Walk::None) elems.pop_back();
        return w;
    }
};

// --- RT2 ---------------------------------------------------------------

struct Rt2Search {
    const PairColoring& f;
    PosInt n;
    std::size_t m;
    std::vector<PosInt> elems;
    int target = 0;
    BranchControl ctl;

    Walk extend() {
        if (elems.size() == m) return Walk::Found;
        for (PosInt j = elems.back() + 1; j < n; ++j) {
            if (!ctl.tick()) return Walk::Abort;
            bool ok = true;
            for (std::size_t t = 0; t < elems.size() && ok; ++t) {
                int col = f(elems[t], j);
                if (elems.size() == 1 && t == 0)
                    target = col;  // first pair fixes the color
                else if (col != target)
                    ok = false;
            }
            if (!ok) continue;
            elems.push_back(j);
            Walk w = extend();
            if (w != Walk::None) return w;
            elems.pop_back();
        }
        return Walk::None;
    }
};

// --- IPT2 --------------------------------------------------------------

struct Ipt2Search {
    const PairColoring& f;
    PosInt n;
    std::size_t m;
    std::vector<PosInt> h1, h2;
    BranchControl ctl;

    Walk fill_h1() {
        if (h1.size() == m) return fill_h2(-1, false);
        for (PosInt x = h1.back() + 1; x < n; ++x) {
            if (!ctl.tick()) return Walk::Abort;
            h1.push_back(x);
            Walk w = fill_h1();
            if (w != Walk::None) return w;
            h1.pop_back();
        }
        return Walk::None;
    }

    // target == -1 until the first increasing cross pair appears; a
    // witness with no such pair is vacuous and never returned.
    Walk fill_h2(int target, bool constrained) {
        if (h2.size() == m) return constrained ? Walk::Found : Walk::None;
        for (PosInt x = h2.empty() ? 0 : h2.back() + 1; x < n; ++x) {
            if (!ctl.tick()) return Walk::Abort;
            int t = target;
            bool c = constrained, ok = true;
            for (PosInt x1 : h1) {
                if (x1 >= x) continue;
                int col = f(x1, x);
                if (t < 0) {
                    t = col;
                    c = true;
                } else if (col != t) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            h2.push_back(x);
            Walk w = fill_h2(t, c);
            if (w != Walk::None) return w;
            h2.pop_back();
        }
        return Walk::None;
    }

    int final_color = 0;

    Walk run() {
        Walk w = fill_h1();
        if (w == Walk::Found) {
            // Recompute the color of the first increasing cross pair.
            for (PosInt x1 : h1)
                for (PosInt x2 : h2)
                    if (x1 < x2) {
                        final_color = f(x1, x2);
                        return w;
                    }
        }
        return w;
    }
};

// --- HIL ---------------------------------------------------------------

struct HilSearch {
    const Coloring& c;
    PosInt max_mask;
    std::size_t m;
    int target = 0;
    std::vector<PosInt> sets;
    std::vector<PosInt> unions;  // all nonempty-family unions so far
    BranchControl ctl;

    Walk extend() {
        if (sets.size() == m) return Walk::Found;
        for (PosInt x = sets.back() + 1; x <= max_mask; ++x) {
            if (!ctl.tick()) return Walk::Abort;
            bool ok = c(x) == target;
            for (std::size_t u = 0; u < unions.size() && ok; ++u)
                ok = c(unions[u] | x) == target;
            if (!ok) continue;
            const std::size_t mark = unions.size();
            unions.push_back(x);
            for (std::size_t u = 0; u < mark; ++u) unions.push_back(unions[u] | x);
            sets.push_back(x);
            Walk w = extend();
            if (w != Walk::None) return w;
            sets.pop_back();
            unions.resize(mark);
        }
        return Walk::None;
    }
};

} // namespace detail

inline SearchResult<AhtWitness> solve_aht(const Coloring& c, const SearchBudget& b) {
    detail::validate_budget(b);
    if (b.bound > c.bound())
        throw std::invalid_argument("solve_aht: search bound exceeds the coloring domain");
    const std::uint64_t limit = detail::branch_limit(b);

    auto branch = [&](PosInt v, const std::atomic<bool>* stop) {
        detail::BranchResult<AhtWitness> out;
        detail::AhtSearch s{c, b.bound, std::size_t(b.target_size), b.require_apart,
                            0,  {},      {limit, stop}};
        if (!s.ctl.tick()) {
            out.status = SearchStatus::BudgetExceeded;
            out.nodes = s.ctl.nodes;
            return out;
        }
        s.target = c(v);
        s.elems.push_back(v);
        detail::Walk w = s.extend();
        out.nodes = s.ctl.nodes;
        if (w == detail::Walk::Found) {
            out.status = SearchStatus::Found;
            out.witness = AhtWitness{s.elems, s.target};
        } else if (w == detail::Walk::Abort && s.ctl.budget_hit) {
            out.status = SearchStatus::BudgetExceeded;
        }
        return out;
    };
    return detail::run_branches<AhtWitness>(1, b.bound, b.threads, branch);
}

inline SearchResult<Rt2Witness> solve_rt2(const PairColoring& f, const SearchBudget& b) {
    detail::validate_budget(b);
    if (b.bound > f.bound())
        throw std::invalid_argument("solve_rt2: search bound exceeds the pair coloring domain");
    if (PosInt(b.target_size) > b.bound) return {};  // not enough exponents

    const std::uint64_t limit = detail::branch_limit(b);
    auto branch = [&](PosInt v, const std::atomic<bool>* stop) {
        detail::BranchResult<Rt2Witness> out;
        detail::Rt2Search s{f, b.bound, std::size_t(b.target_size), {}, 0, {limit, stop}};
        if (!s.ctl.tick()) {
            out.status = SearchStatus::BudgetExceeded;
            out.nodes = s.ctl.nodes;
            return out;
        }
        s.elems.push_back(v);
        detail::Walk w = s.extend();
        out.nodes = s.ctl.nodes;
        if (w == detail::Walk::Found) {
            out.status = SearchStatus::Found;
            // Size-1 witnesses have no pair to recolor; 0 by convention.
            out.witness = Rt2Witness{s.elems, s.elems.size() > 1 ? s.target : 0};
        } else if (w == detail::Walk::Abort && s.ctl.budget_hit) {
            out.status = SearchStatus::BudgetExceeded;
        }
        return out;
    };
    return detail::run_branches<Rt2Witness>(0, b.bound - PosInt(b.target_size), b.threads,
                                            branch);
}

inline SearchResult<Ipt2Witness> solve_ipt2(const PairColoring& f, const SearchBudget& b) {
    detail::validate_budget(b);
    if (b.bound > f.bound())
        throw std::invalid_argument("solve_ipt2: search bound exceeds the pair coloring domain");
    if (PosInt(b.target_size) > b.bound) return {};

    const std::uint64_t limit = detail::branch_limit(b);
    auto branch = [&](PosInt v, const std::atomic<bool>* stop) {
        detail::BranchResult<Ipt2Witness> out;
        detail::Ipt2Search s{f, b.bound, std::size_t(b.target_size), {}, {}, {limit, stop}};
        if (!s.ctl.tick()) {
            out.status = SearchStatus::BudgetExceeded;
            out.nodes = s.ctl.nodes;
            return out;
        }
        s.h1.push_back(v);
        detail::Walk w = s.run();
        out.nodes = s.ctl.nodes;
        if (w == detail::Walk::Found) {
            out.status = SearchStatus::Found;
            out.witness = Ipt2Witness{s.h1, s.h2, s.final_color};
        } else if (w == detail::Walk::Abort && s.ctl.budget_hit) {
            out.status = SearchStatus::BudgetExceeded;
        }
        return out;
    };
    return detail::run_branches<Ipt2Witness>(0, b.bound - PosInt(b.target_size), b.threads,
                                             branch);
}

// HIL: budget.bound is the base — sets are drawn nonempty from
// [0..base), encoded as bitmasks in [1 .. 2^base - 1].
inline SearchResult<HilWitness> solve_hil(const Coloring& c, const SearchBudget& b) {
    detail::validate_budget(b);
    if (b.bound > 20) throw std::invalid_argument("solve_hil: base too large");
    if (b.target_size > 16) throw std::invalid_argument("solve_hil: target size too large");
    const PosInt max_mask = (PosInt{1} << b.bound) - 1;
    if (max_mask > c.bound())
        throw std::invalid_argument("solve_hil: coloring does not cover all unions");
    if (PosInt(b.target_size) > max_mask) return {};  // not enough distinct sets

    const std::uint64_t limit = detail::branch_limit(b);
    auto branch = [&](PosInt v, const std::atomic<bool>* stop) {
        detail::BranchResult<HilWitness> out;
        detail::HilSearch s{c, max_mask, std::size_t(b.target_size), 0, {}, {}, {limit, stop}};
        if (!s.ctl.tick()) {
            out.status = SearchStatus::BudgetExceeded;
            out.nodes = s.ctl.nodes;
            return out;
        }
        s.target = c(v);
        s.sets.push_back(v);
        s.unions.push_back(v);
        detail::Walk w = s.extend();
        out.nodes = s.ctl.nodes;
        if (w == detail::Walk::Found) {
            out.status = SearchStatus::Found;
            out.witness = HilWitness{s.sets, s.target};
        } else if (w == detail::Walk::Abort && s.ctl.budget_hit) {
            out.status = SearchStatus::BudgetExceeded;
        }
        return out;
    };
    return detail::run_branches<HilWitness>(1, max_mask, b.threads, branch);
}

} // namespace ahtlab
