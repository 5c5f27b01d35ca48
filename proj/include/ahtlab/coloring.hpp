#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ahtlab/errors.hpp"
#include "ahtlab/expr.hpp"
#include "ahtlab/numeric.hpp"
#include "ahtlab/word.hpp"

// Point colorings c: [1..N] -> [0,k) and pair colorings
// f: {(i,j) : 0 <= i < j < N} -> [0,k), with the transformers that
// turn one into the other. Expression values are reduced into [0,k)
// with a Euclidean mod at the boundary, so every parseable expression
// is a total coloring. All colorings are immutable and safe to share
// across threads.
namespace ahtlab {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

class PairColoring;
class Coloring;

Coloring projected_point_coloring(const PairColoring& f, int bit_budget);
PairColoring induced_pair_coloring(const Coloring& c);

class Coloring {
  public:
    enum class Backing { Table, Expr, WordBlock, Projected };

    static Coloring from_table(int k, std::vector<int> colors) {
        Coloring c(k, PosInt(colors.size()), Backing::Table);
        if (colors.empty()) throw std::invalid_argument("coloring: empty table");
        for (int x : colors)
            if (x < 0 || x >= k) throw std::invalid_argument("coloring: table color out of range");
        c.table_ = std::move(colors);
        return c;
    }

    static Coloring from_expr(int k, PosInt N, std::string_view src) {
        Coloring c(k, N, Backing::Expr);
        c.expr_ = parse_expr(src, {"n"});
        c.source_ = print_expr(c.expr_);
        return c;
    }

    static Coloring from_word(int bit_budget, Word w) {
        PosInt cap = budget_cap(bit_budget);
        PosInt n = w.periodic() || w.length() > bit_budget
                       ? cap
                       : (PosInt{1} << w.length()) - 1;
        Coloring c(w.alphabet_size(), n, Backing::WordBlock);
        c.word_ = std::make_shared<Word>(std::move(w));
        return c;
    }

    static Coloring from_projected(std::shared_ptr<const PairColoring> base, int k,
                                   PosInt N, PosInt pair_bound) {
        Coloring c(k, N, Backing::Projected);
        c.pair_base_ = std::move(base);
        c.pair_bound_ = pair_bound;
        return c;
    }

    int num_colors() const { return k_; }
    PosInt bound() const { return n_; }
    Backing backing() const { return backing_; }

    int operator()(PosInt n) const;

    const std::vector<int>& table() const { return table_; }
    // Canonical (pretty-printed) expression source.
    const std::string& source() const { return source_; }
    const ExprPtr& expr() const { return expr_; }
    const Word& word() const { return *word_; }
    const PairColoring& pair_base() const { return *pair_base_; }
    std::shared_ptr<const PairColoring> pair_base_ptr() const { return pair_base_; }
    PosInt pair_bound() const { return pair_bound_; }

    // Path the table was loaded from / written to; empty if in-memory.
    const std::string& origin_path() const { return origin_path_; }
    void set_origin_path(std::string p) { origin_path_ = std::move(p); }

  private:
    Coloring(int k, PosInt n, Backing b) : k_(k), n_(n), backing_(b) {
        if (k_ < 1) throw std::invalid_argument("coloring: need at least one color");
        if (n_ < 1) throw std::invalid_argument("coloring: empty domain");
    }

    int k_;
    PosInt n_;
    Backing backing_;
    std::vector<int> table_;
    ExprPtr expr_;
    std::string source_;
    std::shared_ptr<const Word> word_;
    std::shared_ptr<const PairColoring> pair_base_;
    PosInt pair_bound_ = 0;
    std::string origin_path_;
};

class PairColoring {
  public:
    enum class Backing { Table, Expr, Induced };

    // Table of all increasing pairs over [0..N), ascending (i, j).
    static PairColoring from_table(int k, PosInt N, std::vector<int> colors) {
        PairColoring f(k, N, Backing::Table);
        if (N < 2) throw std::invalid_argument("pair coloring: bound must be at least 2");
        if (N > (PosInt{1} << 20))
            throw std::invalid_argument("pair coloring: bound too large for a table");
        if (colors.size() != std::size_t(N * (N - 1) / 2))
            throw std::invalid_argument("pair coloring: table size mismatch");
        for (int x : colors)
            if (x < 0 || x >= k) throw std::invalid_argument("pair coloring: color out of range");
        f.table_ = std::move(colors);
        return f;
    }

    static PairColoring from_expr(int k, PosInt N, std::string_view src) {
        PairColoring f(k, N, Backing::Expr);
        if (N < 2) throw std::invalid_argument("pair coloring: bound must be at least 2");
        f.expr_ = parse_expr(src, {"i", "j"});
        f.source_ = print_expr(f.expr_);
        return f;
    }

    static PairColoring from_induced(std::shared_ptr<const Coloring> base, PosInt N) {
        PairColoring f(base->num_colors(), N, Backing::Induced);
        f.point_base_ = std::move(base);
        return f;
    }

    int num_colors() const { return k_; }
    PosInt bound() const { return n_; }
    Backing backing() const { return backing_; }

    int operator()(PosInt i, PosInt j) const {
        if (i >= j) throw std::invalid_argument("pair coloring: requires i < j");
        switch (backing_) {
            case Backing::Table: {
                if (j >= n_) throw std::out_of_range("pair coloring: pair beyond bound");
                PosInt row = i * (2 * n_ - i - 1) / 2;
                return table_[std::size_t(row + (j - i - 1))];
            }
            case Backing::Expr: {
                if (j >= n_) throw std::out_of_range("pair coloring: pair beyond bound");
                std::vector<Binding> env{{"i", Int(i)}, {"j", Int(j)}};
                return int(euclid_mod(eval(expr_, env), k_));
            }
            case Backing::Induced: {
                // f(i,j) = c(2^{i+1} + ... + 2^j) = c(2^{j+1} - 2^{i+1}).
                if (j >= 63) throw BudgetError("induced pair coloring: exponent exceeds bit budget");
                PosInt v = (PosInt{1} << (j + 1)) - (PosInt{1} << (i + 1));
                if (v > point_base_->bound())
                    throw BudgetError("induced pair coloring: sum beyond base bound");
                return (*point_base_)(v);
            }
        }
        throw std::logic_error("pair coloring: bad backing");
    }

    const std::vector<int>& table() const { return table_; }
    const std::string& source() const { return source_; }
    const ExprPtr& expr() const { return expr_; }
    const Coloring& point_base() const { return *point_base_; }
    std::shared_ptr<const Coloring> point_base_ptr() const { return point_base_; }

    const std::string& origin_path() const { return origin_path_; }
    void set_origin_path(std::string p) { origin_path_ = std::move(p); }

  private:
    PairColoring(int k, PosInt n, Backing b) : k_(k), n_(n), backing_(b) {
        if (k_ < 1) throw std::invalid_argument("pair coloring: need at least one color");
    }

    int k_;
    PosInt n_;
    Backing backing_;
    std::vector<int> table_;
    ExprPtr expr_;
    std::string source_;
    std::shared_ptr<const Coloring> point_base_;
    std::string origin_path_;
};

inline int Coloring::operator()(PosInt n) const {
    if (n < 1 || n > n_) throw std::out_of_range("coloring: point beyond bound");
    switch (backing_) {
        case Backing::Table:
            return table_[std::size_t(n - 1)];
        case Backing::Expr: {
            std::vector<Binding> env{{"n", Int(n)}};
            return int(euclid_mod(eval(expr_, env), k_));
        }
        case Backing::WordBlock: {
            // D(n) = max letter over positions lam(n) .. mu(n).
            int best = 0;
            for (int t = lam(n); t <= mu(n); ++t)
                best = std::max(best, word_->letter(t));
            return best;
        }
        case Backing::Projected: {
            // g(n) = f(lam(n), mu(n)) off the diagonal, 0 on powers of two.
            int l = lam(n), m = mu(n);
            if (l == m) return 0;
            if (PosInt(m) >= pair_bound_)
                throw BudgetError("projected coloring: pair bound exceeded");
            return (*pair_base_)(PosInt(l), PosInt(m));
        }
    }
    throw std::logic_error("coloring: bad backing");
}

inline int eval_coloring(const Coloring& c, PosInt n) { return c(n); }
inline int eval_pair_coloring(const PairColoring& f, PosInt i, PosInt j) { return f(i, j); }

// f(i,j) := c(2^{i+1} + ... + 2^j). The carried pair bound is the
// largest b with every increasing pair from [0..b) admissible, i.e.
// 2^b - 2 <= N, so b = floor(log2(N + 2)).
inline PairColoring induced_pair_coloring(const Coloring& c) {
    if (c.bound() < 2) throw std::invalid_argument("induced pair coloring: base bound must be >= 2");
    PosInt b = PosInt(mu(c.bound() + 2));
    return PairColoring::from_induced(std::make_shared<Coloring>(c), b);
}

// g(n) = f(lam(n), mu(n)) when lam != mu, else 0. Domain: every n whose
// exponent window fits below f's bound, capped by the bit budget.
inline Coloring projected_point_coloring(const PairColoring& f,
                                         int bit_budget = kDefaultBitBudget) {
    PosInt pair_bound = f.bound();
    PosInt n = pair_bound > PosInt(bit_budget)
                   ? budget_cap(bit_budget)
                   : (PosInt{1} << pair_bound) - 1;
    return Coloring::from_projected(std::make_shared<PairColoring>(f), f.num_colors(), n,
                                    pair_bound);
}

inline Coloring word_block_coloring(const Word& w, int bit_budget = kDefaultBitBudget) {
    return Coloring::from_word(bit_budget, w);
}

// --- Materialization -------------------------------------------------

inline constexpr PosInt kMaxTableEntries = PosInt{1} << 24;

inline Coloring materialize(const Coloring& c) {
    if (c.backing() == Coloring::Backing::Table) return c;
    if (c.bound() > kMaxTableEntries) throw BudgetError("materialize: table would be too large");
    std::vector<int> colors;
    colors.reserve(std::size_t(c.bound()));
    for (PosInt n = 1; n <= c.bound(); ++n) colors.push_back(c(n));
    return Coloring::from_table(c.num_colors(), std::move(colors));
}

inline PairColoring materialize(const PairColoring& f) {
    if (f.backing() == PairColoring::Backing::Table) return f;
    if (f.bound() > 4096) throw BudgetError("materialize: table would be too large");
    std::vector<int> colors;
    for (PosInt i = 0; i + 1 < f.bound(); ++i)
        for (PosInt j = i + 1; j < f.bound(); ++j) colors.push_back(f(i, j));
    return PairColoring::from_table(f.num_colors(), f.bound(), std::move(colors));
}

// --- Table file I/O ---------------------------------------------------
//
// Point tables: header "k=<int> N=<int>", then N lines, line n holding
// the color of n. Pair tables: header "k=<int> N=<int>", then one line
// "i j color" per increasing pair over [0..N), ascending (i, j).

namespace detail {

inline std::pair<int, PosInt> parse_table_header(const std::string& line) {
    std::istringstream hs(line);
    std::string field;
    long long k = -1, n = -1;
    while (hs >> field) {
        std::size_t eq = field.find('=');
        if (eq == std::string::npos)
            throw ParseError("table: malformed header field '" + field + "'", 1, 0);
        std::string key = field.substr(0, eq);
        long long value;
        if (!parse_ll_strict(field.substr(eq + 1), value))
            throw ParseError("table: bad integer in header field '" + field + "'", 1, 0);
        if (key == "k") k = value;
        else if (key == "N") n = value;
        else throw ParseError("table: unknown header key '" + key + "'", 1, 0);
    }
    if (k < 1) throw ParseError("table: header must declare k >= 1", 1, 0);
    if (n < 1) throw ParseError("table: header must declare N >= 1", 1, 0);
    return {int(k), PosInt(n)};
}

} // namespace detail

inline Coloring read_coloring_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("table: missing header", 1, 0);
    auto [k, n] = detail::parse_table_header(line);
    if (n > kMaxTableEntries) throw ParseError("table: N too large", 1, 0);
    std::vector<int> colors;
    colors.reserve(std::size_t(n));
    for (PosInt i = 0; i < n; ++i) {
        int lineno = int(i) + 2;
        if (!std::getline(in, line)) throw ParseError("table: expected N color lines", lineno, 0);
        std::istringstream ls(line);
        long long v;
        std::string rest;
        if (!(ls >> v) || (ls >> rest))
            throw ParseError("table: bad color line", lineno, 0);
        if (v < 0 || v >= k) throw ParseError("table: color out of range", lineno, 0);
        colors.push_back(int(v));
    }
    return Coloring::from_table(k, std::move(colors));
}

inline PairColoring read_pair_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("table: missing header", 1, 0);
    auto [k, n] = detail::parse_table_header(line);
    if (n < 2) throw ParseError("pair table: N must be at least 2", 1, 0);
    if (n > 4096) throw ParseError("pair table: N too large", 1, 0);
    std::vector<int> colors;
    int lineno = 1;
    for (PosInt i = 0; i + 1 < n; ++i)
        for (PosInt j = i + 1; j < n; ++j) {
            ++lineno;
            if (!std::getline(in, line))
                throw ParseError("pair table: expected a line for every increasing pair",
                                 lineno, 0);
            std::istringstream ls(line);
            long long fi, fj, v;
            std::string rest;
            if (!(ls >> fi >> fj >> v) || (ls >> rest))
                throw ParseError("pair table: bad line", lineno, 0);
            if (fi != (long long)i || fj != (long long)j)
                throw ParseError("pair table: pairs must appear in ascending (i, j) order",
                                 lineno, 0);
            if (v < 0 || v >= k) throw ParseError("pair table: color out of range", lineno, 0);
            colors.push_back(int(v));
        }
    return PairColoring::from_table(k, n, std::move(colors));
}

inline std::string serialize_coloring_table(const Coloring& c) {
    Coloring t = materialize(c);
    std::string out = "k=" + std::to_string(t.num_colors()) +
                      " N=" + std::to_string(t.bound()) + "\n";
    for (int x : t.table()) {
        out += std::to_string(x);
        out.push_back('\n');
    }
    return out;
}

inline std::string serialize_pair_table(const PairColoring& f) {
    PairColoring t = materialize(f);
    std::string out = "k=" + std::to_string(t.num_colors()) +
                      " N=" + std::to_string(t.bound()) + "\n";
    std::size_t idx = 0;
    for (PosInt i = 0; i + 1 < t.bound(); ++i)
        for (PosInt j = i + 1; j < t.bound(); ++j) {
            out += std::to_string(i);
            out.push_back(' ');
            out += std::to_string(j);
            out.push_back(' ');
            out += std::to_string(t.table()[idx++]);
            out.push_back('\n');
        }
    return out;
}

inline std::uint64_t coloring_table_digest(const Coloring& c) {
    return fnv1a64(serialize_coloring_table(c));
}

inline std::uint64_t pair_table_digest(const PairColoring& f) {
    return fnv1a64(serialize_pair_table(f));
}

inline Coloring read_coloring_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    Coloring c = read_coloring_table(in);
    c.set_origin_path(path);
    return c;
}

inline PairColoring read_pair_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open table file: " + path);
    PairColoring f = read_pair_table(in);
    f.set_origin_path(path);
    return f;
}

inline void write_coloring_table_file(const Coloring& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open table file for writing: " + path);
    out << serialize_coloring_table(c);
}

inline void write_pair_table_file(const PairColoring& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open table file for writing: " + path);
    out << serialize_pair_table(f);
}

} // namespace ahtlab
