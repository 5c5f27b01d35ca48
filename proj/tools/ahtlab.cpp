// Command-line front end: bit utilities, witness solvers, reduction
// pipelines, and certificate verification. stdout carries one
// parseable "key = value" line per fact (matching the certificate
// format); diagnostics go to stderr. Exit codes: solve/reduce 0 found,
// 1 none, 3 budget exceeded; verify 0 ok, 1 counterexample, 2 parse
// error; usage errors 2; unexpected failures 4.
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ahtlab/ahtlab.hpp"

namespace {

using namespace ahtlab;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pair bound used when an expr-backed reduction omits --bound: the
// projected point domain is then 2^12 - 1, comfortable for search.
constexpr PosInt kDefaultReducePairBound = 12;

PosInt parse_value(const std::string& tok, const char* what) {
    PosInt v = 0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || end != tok.data() + tok.size() || v == 0)
        throw UsageError(std::string(what) + ": expected a positive integer, got '" +
                         tok + "'");
    return v;
}

std::vector<PosInt> parse_value_list(const std::string& s, const char* what) {
    std::vector<PosInt> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        if (comma == std::string::npos) comma = s.size();
        std::string tok = s.substr(pos, comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
        while (!tok.empty() && tok.back() == ' ') tok.pop_back();
        out.push_back(parse_value(tok, what));
        pos = comma + 1;
    }
    return out;
}

int resolve_threads(const std::optional<int>& flag) {
    if (flag) {
        if (*flag < 1) throw UsageError("--threads must be at least 1");
        return *flag;
    }
    if (const char* env = std::getenv("AHTLAB_THREADS")) {
        int v = 0;
        std::string tok(env);
        auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec == std::errc{} && end == tok.data() + tok.size() && v >= 1) return v;
        std::cerr << "warning: ignoring AHTLAB_THREADS='" << tok << "'\n";
    }
    return 1;
}

// Shared flags for solve/reduce; bound and colors come from the table
// file when the coloring is table-backed.
struct InstanceFlags {
    std::string coloring;
    std::optional<int> colors;
    std::optional<PosInt> bound;
    int size = 1;
    std::optional<std::uint64_t> node_limit;
    std::optional<int> threads;
    std::optional<std::string> out;
};

void check_table_flags(const InstanceFlags& fl, int colors, PosInt bound) {
    if (fl.colors && *fl.colors != colors)
        throw UsageError("--colors disagrees with the table file (" +
                         std::to_string(colors) + ")");
    if (fl.bound && *fl.bound != bound)
        throw UsageError("--bound disagrees with the table file (" +
                         std::to_string(bound) + ")");
}

Coloring load_point_coloring(const InstanceFlags& fl) {
    if (fl.coloring.starts_with("expr:")) {
        if (!fl.colors || !fl.bound)
            throw UsageError("expr colorings need --colors and --bound");
        return Coloring::from_expr(*fl.colors, *fl.bound, fl.coloring.substr(5));
    }
    if (fl.coloring.starts_with("table:")) {
        Coloring c = read_coloring_table_file(fl.coloring.substr(6));
        check_table_flags(fl, c.num_colors(), c.bound());
        return c;
    }
    throw UsageError("--coloring must be 'expr:SRC' or 'table:PATH'");
}

PairColoring load_pair_coloring(const InstanceFlags& fl) {
    if (fl.coloring.starts_with("expr:")) {
        if (!fl.colors || !fl.bound)
            throw UsageError("expr colorings need --colors and --bound");
        return PairColoring::from_expr(*fl.colors, *fl.bound, fl.coloring.substr(5));
    }
    if (fl.coloring.starts_with("table:")) {
        PairColoring f = read_pair_table_file(fl.coloring.substr(6));
        check_table_flags(fl, f.num_colors(), f.bound());
        return f;
    }
    throw UsageError("--coloring must be 'expr:SRC' or 'table:PATH'");
}

std::string default_certificate_path(const Certificate& cert) {
    std::string name;
    for (char ch : cert.principle)
        name.push_back(ch == '_' ? '-' : char(std::tolower(static_cast<unsigned char>(ch))));
    return name + "-" + detail::format_hex64(certificate_digest(cert)) + ".cert";
}

// Every emitted certificate is re-verified before it reaches disk.
std::string emit_certificate(const Certificate& cert, const std::optional<std::string>& out) {
    Verdict v = verify_certificate(cert);
    if (!v.ok())
        throw std::logic_error("internal error: emitted certificate does not verify: " +
                               describe(v));
    std::string path = out ? *out : default_certificate_path(cert);
    write_certificate_file(cert, path);
    return path;
}

int report_not_found(SearchStatus status, std::uint64_t nodes, const std::string& stage) {
    if (!stage.empty())
        std::cerr << "stage '" << stage << "' ended the pipeline\n";
    std::cout << "status = "
              << (status == SearchStatus::None ? "none within bound" : "budget exceeded")
              << "\n"
              << "nodes = " << nodes << "\n";
    return status == SearchStatus::None ? 1 : 3;
}

// --- util --------------------------------------------------------------

int run_util(const std::string& op, const std::string& arg,
             const std::optional<PosInt>& min_sum, const std::optional<PosInt>& max_sum) {
    if (op == "lam" || op == "mu") {
        PosInt n = parse_value(arg, "util");
        std::cout << (op == "lam" ? lam(n) : mu(n)) << "\n";
        return 0;
    }
    if (op == "apart") {
        std::cout << (is_apart(parse_value_list(arg, "util")) ? "true" : "false") << "\n";
        return 0;
    }
    // op == "as": adjacent run sums in run order (length-major).
    auto runs = adjacent_sums(parse_value_list(arg, "util"));
    std::string line;
    for (const Run& r : runs) {
        if (min_sum && r.sum < *min_sum) continue;
        if (max_sum && r.sum > *max_sum) continue;
        if (!line.empty()) line.push_back(' ');
        line += std::to_string(r.sum);
    }
    std::cout << line << "\n";
    return 0;
}

// --- solve -------------------------------------------------------------

int run_solve(const std::string& principle, const InstanceFlags& fl, bool no_apart,
              const std::optional<int>& base_flag) {
    SearchBudget budget;
    budget.target_size = fl.size;
    budget.node_limit = fl.node_limit;
    budget.require_apart = !no_apart;
    budget.threads = resolve_threads(fl.threads);

    if (principle == "aht") {
        Coloring c = load_point_coloring(fl);
        budget.bound = c.bound();
        auto r = solve_aht(c, budget);
        if (!r.found()) return report_not_found(r.status, r.nodes, "");
        Certificate cert =
            make_aht_certificate(c, *r.witness, budget.require_apart, true);
        std::cout << "status = found\n"
                  << "h = " << detail::format_list(r.witness->h) << "\n"
                  << "color = " << r.witness->color << "\n"
                  << "nodes = " << r.nodes << "\n"
                  << "certificate = " << emit_certificate(cert, fl.out) << "\n";
        return 0;
    }
    if (principle == "rt2" || principle == "ipt2") {
        PairColoring f = load_pair_coloring(fl);
        budget.bound = f.bound();
        if (principle == "rt2") {
            auto r = solve_rt2(f, budget);
            if (!r.found()) return report_not_found(r.status, r.nodes, "");
            Certificate cert = make_rt2_certificate(f, *r.witness, true);
            std::cout << "status = found\n"
                      << "j = " << detail::format_list(r.witness->j) << "\n"
                      << "color = " << r.witness->color << "\n"
                      << "nodes = " << r.nodes << "\n"
                      << "certificate = " << emit_certificate(cert, fl.out) << "\n";
            return 0;
        }
        auto r = solve_ipt2(f, budget);
        if (!r.found()) return report_not_found(r.status, r.nodes, "");
        Certificate cert = make_ipt2_certificate(f, *r.witness, true);
        std::cout << "status = found\n"
                  << "h1 = " << detail::format_list(r.witness->h1) << "\n"
                  << "h2 = " << detail::format_list(r.witness->h2) << "\n"
                  << "color = " << r.witness->color << "\n"
                  << "nodes = " << r.nodes << "\n"
                  << "certificate = " << emit_certificate(cert, fl.out) << "\n";
        return 0;
    }
    // principle == "hil"
    Coloring c = load_point_coloring(fl);
    int base;
    if (base_flag) {
        base = *base_flag;
    } else {
        // Infer the generator count when the domain is exactly the unions.
        PosInt n = c.bound() + 1;
        if ((n & (n - 1)) != 0)
            throw UsageError("hil needs --base when the bound is not 2^base - 1");
        base = mu(n);
    }
    if (base < 1) throw UsageError("--base must be at least 1");
    budget.bound = PosInt(base);
    auto r = solve_hil(c, budget);
    if (!r.found()) return report_not_found(r.status, r.nodes, "");
    Certificate cert = make_hil_certificate(c, base, *r.witness, true);
    std::cout << "status = found\n"
              << "sets = " << detail::format_list(r.witness->sets) << "\n"
              << "color = " << r.witness->color << "\n"
              << "nodes = " << r.nodes << "\n"
              << "certificate = " << emit_certificate(cert, fl.out) << "\n";
    return 0;
}

// --- reduce ------------------------------------------------------------

int report_ipt2_pipeline(const PipelineResult<Ipt2Witness>& r,
                         const std::optional<std::string>& out) {
    if (!r.found()) return report_not_found(r.status, r.nodes, r.failed_stage);
    std::cout << "status = found\n"
              << "h1 = " << detail::format_list(r.witness->h1) << "\n"
              << "h2 = " << detail::format_list(r.witness->h2) << "\n"
              << "color = " << r.witness->color << "\n"
              << "nodes = " << r.nodes << "\n"
              << "certificate = " << emit_certificate(*r.certificate, out) << "\n";
    return 0;
}

int run_reduce(const std::string& kind, const InstanceFlags& fl,
               const std::optional<PosInt>& rt2_bound, const std::string& aht_stage,
               const std::optional<PosInt>& aht_bound, const std::string& word_path,
               int bit_budget) {
    PipelineOptions opt;
    opt.node_limit = fl.node_limit;
    opt.threads = resolve_threads(fl.threads);
    opt.bit_budget = bit_budget;
    opt.aht_bound = aht_bound;
    opt.rt2_bound = rt2_bound;

    if (kind == "rt2-to-aht") {
        if (!rt2_bound) throw UsageError("rt2-to-aht needs --rt2-bound");
        InstanceFlags base = fl;
        if (!base.bound && base.coloring.starts_with("expr:")) {
            // Exactly covers every block sum over exponents < rt2_bound.
            if (*rt2_bound > 62) throw UsageError("--rt2-bound must be at most 62");
            base.bound = (PosInt{1} << *rt2_bound) - 2;
        }
        Coloring c = load_point_coloring(base);
        auto r = reduce_rt2_to_aht(c, fl.size, *rt2_bound, opt);
        if (!r.found()) return report_not_found(r.status, r.nodes, r.failed_stage);
        std::cout << "status = found\n"
                  << "h = " << detail::format_list(r.witness->h) << "\n"
                  << "color = " << r.witness->color << "\n"
                  << "nodes = " << r.nodes << "\n"
                  << "certificate = " << emit_certificate(*r.certificate, fl.out) << "\n";
        return 0;
    }
    if (kind == "aht-to-ipt2" || kind == "chain") {
        InstanceFlags base = fl;
        if (!base.bound && base.coloring.starts_with("expr:"))
            base.bound = kDefaultReducePairBound;
        PairColoring f = load_pair_coloring(base);
        if (kind == "chain")
            return report_ipt2_pipeline(chain_rt2_to_ipt2(f, fl.size, opt), fl.out);
        AhtStageKind stage;
        if (aht_stage == "search") stage = AhtStageKind::Search;
        else if (aht_stage == "chain") stage = AhtStageKind::Chain;
        else throw UsageError("--aht-stage must be 'search' or 'chain'");
        return report_ipt2_pipeline(reduce_aht_to_ipt2(f, fl.size, stage, opt), fl.out);
    }
    // kind == "word"
    if (word_path.empty()) throw UsageError("reduce word needs --word PATH");
    Word w = read_word_file(word_path);
    auto r = word_highest_letter(w, fl.size, opt);
    if (!r.found()) return report_not_found(r.status, r.nodes, "");
    std::cout << "status = found\n"
              << "letter = " << r.letter << "\n"
              << "infinitely_often = " << (r.infinitely_often ? "true" : "false") << "\n"
              << "h = " << detail::format_list(r.witness->h) << "\n"
              << "color = " << r.witness->color << "\n"
              << "nodes = " << r.nodes << "\n"
              << "certificate = " << emit_certificate(*r.certificate, fl.out) << "\n";
    return 0;
}

// --- verify ------------------------------------------------------------

int run_verify(const std::string& path) {
    Certificate cert;
    try {
        cert = read_certificate_file(path);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    Verdict v = verify_certificate(cert);
    std::cout << describe(v) << "\n";
    return v.ok() ? 0 : 1;
}

void add_instance_flags(CLI::App* cmd, InstanceFlags& fl) {
    cmd->add_option("--coloring", fl.coloring, "coloring as 'expr:SRC' or 'table:PATH'");
    cmd->add_option("--colors", fl.colors, "number of colors k (expr colorings)");
    cmd->add_option("--bound", fl.bound, "domain bound N (expr colorings)");
    cmd->add_option("--size", fl.size, "witness size m")->required();
    cmd->add_option("--node-limit", fl.node_limit, "per-branch search node cap");
    cmd->add_option("--threads", fl.threads,
                    "solver worker threads (default: AHTLAB_THREADS or 1)");
    cmd->add_option("--out", fl.out, "certificate output path (default: derived)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-instance laboratory for adjacent-sum partition principles"};
    app.require_subcommand(1);
    int code = 0;

    // util
    auto* util = app.add_subcommand("util", "bit utilities: lam, mu, apart, as");
    std::string util_op, util_arg;
    std::optional<PosInt> as_min, as_max;
    util->add_option("op", util_op, "one of lam, mu, apart, as")
        ->required()
        ->check(CLI::IsMember({"lam", "mu", "apart", "as"}));
    util->add_option("value", util_arg, "integer or comma-separated list")->required();
    util->add_option("--min", as_min, "as: keep sums >= this");
    util->add_option("--max", as_max, "as: keep sums <= this");
    util->callback([&] { code = run_util(util_op, util_arg, as_min, as_max); });

    // solve
    auto* solve = app.add_subcommand("solve", "brute-force witness search");
    std::string solve_principle;
    InstanceFlags solve_flags;
    bool no_apart = false;
    std::optional<int> base_flag;
    solve->add_option("principle", solve_principle, "aht, rt2, ipt2, or hil")
        ->required()
        ->check(CLI::IsMember({"aht", "rt2", "ipt2", "hil"}));
    add_instance_flags(solve, solve_flags);
    solve->add_flag("--no-apart", no_apart, "aht: drop the apartness requirement");
    solve->add_option("--base", base_flag, "hil: number of generator exponents");
    solve->callback(
        [&] { code = run_solve(solve_principle, solve_flags, no_apart, base_flag); });

    // reduce
    auto* reduce = app.add_subcommand("reduce", "run a reduction pipeline");
    std::string reduce_kind, aht_stage = "search", word_path;
    InstanceFlags reduce_flags;
    std::optional<PosInt> rt2_bound, aht_bound;
    int bit_budget = kDefaultBitBudget;
    reduce->add_option("kind", reduce_kind, "rt2-to-aht, aht-to-ipt2, chain, or word")
        ->required()
        ->check(CLI::IsMember({"rt2-to-aht", "aht-to-ipt2", "chain", "word"}));
    add_instance_flags(reduce, reduce_flags);
    reduce->add_option("--rt2-bound", rt2_bound, "exponent bound for the RT2 stage");
    reduce->add_option("--aht-stage", aht_stage,
                       "aht-to-ipt2: discharge the AHT stage by 'search' or 'chain'");
    reduce->add_option("--aht-bound", aht_bound, "cap for the AHT search stage");
    reduce->add_option("--word", word_path, "word file for the word pipeline");
    reduce->add_option("--bit-budget", bit_budget, "bit budget for derived domains");
    reduce->callback([&] {
        code = run_reduce(reduce_kind, reduce_flags, rt2_bound, aht_stage, aht_bound,
                          word_path, bit_budget);
    });

    // verify
    auto* verify = app.add_subcommand("verify", "check a certificate file");
    std::string cert_path;
    verify->add_option("path", cert_path, "certificate file")->required();
    verify->callback([&] { code = run_verify(cert_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return code;
}
