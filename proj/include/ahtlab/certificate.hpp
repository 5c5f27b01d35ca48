#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ahtlab/coloring.hpp"
#include "ahtlab/solvers.hpp"
#include "ahtlab/verify.hpp"
#include "ahtlab/word.hpp"

// Bit-exact certificates: a line-oriented "key = value" format that
// embeds the instance (coloring description and parameters) next to the
// witness, so any claimed result can be re-checked without re-running
// the search. Staged certificates nest sub-certificates under "stages:",
// indented two spaces per level; every stage is independently
// verifiable because it carries its own full instance description.
namespace ahtlab {

struct Certificate {
    std::string principle;  // AHT, RT2, IPT2, HIL, RT2_TO_AHT, AHT_TO_IPT2, CHAIN, WORD
    std::vector<std::pair<std::string, std::string>> instance;
    std::vector<std::pair<std::string, std::string>> witness;
    int color = 0;
    bool exhaustive = false;  // search ran to completion vs witness merely supplied
    std::vector<Certificate> stages;

    bool operator==(const Certificate&) const = default;

    const std::string* instance_value(std::string_view key) const {
        for (const auto& [k, v] : instance)
            if (k == key) return &v;
        return nullptr;
    }
    const std::string* witness_value(std::string_view key) const {
        for (const auto& [k, v] : witness)
            if (k == key) return &v;
        return nullptr;
    }
};

// --- Field formatting --------------------------------------------------

namespace detail {

inline std::string format_list(const std::vector<PosInt>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(xs[i]);
    }
    return out;
}

inline std::string format_hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[std::size_t(i)] = digits[v & 0xf];
    return out;
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

} // namespace detail

// --- Instance descriptions ----------------------------------------------

namespace detail {

struct ColoringDescription {
    std::string uri;
    std::optional<std::uint64_t> digest;   // innermost table digest
    std::optional<PosInt> leaf_bound;      // innermost bound when derived
    bool needs_bit_budget = false;         // projection or word in the chain
};

inline ColoringDescription describe_coloring(const Coloring& c);

inline ColoringDescription describe_coloring(const PairColoring& f) {
    switch (f.backing()) {
        case PairColoring::Backing::Expr:
            return {"expr:" + f.source(), {}, {}, false};
        case PairColoring::Backing::Table: {
            if (f.origin_path().empty())
                throw std::invalid_argument(
                    "certificate: table coloring has no file to reference");
            return {"table:" + f.origin_path(), pair_table_digest(f), {}, false};
        }
        case PairColoring::Backing::Induced: {
            ColoringDescription inner = describe_coloring(f.point_base());
            inner.uri = "induced:" + inner.uri;
            if (!inner.leaf_bound) inner.leaf_bound = f.point_base().bound();
            return inner;
        }
    }
    throw std::logic_error("describe_coloring: unreachable");
}

inline ColoringDescription describe_coloring(const Coloring& c) {
    switch (c.backing()) {
        case Coloring::Backing::Expr:
            return {"expr:" + c.source(), {}, {}, false};
        case Coloring::Backing::Table: {
            if (c.origin_path().empty())
                throw std::invalid_argument(
                    "certificate: table coloring has no file to reference");
            return {"table:" + c.origin_path(), coloring_table_digest(c), {}, false};
        }
        case Coloring::Backing::WordBlock: {
            const Word& w = c.word();
            std::string uri = "word:a=" + std::to_string(w.a()) +
                              " L=" + std::to_string(w.length());
            if (w.periodic()) uri += " p=" + std::to_string(*w.period());
            uri += " : ";
            for (std::size_t i = 0; i < w.letters().size(); ++i) {
                if (i) uri.push_back(',');
                uri += std::to_string(w.letters()[std::size_t(i)]);
            }
            return {std::move(uri), {}, {}, true};
        }
        case Coloring::Backing::Projected: {
            ColoringDescription inner = describe_coloring(c.pair_base());
            inner.uri = "projected:" + inner.uri;
            if (!inner.leaf_bound) inner.leaf_bound = c.pair_base().bound();
            inner.needs_bit_budget = true;
            return inner;
        }
    }
    throw std::logic_error("describe_coloring: unreachable");
}

} // namespace detail

// Optional instance fields beyond colors/bound/size/coloring; written in
// canonical key order by describe_instance.
struct InstanceExtras {
    std::optional<PosInt> search_bound; // bound the search ran under, when narrower
    std::optional<int> base;            // HIL universe exponent count
    std::optional<int> rt2_size;        // reductions: the |J| = m+1 convention
    std::optional<bool> require_apart;  // AHT
    int bit_budget = kDefaultBitBudget;
};

namespace detail {

template <typename ColoringT>
void describe_instance(Certificate& cert, const ColoringT& c, int size,
                       const InstanceExtras& extras) {
    ColoringDescription d = describe_coloring(c);
    auto& inst = cert.instance;
    inst.emplace_back("colors", std::to_string(c.num_colors()));
    inst.emplace_back("bound", std::to_string(c.bound()));
    if (extras.search_bound && *extras.search_bound != c.bound())
        inst.emplace_back("search_bound", std::to_string(*extras.search_bound));
    if (d.leaf_bound) inst.emplace_back("base_bound", std::to_string(*d.leaf_bound));
    if (extras.base) inst.emplace_back("base", std::to_string(*extras.base));
    inst.emplace_back("size", std::to_string(size));
    if (extras.rt2_size) inst.emplace_back("rt2_size", std::to_string(*extras.rt2_size));
    if (extras.require_apart)
        inst.emplace_back("require_apart", format_bool(*extras.require_apart));
    if (d.needs_bit_budget)
        inst.emplace_back("bit_budget", std::to_string(extras.bit_budget));
    inst.emplace_back("coloring", d.uri);
    if (d.digest) inst.emplace_back("coloring_digest", format_hex64(*d.digest));
}

} // namespace detail

// --- Certificate builders ------------------------------------------------

inline Certificate make_aht_certificate(const Coloring& c, const AhtWitness& w,
                                        bool require_apart, bool exhaustive,
                                        int bit_budget = kDefaultBitBudget,
                                        std::optional<PosInt> search_bound = {}) {
    Certificate cert;
    cert.principle = "AHT";
    InstanceExtras extras;
    extras.search_bound = search_bound;
    extras.require_apart = require_apart;
    extras.bit_budget = bit_budget;
    detail::describe_instance(cert, c, int(w.h.size()), extras);
    cert.witness.emplace_back("h", detail::format_list(w.h));
    cert.color = w.color;
    cert.exhaustive = exhaustive;
    return cert;
}

inline Certificate make_rt2_certificate(const PairColoring& f, const Rt2Witness& w,
                                        bool exhaustive,
                                        int bit_budget = kDefaultBitBudget,
                                        std::optional<PosInt> search_bound = {}) {
    Certificate cert;
    cert.principle = "RT2";
    InstanceExtras extras;
    extras.search_bound = search_bound;
    extras.bit_budget = bit_budget;
    detail::describe_instance(cert, f, int(w.j.size()), extras);
    cert.witness.emplace_back("j", detail::format_list(w.j));
    cert.color = w.color;
    cert.exhaustive = exhaustive;
    return cert;
}

inline Certificate make_ipt2_certificate(const PairColoring& f, const Ipt2Witness& w,
                                         bool exhaustive,
                                         int bit_budget = kDefaultBitBudget) {
    Certificate cert;
    cert.principle = "IPT2";
    InstanceExtras extras;
    extras.bit_budget = bit_budget;
    detail::describe_instance(cert, f, int(w.h1.size()), extras);
    cert.witness.emplace_back("h1", detail::format_list(w.h1));
    cert.witness.emplace_back("h2", detail::format_list(w.h2));
    cert.color = w.color;
    cert.exhaustive = exhaustive;
    return cert;
}

inline Certificate make_hil_certificate(const Coloring& c, int base, const HilWitness& w,
                                        bool exhaustive) {
    Certificate cert;
    cert.principle = "HIL";
    InstanceExtras extras;
    extras.base = base;
    detail::describe_instance(cert, c, int(w.sets.size()), extras);
    cert.witness.emplace_back("sets", detail::format_list(w.sets));
    cert.color = w.color;
    cert.exhaustive = exhaustive;
    return cert;
}

// d must be a word-block coloring; the color doubles as the letter claim.
inline Certificate make_word_certificate(const Coloring& d, const AhtWitness& w,
                                         bool infinitely_often, bool exhaustive,
                                         int bit_budget = kDefaultBitBudget) {
    if (d.backing() != Coloring::Backing::WordBlock)
        throw std::invalid_argument("make_word_certificate: needs a word-block coloring");
    Certificate cert;
    cert.principle = "WORD";
    InstanceExtras extras;
    extras.require_apart = true;
    extras.bit_budget = bit_budget;
    detail::describe_instance(cert, d, int(w.h.size()), extras);
    cert.witness.emplace_back("h", detail::format_list(w.h));
    cert.witness.emplace_back("infinitely_often", detail::format_bool(infinitely_often));
    cert.color = w.color;
    cert.exhaustive = exhaustive;
    return cert;
}

// --- Serialization -------------------------------------------------------

namespace detail {

inline void write_certificate_lines(const Certificate& c, int depth, std::string& out) {
    const std::string pad(std::size_t(depth) * 2, ' ');
    out += pad;
    out += "principle = ";
    out += c.principle;
    out.push_back('\n');
    for (const auto& [k, v] : c.instance) {
        out += pad;
        out += "instance.";
        out += k;
        out += " = ";
        out += v;
        out.push_back('\n');
    }
    for (const auto& [k, v] : c.witness) {
        out += pad;
        out += "witness.";
        out += k;
        out += " = ";
        out += v;
        out.push_back('\n');
    }
    out += pad;
    out += "color = ";
    out += std::to_string(c.color);
    out.push_back('\n');
    out += pad;
    out += "exhaustive = ";
    out += format_bool(c.exhaustive);
    out.push_back('\n');
    if (!c.stages.empty()) {
        out += pad;
        out += "stages:\n";
        for (const Certificate& s : c.stages) write_certificate_lines(s, depth + 1, out);
    }
}

} // namespace detail

inline std::string write_certificate(const Certificate& c) {
    std::string out;
    detail::write_certificate_lines(c, 0, out);
    return out;
}

namespace detail {

struct CertLine {
    int number = 0;
    int indent = 0;  // in two-space steps
    bool stages_marker = false;
    std::string key, value;
};

inline std::vector<CertLine> lex_certificate(const std::string& text) {
    std::vector<CertLine> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::size_t spaces = 0;
        while (spaces < raw.size() && raw[spaces] == ' ') ++spaces;
        if (spaces == raw.size()) {
            if (raw.empty()) continue;  // allow trailing blank lines
            throw ParseError("certificate: blank indented line", number, 0);
        }
        if (raw.find('\t') != std::string::npos)
            throw ParseError("certificate: tabs are not allowed", number, 0);
        if (spaces % 2 != 0)
            throw ParseError("certificate: indentation must be a multiple of two spaces",
                             number, 0);
        CertLine line;
        line.number = number;
        line.indent = int(spaces / 2);
        std::string body = raw.substr(spaces);
        if (body == "stages:") {
            line.stages_marker = true;
        } else {
            std::size_t sep = body.find(" = ");
            if (sep == std::string::npos || sep == 0)
                throw ParseError("certificate: expected 'key = value'", number, 0);
            line.key = body.substr(0, sep);
            line.value = body.substr(sep + 3);
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

inline int parse_cert_int(const CertLine& line) {
    long long v;
    if (!parse_ll_strict(line.value, v) || v < INT32_MIN || v > INT32_MAX)
        throw ParseError("certificate: bad integer in '" + line.key + "'", line.number, 0);
    return int(v);
}

inline bool parse_cert_bool(const CertLine& line) {
    if (line.value == "true") return true;
    if (line.value == "false") return false;
    throw ParseError("certificate: bad boolean in '" + line.key + "'", line.number, 0);
}

inline bool known_principle(const std::string& p) {
    return p == "AHT" || p == "RT2" || p == "IPT2" || p == "HIL" || p == "RT2_TO_AHT" ||
           p == "AHT_TO_IPT2" || p == "CHAIN" || p == "WORD";
}

inline Certificate parse_certificate(const std::vector<CertLine>& lines, std::size_t& pos,
                                     int depth) {
    if (pos >= lines.size())
        throw ParseError("certificate: unexpected end of input", int(lines.empty() ? 1 : lines.back().number), 0);
    const CertLine& head = lines[pos];
    if (head.indent != depth || head.stages_marker || head.key != "principle")
        throw ParseError("certificate: expected a 'principle' line", head.number, 0);
    if (!known_principle(head.value))
        throw ParseError("certificate: unknown principle '" + head.value + "'", head.number,
                         0);
    Certificate cert;
    cert.principle = head.value;
    ++pos;

    bool have_color = false, have_exhaustive = false;
    while (pos < lines.size()) {
        const CertLine& line = lines[pos];
        if (line.indent < depth) break;           // parent resumes
        if (line.indent > depth)
            throw ParseError("certificate: unexpected indentation", line.number, 0);
        if (line.stages_marker) {
            ++pos;
            if (pos >= lines.size() || lines[pos].indent != depth + 1)
                throw ParseError("certificate: 'stages:' requires an indented stage",
                                 line.number, 0);
            while (pos < lines.size() && lines[pos].indent == depth + 1)
                cert.stages.push_back(parse_certificate(lines, pos, depth + 1));
            if (pos < lines.size() && lines[pos].indent > depth)
                throw ParseError("certificate: unexpected indentation after stages",
                                 lines[pos].number, 0);
            break;  // stages close the certificate
        }
        if (line.key == "principle") break;  // sibling stage
        if (line.key.starts_with("instance.")) {
            cert.instance.emplace_back(line.key.substr(9), line.value);
        } else if (line.key.starts_with("witness.")) {
            cert.witness.emplace_back(line.key.substr(8), line.value);
        } else if (line.key == "color") {
            if (have_color)
                throw ParseError("certificate: duplicate 'color'", line.number, 0);
            cert.color = parse_cert_int(line);
            have_color = true;
        } else if (line.key == "exhaustive") {
            if (have_exhaustive)
                throw ParseError("certificate: duplicate 'exhaustive'", line.number, 0);
            cert.exhaustive = parse_cert_bool(line);
            have_exhaustive = true;
        } else {
            throw ParseError("certificate: unknown key '" + line.key + "'", line.number, 0);
        }
        ++pos;
    }
    if (!have_color)
        throw ParseError("certificate: missing 'color'", head.number, 0);
    if (!have_exhaustive)
        throw ParseError("certificate: missing 'exhaustive'", head.number, 0);
    return cert;
}

} // namespace detail

inline Certificate read_certificate(const std::string& text) {
    std::vector<detail::CertLine> lines = detail::lex_certificate(text);
    if (lines.empty()) throw ParseError("certificate: empty input", 1, 0);
    std::size_t pos = 0;
    Certificate cert = detail::parse_certificate(lines, pos, 0);
    if (pos != lines.size())
        throw ParseError("certificate: trailing content", lines[pos].number, 0);
    return cert;
}

inline Certificate read_certificate_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open certificate file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_certificate(buf.str());
}

inline void write_certificate_file(const Certificate& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open certificate file for writing: " + path);
    out << write_certificate(c);
}

inline std::uint64_t certificate_digest(const Certificate& c) {
    return fnv1a64(write_certificate(c));
}

// --- Verification --------------------------------------------------------

namespace detail {

// Structural defects discovered while decoding a certificate; turned
// into Fail verdicts by verify_certificate.
struct CertDefect : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::string& require_instance(const Certificate& cert, std::string_view key) {
    const std::string* v = cert.instance_value(key);
    if (!v) throw CertDefect("missing instance." + std::string(key));
    return *v;
}

inline const std::string& require_witness(const Certificate& cert, std::string_view key) {
    const std::string* v = cert.witness_value(key);
    if (!v) throw CertDefect("missing witness." + std::string(key));
    return *v;
}

inline int decode_int(const std::string& value, std::string_view what) {
    long long v;
    if (!parse_ll_strict(value, v) || v < INT32_MIN || v > INT32_MAX)
        throw CertDefect("bad integer in " + std::string(what));
    return int(v);
}

inline PosInt decode_u64(const std::string& value, std::string_view what) {
    if (value.empty() || value[0] == '-')
        throw CertDefect("bad integer in " + std::string(what));
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw CertDefect("bad integer in " + std::string(what));
        return PosInt(v);
    } catch (const CertDefect&) {
        throw;
    } catch (const std::exception&) {
        throw CertDefect("bad integer in " + std::string(what));
    }
}

inline bool decode_bool(const std::string& value, std::string_view what) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw CertDefect("bad boolean in " + std::string(what));
}

inline std::vector<PosInt> decode_list(const std::string& value, std::string_view what) {
    std::vector<PosInt> out;
    if (value.empty()) throw CertDefect("empty list in " + std::string(what));
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        std::string item = value.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(decode_u64(item, what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// Decoded instance parameters shared by every principle.
struct InstanceParams {
    int colors = 0;
    PosInt bound = 0;
    std::optional<PosInt> search_bound;
    std::optional<PosInt> leaf_bound;
    int size = 0;
    int bit_budget = kDefaultBitBudget;
    std::string uri;
    std::optional<std::string> digest;
};

inline InstanceParams decode_instance(const Certificate& cert) {
    InstanceParams p;
    p.colors = decode_int(require_instance(cert, "colors"), "instance.colors");
    p.bound = decode_u64(require_instance(cert, "bound"), "instance.bound");
    if (const std::string* v = cert.instance_value("search_bound")) {
        p.search_bound = decode_u64(*v, "instance.search_bound");
        if (*p.search_bound > p.bound)
            throw CertDefect("instance.search_bound exceeds instance.bound");
    }
    if (const std::string* v = cert.instance_value("base_bound"))
        p.leaf_bound = decode_u64(*v, "instance.base_bound");
    p.size = decode_int(require_instance(cert, "size"), "instance.size");
    if (const std::string* v = cert.instance_value("bit_budget"))
        p.bit_budget = decode_int(*v, "instance.bit_budget");
    p.uri = require_instance(cert, "coloring");
    if (const std::string* v = cert.instance_value("coloring_digest")) p.digest = *v;
    return p;
}

inline Word parse_inline_word(std::string_view spec) {
    std::size_t sep = spec.find(" : ");
    if (sep == std::string_view::npos)
        throw CertDefect("word description needs 'header : letters'");
    std::string header(spec.substr(0, sep));
    std::string letters_part(spec.substr(sep + 3));
    std::string text = header + "\n";
    for (char& ch : letters_part)
        if (ch == ',') ch = '\n';
    text += letters_part;
    text.push_back('\n');
    std::istringstream in(text);
    try {
        return read_word(in);
    } catch (const ParseError& e) {
        throw CertDefect(std::string("bad word description: ") + e.what());
    }
}

inline Coloring point_from_uri(std::string_view uri, const InstanceParams& p);

inline PairColoring pair_from_uri(std::string_view uri, const InstanceParams& p) {
    if (uri.starts_with("expr:")) {
        PosInt bound = p.leaf_bound ? *p.leaf_bound : p.bound;
        try {
            return PairColoring::from_expr(p.colors, bound, uri.substr(5));
        } catch (const ParseError& e) {
            throw CertDefect(std::string("bad pair expression: ") + e.what());
        }
    }
    if (uri.starts_with("table:")) {
        PairColoring f = read_pair_table_file(std::string(uri.substr(6)));
        if (f.num_colors() != p.colors)
            throw CertDefect("pair table color count differs from instance.colors");
        if (!p.digest || *p.digest != format_hex64(pair_table_digest(f)))
            throw CertDefect("pair table digest mismatch");
        return f;
    }
    if (uri.starts_with("induced:"))
        return induced_pair_coloring(point_from_uri(uri.substr(8), p));
    throw CertDefect("unknown pair coloring description '" + std::string(uri) + "'");
}

inline Coloring point_from_uri(std::string_view uri, const InstanceParams& p) {
    if (uri.starts_with("expr:")) {
        PosInt bound = p.leaf_bound ? *p.leaf_bound : p.bound;
        try {
            return Coloring::from_expr(p.colors, bound, uri.substr(5));
        } catch (const ParseError& e) {
            throw CertDefect(std::string("bad expression: ") + e.what());
        }
    }
    if (uri.starts_with("table:")) {
        Coloring c = read_coloring_table_file(std::string(uri.substr(6)));
        if (c.num_colors() != p.colors)
            throw CertDefect("table color count differs from instance.colors");
        if (!p.digest || *p.digest != format_hex64(coloring_table_digest(c)))
            throw CertDefect("table digest mismatch");
        return c;
    }
    if (uri.starts_with("word:"))
        return word_block_coloring(parse_inline_word(uri.substr(5)), p.bit_budget);
    if (uri.starts_with("projected:"))
        return projected_point_coloring(pair_from_uri(uri.substr(10), p), p.bit_budget);
    throw CertDefect("unknown coloring description '" + std::string(uri) + "'");
}

inline Coloring decode_point_coloring(const InstanceParams& p) {
    Coloring c = point_from_uri(p.uri, p);
    if (c.bound() != p.bound)
        throw CertDefect("instance.bound does not match the described coloring");
    return c;
}

inline PairColoring decode_pair_coloring(const InstanceParams& p) {
    PairColoring f = pair_from_uri(p.uri, p);
    if (f.bound() != p.bound)
        throw CertDefect("instance.bound does not match the described coloring");
    return f;
}

inline void check_color_range(const Certificate& cert, int colors) {
    if (cert.color < 0 || cert.color >= colors)
        throw CertDefect("color out of range for instance.colors");
}

inline std::vector<PosInt> decode_sized_witness(const Certificate& cert,
                                                std::string_view key, int size) {
    std::vector<PosInt> xs = decode_list(require_witness(cert, key), key);
    if (int(xs.size()) != size)
        throw CertDefect("witness." + std::string(key) + " size differs from instance.size");
    return xs;
}

// When the certificate records the narrower bound the search ran
// under, the witness must live inside it. `exclusive` marks exponent
// domains [0, bound) as opposed to value domains [1, bound].
inline void check_search_bound(const std::vector<PosInt>& xs, const InstanceParams& p,
                               bool exclusive) {
    if (!p.search_bound) return;
    for (PosInt x : xs)
        if (exclusive ? x >= *p.search_bound : x > *p.search_bound)
            throw CertDefect("witness element outside instance.search_bound");
}

inline Verdict verify_certificate_impl(const Certificate& cert);

inline Verdict verify_stage(const Certificate& parent, std::size_t index,
                            const std::string& expected_principle,
                            const std::string& expected_uri) {
    if (index >= parent.stages.size()) throw CertDefect("missing stage certificate");
    const Certificate& stage = parent.stages[index];
    if (stage.principle != expected_principle)
        throw CertDefect("stage " + std::to_string(index + 1) + " must be " +
                         expected_principle);
    const std::string* uri = stage.instance_value("coloring");
    if (!uri || *uri != expected_uri)
        throw CertDefect("stage " + std::to_string(index + 1) +
                         " coloring does not derive from the instance");
    if (stage.color != parent.color)
        throw CertDefect("stage " + std::to_string(index + 1) +
                         " color differs from the final color");
    return verify_certificate_impl(stage);
}

inline Verdict verify_certificate_impl(const Certificate& cert) {
    const InstanceParams p = decode_instance(cert);
    check_color_range(cert, p.colors);

    if (cert.principle == "AHT" || cert.principle == "WORD") {
        bool apart = true;
        if (cert.principle == "AHT")
            apart = decode_bool(require_instance(cert, "require_apart"),
                                "instance.require_apart");
        Coloring c = decode_point_coloring(p);
        std::vector<PosInt> h = decode_sized_witness(cert, "h", p.size);
        check_search_bound(h, p, false);
        Verdict v = verify_aht(c, h, cert.color, apart);
        if (!v.ok() || cert.principle == "AHT") return v;

        // WORD: the "highest letter occurring infinitely often" claim.
        if (c.backing() != Coloring::Backing::WordBlock)
            throw CertDefect("WORD certificate requires a word coloring");
        bool claimed = decode_bool(require_witness(cert, "infinitely_often"),
                                   "witness.infinitely_often");
        if (!claimed) return v;
        const Word& w = c.word();
        if (!w.periodic())
            throw CertDefect("infinitely_often claimed for a non-periodic word");
        int period_max = 0;
        for (int t = w.prefix_length(); t < w.length(); ++t)
            period_max = std::max(period_max, w.letters()[std::size_t(t)]);
        if (cert.color != period_max)
            return Verdict::fail("claimed letter differs from the period maximum " +
                                 std::to_string(period_max));
        for (PosInt x : h) {
            int span = mu(x) - lam(x) + 1;
            if (lam(x) < w.prefix_length() || span < *w.period())
                return Verdict::fail(
                    "witness element " + std::to_string(x) +
                    " has a window that does not cover a full period past the prefix");
        }
        return v;
    }
    if (cert.principle == "RT2") {
        PairColoring f = decode_pair_coloring(p);
        std::vector<PosInt> j = decode_sized_witness(cert, "j", p.size);
        check_search_bound(j, p, true);
        if (j.size() == 1 && cert.color != 0)
            throw CertDefect("singleton witnesses carry color 0 by convention");
        return verify_rt2(f, j, cert.color);
    }
    if (cert.principle == "IPT2") {
        PairColoring f = decode_pair_coloring(p);
        std::vector<PosInt> h1 = decode_sized_witness(cert, "h1", p.size);
        std::vector<PosInt> h2 = decode_sized_witness(cert, "h2", p.size);
        check_search_bound(h1, p, true);
        check_search_bound(h2, p, true);
        return verify_ipt2(f, h1, h2, cert.color);
    }
    if (cert.principle == "HIL") {
        int base = decode_int(require_instance(cert, "base"), "instance.base");
        if (base < 1 || base > 20) throw CertDefect("instance.base out of range");
        Coloring c = decode_point_coloring(p);
        std::vector<PosInt> sets = decode_sized_witness(cert, "sets", p.size);
        const PosInt max_mask = (PosInt{1} << base) - 1;
        for (PosInt x : sets)
            if (x > max_mask) throw CertDefect("set outside the base universe");
        return verify_hil(c, sets, cert.color);
    }
    if (cert.principle == "RT2_TO_AHT") {
        Coloring c = decode_point_coloring(p);
        std::vector<PosInt> h = decode_sized_witness(cert, "h", p.size);
        check_search_bound(h, p, false);
        int rt2_size = decode_int(require_instance(cert, "rt2_size"), "instance.rt2_size");
        if (rt2_size != p.size + 1)
            throw CertDefect("instance.rt2_size must be instance.size + 1");
        Verdict v = verify_aht(c, h, cert.color, true);
        if (!v.ok()) return v;
        if (cert.stages.size() != 1) throw CertDefect("expected exactly one RT2 stage");
        Verdict sv = verify_stage(cert, 0, "RT2", "induced:" + p.uri);
        if (!sv.ok()) return sv;
        const Certificate& stage = cert.stages[0];
        std::vector<PosInt> j =
            decode_list(require_witness(stage, "j"), "stage witness.j");
        if (int(j.size()) != rt2_size)
            throw CertDefect("RT2 stage witness size differs from instance.rt2_size");
        if (blocks_from_rt2(j) != h)
            return Verdict::fail("witness.h is not the block set of the RT2 stage witness");
        return Verdict::pass();
    }
    if (cert.principle == "AHT_TO_IPT2" || cert.principle == "CHAIN") {
        PairColoring f = decode_pair_coloring(p);
        std::vector<PosInt> h1 = decode_sized_witness(cert, "h1", p.size);
        std::vector<PosInt> h2 = decode_sized_witness(cert, "h2", p.size);
        check_search_bound(h1, p, true);
        check_search_bound(h2, p, true);
        Verdict v = verify_ipt2(f, h1, h2, cert.color);
        if (!v.ok()) return v;
        if (cert.stages.size() != 1)
            throw CertDefect("expected exactly one AHT stage");
        const std::string stage_principle =
            cert.principle == "CHAIN" ? "RT2_TO_AHT" : cert.stages[0].principle;
        if (stage_principle != "AHT" && stage_principle != "RT2_TO_AHT")
            throw CertDefect("AHT stage must be AHT or RT2_TO_AHT");
        Verdict sv = verify_stage(cert, 0, stage_principle, "projected:" + p.uri);
        if (!sv.ok()) return sv;
        const Certificate& stage = cert.stages[0];
        std::vector<PosInt> h = decode_list(require_witness(stage, "h"), "stage witness.h");
        auto [lo, hi] = project_aht_witness(h);
        if (lo != h1 || hi != h2)
            return Verdict::fail("witness does not project from the AHT stage witness");
        return Verdict::pass();
    }
    throw CertDefect("unknown principle '" + cert.principle + "'");
}

} // namespace detail

// Re-checks every claim a certificate makes, including nested stages
// and their cross-links (stage colorings derive from the instance, the
// final witness is the stated transform of the stage witness).
// Structural defects are Fail verdicts, never exceptions.
inline Verdict verify_certificate(const Certificate& cert) {
    try {
        return detail::verify_certificate_impl(cert);
    } catch (const detail::CertDefect& e) {
        return Verdict::fail(std::string("certificate invalid: ") + e.what());
    } catch (const ParseError& e) {
        return Verdict::fail(std::string("certificate invalid: ") + e.what());
    } catch (const EvalError& e) {
        return Verdict::fail(std::string("certificate invalid: ") + e.what());
    } catch (const BudgetError& e) {
        return Verdict::undecidable(e.what());
    } catch (const std::exception& e) {
        return Verdict::fail(std::string("certificate invalid: ") + e.what());
    }
}

} // namespace ahtlab
