#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ahtlab/errors.hpp"

// Finite or eventually periodic words over the alphabet {0, ..., a+1}.
// A periodic word repeats its last `period` stored letters forever; a
// plain finite word is undefined past its last position.
namespace ahtlab {

namespace detail {

// Whole-string decimal parse; rejects trailing junk like "12x".
inline bool parse_ll_strict(const std::string& s, long long& out) {
    try {
        std::size_t used = 0;
        out = std::stoll(s, &used);
        return used == s.size() && used > 0;
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace detail

class Word {
  public:
    Word(int a, std::vector<int> letters, std::optional<int> period = {})
        : a_(a), letters_(std::move(letters)), period_(period) {
        if (a_ < -1) throw std::invalid_argument("word: alphabet size must be at least 1");
        if (letters_.empty()) throw std::invalid_argument("word: at least one letter required");
        for (int x : letters_)
            if (x < 0 || x > a_ + 1)
                throw std::invalid_argument("word: letter out of alphabet range");
        if (period_ && (*period_ < 1 || *period_ > int(letters_.size())))
            throw std::invalid_argument("word: period must lie in [1, length]");
    }

    int a() const { return a_; }
    int alphabet_size() const { return a_ + 2; }
    int length() const { return int(letters_.size()); }
    const std::vector<int>& letters() const { return letters_; }
    bool periodic() const { return period_.has_value(); }
    std::optional<int> period() const { return period_; }

    // First position of the repeating tail (== length() when finite).
    int prefix_length() const {
        return period_ ? length() - *period_ : length();
    }

    int letter(long long t) const {
        if (t < 0) throw std::invalid_argument("word: negative position");
        if (t < length()) return letters_[std::size_t(t)];
        if (!period_)
            throw std::domain_error("word: position beyond a non-periodic word");
        long long base = prefix_length();
        return letters_[std::size_t(base + (t - base) % *period_)];
    }

  private:
    int a_;
    std::vector<int> letters_;
    std::optional<int> period_;
};

// Format: header "a=<int> L=<int> [p=<int>]", then L letters, one per line.
inline Word read_word(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("word: missing header", 1, 0);
    int a = 0, L = 0, p = -1;
    {
        std::istringstream hs(line);
        std::string field;
        bool have_a = false, have_l = false;
        while (hs >> field) {
            std::size_t eq = field.find('=');
            if (eq == std::string::npos)
                throw ParseError("word: malformed header field '" + field + "'", 1, 0);
            std::string key = field.substr(0, eq);
            long long parsed;
            if (!detail::parse_ll_strict(field.substr(eq + 1), parsed) ||
                parsed < INT32_MIN || parsed > INT32_MAX)
                throw ParseError("word: bad integer in header field '" + field + "'", 1, 0);
            int value = int(parsed);
            if (key == "a") { a = value; have_a = true; }
            else if (key == "L") { L = value; have_l = true; }
            else if (key == "p") p = value;
            else throw ParseError("word: unknown header key '" + key + "'", 1, 0);
        }
        if (!have_a || !have_l)
            throw ParseError("word: header must declare a= and L=", 1, 0);
        if (L < 1) throw ParseError("word: L must be positive", 1, 0);
    }
    std::vector<int> letters;
    letters.reserve(std::size_t(L));
    for (int i = 0; i < L; ++i) {
        if (!std::getline(in, line))
            throw ParseError("word: expected " + std::to_string(L) + " letters", 2 + i, 0);
        long long v;
        if (!detail::parse_ll_strict(line, v) || v < 0 || v > INT32_MAX)
            throw ParseError("word: bad letter line", 2 + i, 0);
        letters.push_back(int(v));
    }
    try {
        return Word(a, std::move(letters),
                    p >= 0 ? std::optional<int>(p) : std::nullopt);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("word: ") + e.what(), 1, 0);
    }
}

inline Word read_word_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word file: " + path);
    return read_word(in);
}

inline std::string serialize_word(const Word& w) {
    std::string out = "a=" + std::to_string(w.a()) + " L=" + std::to_string(w.length());
    if (w.periodic()) out += " p=" + std::to_string(*w.period());
    out.push_back('\n');
    for (int x : w.letters()) {
        out += std::to_string(x);
        out.push_back('\n');
    }
    return out;
}

inline void write_word_file(const Word& w, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open word file for writing: " + path);
    out << serialize_word(w);
}

} // namespace ahtlab
