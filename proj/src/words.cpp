#include "treefpp/words.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace treefpp {

GenWord reduce_word(GenWord w) {
    GenWord out;
    out.reserve(w.size());
    for (int32_t c : w) {
        if (c == 0) throw std::invalid_argument("word letter code 0 is invalid");
        if (!out.empty() && out.back() == -c) {
            out.pop_back();
        } else {
            out.push_back(c);
        }
    }
    return out;
}

GenWord invert_word(const GenWord& w) {
    GenWord out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
    return out;
}

GenWord concat_words(const GenWord& a, const GenWord& b) {
    GenWord out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

GenWord power_word(const GenWord& w, int64_t e) {
    GenWord base = e < 0 ? invert_word(w) : w;
    if (e < 0) e = -e;
    GenWord out;
    for (int64_t i = 0; i < e; ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
}

std::string format_word(const GenWord& w, const std::vector<std::string>& names) {
    if (w.empty()) return "1";
    std::ostringstream out;
    bool first = true;
    for (int32_t c : w) {
        const size_t idx = static_cast<size_t>(c > 0 ? c : -c) - 1;
        if (idx >= names.size()) throw std::invalid_argument("word letter out of range");
        if (!first) out << ' ';
        out << names[idx];
        if (c < 0) out << "^-1";
        first = false;
    }
    return out.str();
}

GenWord parse_word(const std::string& text, const std::vector<std::string>& names) {
    GenWord out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok == "1") continue;  // identity factor
        std::string name = tok;
        int64_t exp = 1;
        const size_t caret = tok.find('^');
        if (caret != std::string::npos) {
            name = tok.substr(0, caret);
            const std::string etext = tok.substr(caret + 1);
            try {
                size_t used = 0;
                exp = std::stoll(etext, &used);
                if (used != etext.size()) throw std::invalid_argument("");
            } catch (...) {
                throw std::invalid_argument("bad exponent in word token '" + tok + "'");
            }
        }
        int32_t code = 0;
        for (size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) {
                code = static_cast<int32_t>(i + 1);
                break;
            }
        }
        if (code == 0) throw std::invalid_argument("unknown generator '" + name + "' in word");
        const int32_t letter = exp < 0 ? -code : code;
        int64_t reps = exp < 0 ? -exp : exp;
        for (int64_t i = 0; i < reps; ++i) out.push_back(letter);
    }
    return out;
}

bool word_less(const GenWord& a, const GenWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool word_display_less(const GenWord& a, const GenWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    auto key = [](int32_t c) { return std::pair<int32_t, int>(c > 0 ? c : -c, c < 0); };
    for (size_t i = 0; i < a.size(); ++i) {
        if (key(a[i]) != key(b[i])) return key(a[i]) < key(b[i]);
    }
    return false;
}

}  // namespace treefpp
