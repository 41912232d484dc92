#include "treefpp/engine.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace treefpp {

GroupPresentation::GroupPresentation(int degree,
                                     std::vector<GeneratorRecursion> generators,
                                     std::string name)
    : degree_(degree), generators_(std::move(generators)), name_(std::move(name)) {
    if (degree_ < 2 || degree_ > PermTable::kMaxDegree) {
        throw std::invalid_argument("presentation degree must be in [2, 8]");
    }
    const PermTable& table = PermTable::shared(degree_);
    std::set<std::string> seen;
    for (const auto& g : generators_) {
        if (!seen.insert(g.name).second) {
            throw std::invalid_argument("duplicate generator name '" + g.name + "'");
        }
        if (static_cast<int>(g.sections.size()) != degree_) {
            throw std::invalid_argument("generator '" + g.name + "' needs exactly " +
                                        std::to_string(degree_) + " sections");
        }
        if (g.root >= table.size()) {
            throw std::invalid_argument("generator '" + g.name + "' has invalid root label");
        }
        names_.push_back(g.name);
    }
    for (const auto& g : generators_) {
        for (const auto& sec : g.sections) {
            for (int32_t c : sec) {
                const size_t idx = static_cast<size_t>(c > 0 ? c : -c) - 1;
                if (c == 0 || idx >= generators_.size()) {
                    throw std::invalid_argument("section of '" + g.name +
                                                "' references an unknown generator");
                }
            }
        }
    }
    if (generators_.empty()) {
        throw std::invalid_argument("presentation needs at least one generator");
    }
}

int GroupPresentation::generator_index(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

std::string GroupPresentation::canonical_text() const {
    std::ostringstream out;
    out << "degree " << degree_ << "\n";
    const PermTable& table = PermTable::shared(degree_);
    for (const auto& g : generators_) {
        out << "gen " << g.name << " = (";
        for (int x = 0; x < degree_; ++x) {
            if (x) out << ", ";
            out << format_word(g.sections[x], names_);
        }
        out << ") " << table.cycle_notation(g.root) << "\n";
    }
    return out.str();
}

GenWord GroupPresentation::parse(const std::string& word_text) const {
    return parse_word(word_text, names_);
}

std::string GroupPresentation::format(const GenWord& w) const {
    return format_word(w, names_);
}

std::shared_ptr<const Portrait> GroupPresentation::generator_portrait(int32_t code,
                                                                      int depth) const {
    if (code == 0) throw std::invalid_argument("generator code 0 is invalid");
    {
        std::lock_guard<std::mutex> lock(memo_mutex_);
        auto it = memo_.find({code, depth});
        if (it != memo_.end()) return it->second;
    }
    std::shared_ptr<const Portrait> built;
    if (code < 0) {
        built = std::make_shared<Portrait>(inverse(*generator_portrait(-code, depth)));
    } else {
        const size_t gi = static_cast<size_t>(code) - 1;
        if (gi >= generators_.size()) {
            throw std::invalid_argument("generator index out of range");
        }
        const GeneratorRecursion& gen = generators_[gi];
        Portrait p;
        p.degree = static_cast<uint8_t>(degree_);
        p.depth = static_cast<uint8_t>(depth);
        if (depth > 0) {
            TreeGeometry geom(degree_, depth);
            p.labels.resize(geom.label_count);
            p.labels[0] = gen.root;
            if (depth > 1) {
                TreeGeometry sub_geom(degree_, depth - 1);
                for (int x = 0; x < degree_; ++x) {
                    Portrait sub = evaluate(gen.sections[x], depth - 1);
                    // Level k of this portrait is the concatenated level k-1
                    // blocks of the child portraits, in letter order.
                    uint64_t block = 1;
                    for (int k = 1; k < depth; ++k) {
                        const uint64_t src = sub_geom.level_offset[k - 1];
                        const uint64_t dst = geom.level_offset[k] + x * block;
                        for (uint64_t t = 0; t < block; ++t) {
                            p.labels[dst + t] = sub.labels[src + t];
                        }
                        block *= degree_;
                    }
                }
            }
        }
        built = std::make_shared<Portrait>(std::move(p));
    }
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto [it, inserted] = memo_.emplace(std::make_pair(code, depth), built);
    return it->second;
}

Portrait GroupPresentation::evaluate(const GenWord& w, int depth) const {
    GenWord r = reduce_word(w);
    if (r.empty()) return identity_portrait(degree_, depth);
    Portrait acc = *generator_portrait(r[0], depth);
    for (size_t i = 1; i < r.size(); ++i) {
        acc = compose(acc, *generator_portrait(r[i], depth));
    }
    return acc;
}

std::vector<uint8_t> GroupPresentation::apply_word(const GenWord& w,
                                                   const std::vector<uint8_t>& path) const {
    std::vector<uint8_t> out = path;
    if (path.empty()) return out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        out = apply_vertex(*generator_portrait(*it, static_cast<int>(out.size())), out);
    }
    return out;
}

GenWord GroupPresentation::section_of_letter(int32_t code,
                                             const std::vector<uint8_t>& path) const {
    if (path.empty()) return {code};
    if (code > 0) {
        const GeneratorRecursion& gen = generators_[static_cast<size_t>(code) - 1];
        const uint8_t x = path[0];
        if (x >= degree_) throw std::invalid_argument("section path letter out of range");
        std::vector<uint8_t> rest(path.begin() + 1, path.end());
        return section_word(gen.sections[x], rest);
    }
    // g^-1 restricted below v is the inverse of g restricted below g^-1(v).
    std::vector<uint8_t> pre = apply_word({code}, path);
    return invert_word(section_of_letter(-code, pre));
}

GenWord GroupPresentation::section_word(const GenWord& w,
                                        const std::vector<uint8_t>& path) const {
    GenWord out;
    std::vector<uint8_t> u = path;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        GenWord piece = section_of_letter(*it, u);
        out = concat_words(piece, out);
        u = apply_word({*it}, u);
    }
    return reduce_word(out);
}

uint16_t word_root_perm(const GroupPresentation& G, const GenWord& w) {
    const PermTable& table = PermTable::shared(G.degree());
    uint16_t acc = 0;
    for (int32_t c : w) {
        const GeneratorRecursion& gen = G.generator(static_cast<size_t>(c > 0 ? c : -c) - 1);
        const uint16_t r = c > 0 ? gen.root : table.inverse(gen.root);
        acc = table.compose(acc, r);
    }
    return acc;
}

EqualityVerdict equal_elements(const GroupPresentation& G, const GenWord& w1,
                               const GenWord& w2, int depth_cap, int pair_cap) {
    if (depth_cap < 1 || pair_cap < 1) {
        throw std::invalid_argument("equality caps must be >= 1");
    }
    GenWord r = reduce_word(concat_words(w1, invert_word(w2)));
    if (r.empty()) return {EqualityStatus::Equal, 0};

    // Cheap refutation first: evaluate to a probe depth and report the first
    // level where the action is nontrivial.
    const int probe = std::min(depth_cap, 6);
    {
        Portrait p = G.evaluate(r, probe);
        if (!is_identity(p)) {
            TreeGeometry geom(G.degree(), probe);
            for (int k = 0; k < probe; ++k) {
                for (uint64_t i = geom.level_offset[k];
                     i < geom.level_offset[k] + geom.vertices_at(k); ++i) {
                    if (p.labels[i] != 0) return {EqualityStatus::NotEqual, k + 1};
                }
            }
        }
    }

    // Bisimulation: the set of words assumed trivial must close under
    // sections with trivial root labels throughout.
    const int d = G.degree();
    std::set<GenWord> assumed;
    std::deque<std::pair<GenWord, int>> queue;
    assumed.insert(r);
    queue.push_back({r, 0});
    bool capped = false;
    while (!queue.empty()) {
        auto [cur, dep] = queue.front();
        queue.pop_front();
        if (word_root_perm(G, cur) != 0) {
            return {EqualityStatus::NotEqual, dep + 1};
        }
        if (dep >= depth_cap) {
            capped = true;
            continue;
        }
        for (int x = 0; x < d; ++x) {
            GenWord child = G.section_word(cur, {static_cast<uint8_t>(x)});
            if (child.empty()) continue;
            if (assumed.insert(child).second) {
                if (static_cast<int>(assumed.size()) > pair_cap) {
                    return {EqualityStatus::Unknown, 0};
                }
                queue.push_back({child, dep + 1});
            }
        }
    }
    if (capped) return {EqualityStatus::Unknown, 0};
    return {EqualityStatus::Equal, 0};
}

namespace {

struct LineCursor {
    const std::string& text;
    int line_no;
    size_t pos = 0;

    LineCursor(const std::string& text, int line_no) : text(text), line_no(line_no) {}

    int column() const { return static_cast<int>(pos) + 1; }
    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }
    void skip_ws() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(line_no, column(), msg);
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    std::string identifier() {
        if (!std::isalpha(static_cast<unsigned char>(peek()))) {
            fail("expected an identifier");
        }
        size_t start = pos;
        while (!done() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                           text[pos] == '_')) {
            ++pos;
        }
        return text.substr(start, pos - start);
    }
    long integer() {
        size_t start = pos;
        if (peek() == '-') ++pos;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
        while (!done() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        return std::stol(text.substr(start, pos - start));
    }
};

struct RawToken {
    std::string name;
    int sign;  // +1 or -1
    int line;
    int column;
};

// Section contents are collected as raw tokens and resolved against the
// generator list after the whole text is read, so recursions may reference
// generators declared later.
struct RawGenerator {
    std::string name;
    int name_line;
    int name_column;
    std::vector<std::vector<RawToken>> sections;
    uint16_t root;
};

uint16_t parse_cycles(LineCursor& cur, int degree) {
    const PermTable& table = PermTable::shared(degree);
    Perm p(degree);
    for (int i = 0; i < degree; ++i) p[i] = static_cast<uint8_t>(i);
    std::vector<bool> used(degree, false);
    bool any = false;
    cur.skip_ws();
    if (cur.peek() != '(') cur.fail("expected a permutation in cycle notation");
    while (cur.peek() == '(') {
        cur.expect('(');
        cur.skip_ws();
        std::vector<int> cycle;
        while (cur.peek() != ')') {
            const int col = cur.column();
            long v = cur.integer();
            if (v < 1 || v > degree) {
                throw ParseError(cur.line_no, col,
                                 "invalid permutation: letter " + std::to_string(v) +
                                     " outside 1.." + std::to_string(degree));
            }
            if (used[v - 1]) {
                throw ParseError(cur.line_no, col,
                                 "invalid permutation: letter " + std::to_string(v) +
                                     " repeated");
            }
            used[v - 1] = true;
            cycle.push_back(static_cast<int>(v) - 1);
            cur.skip_ws();
        }
        cur.expect(')');
        cur.skip_ws();
        any = true;
        for (size_t i = 0; i < cycle.size(); ++i) {
            p[cycle[i]] = static_cast<uint8_t>(cycle[(i + 1) % cycle.size()]);
        }
    }
    if (!any) cur.fail("expected a permutation in cycle notation");
    return table.rank_of(p);
}

std::vector<RawToken> parse_section_tokens(LineCursor& cur) {
    std::vector<RawToken> tokens;
    cur.skip_ws();
    while (cur.peek() != ',' && cur.peek() != ')') {
        const int col = cur.column();
        if (cur.peek() == '1') {
            ++cur.pos;
            cur.skip_ws();
            continue;  // identity factor
        }
        if (!std::isalpha(static_cast<unsigned char>(cur.peek()))) {
            cur.fail("expected a generator token, '1', ',' or ')'");
        }
        std::string name = cur.identifier();
        int sign = 1;
        if (cur.peek() == '^') {
            ++cur.pos;
            const int ecol = cur.column();
            long e = cur.integer();
            if (e != -1) {
                throw ParseError(cur.line_no, ecol,
                                 "only exponent -1 is allowed in sections");
            }
            sign = -1;
        }
        tokens.push_back({name, sign, cur.line_no, col});
        cur.skip_ws();
    }
    return tokens;
}

std::pair<int, std::vector<GeneratorRecursion>> parse_presentation_parts(
    const std::string& text) {
    std::istringstream in(text);
    std::string raw_line;
    int line_no = 0;
    int degree = 0;
    int degree_line = 0;
    std::vector<RawGenerator> raw;

    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string line = raw_line;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        LineCursor cur(line, line_no);
        cur.skip_ws();
        if (cur.done()) continue;
        std::string kw = cur.identifier();
        if (kw == "degree") {
            if (degree != 0) cur.fail("degree declared twice");
            cur.skip_ws();
            long d = cur.integer();
            if (d < 2 || d > PermTable::kMaxDegree) {
                cur.fail("degree must be between 2 and 8");
            }
            degree = static_cast<int>(d);
            degree_line = line_no;
            cur.skip_ws();
            if (!cur.done()) cur.fail("unexpected text after degree");
        } else if (kw == "gen") {
            if (degree == 0) cur.fail("degree must be declared before generators");
            cur.skip_ws();
            RawGenerator g;
            g.name_line = line_no;
            g.name_column = cur.column();
            g.name = cur.identifier();
            cur.skip_ws();
            cur.expect('=');
            cur.skip_ws();
            cur.expect('(');
            while (true) {
                g.sections.push_back(parse_section_tokens(cur));
                if (cur.peek() == ',') {
                    ++cur.pos;
                    continue;
                }
                break;
            }
            const int close_col = cur.column();
            cur.expect(')');
            if (static_cast<int>(g.sections.size()) != degree) {
                throw ParseError(line_no, close_col,
                                 "section count mismatch: got " +
                                     std::to_string(g.sections.size()) + ", degree is " +
                                     std::to_string(degree));
            }
            g.root = parse_cycles(cur, degree);
            cur.skip_ws();
            if (!cur.done()) cur.fail("unexpected text after generator definition");
            raw.push_back(std::move(g));
        } else {
            throw ParseError(line_no, 1, "unknown statement '" + kw + "'");
        }
    }
    if (degree == 0) throw ParseError(line_no, 1, "missing degree declaration");
    if (raw.empty()) {
        throw ParseError(degree_line, 1, "presentation declares no generators");
    }

    std::map<std::string, int> index;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (index.count(raw[i].name)) {
            throw ParseError(raw[i].name_line, raw[i].name_column,
                             "duplicate generator '" + raw[i].name + "'");
        }
        index[raw[i].name] = static_cast<int>(i);
    }
    std::vector<GeneratorRecursion> gens;
    for (const auto& g : raw) {
        GeneratorRecursion out;
        out.name = g.name;
        out.root = g.root;
        for (const auto& sec : g.sections) {
            GenWord word;
            for (const RawToken& tok : sec) {
                auto it = index.find(tok.name);
                if (it == index.end()) {
                    throw ParseError(tok.line, tok.column,
                                     "undeclared generator '" + tok.name + "'");
                }
                word.push_back(tok.sign * (it->second + 1));
            }
            out.sections.push_back(std::move(word));
        }
        gens.push_back(std::move(out));
    }
    return {degree, std::move(gens)};
}

}  // namespace

GroupPresentation parse_presentation(const std::string& text) {
    auto parts = parse_presentation_parts(text);
    return GroupPresentation(parts.first, std::move(parts.second));
}

std::shared_ptr<GroupPresentation> parse_presentation_shared(const std::string& text) {
    auto parts = parse_presentation_parts(text);
    return std::make_shared<GroupPresentation>(parts.first, std::move(parts.second));
}

}  // namespace treefpp
