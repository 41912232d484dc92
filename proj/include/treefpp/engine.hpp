#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treefpp/portrait.hpp"
#include "treefpp/words.hpp"

namespace treefpp {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line, int column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + msg),
          line(line),
          column(column) {}
};

// One generator given by wreath recursion: d section words plus a root
// permutation (rank into the degree's PermTable).
struct GeneratorRecursion {
    std::string name;
    std::vector<GenWord> sections;  // exactly degree entries, 0-based letters
    uint16_t root = 0;
};

// A finitely generated self-similar group, defined by wreath recursions.
// Immutable after construction; evaluation results are memoized internally
// behind a mutex, so const methods are safe to call concurrently.
class GroupPresentation {
public:
    GroupPresentation(int degree, std::vector<GeneratorRecursion> generators,
                      std::string name = "");

    int degree() const { return degree_; }
    const std::string& name() const { return name_; }
    void set_name(const std::string& n) { name_ = n; }
    size_t generator_count() const { return generators_.size(); }
    const GeneratorRecursion& generator(size_t i) const { return generators_[i]; }
    const std::vector<std::string>& generator_names() const { return names_; }
    int generator_index(const std::string& name) const;  // -1 if absent

    // The presentation in the DSL grammar; parsing it back yields an
    // identical presentation. Also serves as the cache identity.
    std::string canonical_text() const;

    GenWord parse(const std::string& word_text) const;
    std::string format(const GenWord& w) const;

    // Depth-n portrait of a word; words compose right-to-left.
    Portrait evaluate(const GenWord& w, int depth) const;
    // Portrait of a single signed generator (memoized).
    std::shared_ptr<const Portrait> generator_portrait(int32_t code, int depth) const;

    // A word u with evaluate(u, n) acting like the section of w below the
    // vertex, for every n. The vertex path uses 0-based letters.
    GenWord section_word(const GenWord& w, const std::vector<uint8_t>& path) const;

    // Image of a vertex path under the word's action.
    std::vector<uint8_t> apply_word(const GenWord& w, const std::vector<uint8_t>& path) const;

private:
    int degree_;
    std::vector<GeneratorRecursion> generators_;
    std::vector<std::string> names_;
    std::string name_;

    mutable std::mutex memo_mutex_;
    mutable std::map<std::pair<int32_t, int>, std::shared_ptr<const Portrait>> memo_;

    GenWord section_of_letter(int32_t code, const std::vector<uint8_t>& path) const;
};

GroupPresentation parse_presentation(const std::string& text);
std::shared_ptr<GroupPresentation> parse_presentation_shared(const std::string& text);

// Root permutation (PermTable rank) of a word, without building portraits.
uint16_t word_root_perm(const GroupPresentation& G, const GenWord& w);

enum class EqualityStatus { Equal, NotEqual, Unknown };

struct EqualityVerdict {
    EqualityStatus status;
    // For NotEqual: the smallest depth at which the two portraits differ.
    int witness_level = 0;

    bool is_equal() const { return status == EqualityStatus::Equal; }
};

// Element equality by bounded bisimulation: w1 = w2 iff w1 w2^-1 acts
// trivially, checked by descending through sections. NotEqual is always
// sound; Equal is sound because the assumed-equal set closes under
// sections; Unknown means a cap bound the search.
EqualityVerdict equal_elements(const GroupPresentation& G, const GenWord& w1,
                               const GenWord& w2, int depth_cap = 30,
                               int pair_cap = 20000);

}  // namespace treefpp
