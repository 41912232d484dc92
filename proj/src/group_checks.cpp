#include "treefpp/group_checks.hpp"

#include <algorithm>

namespace treefpp {

namespace {

constexpr const char* kClosureCaveat =
    "pass certifies the profinite closure up to the checked levels only; "
    "a failure disproves the property for the group itself";

// Subgroup of a small quotient grown incrementally from generators.
class ImageTracker {
public:
    explicit ImageTracker(const LevelQuotient& Q) : Q_(&Q), in_set_(Q.order(), 0) {
        members_ = subgroup_closure(Q, {});
        for (uint64_t m : members_) in_set_[m] = 1;
    }

    bool full() const { return members_.size() == Q_->order(); }

    void add(uint64_t idx) {
        if (in_set_[idx]) return;
        gens_.push_back(idx);
        members_ = subgroup_closure(*Q_, gens_);
        std::fill(in_set_.begin(), in_set_.end(), 0);
        for (uint64_t m : members_) in_set_[m] = 1;
    }

    std::optional<uint64_t> first_missing() const {
        for (uint64_t i = 0; i < Q_->order(); ++i)
            if (!in_set_[i]) return i;
        return std::nullopt;
    }

private:
    const LevelQuotient* Q_;
    std::vector<uint64_t> gens_;
    std::vector<uint64_t> members_;
    std::vector<char> in_set_;
};

void fill_failure(VertexSurjectivity& out, const ImageTracker& img,
                  const LevelQuotient& Qm) {
    out.surjective = img.full();
    if (out.surjective) return;
    const uint64_t miss = *img.first_missing();
    out.missing = Qm.portrait(miss);
    if (Qm.has_witnesses()) out.missing_word = Qm.witness_word(miss);
}

// Signed generator codes in the fixed expansion order.
std::vector<int32_t> signed_codes(const GroupPresentation& G) {
    std::vector<int32_t> codes;
    for (size_t i = 0; i < G.generator_count(); ++i)
        codes.push_back(static_cast<int32_t>(i + 1));
    for (size_t i = 0; i < G.generator_count(); ++i)
        codes.push_back(-static_cast<int32_t>(i + 1));
    return codes;
}

uint64_t power(uint64_t base, int exp) {
    uint64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<uint8_t> leaf_path(uint64_t leaf, int degree, int level) {
    std::vector<uint8_t> path(level);
    for (int i = level - 1; i >= 0; --i) {
        path[i] = static_cast<uint8_t>(leaf % degree);
        leaf /= degree;
    }
    return path;
}

uint64_t leaf_index(const std::vector<uint8_t>& path, int degree) {
    uint64_t r = 0;
    for (uint8_t x : path) r = r * degree + x;
    return r;
}

// Schreier generators of the level-k or vertex stabilizer, streamed to a
// callback in deterministic order. The callback returns false to stop early.
template <typename Fn>
void stream_level_stabilizer_generators(const GroupPresentation& G,
                                        const LevelQuotient& Qk, Fn&& emit) {
    const std::vector<int32_t> codes = signed_codes(G);
    std::vector<Portrait> gen_portraits;
    for (int32_t c : codes) gen_portraits.push_back(*G.generator_portrait(c, Qk.level()));
    for (uint64_t t = 0; t < Qk.order(); ++t) {
        const Portrait pt = Qk.portrait(t);
        const GenWord wt = Qk.witness_word(t);
        for (size_t ci = 0; ci < codes.size(); ++ci) {
            const Portrait prod = compose(gen_portraits[ci], pt);
            const auto t2 = Qk.find(prod);
            if (!t2) throw std::logic_error("left multiplication escaped the quotient");
            GenWord sg = concat_words(invert_word(Qk.witness_word(*t2)),
                                      concat_words({codes[ci]}, wt));
            sg = reduce_word(sg);
            if (sg.empty()) continue;
            if (!emit(sg)) return;
        }
    }
}

// Same for the stabilizer of one vertex: transversal from the vertex orbit.
template <typename Fn>
void stream_vertex_stabilizer_generators(const GroupPresentation& G,
                                         const std::vector<uint8_t>& v, Fn&& emit) {
    const int d = G.degree();
    const int k = static_cast<int>(v.size());
    const std::vector<int32_t> codes = signed_codes(G);
    std::vector<Portrait> gen_portraits;
    for (int32_t c : codes) gen_portraits.push_back(*G.generator_portrait(c, k));

    const uint64_t leaves = power(d, k);
    std::vector<int64_t> found(leaves, -1);  // orbit membership -> word index
    std::vector<GenWord> words;
    std::vector<uint64_t> order;

    const uint64_t start = leaf_index(v, d);
    found[start] = 0;
    words.push_back({});
    order.push_back(start);
    for (size_t qi = 0; qi < order.size(); ++qi) {
        const std::vector<uint8_t> path = leaf_path(order[qi], d, k);
        for (size_t ci = 0; ci < codes.size(); ++ci) {
            const uint64_t img = leaf_index(apply_vertex(gen_portraits[ci], path), d);
            if (found[img] < 0) {
                found[img] = static_cast<int64_t>(words.size());
                words.push_back(reduce_word(concat_words({codes[ci]}, words[found[order[qi]]])));
                order.push_back(img);
            }
        }
    }
    for (uint64_t u : order) {
        const std::vector<uint8_t> path = leaf_path(u, d, k);
        const GenWord& wu = words[found[u]];
        for (size_t ci = 0; ci < codes.size(); ++ci) {
            const uint64_t img = leaf_index(apply_vertex(gen_portraits[ci], path), d);
            GenWord sg = concat_words(invert_word(words[found[img]]),
                                      concat_words({codes[ci]}, wu));
            sg = reduce_word(sg);
            if (sg.empty()) continue;
            if (!emit(sg)) return;
        }
    }
}

// Orbit of the first letter under a growing set of permutations.
class LetterOrbit {
public:
    LetterOrbit(const PermTable& table, int degree) : table_(&table), degree_(degree) {}

    bool full() const { return orbit_size() == static_cast<size_t>(degree_); }

    size_t orbit_size() const {
        std::vector<char> seen(degree_, 0);
        std::vector<uint8_t> stack = {0};
        seen[0] = 1;
        size_t n = 1;
        while (!stack.empty()) {
            const uint8_t x = stack.back();
            stack.pop_back();
            for (uint16_t r : perms_) {
                const uint8_t y = table_->apply(r, x);
                if (!seen[y]) {
                    seen[y] = 1;
                    ++n;
                    stack.push_back(y);
                }
            }
        }
        return n;
    }

    void add(uint16_t rank) {
        if (std::find(perms_.begin(), perms_.end(), rank) == perms_.end())
            perms_.push_back(rank);
    }

private:
    const PermTable* table_;
    int degree_;
    std::vector<uint16_t> perms_;
};

}  // namespace

TransitivityReport is_level_transitive(const GroupPresentation& G, int n) {
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    const int d = G.degree();
    const uint64_t leaves = power(d, n);
    if (leaves > 20000000ULL) throw std::invalid_argument("level too deep for orbit scan");

    std::vector<Portrait> gens;
    for (size_t i = 0; i < G.generator_count(); ++i)
        gens.push_back(*G.generator_portrait(static_cast<int32_t>(i + 1), n));

    TransitivityReport rep;
    rep.level = n;
    std::vector<char> seen(leaves, 0);
    for (uint64_t s = 0; s < leaves; ++s) {
        if (seen[s]) continue;
        // Generators have finite order in the quotient, so forward closure
        // under them is the full orbit.
        uint64_t size = 0;
        std::vector<uint64_t> stack = {s};
        seen[s] = 1;
        while (!stack.empty()) {
            const uint64_t cur = stack.back();
            stack.pop_back();
            ++size;
            const std::vector<uint8_t> path = leaf_path(cur, d, n);
            for (const Portrait& g : gens) {
                const uint64_t img = leaf_index(apply_vertex(g, path), d);
                if (!seen[img]) {
                    seen[img] = 1;
                    stack.push_back(img);
                }
            }
        }
        rep.orbit_sizes.push_back(size);
    }
    std::sort(rep.orbit_sizes.rbegin(), rep.orbit_sizes.rend());
    rep.transitive = rep.orbit_sizes.size() == 1;
    return rep;
}

TransitivityReport is_level_transitive(QuotientSource& source, int n,
                                       uint64_t element_limit) {
    if (auto P = source.presentation()) return is_level_transitive(*P, n);
    if (n < 1) throw std::invalid_argument("level must be >= 1");
    const int d = source.degree();
    const auto Q = source.quotient(n, element_limit);
    const uint64_t leaves = power(d, n);

    TransitivityReport rep;
    rep.level = n;
    std::vector<char> seen(leaves, 0);
    for (uint64_t s = 0; s < leaves; ++s) {
        if (seen[s]) continue;
        // The quotient is the whole finite group, so the orbit of s is its
        // set of images.
        const std::vector<uint8_t> path = leaf_path(s, d, n);
        uint64_t size = 0;
        for (uint64_t i = 0; i < Q->order(); ++i) {
            const uint64_t img = leaf_index(apply_vertex(Q->portrait(i), path), d);
            if (!seen[img]) {
                seen[img] = 1;
                ++size;
            }
        }
        rep.orbit_sizes.push_back(size);
    }
    std::sort(rep.orbit_sizes.rbegin(), rep.orbit_sizes.rend());
    rep.transitive = rep.orbit_sizes.size() == 1;
    return rep;
}

FractalityReport check_fractality(QuotientSource& source, FractalProperty property,
                                  int max_stab_level, int target_level,
                                  uint64_t element_limit, CheckRoute route) {
    if (max_stab_level < 1 || target_level < 1)
        throw std::invalid_argument("stabilizer and target levels must be >= 1");
    const int d = source.degree();
    const int K = property == FractalProperty::StronglyFractal ? 1 : max_stab_level;
    const int m = target_level;

    FractalityReport rep;
    rep.property = property;
    rep.max_stabilizer_level = K;
    rep.target_level = m;

    if (route == CheckRoute::Auto) {
        try {
            source.quotient(K + m, element_limit);
            route = CheckRoute::Enumerate;
        } catch (const LimitExceeded&) {
            if (!source.presentation()) throw;
            route = CheckRoute::StabilizerWords;
        }
    }
    if (route == CheckRoute::StabilizerWords && !source.presentation())
        throw std::invalid_argument("word route needs a presentation");

    const auto Qm = source.quotient(m, element_limit);
    const bool vertex_stab = property == FractalProperty::Fractal;

    for (int k = 1; k <= K; ++k) {
        const auto vertices = level_paths(d, k);
        if (route == CheckRoute::Enumerate) {
            const auto Qbig = source.quotient(k + m, element_limit);
            for (const auto& v : vertices) {
                VertexSurjectivity check;
                check.stabilizer_level = k;
                check.vertex = v;
                ImageTracker img(*Qm);
                for (uint64_t i = 0; i < Qbig->order() && !img.full(); ++i) {
                    if (vertex_stab) {
                        const Portrait p = Qbig->portrait(i);
                        if (apply_vertex(p, v) != v) continue;
                        const auto j = Qm->find(section(p, v));
                        if (!j) throw std::logic_error("section escaped the quotient");
                        img.add(*j);
                    } else {
                        if (!Qbig->in_level_stabilizer(i, k)) continue;
                        const auto j = Qm->find(section(Qbig->portrait(i), v));
                        if (!j) throw std::logic_error("section escaped the quotient");
                        img.add(*j);
                    }
                }
                fill_failure(check, img, *Qm);
                rep.checks.push_back(std::move(check));
            }
        } else {
            const auto P = source.presentation();
            if (vertex_stab) {
                for (const auto& v : vertices) {
                    VertexSurjectivity check;
                    check.stabilizer_level = k;
                    check.vertex = v;
                    ImageTracker img(*Qm);
                    stream_vertex_stabilizer_generators(*P, v, [&](const GenWord& sg) {
                        const auto j = Qm->find(P->evaluate(P->section_word(sg, v), m));
                        if (!j) throw std::logic_error("section escaped the quotient");
                        img.add(*j);
                        return !img.full();
                    });
                    fill_failure(check, img, *Qm);
                    rep.checks.push_back(std::move(check));
                }
            } else {
                const auto Qk = source.quotient(k, element_limit);
                std::vector<ImageTracker> imgs(vertices.size(), ImageTracker(*Qm));
                stream_level_stabilizer_generators(*P, *Qk, [&](const GenWord& sg) {
                    bool any_open = false;
                    for (size_t vi = 0; vi < vertices.size(); ++vi) {
                        if (imgs[vi].full()) continue;
                        const auto j =
                            Qm->find(P->evaluate(P->section_word(sg, vertices[vi]), m));
                        if (!j) throw std::logic_error("section escaped the quotient");
                        imgs[vi].add(*j);
                        if (!imgs[vi].full()) any_open = true;
                    }
                    return any_open;
                });
                for (size_t vi = 0; vi < vertices.size(); ++vi) {
                    VertexSurjectivity check;
                    check.stabilizer_level = k;
                    check.vertex = vertices[vi];
                    fill_failure(check, imgs[vi], *Qm);
                    rep.checks.push_back(std::move(check));
                }
            }
        }
    }

    rep.pass_up_to_bound = std::all_of(rep.checks.begin(), rep.checks.end(),
                                       [](const VertexSurjectivity& c) { return c.surjective; });
    rep.note = std::string(route == CheckRoute::Enumerate ? "route: full quotient at k+m; "
                                                          : "route: stabilizer generator words; ") +
               kClosureCaveat;
    return rep;
}

MartingaleReport check_martingale_condition(QuotientSource& source, int max_level,
                                            uint64_t element_limit, CheckRoute route) {
    if (max_level < 1) throw std::invalid_argument("level must be >= 1");
    const int d = source.degree();
    const PermTable& table = PermTable::shared(d);

    MartingaleReport rep;
    rep.max_level = max_level;

    if (route == CheckRoute::Auto) {
        try {
            source.quotient(max_level, element_limit);
            route = CheckRoute::Enumerate;
        } catch (const LimitExceeded&) {
            if (!source.presentation()) throw;
            route = CheckRoute::StabilizerWords;
        }
    }
    if (route == CheckRoute::StabilizerWords && !source.presentation())
        throw std::invalid_argument("word route needs a presentation");

    for (int n = 1; n <= max_level; ++n) {
        MartingaleLevelVerdict verdict;
        verdict.level = n;

        const auto vertices = level_paths(d, n - 1);
        std::vector<LetterOrbit> orbits(vertices.size(), LetterOrbit(table, d));

        if (n == 1) {
            // The level-0 stabilizer is the whole group; its root labels are
            // the root permutations of the generators (or all level-1
            // portraits when there is no presentation).
            if (auto P = source.presentation()) {
                for (size_t i = 0; i < P->generator_count(); ++i)
                    orbits[0].add(P->generator(i).root);
            } else {
                const auto Q1 = source.quotient(1, element_limit);
                for (uint64_t i = 0; i < Q1->order(); ++i)
                    orbits[0].add(Q1->portrait(i).labels[0]);
            }
        } else if (route == CheckRoute::Enumerate) {
            const auto Qn = source.quotient(n, element_limit);
            const TreeGeometry geo(d, n);
            bool all_full = false;
            for (uint64_t i = 0; i < Qn->order() && !all_full; ++i) {
                if (!Qn->in_level_stabilizer(i, n - 1)) continue;
                const Portrait p = Qn->portrait(i);
                all_full = true;
                for (size_t vi = 0; vi < vertices.size(); ++vi) {
                    if (orbits[vi].full()) continue;
                    orbits[vi].add(p.labels[geo.level_offset[n - 1] + vi]);
                    if (!orbits[vi].full()) all_full = false;
                }
            }
        } else {
            const auto P = source.presentation();
            const auto Qprev = source.quotient(n - 1, element_limit);
            stream_level_stabilizer_generators(*P, *Qprev, [&](const GenWord& sg) {
                bool any_open = false;
                for (size_t vi = 0; vi < vertices.size(); ++vi) {
                    if (orbits[vi].full()) continue;
                    orbits[vi].add(word_root_perm(*P, P->section_word(sg, vertices[vi])));
                    if (!orbits[vi].full()) any_open = true;
                }
                return any_open;
            });
        }

        verdict.transitive_everywhere = true;
        for (size_t vi = 0; vi < vertices.size(); ++vi) {
            if (!orbits[vi].full()) {
                verdict.transitive_everywhere = false;
                verdict.failing_vertex = vertices[vi];
                break;
            }
        }
        rep.levels.push_back(std::move(verdict));
    }

    rep.pass = std::all_of(rep.levels.begin(), rep.levels.end(),
                           [](const MartingaleLevelVerdict& v) { return v.transitive_everywhere; });
    rep.note = route == CheckRoute::Enumerate ? "route: full quotient per level"
                                              : "route: stabilizer generator words";
    return rep;
}

}  // namespace treefpp
