#include "treefpp/nucleus.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace treefpp {

namespace {

struct GiveUp {
    std::string reason;
};

// Working set of group elements as reduced words, deduplicated by the
// bisimulation equality check.
class ElementPool {
public:
    ElementPool(const GroupPresentation& G, const NucleusCaps& caps) : G_(&G), caps_(&caps) {}

    size_t size() const { return words_.size(); }
    const GenWord& word(size_t i) const { return words_[i]; }

    std::optional<size_t> find(const GenWord& w) const {
        const GenWord r = reduce_word(w);
        for (size_t i = 0; i < words_.size(); ++i) {
            const EqualityVerdict v =
                equal_elements(*G_, r, words_[i], caps_->eq_depth_cap, caps_->eq_pair_cap);
            if (v.status == EqualityStatus::Equal) return i;
            if (v.status == EqualityStatus::Unknown) {
                throw GiveUp{"equality undecided between " + G_->format(r) + " and " +
                             G_->format(words_[i])};
            }
        }
        return std::nullopt;
    }

    size_t add(const GenWord& w) {
        GenWord r = reduce_word(w);
        if (auto i = find(r)) return *i;
        if (words_.size() >= static_cast<size_t>(caps_->element_cap)) {
            throw GiveUp{"working set exceeded the element cap"};
        }
        words_.push_back(std::move(r));
        return words_.size() - 1;
    }

private:
    const GroupPresentation* G_;
    const NucleusCaps* caps_;
    std::vector<GenWord> words_;
};

// Directed reachability via at least one edge.
std::vector<std::vector<char>> reach_matrix(const std::vector<std::vector<size_t>>& succ) {
    const size_t n = succ.size();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (size_t s = 0; s < n; ++s) {
        std::vector<size_t> stack(succ[s]);
        while (!stack.empty()) {
            const size_t u = stack.back();
            stack.pop_back();
            if (reach[s][u]) continue;
            reach[s][u] = 1;
            for (size_t v : succ[u]) stack.push_back(v);
        }
    }
    return reach;
}

// Elements occurring as arbitrarily deep iterated sections of w: the nodes of
// w's section-closure graph lying on or after a directed cycle.
std::vector<GenWord> limit_sections(const GroupPresentation& G, const NucleusCaps& caps,
                                    const GenWord& w) {
    std::vector<GenWord> nodes;
    std::vector<std::vector<size_t>> succ;

    auto local_add = [&](const GenWord& raw) -> size_t {
        GenWord r = reduce_word(raw);
        for (size_t i = 0; i < nodes.size(); ++i) {
            const EqualityVerdict v =
                equal_elements(G, r, nodes[i], caps.eq_depth_cap, caps.eq_pair_cap);
            if (v.status == EqualityStatus::Equal) return i;
            if (v.status == EqualityStatus::Unknown) {
                throw GiveUp{"equality undecided between " + G.format(r) + " and " +
                             G.format(nodes[i])};
            }
        }
        if (nodes.size() >= static_cast<size_t>(caps.depth_cap)) {
            throw GiveUp{"iterated sections of " + G.format(w) + " did not close in budget"};
        }
        nodes.push_back(std::move(r));
        succ.emplace_back();
        return nodes.size() - 1;
    };

    local_add(w);
    for (size_t i = 0; i < nodes.size(); ++i) {
        for (int x = 0; x < G.degree(); ++x) {
            const size_t j = local_add(G.section_word(nodes[i], {static_cast<uint8_t>(x)}));
            succ[i].push_back(j);
        }
    }

    const auto reach = reach_matrix(succ);
    const size_t n = nodes.size();
    std::vector<GenWord> out;
    for (size_t j = 0; j < n; ++j) {
        bool keep = false;
        for (size_t c = 0; c < n && !keep; ++c) {
            if (reach[c][c] && (c == j || reach[c][j])) keep = true;
        }
        if (keep) out.push_back(nodes[j]);
    }
    return out;
}

}  // namespace

NucleusReport compute_nucleus(std::shared_ptr<const GroupPresentation> G, NucleusCaps caps) {
    if (caps.depth_cap < 1 || caps.pair_cap < 1 || caps.element_cap < 1 ||
        caps.eq_depth_cap < 1 || caps.eq_pair_cap < 1) {
        throw std::invalid_argument("nucleus caps must be >= 1");
    }
    const int d = G->degree();

    NucleusReport rep;
    rep.group = G;
    rep.digest_depth = 6;

    try {
        ElementPool pool(*G, caps);
        pool.add({});
        for (size_t i = 0; i < G->generator_count(); ++i) {
            pool.add({static_cast<int32_t>(i + 1)});
            pool.add({-static_cast<int32_t>(i + 1)});
        }
        for (size_t i = 0; i < pool.size(); ++i) {
            for (int x = 0; x < d; ++x) {
                pool.add(G->section_word(pool.word(i), {static_cast<uint8_t>(x)}));
            }
        }

        // Expand by limit sections of pairwise products until a full round
        // adds nothing.
        std::set<std::pair<size_t, size_t>> done;
        int pairs = 0;
        bool grew = true;
        while (grew) {
            grew = false;
            const size_t sz = pool.size();
            for (size_t i = 0; i < sz; ++i) {
                for (size_t j = 0; j < sz; ++j) {
                    if (!done.insert({i, j}).second) continue;
                    if (++pairs > caps.pair_cap) {
                        throw GiveUp{"pair budget exhausted before stabilization"};
                    }
                    const GenWord w = reduce_word(concat_words(pool.word(i), pool.word(j)));
                    if (w.size() <= 1) continue;  // inside the section closure already
                    for (const GenWord& u : limit_sections(*G, caps, w)) {
                        const size_t before = pool.size();
                        pool.add(u);
                        if (pool.size() != before) grew = true;
                    }
                }
            }
            if (pool.size() != sz) grew = true;
        }

        // Section graph of the working set; the nucleus is its cycle-reachable
        // part.
        const size_t n = pool.size();
        std::vector<std::vector<size_t>> succ(n);
        std::vector<std::vector<size_t>> letter_target(n);
        for (size_t i = 0; i < n; ++i) {
            for (int x = 0; x < d; ++x) {
                const auto t = pool.find(G->section_word(pool.word(i), {static_cast<uint8_t>(x)}));
                if (!t) throw GiveUp{"section closure broke during graph construction"};
                succ[i].push_back(*t);
                letter_target[i].push_back(*t);
            }
        }
        const auto reach = reach_matrix(succ);
        std::vector<char> keep(n, 0);
        for (size_t c = 0; c < n; ++c) {
            if (!reach[c][c]) continue;
            keep[c] = 1;
            for (size_t j = 0; j < n; ++j) {
                if (reach[c][j]) keep[j] = 1;
            }
        }

        std::vector<size_t> kept;
        for (size_t i = 0; i < n; ++i) {
            if (keep[i]) kept.push_back(i);
        }
        std::sort(kept.begin(), kept.end(), [&](size_t a, size_t b) {
            return word_display_less(pool.word(a), pool.word(b));
        });
        std::vector<int64_t> new_index(n, -1);
        for (size_t i = 0; i < kept.size(); ++i) new_index[kept[i]] = static_cast<int64_t>(i);

        for (size_t i : kept) {
            NucleusElement e;
            e.word = pool.word(i);
            e.digest = portrait_hash(G->evaluate(e.word, rep.digest_depth));
            rep.elements.push_back(std::move(e));
        }
        const size_t nuc = kept.size();
        for (size_t i = 0; i < nuc; ++i) {
            for (int x = 0; x < d; ++x) {
                const int64_t t = new_index[letter_target[kept[i]][x]];
                if (t < 0) throw GiveUp{"nucleus is not closed under sections"};
                rep.section_graph.push_back(
                    {i, static_cast<uint8_t>(x), static_cast<size_t>(t)});
            }
        }
        // Inverse closedness, as a guard.
        for (size_t i = 0; i < nuc; ++i) {
            const auto inv = pool.find(invert_word(rep.elements[i].word));
            if (!inv || new_index[*inv] < 0) throw GiveUp{"nucleus is not closed under inverses"};
        }

        // Fixed-letter graph: edges along letters the element's root fixes.
        const PermTable& table = PermTable::shared(d);
        std::vector<std::vector<std::pair<uint8_t, size_t>>> fixed(nuc);
        for (size_t i = 0; i < nuc; ++i) {
            const uint16_t root = word_root_perm(*G, rep.elements[i].word);
            for (int x = 0; x < d; ++x) {
                if (table.apply(root, static_cast<uint8_t>(x)) == x) {
                    const int64_t t = new_index[letter_target[kept[i]][x]];
                    fixed[i].push_back({static_cast<uint8_t>(x), static_cast<size_t>(t)});
                }
            }
        }

        // N1: elements on a directed cycle of the fixed-letter graph, with the
        // cycle's letter word as witness.
        for (size_t i = 0; i < nuc; ++i) {
            struct Hop {
                size_t node;
                std::vector<uint8_t> path;
            };
            std::deque<Hop> queue;
            std::vector<char> visited(nuc, 0);
            for (const auto& [x, t] : fixed[i]) queue.push_back({t, {x}});
            std::optional<std::vector<uint8_t>> witness;
            while (!queue.empty() && !witness) {
                Hop hop = std::move(queue.front());
                queue.pop_front();
                if (hop.node == i) {
                    witness = hop.path;
                    break;
                }
                if (visited[hop.node]) continue;
                visited[hop.node] = 1;
                for (const auto& [x, t] : fixed[hop.node]) {
                    std::vector<uint8_t> next = hop.path;
                    next.push_back(x);
                    queue.push_back({t, std::move(next)});
                }
            }
            if (witness) rep.n1.push_back({i, *witness});
        }

        // Prune to the largest subgraph where every node keeps an outgoing
        // fixed-letter edge; only its nodes admit infinite fixed rays.
        std::vector<char> pruned_in(nuc, 1);
        bool removed = true;
        while (removed) {
            removed = false;
            for (size_t i = 0; i < nuc; ++i) {
                if (!pruned_in[i]) continue;
                size_t deg = 0;
                for (const auto& [x, t] : fixed[i]) {
                    if (pruned_in[t]) ++deg;
                }
                if (deg == 0) {
                    pruned_in[i] = 0;
                    removed = true;
                }
            }
        }
        std::vector<std::vector<size_t>> psucc(nuc);
        for (size_t i = 0; i < nuc; ++i) {
            if (!pruned_in[i]) continue;
            for (const auto& [x, t] : fixed[i]) {
                if (pruned_in[t]) psucc[i].push_back(t);
            }
        }
        const auto preach = reach_matrix(psucc);

        for (size_t i = 0; i < nuc; ++i) {
            FixedEndVerdict verdict;
            verdict.element = i;
            if (!pruned_in[i]) {
                verdict.kind = EndCountKind::Zero;
                rep.end_counts.push_back(verdict);
                continue;
            }
            // Infinitely many fixed ends iff some reachable node sits on a
            // cycle and still branches inside the pruned graph.
            std::optional<size_t> branching;
            for (size_t u = 0; u < nuc && !branching; ++u) {
                if (!pruned_in[u] || (u != i && !preach[i][u])) continue;
                if (preach[u][u] && psucc[u].size() >= 2) branching = u;
            }
            if (branching) {
                verdict.kind = EndCountKind::Infinite;
                verdict.branching_element = branching;
                rep.end_counts.push_back(verdict);
                continue;
            }
            // Otherwise cycles are plain loops and the rest is a DAG: count
            // the distinct infinite rays.
            std::vector<int64_t> memo(nuc, -1);
            auto count_rays = [&](auto&& self, size_t u) -> int64_t {
                if (memo[u] >= 0) return memo[u];
                if (preach[u][u]) return memo[u] = 1;
                int64_t total = 0;
                for (size_t t : psucc[u]) total += self(self, t);
                return memo[u] = total;
            };
            verdict.kind = EndCountKind::Finite;
            verdict.count = static_cast<uint64_t>(count_rays(count_rays, i));
            rep.end_counts.push_back(verdict);
        }

        rep.status = NucleusStatus::ContractingWithNucleus;
    } catch (const GiveUp& g) {
        rep = NucleusReport{};
        rep.group = G;
        rep.digest_depth = 6;
        rep.status = NucleusStatus::Inconclusive;
        rep.reason = g.reason;
    }
    return rep;
}

const std::vector<N1Entry>& n1_set(const NucleusReport& report) {
    if (report.status != NucleusStatus::ContractingWithNucleus) {
        throw std::logic_error("n1 requested from an inconclusive nucleus report");
    }
    return report.n1;
}

FixedEndVerdict fixed_boundary_count(const NucleusReport& report, size_t element) {
    if (report.status != NucleusStatus::ContractingWithNucleus) {
        throw std::logic_error("end counts requested from an inconclusive nucleus report");
    }
    if (element >= report.elements.size()) {
        throw std::invalid_argument("element is not in the nucleus");
    }
    return report.end_counts[element];
}

size_t nucleus_element_index(const NucleusReport& report, const GenWord& w) {
    if (report.status != NucleusStatus::ContractingWithNucleus) {
        throw std::logic_error("element lookup in an inconclusive nucleus report");
    }
    for (size_t i = 0; i < report.elements.size(); ++i) {
        const EqualityVerdict v = equal_elements(*report.group, w, report.elements[i].word);
        if (v.status == EqualityStatus::Equal) return i;
    }
    throw std::invalid_argument("element is not in the nucleus");
}

JonesReport check_jones_condition(std::shared_ptr<const GroupPresentation> G,
                                  JonesConfig config) {
    JonesReport rep;
    rep.nucleus = compute_nucleus(G, config.nucleus_caps);
    rep.transitivity = is_level_transitive(*G, config.transitivity_level);
    PresentationSource source(G);
    rep.martingale =
        check_martingale_condition(source, config.martingale_level, config.element_limit);

    if (rep.nucleus.status != NucleusStatus::ContractingWithNucleus) {
        rep.verdict = JonesVerdict::Inconclusive;
        rep.note = "nucleus computation inconclusive: " + rep.nucleus.reason;
        return rep;
    }
    if (!rep.transitivity.transitive) {
        rep.verdict = JonesVerdict::Inconclusive;
        rep.note = "level transitivity failed; the criterion does not apply";
        return rep;
    }
    if (!rep.martingale.pass) {
        rep.verdict = JonesVerdict::Inconclusive;
        rep.note = "martingale condition failed; the criterion does not apply";
        return rep;
    }
    for (const N1Entry& entry : rep.nucleus.n1) {
        if (rep.nucleus.end_counts[entry.element].kind != EndCountKind::Infinite) {
            rep.verdict = JonesVerdict::FailsWithWitness;
            rep.witness = rep.nucleus.elements[entry.element].word;
            rep.note = "N1 element with finitely many fixed boundary ends: " +
                       G->format(rep.witness);
            return rep;
        }
    }
    rep.verdict = JonesVerdict::Holds;
    rep.note = "every N1 element fixes infinitely many boundary ends";
    return rep;
}

}  // namespace treefpp
