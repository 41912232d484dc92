#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treefpp/engine.hpp"
#include "treefpp/group_checks.hpp"

namespace treefpp {

enum class NucleusStatus { ContractingWithNucleus, Inconclusive };

struct NucleusElement {
    GenWord word;     // reduced representative
    uint64_t digest;  // portrait hash at digest_depth
};

struct SectionEdge {
    size_t from = 0;
    uint8_t letter = 0;
    size_t to = 0;
};

enum class EndCountKind { Zero, Finite, Infinite };

struct FixedEndVerdict {
    size_t element = 0;
    EndCountKind kind = EndCountKind::Zero;
    uint64_t count = 0;  // the number of fixed boundary ends when Finite
    // For Infinite: an on-cycle element with several fixed-letter departures.
    std::optional<size_t> branching_element;
};

struct N1Entry {
    size_t element = 0;
    std::vector<uint8_t> witness_cycle;  // path v with g(v) = v and g|_v = g
};

struct NucleusReport {
    NucleusStatus status = NucleusStatus::Inconclusive;
    std::string reason;  // why the computation gave up, when it did
    // Sorted: identity first, then by length and reading order.
    std::vector<NucleusElement> elements;
    std::vector<SectionEdge> section_graph;
    std::vector<N1Entry> n1;
    std::vector<FixedEndVerdict> end_counts;  // aligned with elements
    int digest_depth = 0;
    std::shared_ptr<const GroupPresentation> group;
};

struct NucleusCaps {
    int depth_cap = 30;      // per-product iterated-section exploration budget
    int pair_cap = 20000;    // total products examined
    int element_cap = 400;   // working-set size guard
    int eq_depth_cap = 30;   // forwarded to element-equality checks
    int eq_pair_cap = 20000;
};

// Closure of the generators under sections, expanded by limit sets of pairwise
// products until stable; the nucleus is the cycle-reachable part of the
// resulting section graph. Any bound cap or unknown equality verdict makes the
// status inconclusive instead of guessing.
NucleusReport compute_nucleus(std::shared_ptr<const GroupPresentation> G,
                              NucleusCaps caps = {});

// Elements lying on a directed cycle of the fixed-letter section graph.
// Throws std::logic_error when the report is inconclusive.
const std::vector<N1Entry>& n1_set(const NucleusReport& report);

// End-count classification of one nucleus element; validates the reference.
FixedEndVerdict fixed_boundary_count(const NucleusReport& report, size_t element);

// Index of the nucleus element equal to the given word.
// Throws std::invalid_argument when the word is not in the nucleus.
size_t nucleus_element_index(const NucleusReport& report, const GenWord& w);

enum class JonesVerdict { Holds, FailsWithWitness, Inconclusive };

struct JonesConfig {
    int transitivity_level = 4;
    int martingale_level = 3;
    NucleusCaps nucleus_caps;
    uint64_t element_limit = kDefaultElementLimit;
};

struct JonesReport {
    JonesVerdict verdict = JonesVerdict::Inconclusive;
    GenWord witness;  // set for FailsWithWitness
    NucleusReport nucleus;
    MartingaleReport martingale;
    TransitivityReport transitivity;
    std::string note;
};

// The null-fixed-point-proportion criterion: holds when the group is
// level-transitive and martingale-clean up to the configured levels, the
// nucleus is computed, and every element of its N1 set fixes infinitely many
// boundary ends; a non-Infinite N1 element is returned as the witness.
JonesReport check_jones_condition(std::shared_ptr<const GroupPresentation> G,
                                  JonesConfig config = {});

}  // namespace treefpp
