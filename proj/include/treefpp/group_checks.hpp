#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "treefpp/engine.hpp"
#include "treefpp/quotient.hpp"

namespace treefpp {

enum class FractalProperty { Fractal, StronglyFractal, SuperStronglyFractal };

// Enumerate: work inside the quotient at level k+m.
// StabilizerWords: generate the stabilizer by coset-representative words and
// push those words through the section map; needs a presentation but only the
// quotients at levels k and m.
enum class CheckRoute { Auto, Enumerate, StabilizerWords };

struct TransitivityReport {
    int level = 0;
    bool transitive = false;
    std::vector<uint64_t> orbit_sizes;  // descending
};

// Orbit partition of the level-n leaves under the generator portraits.
TransitivityReport is_level_transitive(const GroupPresentation& G, int n);

// Same verdict for any quotient source (finite-type groups included); uses the
// presentation when the source has one, otherwise the full level-n quotient.
TransitivityReport is_level_transitive(QuotientSource& source, int n,
                                       uint64_t element_limit = kDefaultElementLimit);

struct VertexSurjectivity {
    int stabilizer_level = 0;         // k
    std::vector<uint8_t> vertex;      // path of length k
    bool surjective = false;
    // Present on failure: an element of the level-m quotient outside the image.
    std::optional<Portrait> missing;
    std::optional<GenWord> missing_word;
};

struct FractalityReport {
    FractalProperty property = FractalProperty::Fractal;
    int max_stabilizer_level = 0;  // K
    int target_level = 0;          // m
    bool pass_up_to_bound = false;
    std::vector<VertexSurjectivity> checks;
    std::string note;
};

// Surjectivity of section maps on stabilizers, per property:
//   Fractal              per-vertex stabilizers, vertices of levels k <= K
//   StronglyFractal      level-1 stabilizer, vertices of level 1
//   SuperStronglyFractal level-k stabilizers, vertices of level k, k <= K
// Images are compared against the full level-m quotient. A failed vertex
// disproves the property for the group and its closure; a pass certifies it
// only up to the checked levels.
FractalityReport check_fractality(QuotientSource& source, FractalProperty property,
                                  int max_stab_level, int target_level,
                                  uint64_t element_limit = kDefaultElementLimit,
                                  CheckRoute route = CheckRoute::Auto);

struct MartingaleLevelVerdict {
    int level = 0;  // n: stabilizer of level n-1 acting on children of L_{n-1}
    bool transitive_everywhere = false;
    std::vector<uint8_t> failing_vertex;  // first bad vertex of L_{n-1}, if any
};

struct MartingaleReport {
    int max_level = 0;
    bool pass = false;
    std::vector<MartingaleLevelVerdict> levels;
    std::string note;
};

// For each n <= N and each vertex v of level n-1: does the stabilizer of
// level n-1 act transitively on the children of v?
MartingaleReport check_martingale_condition(QuotientSource& source, int max_level,
                                            uint64_t element_limit = kDefaultElementLimit,
                                            CheckRoute route = CheckRoute::Auto);

}  // namespace treefpp
