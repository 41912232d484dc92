#pragma once

#include <cstdint>
#include <vector>

#include "treefpp/perms.hpp"

namespace treefpp {

// Vertex addressing for the d-regular rooted tree truncated at depth n.
// Vertices at level k are indexed 0..d^k-1 in lexicographic order of their
// letter paths; the breadth-first label array places level k at offset
// (d^k - 1)/(d - 1). Letters are 0-based internally.
struct TreeGeometry {
    int degree = 0;
    int depth = 0;
    std::vector<uint64_t> level_offset;  // level_offset[k], k in 0..depth
    uint64_t label_count = 0;            // labels at levels 0..depth-1
    uint64_t leaf_count = 0;             // d^depth

    TreeGeometry() = default;
    TreeGeometry(int degree, int depth);

    uint64_t vertices_at(int level) const;
    // Index of the vertex reached from `vertex` at `level` by letter x.
    static uint64_t child(uint64_t vertex, int degree, uint8_t x) {
        return vertex * degree + x;
    }
};

// The action of a tree automorphism on the first n levels: one permutation
// label per vertex of levels 0..n-1, stored as ranks into the degree's
// PermTable, in breadth-first order.
struct Portrait {
    uint8_t degree = 0;
    uint8_t depth = 0;
    std::vector<uint16_t> labels;

    bool operator==(const Portrait&) const = default;
};

Portrait identity_portrait(int degree, int depth);

// compose(a, b) acts as "b first, then a": the composite sends x to a(b(x)).
Portrait compose(const Portrait& a, const Portrait& b);
Portrait inverse(const Portrait& p);

// Image of the vertex path under the action (paths use 0-based letters).
std::vector<uint8_t> apply_vertex(const Portrait& p, const std::vector<uint8_t>& path);

// Restriction of the action to the subtree below `path`; depth drops by the
// path length.
Portrait section(const Portrait& p, const std::vector<uint8_t>& path);

Portrait truncate(const Portrait& p, int new_depth);

bool is_identity(const Portrait& p);

uint64_t fixed_leaf_count(const Portrait& p);
bool has_fixed_leaf(const Portrait& p);

// Fixed vertices at an intermediate level (0 <= level <= depth).
uint64_t fixed_vertex_count(const Portrait& p, int level);

// Number of level-`depth` leaves, as a cross-check against fixed_leaf_count.
uint64_t leaf_count(const Portrait& p);

uint64_t portrait_hash(const Portrait& p);

// All vertex paths of the given level in lexicographic order (d^level paths).
std::vector<std::vector<uint8_t>> level_paths(int degree, int level);

// Compact little-endian byte encoding of the label array alone (the caller
// must know degree and depth). Labels take 1 byte when d! <= 256, else 2.
int bytes_per_label(int degree);
void encode_labels(const Portrait& p, uint8_t* out);
Portrait decode_labels(int degree, int depth, const uint8_t* data);

// Self-describing encoding with a 4-byte header: magic 'T', 'P', degree,
// depth, then the label bytes.
std::vector<uint8_t> encode_portrait(const Portrait& p);
Portrait decode_portrait(const std::vector<uint8_t>& data);

}  // namespace treefpp
