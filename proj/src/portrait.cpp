#include "treefpp/portrait.hpp"

#include <stdexcept>
#include <string>

namespace treefpp {

TreeGeometry::TreeGeometry(int degree, int depth) : degree(degree), depth(depth) {
    if (degree < 2 || degree > PermTable::kMaxDegree) {
        throw std::invalid_argument("tree degree must be in [2, 8]");
    }
    if (depth < 0) throw std::invalid_argument("tree depth must be nonnegative");
    level_offset.resize(depth + 1);
    uint64_t off = 0;
    uint64_t width = 1;
    for (int k = 0; k <= depth; ++k) {
        level_offset[k] = off;
        off += width;
        width *= degree;
    }
    label_count = level_offset[depth];
    leaf_count = 1;
    for (int k = 0; k < depth; ++k) leaf_count *= degree;
}

uint64_t TreeGeometry::vertices_at(int level) const {
    uint64_t w = 1;
    for (int k = 0; k < level; ++k) w *= degree;
    return w;
}

namespace {

void check_compatible(const Portrait& a, const Portrait& b, const char* what) {
    if (a.degree != b.degree || a.depth != b.depth) {
        throw std::invalid_argument(std::string(what) +
                                    ": portraits have mismatched degree or depth");
    }
}

}  // namespace

Portrait identity_portrait(int degree, int depth) {
    TreeGeometry geom(degree, depth);
    Portrait p;
    p.degree = static_cast<uint8_t>(degree);
    p.depth = static_cast<uint8_t>(depth);
    p.labels.assign(geom.label_count, 0);
    return p;
}

Portrait compose(const Portrait& a, const Portrait& b) {
    check_compatible(a, b, "compose");
    const int d = a.degree;
    const int n = a.depth;
    const PermTable& table = PermTable::shared(d);
    TreeGeometry geom(d, n);

    Portrait out;
    out.degree = a.degree;
    out.depth = a.depth;
    out.labels.resize(geom.label_count);

    // img[r] at each level is the index of vertex r's image under b; the
    // label of the composite at r multiplies a's label at that image with
    // b's label at r.
    std::vector<uint64_t> img = {0};
    std::vector<uint64_t> next;
    for (int k = 0; k < n; ++k) {
        const uint64_t off = geom.level_offset[k];
        const uint64_t width = img.size();
        if (k + 1 < n) next.assign(width * d, 0);
        for (uint64_t r = 0; r < width; ++r) {
            const uint64_t s = img[r];
            const uint16_t lb = b.labels[off + r];
            out.labels[off + r] = table.compose(a.labels[off + s], lb);
            if (k + 1 < n) {
                for (int x = 0; x < d; ++x) {
                    next[r * d + x] = s * d + table.apply(lb, static_cast<uint8_t>(x));
                }
            }
        }
        if (k + 1 < n) img.swap(next);
    }
    return out;
}

Portrait inverse(const Portrait& p) {
    const int d = p.degree;
    const int n = p.depth;
    const PermTable& table = PermTable::shared(d);
    TreeGeometry geom(d, n);

    Portrait out;
    out.degree = p.degree;
    out.depth = p.depth;
    out.labels.resize(geom.label_count);

    // The inverse carries the label at r, inverted, to r's image vertex.
    std::vector<uint64_t> img = {0};
    std::vector<uint64_t> next;
    for (int k = 0; k < n; ++k) {
        const uint64_t off = geom.level_offset[k];
        const uint64_t width = img.size();
        if (k + 1 < n) next.assign(width * d, 0);
        for (uint64_t r = 0; r < width; ++r) {
            const uint64_t s = img[r];
            const uint16_t lp = p.labels[off + r];
            out.labels[off + s] = table.inverse(lp);
            if (k + 1 < n) {
                for (int x = 0; x < d; ++x) {
                    next[r * d + x] = s * d + table.apply(lp, static_cast<uint8_t>(x));
                }
            }
        }
        if (k + 1 < n) img.swap(next);
    }
    return out;
}

std::vector<uint8_t> apply_vertex(const Portrait& p, const std::vector<uint8_t>& path) {
    if (path.size() > static_cast<size_t>(p.depth)) {
        throw std::invalid_argument("apply_vertex: path deeper than portrait");
    }
    const int d = p.degree;
    const PermTable& table = PermTable::shared(d);
    TreeGeometry geom(d, p.depth);
    std::vector<uint8_t> out;
    out.reserve(path.size());
    uint64_t r = 0;
    for (size_t k = 0; k < path.size(); ++k) {
        const uint8_t x = path[k];
        if (x >= d) throw std::invalid_argument("apply_vertex: letter out of range");
        const uint16_t lab = p.labels[geom.level_offset[k] + r];
        out.push_back(table.apply(lab, x));
        r = TreeGeometry::child(r, d, x);
    }
    return out;
}

Portrait section(const Portrait& p, const std::vector<uint8_t>& path) {
    const size_t m = path.size();
    if (m > static_cast<size_t>(p.depth)) {
        throw std::invalid_argument("section: path deeper than portrait");
    }
    const int d = p.degree;
    TreeGeometry geom(d, p.depth);
    uint64_t r = 0;
    for (uint8_t x : path) {
        if (x >= d) throw std::invalid_argument("section: letter out of range");
        r = TreeGeometry::child(r, d, x);
    }

    const int sub_depth = p.depth - static_cast<int>(m);
    TreeGeometry sub_geom(d, sub_depth);
    Portrait out;
    out.degree = p.degree;
    out.depth = static_cast<uint8_t>(sub_depth);
    out.labels.resize(sub_geom.label_count);

    // Below `path`, the vertices at relative depth j form one contiguous
    // block of length d^j starting at index r * d^j of level m + j.
    uint64_t block = 1;
    for (int j = 0; j < sub_depth; ++j) {
        const uint64_t src = geom.level_offset[m + j] + r * block;
        const uint64_t dst = sub_geom.level_offset[j];
        for (uint64_t t = 0; t < block; ++t) out.labels[dst + t] = p.labels[src + t];
        block *= d;
    }
    return out;
}

Portrait truncate(const Portrait& p, int new_depth) {
    if (new_depth < 0 || new_depth > p.depth) {
        throw std::invalid_argument("truncate: depth out of range");
    }
    TreeGeometry geom(p.degree, new_depth);
    Portrait out;
    out.degree = p.degree;
    out.depth = static_cast<uint8_t>(new_depth);
    out.labels.assign(p.labels.begin(), p.labels.begin() + geom.label_count);
    return out;
}

bool is_identity(const Portrait& p) {
    for (uint16_t lab : p.labels)
        if (lab != 0) return false;
    return true;
}

namespace {

// Walks only along letters the label fixes; every surviving level-n path is
// one fixed vertex.
uint64_t count_fixed(const Portrait& p, bool stop_at_first, int n) {
    const int d = p.degree;
    const PermTable& table = PermTable::shared(d);
    TreeGeometry geom(d, p.depth);
    uint64_t count = 0;
    // Stack of (level, vertex index).
    std::vector<std::pair<int, uint64_t>> stack = {{0, 0}};
    while (!stack.empty()) {
        auto [k, r] = stack.back();
        stack.pop_back();
        if (k == n) {
            ++count;
            if (stop_at_first) return count;
            continue;
        }
        const uint16_t lab = p.labels[geom.level_offset[k] + r];
        for (int x = 0; x < d; ++x) {
            if (table.apply(lab, static_cast<uint8_t>(x)) == x) {
                stack.push_back({k + 1, TreeGeometry::child(r, d, static_cast<uint8_t>(x))});
            }
        }
    }
    return count;
}

}  // namespace

uint64_t fixed_leaf_count(const Portrait& p) { return count_fixed(p, false, p.depth); }

bool has_fixed_leaf(const Portrait& p) { return count_fixed(p, true, p.depth) > 0; }

uint64_t fixed_vertex_count(const Portrait& p, int level) {
    if (level < 0 || level > p.depth) throw std::invalid_argument("level outside the portrait");
    return count_fixed(p, false, level);
}

uint64_t leaf_count(const Portrait& p) {
    return TreeGeometry(p.degree, p.depth).leaf_count;
}

uint64_t portrait_hash(const Portrait& p) {
    // FNV-1a over degree, depth, and the label words.
    uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](uint8_t byte) {
        h ^= byte;
        h *= 1099511628211ULL;
    };
    mix(p.degree);
    mix(p.depth);
    for (uint16_t lab : p.labels) {
        mix(static_cast<uint8_t>(lab & 0xff));
        mix(static_cast<uint8_t>(lab >> 8));
    }
    return h;
}

std::vector<std::vector<uint8_t>> level_paths(int degree, int level) {
    if (degree < 2 || level < 0) throw std::invalid_argument("bad tree geometry");
    std::vector<std::vector<uint8_t>> out;
    std::vector<uint8_t> cur(level, 0);
    while (true) {
        out.push_back(cur);
        int pos = level - 1;
        while (pos >= 0 && cur[pos] == degree - 1) {
            cur[pos] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++cur[pos];
    }
    return out;
}

int bytes_per_label(int degree) {
    return PermTable::shared(degree).size() <= 256 ? 1 : 2;
}

void encode_labels(const Portrait& p, uint8_t* out) {
    const int bpl = bytes_per_label(p.degree);
    if (bpl == 1) {
        for (size_t i = 0; i < p.labels.size(); ++i) {
            out[i] = static_cast<uint8_t>(p.labels[i]);
        }
    } else {
        for (size_t i = 0; i < p.labels.size(); ++i) {
            out[2 * i] = static_cast<uint8_t>(p.labels[i] & 0xff);
            out[2 * i + 1] = static_cast<uint8_t>(p.labels[i] >> 8);
        }
    }
}

Portrait decode_labels(int degree, int depth, const uint8_t* data) {
    TreeGeometry geom(degree, depth);
    Portrait p;
    p.degree = static_cast<uint8_t>(degree);
    p.depth = static_cast<uint8_t>(depth);
    p.labels.resize(geom.label_count);
    const int bpl = bytes_per_label(degree);
    if (bpl == 1) {
        for (uint64_t i = 0; i < geom.label_count; ++i) p.labels[i] = data[i];
    } else {
        for (uint64_t i = 0; i < geom.label_count; ++i) {
            p.labels[i] = static_cast<uint16_t>(data[2 * i] | (data[2 * i + 1] << 8));
        }
    }
    return p;
}

std::vector<uint8_t> encode_portrait(const Portrait& p) {
    const int bpl = bytes_per_label(p.degree);
    std::vector<uint8_t> out(4 + p.labels.size() * bpl);
    out[0] = 'T';
    out[1] = 'P';
    out[2] = p.degree;
    out[3] = p.depth;
    encode_labels(p, out.data() + 4);
    return out;
}

Portrait decode_portrait(const std::vector<uint8_t>& data) {
    if (data.size() < 4 || data[0] != 'T' || data[1] != 'P') {
        throw std::invalid_argument("decode_portrait: bad header");
    }
    const int degree = data[2];
    const int depth = data[3];
    TreeGeometry geom(degree, depth);
    const size_t want = 4 + geom.label_count * bytes_per_label(degree);
    if (data.size() != want) {
        throw std::invalid_argument("decode_portrait: truncated payload");
    }
    return decode_labels(degree, depth, data.data() + 4);
}

}  // namespace treefpp
