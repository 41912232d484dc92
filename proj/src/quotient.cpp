#include "treefpp/quotient.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <thread>

namespace treefpp {

namespace {

uint64_t hash_bytes(const uint8_t* data, size_t len) {
    uint64_t h = 1469598103934665603ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= data[i];
        h *= 1099511628211ULL;
    }
    return h;
}

// Append-only set of fixed-width keys with open addressing. Keys live in one
// flat blob indexed by insertion order.
class PortraitKeySet {
public:
    PortraitKeySet(size_t key_size, uint64_t expected_max)
        : key_size_(key_size) {
        uint64_t want = expected_max + expected_max / 2 + 64;
        slot_count_ = 64;
        while (slot_count_ < want) slot_count_ <<= 1;
        slots_.assign(slot_count_, 0);
    }

    uint64_t size() const { return count_; }
    const uint8_t* key(uint64_t i) const { return blob_.data() + i * key_size_; }

    // Returns the index of the key, inserting it if new.
    std::pair<uint64_t, bool> insert(const uint8_t* key) {
        const uint64_t mask = slot_count_ - 1;
        uint64_t slot = hash_bytes(key, key_size_) & mask;
        while (true) {
            const uint32_t entry = slots_[slot];
            if (entry == 0) {
                blob_.insert(blob_.end(), key, key + key_size_);
                ++count_;
                slots_[slot] = static_cast<uint32_t>(count_);  // 1-based
                return {count_ - 1, true};
            }
            if (std::memcmp(blob_.data() + static_cast<uint64_t>(entry - 1) * key_size_,
                            key, key_size_) == 0) {
                return {entry - 1, false};
            }
            slot = (slot + 1) & mask;
        }
    }

    std::vector<uint8_t> take_blob() { return std::move(blob_); }

private:
    size_t key_size_;
    uint64_t slot_count_;
    uint64_t count_ = 0;
    std::vector<uint32_t> slots_;
    std::vector<uint8_t> blob_;
};

}  // namespace

LevelQuotient::LevelQuotient(int degree, int level, std::vector<uint8_t> sorted_keys,
                             std::shared_ptr<const GroupPresentation> presentation,
                             std::vector<uint32_t> witness_parent,
                             std::vector<int32_t> witness_gen)
    : degree_(degree),
      level_(level),
      key_size_(TreeGeometry(degree, level).label_count * bytes_per_label(degree)),
      keys_(std::move(sorted_keys)),
      presentation_(std::move(presentation)),
      witness_parent_(std::move(witness_parent)),
      witness_gen_(std::move(witness_gen)) {
    if (key_size_ == 0) {
        throw std::invalid_argument("level quotient needs level >= 1");
    }
    if (keys_.size() % key_size_ != 0) {
        throw std::invalid_argument("quotient key blob has fractional element count");
    }
    count_ = keys_.size() / key_size_;
    if (!witness_gen_.empty() &&
        (witness_gen_.size() != count_ || witness_parent_.size() != count_)) {
        throw std::invalid_argument("witness arrays disagree with element count");
    }
}

Portrait LevelQuotient::portrait(uint64_t i) const {
    return decode_labels(degree_, level_, key(i));
}

std::optional<uint64_t> LevelQuotient::find_key(const uint8_t* target) const {
    uint64_t lo = 0, hi = count_;
    while (lo < hi) {
        const uint64_t mid = lo + (hi - lo) / 2;
        const int c = std::memcmp(key(mid), target, key_size_);
        if (c == 0) return mid;
        if (c < 0) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return std::nullopt;
}

std::optional<uint64_t> LevelQuotient::find(const Portrait& p) const {
    if (p.degree != degree_ || p.depth != level_) {
        throw std::invalid_argument("find: portrait has wrong degree or depth");
    }
    std::vector<uint8_t> buf(key_size_);
    encode_labels(p, buf.data());
    return find_key(buf.data());
}

GenWord LevelQuotient::witness_word(uint64_t i) const {
    if (!has_witnesses()) {
        throw std::logic_error("quotient has no witness words");
    }
    GenWord out;
    uint64_t cur = i;
    while (witness_gen_[cur] != 0) {
        out.push_back(witness_gen_[cur]);
        cur = witness_parent_[cur];
    }
    return out;
}

bool LevelQuotient::in_level_stabilizer(uint64_t i, int k) const {
    if (k < 0 || k > level_) throw std::invalid_argument("stabilizer level out of range");
    const size_t prefix = TreeGeometry(degree_, k).label_count * bytes_per_label(degree_);
    const uint8_t* data = key(i);
    for (size_t b = 0; b < prefix; ++b)
        if (data[b] != 0) return false;
    return true;
}

LevelQuotient enumerate_quotient(std::shared_ptr<const GroupPresentation> G, int n,
                                 uint64_t element_limit, int threads) {
    if (n < 1) throw std::invalid_argument("quotient level must be >= 1");
    if (element_limit < 1) throw std::invalid_argument("element limit must be >= 1");
    const int d = G->degree();
    const size_t key_size = TreeGeometry(d, n).label_count * bytes_per_label(d);

    std::vector<int32_t> codes;
    for (size_t i = 0; i < G->generator_count(); ++i) {
        codes.push_back(static_cast<int32_t>(i + 1));
    }
    for (size_t i = 0; i < G->generator_count(); ++i) {
        codes.push_back(-static_cast<int32_t>(i + 1));
    }
    std::vector<Portrait> gen_portraits;
    for (int32_t c : codes) gen_portraits.push_back(*G->generator_portrait(c, n));

    PortraitKeySet set(key_size, element_limit);
    std::vector<uint32_t> parent;
    std::vector<int32_t> gen_code;

    {
        std::vector<uint8_t> buf(key_size);
        encode_labels(identity_portrait(d, n), buf.data());
        set.insert(buf.data());
        parent.push_back(0);
        gen_code.push_back(0);
    }

    std::vector<uint64_t> frontier = {0};
    const size_t fan = codes.size();
    while (!frontier.empty()) {
        // Candidate keys for the whole generation, in the deterministic order
        // (frontier element major, generator code minor). Workers fill
        // disjoint slices; insertion happens serially in order.
        const size_t total = frontier.size() * fan;
        std::vector<uint8_t> cand(total * key_size);
        auto fill_range = [&](size_t begin, size_t end) {
            std::vector<uint8_t> buf;
            for (size_t fi = begin; fi < end; ++fi) {
                const Portrait base = decode_labels(d, n, set.key(frontier[fi]));
                for (size_t ci = 0; ci < fan; ++ci) {
                    Portrait prod = compose(gen_portraits[ci], base);
                    encode_labels(prod, cand.data() + (fi * fan + ci) * key_size);
                }
            }
        };
        const int workers = std::max(1, threads);
        if (workers == 1 || frontier.size() < 64) {
            fill_range(0, frontier.size());
        } else {
            std::vector<std::thread> pool;
            const size_t chunk = (frontier.size() + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const size_t begin = std::min(frontier.size(), w * chunk);
                const size_t end = std::min(frontier.size(), begin + chunk);
                if (begin < end) pool.emplace_back(fill_range, begin, end);
            }
            for (auto& t : pool) t.join();
        }

        std::vector<uint64_t> next;
        for (size_t idx = 0; idx < total; ++idx) {
            auto [elem, inserted] = set.insert(cand.data() + idx * key_size);
            if (inserted) {
                if (set.size() > element_limit) {
                    throw LimitExceeded(set.size(), n);
                }
                parent.push_back(static_cast<uint32_t>(frontier[idx / fan]));
                gen_code.push_back(codes[idx % fan]);
                next.push_back(elem);
            }
        }
        frontier = std::move(next);
    }

    // Sort elements by canonical key; remap witness parents accordingly.
    const uint64_t count = set.size();
    std::vector<uint8_t> blob = set.take_blob();
    std::vector<uint32_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return std::memcmp(blob.data() + static_cast<uint64_t>(a) * key_size,
                           blob.data() + static_cast<uint64_t>(b) * key_size,
                           key_size) < 0;
    });
    std::vector<uint32_t> where(count);
    for (uint64_t i = 0; i < count; ++i) where[order[i]] = static_cast<uint32_t>(i);

    std::vector<uint8_t> sorted_blob(blob.size());
    std::vector<uint32_t> sorted_parent(count);
    std::vector<int32_t> sorted_gen(count);
    for (uint64_t i = 0; i < count; ++i) {
        const uint32_t old = order[i];
        std::memcpy(sorted_blob.data() + i * key_size,
                    blob.data() + static_cast<uint64_t>(old) * key_size, key_size);
        sorted_parent[i] = where[parent[old]];
        sorted_gen[i] = gen_code[old];
    }
    return LevelQuotient(d, n, std::move(sorted_blob), std::move(G),
                         std::move(sorted_parent), std::move(sorted_gen));
}

std::vector<uint64_t> level_stabilizer(const LevelQuotient& Q, int k) {
    if (k < 0 || k > Q.level()) {
        throw std::invalid_argument("stabilizer level exceeds quotient level");
    }
    std::vector<uint64_t> out;
    for (uint64_t i = 0; i < Q.order(); ++i) {
        if (Q.in_level_stabilizer(i, k)) out.push_back(i);
    }
    return out;
}

std::vector<uint64_t> subgroup_closure(const LevelQuotient& Q,
                                       const std::vector<uint64_t>& seeds) {
    std::vector<bool> in_set(Q.order(), false);
    std::vector<uint64_t> members;
    std::vector<uint64_t> frontier;

    std::vector<Portrait> gens;
    auto add = [&](uint64_t idx) {
        if (!in_set[idx]) {
            in_set[idx] = true;
            members.push_back(idx);
            frontier.push_back(idx);
        }
    };

    const Portrait id = identity_portrait(Q.degree(), Q.level());
    auto id_idx = Q.find(id);
    if (!id_idx) throw std::logic_error("quotient lacks the identity element");
    add(*id_idx);
    for (uint64_t s : seeds) {
        if (s >= Q.order()) throw std::invalid_argument("closure seed out of range");
        gens.push_back(Q.portrait(s));
        gens.push_back(inverse(gens.back()));
        add(s);
    }
    while (!frontier.empty()) {
        const uint64_t cur = frontier.back();
        frontier.pop_back();
        const Portrait p = Q.portrait(cur);
        for (const Portrait& g : gens) {
            const Portrait prod = compose(g, p);
            auto idx = Q.find(prod);
            if (!idx) {
                throw std::logic_error("closure left the quotient; quotient is not a group");
            }
            add(*idx);
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

std::shared_ptr<const LevelQuotient> PresentationSource::quotient(int level,
                                                                  uint64_t element_limit) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(level);
        if (it != cache_.end()) return it->second;
    }
    auto q = std::make_shared<const LevelQuotient>(
        enumerate_quotient(pres_, level, element_limit, threads_));
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, inserted] = cache_.emplace(level, q);
    return it->second;
}

void PresentationSource::adopt(std::shared_ptr<const LevelQuotient> q) {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_[q->level()] = std::move(q);
}

std::vector<std::pair<int, std::shared_ptr<const LevelQuotient>>> PresentationSource::cached() {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<std::pair<int, std::shared_ptr<const LevelQuotient>>> out(cache_.begin(),
                                                                          cache_.end());
    return out;
}

}  // namespace treefpp
