#include "treefpp/perms.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace treefpp {

PermTable::PermTable(int degree) : degree_(degree) {
    if (degree < 2 || degree > kMaxDegree) {
        throw std::invalid_argument("permutation degree must be in [2, 8], got " +
                                    std::to_string(degree));
    }
    Perm p(degree);
    std::iota(p.begin(), p.end(), 0);
    do {
        perms_.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));

    const uint32_t n = size();
    flat_.resize(static_cast<size_t>(n) * degree);
    fixed_points_.resize(n);
    parity_.resize(n);
    for (uint32_t r = 0; r < n; ++r) {
        const Perm& q = perms_[r];
        int fp = 0;
        for (int i = 0; i < degree; ++i) {
            flat_[static_cast<size_t>(r) * degree + i] = q[i];
            if (q[i] == i) ++fp;
        }
        fixed_points_[r] = static_cast<uint8_t>(fp);
        int inversions = 0;
        for (int i = 0; i < degree; ++i)
            for (int j = i + 1; j < degree; ++j)
                if (q[i] > q[j]) ++inversions;
        parity_[r] = static_cast<uint8_t>(inversions & 1);
    }

    inverse_.resize(n);
    Perm inv(degree);
    for (uint32_t r = 0; r < n; ++r) {
        const Perm& q = perms_[r];
        for (int i = 0; i < degree; ++i) inv[q[i]] = static_cast<uint8_t>(i);
        inverse_[r] = rank_of(inv);
    }

    has_compose_table_ = (n <= 720);
    if (has_compose_table_) {
        compose_.resize(static_cast<size_t>(n) * n);
        Perm out(degree);
        for (uint32_t a = 0; a < n; ++a) {
            for (uint32_t b = 0; b < n; ++b) {
                const Perm& pa = perms_[a];
                const Perm& pb = perms_[b];
                for (int x = 0; x < degree; ++x) out[x] = pa[pb[x]];
                compose_[static_cast<size_t>(a) * n + b] = rank_of(out);
            }
        }
    }
}

uint16_t PermTable::rank_of(const Perm& p) const {
    if (static_cast<int>(p.size()) != degree_) {
        throw std::invalid_argument("permutation has wrong degree");
    }
    // Lehmer code: rank = sum over i of (#{j > i : p[j] < p[i]}) * (d-1-i)!
    static constexpr std::array<uint32_t, 9> kFact = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
    uint32_t rank = 0;
    for (int i = 0; i < degree_; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < degree_; ++j)
            if (p[j] < p[i]) ++smaller;
        rank += smaller * kFact[degree_ - 1 - i];
    }
    return static_cast<uint16_t>(rank);
}

uint16_t PermTable::compose(uint16_t a, uint16_t b) const {
    if (has_compose_table_) {
        return compose_[static_cast<size_t>(a) * size() + b];
    }
    Perm out(degree_);
    const uint8_t* pa = &flat_[static_cast<size_t>(a) * degree_];
    const uint8_t* pb = &flat_[static_cast<size_t>(b) * degree_];
    for (int x = 0; x < degree_; ++x) out[x] = pa[pb[x]];
    return rank_of(out);
}

bool PermTable::is_single_cycle(uint16_t p) const {
    int len = 0;
    uint8_t x = 0;
    do {
        x = apply(p, x);
        ++len;
    } while (x != 0 && len <= degree_);
    return len == degree_;
}

uint16_t PermTable::power(uint16_t p, uint64_t e) const {
    uint16_t acc = 0;
    uint16_t base = p;
    while (e > 0) {
        if (e & 1) acc = compose(acc, base);
        base = compose(base, base);
        e >>= 1;
    }
    return acc;
}

uint64_t PermTable::order(uint16_t p) const {
    uint64_t ord = 1;
    uint16_t q = p;
    while (!is_identity(q)) {
        q = compose(q, p);
        ++ord;
    }
    return ord;
}

std::string PermTable::cycle_notation(uint16_t p) const {
    if (is_identity(p)) return "()";
    std::ostringstream out;
    std::vector<bool> seen(degree_, false);
    for (int i = 0; i < degree_; ++i) {
        if (seen[i] || apply(p, static_cast<uint8_t>(i)) == i) continue;
        out << '(';
        int x = i;
        bool first = true;
        do {
            if (!first) out << ' ';
            out << (x + 1);  // 1-based letters in display
            first = false;
            seen[x] = true;
            x = apply(p, static_cast<uint8_t>(x));
        } while (x != i);
        out << ')';
    }
    return out.str();
}

const PermTable& PermTable::shared(int degree) {
    static std::mutex mu;
    static std::array<std::unique_ptr<PermTable>, kMaxDegree + 1> cache;
    if (degree < 2 || degree > kMaxDegree) {
        throw std::invalid_argument("permutation degree must be in [2, 8], got " +
                                    std::to_string(degree));
    }
    std::lock_guard<std::mutex> lock(mu);
    if (!cache[degree]) cache[degree] = std::make_unique<PermTable>(degree);
    return *cache[degree];
}

std::vector<uint16_t> perm_group_closure(const PermTable& table,
                                         std::vector<uint16_t> generators) {
    std::vector<bool> in_set(table.size(), false);
    std::vector<uint16_t> frontier;
    std::vector<uint16_t> result;
    auto add = [&](uint16_t r) {
        if (!in_set[r]) {
            in_set[r] = true;
            frontier.push_back(r);
            result.push_back(r);
        }
    };
    add(0);
    for (uint16_t g : generators) add(g);
    while (!frontier.empty()) {
        uint16_t x = frontier.back();
        frontier.pop_back();
        for (uint16_t g : generators) {
            add(table.compose(g, x));
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

bool perm_group_transitive(const PermTable& table,
                           const std::vector<uint16_t>& generators) {
    const int d = table.degree();
    std::vector<bool> seen(d, false);
    std::vector<uint8_t> stack = {0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        uint8_t x = stack.back();
        stack.pop_back();
        for (uint16_t g : generators) {
            uint8_t y = table.apply(g, x);
            if (!seen[y]) {
                seen[y] = true;
                ++count;
                stack.push_back(y);
            }
        }
    }
    return count == d;
}

}  // namespace treefpp
