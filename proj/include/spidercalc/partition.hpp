#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tensor.hpp"

namespace spidercalc {

// Two-row set partition.  Points are encoded as 1..n_lower for the lower row
// (left to right) and n_lower+1..n_lower+n_upper for the upper row.  The
// boundary walk runs through the lower row left to right and then the upper
// row right to left; crossings are decided in that linear order.
struct SetPartition {
    int n_lower = 0;
    int n_upper = 0;
    std::vector<std::vector<int>> blocks;

    int total() const { return n_lower + n_upper; }

    void canonicalize() {
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        std::sort(blocks.begin(), blocks.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
    }

    bool operator==(const SetPartition& o) const {
        return n_lower == o.n_lower && n_upper == o.n_upper && blocks == o.blocks;
    }
    bool operator!=(const SetPartition& o) const { return !(*this == o); }

    std::string label(int point) const {
        if (point <= n_lower) return "L" + std::to_string(point);
        return "U" + std::to_string(point - n_lower);
    }

    std::string to_string() const {
        std::string s;
        for (const auto& b : blocks) {
            s += "{";
            for (std::size_t i = 0; i < b.size(); ++i) {
                if (i) s += " ";
                s += label(b[i]);
            }
            s += "}";
        }
        return s;
    }

    // Position of a point along the boundary walk (1-based).
    int walk_position(int point) const {
        if (point <= n_lower) return point;
        int j = point - n_lower;
        return n_lower + (n_upper - j + 1);
    }

    bool is_valid() const {
        std::vector<int> seen(total() + 1, 0);
        for (const auto& b : blocks) {
            if (b.empty()) return false;
            for (int p : b) {
                if (p < 1 || p > total()) return false;
                if (seen[p]++) return false;
            }
        }
        for (int p = 1; p <= total(); ++p)
            if (!seen[p]) return false;
        return true;
    }
};

// A pairing is a set partition with all blocks of size 2.
using Pairing = SetPartition;

inline bool is_pairing(const SetPartition& p) {
    for (const auto& b : p.blocks)
        if (b.size() != 2) return false;
    return true;
}

inline BigInt catalan(int k) {
    if (k < 0) throw std::invalid_argument("catalan: negative argument");
    // C_k = binom(2k, k) / (k + 1)
    BigInt num = 1;
    for (int i = 1; i <= k; ++i) {
        num *= (k + i);
        num /= i;
    }
    return num / (k + 1);
}

inline bool is_noncrossing(const SetPartition& p) {
    std::size_t nb = p.blocks.size();
    for (std::size_t x = 0; x < nb; ++x)
        for (std::size_t y = x + 1; y < nb; ++y) {
            std::vector<std::pair<int, int>> merged;  // (walk position, block tag)
            for (int pt : p.blocks[x]) merged.push_back({p.walk_position(pt), 0});
            for (int pt : p.blocks[y]) merged.push_back({p.walk_position(pt), 1});
            std::sort(merged.begin(), merged.end());
            int runs = 1;
            for (std::size_t i = 1; i < merged.size(); ++i)
                if (merged[i].second != merged[i - 1].second) ++runs;
            if (runs >= 4) return false;
        }
    return true;
}

namespace detail {

// Non-crossing partitions of the ordered point list `pts`, appended to `out`
// as block lists.  The block of the first point is chosen as a sorted subset;
// the gaps between consecutive chosen points recurse independently.
inline void nc_partitions_rec(const std::vector<int>& pts,
                              std::vector<std::vector<std::vector<int>>>& out) {
    if (pts.empty()) {
        out.push_back({});
        return;
    }
    std::size_t n = pts.size();
    // iterate subsets of pts[1..] joined with pts[0] via bitmask (n <= ~20)
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<int> block{pts[0]};
        std::vector<std::vector<int>> gaps;
        std::vector<int> cur;
        for (std::size_t i = 1; i < n; ++i) {
            if (mask & (1u << (i - 1))) {
                block.push_back(pts[i]);
                gaps.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(pts[i]);
            }
        }
        gaps.push_back(cur);
        // combine sub-results across all gaps
        std::vector<std::vector<std::vector<int>>> combined{{}};
        for (const auto& gap : gaps) {
            std::vector<std::vector<std::vector<int>>> sub;
            nc_partitions_rec(gap, sub);
            std::vector<std::vector<std::vector<int>>> next;
            for (const auto& head : combined)
                for (const auto& tail : sub) {
                    auto merged = head;
                    merged.insert(merged.end(), tail.begin(), tail.end());
                    next.push_back(std::move(merged));
                }
            combined = std::move(next);
        }
        for (auto& rest : combined) {
            std::vector<std::vector<int>> part{block};
            part.insert(part.end(), rest.begin(), rest.end());
            out.push_back(std::move(part));
        }
    }
}

inline void nc_pairings_rec(const std::vector<int>& pts,
                            std::vector<std::vector<std::vector<int>>>& out) {
    if (pts.empty()) {
        out.push_back({});
        return;
    }
    std::size_t n = pts.size();
    if (n % 2) return;
    for (std::size_t j = 1; j < n; j += 2) {
        std::vector<int> inside(pts.begin() + 1, pts.begin() + j);
        std::vector<int> outside(pts.begin() + j + 1, pts.end());
        std::vector<std::vector<std::vector<int>>> a, b;
        nc_pairings_rec(inside, a);
        nc_pairings_rec(outside, b);
        for (const auto& x : a)
            for (const auto& y : b) {
                std::vector<std::vector<int>> part{{pts[0], pts[j]}};
                part.insert(part.end(), x.begin(), x.end());
                part.insert(part.end(), y.begin(), y.end());
                out.push_back(std::move(part));
            }
    }
}

inline void sort_partition_list(std::vector<SetPartition>& ps) {
    for (auto& p : ps) p.canonicalize();
    std::sort(ps.begin(), ps.end(),
              [](const SetPartition& a, const SetPartition& b) { return a.blocks < b.blocks; });
}

}  // namespace detail

// All non-crossing partitions of a single row of m points, canonically ordered.
inline std::vector<SetPartition> enumerate_nc_partitions(int m) {
    if (m < 0 || m > 20) throw std::invalid_argument("enumerate_nc_partitions: bad m");
    std::vector<int> pts(m);
    for (int i = 0; i < m; ++i) pts[i] = i + 1;
    std::vector<std::vector<std::vector<int>>> raw;
    detail::nc_partitions_rec(pts, raw);
    std::vector<SetPartition> out;
    out.reserve(raw.size());
    for (auto& blocks : raw) out.push_back(SetPartition{m, 0, std::move(blocks)});
    detail::sort_partition_list(out);
    return out;
}

// All non-crossing pairings of a single row of m points (empty unless m even).
inline std::vector<SetPartition> enumerate_nc_pairings(int m) {
    if (m < 0 || m > 24) throw std::invalid_argument("enumerate_nc_pairings: bad m");
    std::vector<int> pts(m);
    for (int i = 0; i < m; ++i) pts[i] = i + 1;
    std::vector<std::vector<std::vector<int>>> raw;
    detail::nc_pairings_rec(pts, raw);
    std::vector<SetPartition> out;
    out.reserve(raw.size());
    for (auto& blocks : raw) out.push_back(SetPartition{m, 0, std::move(blocks)});
    detail::sort_partition_list(out);
    return out;
}

// Doubling map: every point of a non-crossing partition splits into two
// adjacent points and every block fattens to the nested pairing traced along
// the block's outline.  Lower point i doubles to lower points (2i-1, 2i);
// upper point j doubles to upper points (2j-1, 2j).  Along the boundary walk
// a lower point shows its left copy first, an upper point its right copy.
inline Pairing fatten(const SetPartition& p) {
    if (!p.is_valid()) throw std::invalid_argument("fatten: invalid partition");
    if (!is_noncrossing(p)) throw std::invalid_argument("fatten: crossing partition");
    int k = p.n_lower, l = p.n_upper;
    Pairing out;
    out.n_lower = 2 * k;
    out.n_upper = 2 * l;
    auto first_copy = [&](int pt) {
        if (pt <= k) return 2 * pt - 1;                    // lower left copy
        int j = pt - k;
        return 2 * k + 2 * j;                              // upper right copy
    };
    auto second_copy = [&](int pt) {
        if (pt <= k) return 2 * pt;                        // lower right copy
        int j = pt - k;
        return 2 * k + 2 * j - 1;                          // upper left copy
    };
    for (auto block : p.blocks) {
        std::sort(block.begin(), block.end(), [&](int a, int b) {
            return p.walk_position(a) < p.walk_position(b);
        });
        std::size_t r = block.size();
        for (std::size_t t = 0; t < r; ++t) {
            int a = second_copy(block[t]);
            int b = first_copy(block[(t + 1) % r]);
            out.blocks.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    out.canonicalize();
    return out;
}

// Kronecker tensor of a partition: entry 1 whenever all indices within each
// block agree, over index set {0..N-1}.
inline Tensor partition_tensor(const SetPartition& p, int N) {
    if (!p.is_valid()) throw std::invalid_argument("partition_tensor: invalid partition");
    Tensor t(p.n_lower, p.n_upper, N);
    std::size_t nb = p.blocks.size();
    std::vector<int> choice(nb, 0);
    std::vector<int> uppers(p.n_upper), lowers(p.n_lower);
    while (true) {
        for (std::size_t bi = 0; bi < nb; ++bi)
            for (int pt : p.blocks[bi]) {
                if (pt <= p.n_lower)
                    lowers[pt - 1] = choice[bi];
                else
                    uppers[pt - p.n_lower - 1] = choice[bi];
            }
        t.at(uppers, lowers) = 1;
        std::size_t c = 0;
        while (c < nb && ++choice[c] == N) choice[c++] = 0;
        if (c == nb) break;
    }
    return t;
}

// Vertical composition p after q (q's upper row glued to p's lower row).
// Returns the composed partition and the number of components that stayed
// entirely in the glued middle row.
inline std::pair<SetPartition, int> compose_partitions(const SetPartition& p, const SetPartition& q) {
    if (p.n_lower != q.n_upper) throw std::invalid_argument("compose_partitions: arity mismatch");
    int j = q.n_lower, k = p.n_lower, l = p.n_upper;
    // union-find over j + k + l nodes: q-lower, middle, p-upper
    std::vector<int> parent(j + k + l);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    auto q_node = [&](int pt) { return pt <= j ? pt - 1 : j + (pt - j) - 1; };
    auto p_node = [&](int pt) { return pt <= k ? j + pt - 1 : j + k + (pt - k) - 1; };
    for (const auto& b : q.blocks)
        for (std::size_t i = 1; i < b.size(); ++i) unite(q_node(b[0]), q_node(b[i]));
    for (const auto& b : p.blocks)
        for (std::size_t i = 1; i < b.size(); ++i) unite(p_node(b[0]), p_node(b[i]));
    std::vector<std::vector<int>> groups(parent.size());
    for (int pt = 1; pt <= j; ++pt) groups[find(pt - 1)].push_back(pt);
    for (int u = 1; u <= l; ++u) groups[find(j + k + u - 1)].push_back(j + u);
    SetPartition out;
    out.n_lower = j;
    out.n_upper = l;
    for (auto& g : groups)
        if (!g.empty()) out.blocks.push_back(std::move(g));
    out.canonicalize();
    // middle-only components
    std::vector<bool> touched(parent.size(), false);
    for (int pt = 0; pt < j; ++pt) touched[find(pt)] = true;
    for (int u = 0; u < l; ++u) touched[find(j + k + u)] = true;
    std::vector<bool> counted(parent.size(), false);
    int c = 0;
    for (int m = 0; m < k; ++m) {
        int r = find(j + m);
        if (!touched[r] && !counted[r]) {
            counted[r] = true;
            ++c;
        }
    }
    return {out, c};
}

}  // namespace spidercalc
