#pragma once

// Terminating rewrite system for planar two-colored spider diagrams.  All
// rule factors are integer powers of sqrt(N), so normalization is symbolic
// in the dimension and the prefactor absorbs every step.
//
//   R2  delete a self-loop                                   factor 1
//   R1  fuse two spiders of one color joined by an edge      factor 1
//   R3  delete an empty parallel pair between colors         factor 1/N
//   R5  bypass a degree-two vertex                           factor 1
//   R6  cash in a bare loop                                  factor N
//   R4  delete an isolated vertex                            factor N
//
// Deterministic priority: R2 > R1 > R3 > R5 > R6 > R4, lowest site first.
// The measure 2E + V + 2*loops drops on every step.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "diagram.hpp"

namespace spidercalc {

struct RewriteStep {
    std::string rule;
    std::string detail;
    int half_exp_delta = 0;
};

struct NormalizeResult {
    Diagram diagram;
    std::vector<RewriteStep> steps;
};

namespace rw_detail {

struct Site {
    int priority;  // 0 = R2, 1 = R1, 2 = R3, 3 = R5, 4 = R6, 5 = R4
    long long id;
    int e1 = -1, e2 = -1, v = -1;
};

inline int rot_next(const Diagram& d, int slot) {
    const auto& rot = d.vertices.at(d.slots.at(slot).vertex).rotation;
    auto it = std::find(rot.begin(), rot.end(), slot);
    return rot[(static_cast<std::size_t>(it - rot.begin()) + 1) % rot.size()];
}

inline void drop_slot(Diagram& d, int slot) {
    auto& rot = d.vertices.at(d.slots.at(slot).vertex).rotation;
    rot.erase(std::find(rot.begin(), rot.end(), slot));
    d.slots.erase(slot);
}

inline std::vector<Site> collect_sites(const Diagram& d) {
    std::vector<Site> sites;
    std::map<int, int> edge_at_slot;
    for (std::size_t i = 0; i < d.edges.size(); ++i)
        for (const End& x : {d.edges[i].a, d.edges[i].b})
            if (!x.is_boundary()) edge_at_slot[x.slot] = static_cast<int>(i);

    std::map<std::pair<int, int>, std::vector<int>> between;  // vertex pair -> edges
    for (std::size_t i = 0; i < d.edges.size(); ++i) {
        const Edge& e = d.edges[i];
        if (e.a.is_boundary() || e.b.is_boundary()) continue;
        int v = d.slots.at(e.a.slot).vertex;
        int w = d.slots.at(e.b.slot).vertex;
        if (v == w) {
            sites.push_back({0, static_cast<long long>(i), static_cast<int>(i), -1, v});  // R2
            continue;
        }
        if (d.vertices.at(v).color == d.vertices.at(w).color)
            sites.push_back({1, static_cast<long long>(i), static_cast<int>(i), -1, -1});  // R1
        else
            between[{std::min(v, w), std::max(v, w)}].push_back(static_cast<int>(i));
    }

    // R3: a parallel pair whose edges are rotation-adjacent at both ends
    for (const auto& [vw, es] : between) {
        (void)vw;
        for (std::size_t x = 0; x < es.size(); ++x)
            for (std::size_t y = x + 1; y < es.size(); ++y) {
                auto slots_at = [&](int edge, int vertex) {
                    const Edge& e = d.edges[edge];
                    return d.slots.at(e.a.slot).vertex == vertex ? e.a.slot : e.b.slot;
                };
                int v = d.slots.at(d.edges[es[x]].a.slot).vertex;
                int w = d.slots.at(d.edges[es[x]].b.slot).vertex;
                int ax = slots_at(es[x], v), bx = slots_at(es[x], w);
                int ay = slots_at(es[y], v), by = slots_at(es[y], w);
                bool adj = (rot_next(d, ay) == ax && rot_next(d, bx) == by) ||
                           (rot_next(d, ax) == ay && rot_next(d, by) == bx);
                if (adj)
                    sites.push_back({2, static_cast<long long>(es[x]) * 1000000 + es[y],
                                     es[x], es[y], -1});
            }
    }

    for (const auto& [v, dv] : d.vertices) {
        if (dv.rotation.size() == 2) {
            int f1 = edge_at_slot.count(dv.rotation[0]) ? edge_at_slot.at(dv.rotation[0]) : -1;
            int f2 = edge_at_slot.count(dv.rotation[1]) ? edge_at_slot.at(dv.rotation[1]) : -1;
            if (f1 >= 0 && f2 >= 0 && f1 != f2)
                sites.push_back({3, v, f1, f2, v});  // R5
        }
        if (dv.rotation.empty()) sites.push_back({5, v, -1, -1, v});  // R4
    }
    if (d.bare_loops > 0) sites.push_back({4, 0, -1, -1, -1});  // R6
    return sites;
}

inline RewriteStep apply_site(Diagram& d, const Site& s) {
    RewriteStep step;
    auto erase_edges = [&](int e1, int e2) {
        if (e2 >= 0 && e2 > e1) d.edges.erase(d.edges.begin() + e2);
        if (e1 >= 0) d.edges.erase(d.edges.begin() + e1);
        if (e2 >= 0 && e2 < e1) d.edges.erase(d.edges.begin() + e2);
    };
    switch (s.priority) {
        case 0: {  // R2 self-loop
            Edge e = d.edges[s.e1];
            step = {"R2", "self-loop at vertex " + std::to_string(s.v), 0};
            drop_slot(d, e.a.slot);
            drop_slot(d, e.b.slot);
            erase_edges(s.e1, -1);
            break;
        }
        case 1: {  // R1 fusion along edge e1
            Edge e = d.edges[s.e1];
            int v = d.slots.at(e.a.slot).vertex;
            int w = d.slots.at(e.b.slot).vertex;
            int sa = e.a.slot, sb = e.b.slot;
            if (w < v) {
                std::swap(v, w);
                std::swap(sa, sb);
            }
            step = {"R1", "fuse vertex " + std::to_string(w) + " into " + std::to_string(v), 0};
            auto cut = [&](int vertex, int at) {
                std::vector<int> rot = d.vertices.at(vertex).rotation;
                auto it = std::find(rot.begin(), rot.end(), at);
                std::rotate(rot.begin(), it, rot.end());
                rot.erase(rot.begin());  // drop the contracted slot
                return rot;
            };
            std::vector<int> merged = cut(v, sa);
            std::vector<int> tail = cut(w, sb);
            merged.insert(merged.end(), tail.begin(), tail.end());
            for (int slot : tail) d.slots.at(slot).vertex = v;
            d.slots.erase(sa);
            d.slots.erase(sb);
            d.vertices.at(v).rotation = std::move(merged);
            d.vertices.erase(w);
            erase_edges(s.e1, -1);
            break;
        }
        case 2: {  // R3 empty parallel pair between colors
            Edge e = d.edges[s.e1], f = d.edges[s.e2];
            step = {"R3", "delete parallel pair (edges " + std::to_string(s.e1) + "," +
                              std::to_string(s.e2) + ")",
                    -2};
            for (int slot : {e.a.slot, e.b.slot, f.a.slot, f.b.slot}) drop_slot(d, slot);
            erase_edges(s.e1, s.e2);
            break;
        }
        case 3: {  // R5 degree-two bypass
            const auto& rot = d.vertices.at(s.v).rotation;
            int s1 = rot[0], s2 = rot[1];
            Edge e1 = d.edges[s.e1], e2 = d.edges[s.e2];
            auto far = [&](const Edge& e, int near1, int near2) {
                if (!e.a.is_boundary() && (e.a.slot == near1 || e.a.slot == near2)) return e.b;
                return e.a;
            };
            End x = far(e1, s1, s2), y = far(e2, s1, s2);
            step = {"R5", "bypass vertex " + std::to_string(s.v), 0};
            erase_edges(s.e1, s.e2);
            d.edges.push_back({x, y});
            d.remove_vertex(s.v);
            break;
        }
        case 4: {  // R6 bare loop
            step = {"R6", "bare loop", 2};
            d.bare_loops -= 1;
            break;
        }
        case 5: {  // R4 isolated vertex
            step = {"R4", "isolated vertex " + std::to_string(s.v), 2};
            d.remove_vertex(s.v);
            break;
        }
        default:
            throw std::logic_error("unknown rewrite site");
    }
    d.prefactor.half_exp += step.half_exp_delta;
    return step;
}

}  // namespace rw_detail

inline long rewrite_measure(const Diagram& d) {
    return 2 * static_cast<long>(d.edges.size()) + static_cast<long>(d.vertices.size()) +
           2 * static_cast<long>(d.bare_loops);
}

inline NormalizeResult normalize(Diagram d) {
    NormalizeResult out;
    long guard = rewrite_measure(d) + 1;
    while (guard-- > 0) {
        auto sites = rw_detail::collect_sites(d);
        if (sites.empty()) break;
        const rw_detail::Site* best = &sites[0];
        for (const auto& s : sites)
            if (s.priority < best->priority || (s.priority == best->priority && s.id < best->id))
                best = &s;
        out.steps.push_back(rw_detail::apply_site(d, *best));
    }
    if (guard < 0) throw std::logic_error("rewrite did not terminate within its measure");
    out.diagram = std::move(d);
    return out;
}

// same reduction with rule and site chosen uniformly at random
inline NormalizeResult normalize_random(Diagram d, std::uint64_t seed) {
    NormalizeResult out;
    std::mt19937_64 rng(seed);
    long guard = rewrite_measure(d) + 1;
    while (guard-- > 0) {
        auto sites = rw_detail::collect_sites(d);
        if (sites.empty()) break;
        std::size_t pick = std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng);
        out.steps.push_back(rw_detail::apply_site(d, sites[pick]));
    }
    if (guard < 0) throw std::logic_error("rewrite did not terminate within its measure");
    out.diagram = std::move(d);
    return out;
}

inline bool is_reduced(const Diagram& d) { return rw_detail::collect_sites(d).empty(); }

inline bool is_empty_scalar(const Diagram& d) {
    return d.n_lower == 0 && d.n_upper == 0 && d.vertices.empty() && d.edges.empty() &&
           d.bare_loops == 0;
}

// closed diagrams that reduce all the way down yield an exact scalar
inline std::optional<ExactScalar> evaluate_closed(const Diagram& d, int n) {
    if (d.n_lower != 0 || d.n_upper != 0) return std::nullopt;
    NormalizeResult r = normalize(d);
    if (!is_empty_scalar(r.diagram)) return std::nullopt;
    return r.diagram.prefactor.bind(n);
}

// reduce with shuffled strategies and demand one answer
inline bool confluence_probe(const Diagram& d, int n_seeds, std::uint64_t base_seed = 1) {
    NormalizeResult ref = normalize(d);
    std::string ref_key = canonical_key(ref.diagram);
    for (int s = 0; s < n_seeds; ++s) {
        NormalizeResult alt = normalize_random(d, base_seed + static_cast<std::uint64_t>(s));
        if (canonical_key(alt.diagram) != ref_key) return false;
        if (!(alt.diagram.prefactor == ref.diagram.prefactor)) return false;
        if (alt.diagram.bare_loops != ref.diagram.bare_loops) return false;
    }
    return true;
}

}  // namespace spidercalc
