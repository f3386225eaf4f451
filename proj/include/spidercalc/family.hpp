#pragma once

// Saturated families of reduced diagrams. Starting from the two four-legged
// spiders and the cap, closing under dagger, boundary bends, tensoring and
// composition produces every reduced diagram within the size caps. The slot
// counts recover squared Catalan numbers, and pairing kets against each other
// yields a large pool of closed diagrams for invariance sweeps.

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "diagram.hpp"
#include "rewrite.hpp"

namespace spidercalc {

// last lower leg swings up to become the rightmost upper leg
inline Diagram bend_up_right(const Diagram& d) {
    if (d.n_lower < 1) throw std::invalid_argument("no lower leg to bend");
    return compose(tensor_product(d, Diagram::identity(1)),
                   tensor_product(Diagram::identity(d.n_lower - 1), Diagram::cup()));
}

// last upper leg swings down to become the rightmost lower leg
inline Diagram bend_down_right(const Diagram& d) {
    if (d.n_upper < 1) throw std::invalid_argument("no upper leg to bend");
    return compose(tensor_product(Diagram::identity(d.n_upper - 1), Diagram::cap()),
                   tensor_product(d, Diagram::identity(1)));
}

// first lower leg swings up to become the leftmost upper leg
inline Diagram bend_up_left(const Diagram& d) {
    if (d.n_lower < 1) throw std::invalid_argument("no lower leg to bend");
    return compose(tensor_product(Diagram::identity(1), d),
                   tensor_product(Diagram::cup(), Diagram::identity(d.n_lower - 1)));
}

// first upper leg swings down to become the leftmost lower leg
inline Diagram bend_down_left(const Diagram& d) {
    if (d.n_upper < 1) throw std::invalid_argument("no upper leg to bend");
    return compose(tensor_product(Diagram::cap(), Diagram::identity(d.n_upper - 1)),
                   tensor_product(Diagram::identity(1), d));
}

struct FamilyCaps {
    int max_legs = 6;
    int max_edges = 9;
    int max_vertices = 4;
};

// drop the scalar bookkeeping so diagrams compare purely by shape
inline Diagram strip_scale(Diagram d) {
    d.prefactor = Prefactor{};
    d.bare_loops = 0;
    return d;
}

inline bool within_caps(const Diagram& d, const FamilyCaps& caps) {
    return d.n_lower + d.n_upper <= caps.max_legs &&
           static_cast<int>(d.edges.size()) <= caps.max_edges &&
           static_cast<int>(d.vertices.size()) <= caps.max_vertices;
}

// worklist closure over reduced representatives inside the caps
inline std::vector<Diagram> reduced_families(const FamilyCaps& caps = FamilyCaps{}) {
    std::vector<Diagram> pool;
    std::vector<Diagram> work;
    std::set<std::string> seen;
    auto offer = [&](const Diagram& cand) {
        Diagram r = strip_scale(normalize(cand).diagram);
        if (!within_caps(r, caps)) return;
        if (!seen.insert(canonical_key(r)).second) return;
        pool.push_back(r);
        work.push_back(r);
    };
    offer(Diagram::black_spider(2, 2));
    offer(Diagram::white_spider(2, 2));
    offer(Diagram::cap());
    std::size_t processed = 0;
    while (!work.empty()) {
        if (++processed > 20000) throw std::logic_error("family saturation runaway");
        Diagram d = work.back();
        work.pop_back();
        offer(dagger(d));
        if (d.n_lower >= 1) {
            offer(bend_up_right(d));
            offer(bend_up_left(d));
        }
        if (d.n_upper >= 1) {
            offer(bend_down_right(d));
            offer(bend_down_left(d));
        }
        offer(tensor_product(d, Diagram::identity(1)));
        offer(tensor_product(Diagram::identity(1), d));
        std::vector<Diagram> partners = pool;  // offer() grows the pool while we loop
        for (const auto& p : partners) {
            offer(tensor_product(d, p));
            offer(tensor_product(p, d));
            if (p.n_upper == d.n_lower) offer(compose(d, p));
            if (d.n_upper == p.n_lower) offer(compose(p, d));
        }
    }
    return pool;
}

inline std::vector<Diagram> family_slot(const std::vector<Diagram>& fam, int k, int l) {
    std::vector<Diagram> out;
    for (const auto& d : fam)
        if (d.n_lower == k && d.n_upper == l) out.push_back(d);
    return out;
}

// closed diagrams built from a reduced family: ket pairs <p|q>, sandwiches
// <p|m|q> through endomorphisms, and disjoint unions of two closed pieces,
// deduplicated up to isomorphism
inline std::vector<Diagram> closed_pair_family(const std::vector<Diagram>& fam, int max_edges) {
    std::vector<Diagram> out;
    std::set<std::string> seen;
    auto offer = [&](const Diagram& d) {
        if (static_cast<int>(d.edges.size()) > max_edges) return;
        if (seen.insert(canonical_key(d)).second) out.push_back(d);
    };
    std::vector<Diagram> kets;
    for (const auto& d : fam)
        if (d.n_lower == 0) kets.push_back(d);
    for (const auto& p : kets)
        for (const auto& q : kets) {
            if (q.n_upper != p.n_upper) continue;
            Diagram bra = dagger(p);
            offer(compose(bra, q));
            for (const auto& m : fam)
                if (m.n_lower == p.n_upper && m.n_upper == p.n_upper && !m.edges.empty())
                    offer(compose(bra, compose(m, q)));
        }
    std::vector<Diagram> singles = out;
    for (std::size_t i = 0; i < singles.size(); ++i)
        for (std::size_t j = i; j < singles.size(); ++j)
            offer(tensor_product(singles[i], singles[j]));
    return out;
}

// random closed diagram with every spider of even total degree: a seed row of
// kets, a few layers of blocks, then caps close everything off
inline Diagram random_even_closed_diagram(std::mt19937_64& rng, int mid_layers) {
    auto pick_block = [&](int need) -> Diagram {
        std::uniform_int_distribution<int> die(0, 9);
        while (true) {
            switch (die(rng)) {
                case 0: return Diagram::identity(1);
                case 1: return Diagram::black_spider(1, 1);
                case 2: return Diagram::white_spider(1, 1);
                case 3:
                    if (need >= 2) return Diagram::black_spider(2, 2);
                    break;
                case 4:
                    if (need >= 2) return Diagram::white_spider(2, 2);
                    break;
                case 5: return Diagram::cup();
                case 6:
                    if (need >= 2) return Diagram::cap();
                    break;
                case 7: return Diagram::black_spider(0, 2);
                case 8:
                    if (need >= 2) return Diagram::white_spider(2, 0);
                    break;
                case 9:
                    if (need >= 1) return Diagram::black_spider(1, 3);
                    break;
            }
        }
    };
    Diagram d = tensor_product(Diagram::cup(), Diagram::identity(0));
    if (std::uniform_int_distribution<int>(0, 1)(rng))
        d = tensor_product(d, Diagram::white_spider(0, 2));
    for (int layer = 0; layer < mid_layers; ++layer) {
        Diagram lay = Diagram::identity(0);
        int need = d.n_upper;
        while (need > 0) {
            Diagram g = pick_block(need);
            if (g.n_lower > need) continue;
            lay = tensor_product(lay, g);
            need -= g.n_lower;
        }
        d = compose(lay, d);
    }
    while (d.n_upper > 0) {
        Diagram lay = Diagram::identity(0);
        int w = d.n_upper;
        while (w >= 2) {
            lay = tensor_product(lay, Diagram::cap());
            w -= 2;
        }
        if (w == 1) lay = tensor_product(lay, Diagram::black_spider(1, 1));
        if (lay.n_lower != d.n_upper) continue;
        d = compose(lay, d);
    }
    return d;
}

}  // namespace spidercalc
