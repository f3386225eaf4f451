#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "diagram.hpp"
#include "quantum.hpp"

namespace spidercalc {

// Where diagrams get evaluated.  standard(N) interprets black spiders as
// coincidence tensors on N points and has no white spiders; classical(H)
// adds white spiders through a +-1 Hadamard matrix; quantum(X, h) works
// over a finite quantum space with an optional quantum Hadamard map.
struct FibreContext {
    enum class Kind { standard_basis, classical_hadamard, quantum_space };

    Kind kind = Kind::standard_basis;
    QuantumSpace space;
    IntMatrix matrix;  // classical Hadamard entries (white-spider datum)
    Tensor hadamard;   // quantum Hadamard map (white-spider datum)
    bool has_hadamard = false;

    int dim() const { return space.dim(); }
    int loop_value() const { return space.delta_sq(); }

    static FibreContext standard(int n) {
        if (n < 1) throw std::invalid_argument("FibreContext: need n >= 1");
        FibreContext c;
        c.kind = Kind::standard_basis;
        c.space = QuantumSpace::classical(n);
        return c;
    }

    static FibreContext classical(const HadamardMatrix& h) {
        FibreContext c;
        c.kind = Kind::classical_hadamard;
        c.space = QuantumSpace::classical(h.size());
        c.matrix = h.entries();
        c.has_hadamard = true;
        return c;
    }

    static FibreContext quantum(const QuantumSpace& qs) {
        FibreContext c;
        c.kind = Kind::quantum_space;
        c.space = qs;
        return c;
    }

    static FibreContext quantum(const QuantumSpace& qs, const Tensor& h) {
        if (h.n_lower() != 1 || h.n_upper() != 1 || h.dim() != qs.dim())
            throw std::invalid_argument("FibreContext: Hadamard map must be (1,1) on the space");
        FibreContext c;
        c.kind = Kind::quantum_space;
        c.space = qs;
        c.hadamard = h;
        c.has_hadamard = true;
        return c;
    }
};

inline Tensor tensor_power(const Tensor& t, int n) {
    Tensor r(0, 0, t.dim());
    r.entries()[0] = 1;
    for (int i = 0; i < n; ++i) r = tensor_product(r, t);
    return r;
}

// The image of a single spider.  Black spiders never need the Hadamard
// datum.  White spiders carry the factor 1/sqrt(N) per leg: classically
// the entries are sum_j prod_legs H[i_leg][j]; over a quantum space the
// black spider is conjugated by the Hadamard map leg by leg.
inline Tensor spider_tensor(const FibreContext& ctx, Color color, int k, int l) {
    if (k < 0 || l < 0) throw std::invalid_argument("spider_tensor: negative arity");
    if (color == Color::black) return black_spider_tensor(ctx.space, k, l);
    if (!ctx.has_hadamard)
        throw std::invalid_argument("spider_tensor: white spider needs a Hadamard datum");
    if (ctx.kind == FibreContext::Kind::classical_hadamard) {
        const int n = ctx.dim();
        Tensor t(k, l, n, ExactScalar::half_power(n, -(k + l)));
        const int legs = k + l;
        if (legs == 0) {
            t.entries()[0] = n;
            return t;
        }
        std::vector<int> v(legs, 0);
        const std::size_t total = t.size();
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t rest = idx;
            for (int a = legs - 1; a >= 0; --a) {
                v[a] = static_cast<int>(rest % n);
                rest /= n;
            }
            BigInt acc = 0;
            for (int j = 0; j < n; ++j) {
                long prod = 1;
                for (int a = 0; a < legs; ++a) prod *= ctx.matrix[v[a]][j];
                acc += prod;
            }
            t.entries()[idx] = acc;
        }
        return t;
    }
    // quantum: (delta^-1 h^dag) on every output, (delta^-1 h) on every input
    Tensor black = black_spider_tensor(ctx.space, k, l);
    Tensor conj = compose(tensor_power(dagger(ctx.hadamard), l),
                          compose(black, tensor_power(ctx.hadamard, k)));
    return conj * ExactScalar::half_power(ctx.space.delta_sq(), -(k + l));
}

namespace fibre_detail {

// A tensor with one integer label per leg; entry layout follows the label
// order (big-endian, first label most significant).
struct Labeled {
    Tensor t;  // stored with n_upper = label count, n_lower = 0
    std::vector<int> labels;
};

inline Labeled as_labeled(const Tensor& t, std::vector<int> labels) {
    Labeled f;
    f.t = Tensor(0, static_cast<int>(labels.size()), t.dim(), t.scale());
    f.t.entries() = t.entries();
    f.labels = std::move(labels);
    if (f.t.size() != t.size()) throw std::logic_error("as_labeled: label arity mismatch");
    return f;
}

inline std::vector<int> decode(std::size_t idx, int legs, int d) {
    std::vector<int> v(legs);
    for (int a = legs - 1; a >= 0; --a) {
        v[a] = static_cast<int>(idx % d);
        idx /= d;
    }
    return v;
}

// Sum out any label appearing twice within the same factor.
inline void self_trace(Labeled& f) {
    for (;;) {
        int p1 = -1, p2 = -1;
        const int legs = static_cast<int>(f.labels.size());
        for (int a = 0; a < legs && p1 < 0; ++a)
            for (int b = a + 1; b < legs; ++b)
                if (f.labels[a] == f.labels[b]) {
                    p1 = a;
                    p2 = b;
                    break;
                }
        if (p1 < 0) return;
        const int d = f.t.dim();
        std::vector<int> keep_labels;
        for (int a = 0; a < legs; ++a)
            if (a != p1 && a != p2) keep_labels.push_back(f.labels[a]);
        Tensor r(0, legs - 2, d, f.t.scale());
        for (std::size_t idx = 0; idx < f.t.size(); ++idx) {
            if (f.t.entries()[idx] == 0) continue;
            std::vector<int> v = decode(idx, legs, d);
            if (v[p1] != v[p2]) continue;
            std::size_t out = 0;
            for (int a = 0; a < legs; ++a)
                if (a != p1 && a != p2) out = out * d + v[a];
            r.entries()[out] += f.t.entries()[idx];
        }
        f.t = std::move(r);
        f.labels = std::move(keep_labels);
    }
}

inline Labeled contract_pair(const Labeled& a, const Labeled& b) {
    const int d = a.t.dim();
    if (d != b.t.dim()) throw std::invalid_argument("contract: dimension mismatch");
    const int la = static_cast<int>(a.labels.size()), lb = static_cast<int>(b.labels.size());
    std::vector<int> pa, fa, pb, fb;  // shared / free leg positions
    for (int i = 0; i < la; ++i) {
        bool shared = std::find(b.labels.begin(), b.labels.end(), a.labels[i]) != b.labels.end();
        (shared ? pa : fa).push_back(i);
    }
    for (int j = 0; j < lb; ++j) {
        bool shared = std::find(a.labels.begin(), a.labels.end(), b.labels[j]) != a.labels.end();
        (shared ? pb : fb).push_back(j);
    }
    // align b's shared positions with a's shared label order
    std::vector<int> pb_aligned;
    pb_aligned.reserve(pa.size());
    for (int i : pa) {
        auto it = std::find(b.labels.begin(), b.labels.end(), a.labels[i]);
        pb_aligned.push_back(static_cast<int>(it - b.labels.begin()));
    }
    std::vector<int> out_labels;
    for (int i : fa) out_labels.push_back(a.labels[i]);
    for (int j : fb) out_labels.push_back(b.labels[j]);

    Labeled r;
    r.labels = out_labels;
    r.t = Tensor(0, static_cast<int>(out_labels.size()), d, a.t.scale() * b.t.scale());

    std::size_t fb_block = 1;
    for (std::size_t i = 0; i < fb.size(); ++i) fb_block *= static_cast<std::size_t>(d);

    // bucket b's nonzero entries by shared key
    std::map<std::size_t, std::vector<std::pair<std::size_t, const BigInt*>>> buckets;
    for (std::size_t idx = 0; idx < b.t.size(); ++idx) {
        if (b.t.entries()[idx] == 0) continue;
        std::vector<int> v = decode(idx, lb, d);
        std::size_t key = 0;
        for (int j : pb_aligned) key = key * d + v[j];
        std::size_t free_ix = 0;
        for (int j : fb) free_ix = free_ix * d + v[j];
        buckets[key].push_back({free_ix, &b.t.entries()[idx]});
    }
    for (std::size_t idx = 0; idx < a.t.size(); ++idx) {
        if (a.t.entries()[idx] == 0) continue;
        std::vector<int> v = decode(idx, la, d);
        std::size_t key = 0;
        for (int i : pa) key = key * d + v[i];
        auto it = buckets.find(key);
        if (it == buckets.end()) continue;
        std::size_t free_a = 0;
        for (int i : fa) free_a = free_a * d + v[i];
        const BigInt& va = a.t.entries()[idx];
        for (const auto& [free_b, vb] : it->second)
            r.t.entries()[free_a * fb_block + free_b] += va * (*vb);
    }
    return r;
}

// Contract factors pairwise (smallest result first) down to one.
inline Labeled contract_all(std::vector<Labeled> factors, int d) {
    for (auto& f : factors) self_trace(f);
    if (factors.empty()) {
        Labeled unit;
        unit.t = Tensor(0, 0, d);
        unit.t.entries()[0] = 1;
        return unit;
    }
    while (factors.size() > 1) {
        std::size_t bi = 0, bj = 1;
        long best = -1;
        for (std::size_t i = 0; i < factors.size(); ++i)
            for (std::size_t j = i + 1; j < factors.size(); ++j) {
                int shared = 0;
                for (int l : factors[i].labels)
                    if (std::find(factors[j].labels.begin(), factors[j].labels.end(), l) !=
                        factors[j].labels.end())
                        ++shared;
                long legs = static_cast<long>(factors[i].labels.size()) +
                            static_cast<long>(factors[j].labels.size()) - 2L * shared;
                long score = shared > 0 ? legs : legs + 1000;  // prefer genuine contractions
                if (best < 0 || score < best) {
                    best = score;
                    bi = i;
                    bj = j;
                }
            }
        Labeled merged = contract_pair(factors[bi], factors[bj]);
        self_trace(merged);
        factors.erase(factors.begin() + static_cast<long>(bj));
        factors.erase(factors.begin() + static_cast<long>(bi));
        factors.push_back(std::move(merged));
    }
    return factors[0];
}

// Rearrange a fully contracted factor into a (k,l) tensor whose entry
// order is upper labels then lower labels.
inline Tensor into_boundary(const Labeled& f, const std::vector<int>& upper_labels,
                            const std::vector<int>& lower_labels, int d) {
    const int l = static_cast<int>(upper_labels.size());
    const int k = static_cast<int>(lower_labels.size());
    if (static_cast<int>(f.labels.size()) != k + l)
        throw std::logic_error("into_boundary: leftover contraction labels");
    std::vector<int> order(k + l);
    std::vector<int> want = upper_labels;
    want.insert(want.end(), lower_labels.begin(), lower_labels.end());
    for (int a = 0; a < k + l; ++a) {
        auto it = std::find(f.labels.begin(), f.labels.end(), want[a]);
        if (it == f.labels.end()) throw std::logic_error("into_boundary: missing boundary label");
        order[a] = static_cast<int>(it - f.labels.begin());
    }
    Tensor r(k, l, d, f.t.scale());
    const int legs = k + l;
    for (std::size_t idx = 0; idx < f.t.size(); ++idx) {
        if (f.t.entries()[idx] == 0) continue;
        std::vector<int> v = decode(idx, legs, d);
        std::size_t out = 0;
        for (int a = 0; a < legs; ++a) out = out * d + v[order[a]];
        r.entries()[out] = f.t.entries()[idx];
    }
    return r;
}

struct UnionFind {
    std::vector<int> parent;
    int make() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Split a vertex rotation into the lower block and the upper block of the
// generator pattern (L1..Lk, Ul..U1), up to a cyclic shift.  Returns false
// when the roles do not form two contiguous blocks.
inline bool rotation_blocks(const Diagram& d, int vertex, std::vector<int>& lowers,
                            std::vector<int>& uppers) {
    const auto& rot = d.vertices.at(vertex).rotation;
    const int deg = static_cast<int>(rot.size());
    lowers.clear();
    uppers.clear();
    if (deg == 0) return true;
    auto role_at = [&](int pos) { return d.slots.at(rot[pos]).role; };
    int k = 0;
    for (int pos = 0; pos < deg; ++pos)
        if (role_at(pos) == Role::lower) ++k;
    const int l = deg - k;
    for (int shift = 0; shift < deg; ++shift) {
        bool ok = true;
        for (int a = 0; a < k && ok; ++a) ok = role_at((shift + a) % deg) == Role::lower;
        if (!ok) continue;
        for (int a = 0; a < k; ++a) lowers.push_back(rot[(shift + a) % deg]);
        // rotation stores U_l .. U_1 after the lower block
        for (int j = 1; j <= l; ++j) uppers.push_back(rot[(shift + k + l - j) % deg]);
        return true;
    }
    return false;
}

}  // namespace fibre_detail

// Contract the diagram to its boundary tensor.  Vertex legs follow the
// rotation; an edge between two in-facing ports (vertex inputs, upper
// boundary) picks up the duality cup, two out-facing ports the cap.  Over
// classical spaces the cup is the plain coincidence pairing, so only the
// wiring matters there.
inline Tensor evaluate(const Diagram& d, const FibreContext& ctx) {
    validate(d);
    const int dim = ctx.dim();
    const int loop = ctx.loop_value();

    ExactScalar scalar = d.prefactor.bind(loop);
    for (int i = 0; i < d.bare_loops; ++i) scalar = scalar * ExactScalar::integer(loop);

    fibre_detail::UnionFind uf;
    std::map<int, int> slot_label;           // slot id -> label
    std::vector<int> lower_label(d.n_lower); // boundary labels
    std::vector<int> upper_label(d.n_upper);
    for (int i = 0; i < d.n_lower; ++i) lower_label[i] = uf.make();
    for (int j = 0; j < d.n_upper; ++j) upper_label[j] = uf.make();

    std::vector<fibre_detail::Labeled> factors;
    for (const auto& [vid, v] : d.vertices) {
        std::vector<int> lowers, uppers;
        bool blocks = fibre_detail::rotation_blocks(d, vid, lowers, uppers);
        if (!blocks) {
            if (ctx.kind == FibreContext::Kind::quantum_space)
                throw std::invalid_argument("evaluate: vertex legs not blockwise over a quantum space");
            for (int s : v.rotation)
                (d.slots.at(s).role == Role::lower ? lowers : uppers).push_back(s);
        }
        const int k = static_cast<int>(lowers.size());
        const int l = static_cast<int>(uppers.size());
        Tensor tv = spider_tensor(ctx, v.color, k, l);
        if (k + l == 0) {
            scalar = scalar * tv.value_at({}, {});
            continue;
        }
        std::vector<int> labels;
        for (int s : uppers) labels.push_back(slot_label.emplace(s, uf.make()).first->second);
        for (int s : lowers) labels.push_back(slot_label.emplace(s, uf.make()).first->second);
        factors.push_back(fibre_detail::as_labeled(tv, std::move(labels)));
    }

    Tensor cup = black_spider_tensor(ctx.space, 0, 2);
    Tensor cap = black_spider_tensor(ctx.space, 2, 0);
    // facing: vertex lower slots and upper boundary legs consume (in),
    // vertex upper slots and lower boundary legs supply (out)
    auto port = [&](const End& e) -> std::pair<int, bool> {  // (label, in-facing)
        if (e.is_boundary()) {
            if (e.boundary_upper) return {upper_label[e.index - 1], true};
            return {lower_label[e.index - 1], false};
        }
        const SlotInfo& si = d.slots.at(e.slot);
        return {slot_label.at(e.slot), si.role == Role::lower};
    };
    for (const auto& e : d.edges) {
        auto [la, ina] = port(e.a);
        auto [lb, inb] = port(e.b);
        if (ina != inb) {
            if (e.a.is_boundary() && e.b.is_boundary()) {
                // straight wire between the two boundaries
                Tensor id1 = Tensor::identity(1, dim);
                int up = ina ? la : lb, down = ina ? lb : la;
                factors.push_back(fibre_detail::as_labeled(id1, {up, down}));
            } else {
                uf.unite(la, lb);
            }
        } else {
            const Tensor& conn = ina ? cup : cap;
            factors.push_back(fibre_detail::as_labeled(conn, {la, lb}));
        }
    }

    for (auto& f : factors)
        for (auto& l : f.labels) l = uf.find(l);
    std::vector<int> out_upper, out_lower;
    for (int j = 0; j < d.n_upper; ++j) out_upper.push_back(uf.find(upper_label[j]));
    for (int i = 0; i < d.n_lower; ++i) out_lower.push_back(uf.find(lower_label[i]));

    fibre_detail::Labeled whole = fibre_detail::contract_all(std::move(factors), dim);
    Tensor r = fibre_detail::into_boundary(whole, out_upper, out_lower, dim);
    return r * scalar;
}

// Hilbert-Schmidt Gram matrix and determinant.
inline std::vector<std::vector<ExactScalar>> gram_matrix(const std::vector<Tensor>& ts) {
    for (const auto& t : ts)
        if (t.n_lower() != ts[0].n_lower() || t.n_upper() != ts[0].n_upper() ||
            t.dim() != ts[0].dim())
            throw std::invalid_argument("gram_matrix: slot mismatch");
    std::vector<std::vector<ExactScalar>> g(ts.size(), std::vector<ExactScalar>(ts.size()));
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < ts.size(); ++j) g[i][j] = inner_product(ts[i], ts[j]);
    return g;
}

inline ExactScalar gram_det(const std::vector<Tensor>& ts) { return determinant(gram_matrix(ts)); }

// The five (2,2) maps whose Gram determinant witnesses their independence:
// the two pairings, both spiders, and the crossing.
inline std::vector<Tensor> five_element_basis(const FibreContext& ctx) {
    int n = ctx.dim();
    return {partition_tensor(SetPartition{2, 2, {{1, 2}, {3, 4}}}, n),
            partition_tensor(SetPartition{2, 2, {{1, 3}, {2, 4}}}, n),
            spider_tensor(ctx, Color::black, 2, 2),
            spider_tensor(ctx, Color::white, 2, 2),
            partition_tensor(SetPartition{2, 2, {{1, 4}, {2, 3}}}, n)};
}

// Boundary-leg rotations through the duality cup/cap.
inline Tensor rotate_up_left(const FibreContext& ctx, const Tensor& t) {
    if (t.n_lower() < 1) throw std::invalid_argument("rotate_up_left: no lower leg");
    const int d = ctx.dim();
    std::vector<int> labels;
    int next = 0;
    std::vector<int> uppers, lowers;
    for (int j = 0; j < t.n_upper(); ++j) uppers.push_back(next++);
    for (int i = 0; i < t.n_lower(); ++i) lowers.push_back(next++);
    int fresh = next++;
    std::vector<fibre_detail::Labeled> fs;
    std::vector<int> tl = uppers;
    tl.insert(tl.end(), lowers.begin(), lowers.end());
    fs.push_back(fibre_detail::as_labeled(t, tl));
    fs.push_back(fibre_detail::as_labeled(black_spider_tensor(ctx.space, 0, 2), {fresh, lowers[0]}));
    std::vector<int> out_upper = {fresh};
    out_upper.insert(out_upper.end(), uppers.begin(), uppers.end());
    std::vector<int> out_lower(lowers.begin() + 1, lowers.end());
    return fibre_detail::into_boundary(fibre_detail::contract_all(std::move(fs), d), out_upper,
                                       out_lower, d);
}

inline Tensor rotate_down_left(const FibreContext& ctx, const Tensor& t) {
    if (t.n_upper() < 1) throw std::invalid_argument("rotate_down_left: no upper leg");
    const int d = ctx.dim();
    int next = 0;
    std::vector<int> uppers, lowers;
    for (int j = 0; j < t.n_upper(); ++j) uppers.push_back(next++);
    for (int i = 0; i < t.n_lower(); ++i) lowers.push_back(next++);
    int fresh = next++;
    std::vector<fibre_detail::Labeled> fs;
    std::vector<int> tl = uppers;
    tl.insert(tl.end(), lowers.begin(), lowers.end());
    fs.push_back(fibre_detail::as_labeled(t, tl));
    fs.push_back(fibre_detail::as_labeled(black_spider_tensor(ctx.space, 2, 0), {fresh, uppers[0]}));
    std::vector<int> out_upper(uppers.begin() + 1, uppers.end());
    std::vector<int> out_lower = {fresh};
    out_lower.insert(out_lower.end(), lowers.begin(), lowers.end());
    return fibre_detail::into_boundary(fibre_detail::contract_all(std::move(fs), d), out_upper,
                                       out_lower, d);
}

inline Tensor rotate_up_right(const FibreContext& ctx, const Tensor& t) {
    if (t.n_lower() < 1) throw std::invalid_argument("rotate_up_right: no lower leg");
    const int d = ctx.dim();
    int next = 0;
    std::vector<int> uppers, lowers;
    for (int j = 0; j < t.n_upper(); ++j) uppers.push_back(next++);
    for (int i = 0; i < t.n_lower(); ++i) lowers.push_back(next++);
    int fresh = next++;
    std::vector<fibre_detail::Labeled> fs;
    std::vector<int> tl = uppers;
    tl.insert(tl.end(), lowers.begin(), lowers.end());
    fs.push_back(fibre_detail::as_labeled(t, tl));
    fs.push_back(
        fibre_detail::as_labeled(black_spider_tensor(ctx.space, 0, 2), {lowers.back(), fresh}));
    std::vector<int> out_upper = uppers;
    out_upper.push_back(fresh);
    std::vector<int> out_lower(lowers.begin(), lowers.end() - 1);
    return fibre_detail::into_boundary(fibre_detail::contract_all(std::move(fs), d), out_upper,
                                       out_lower, d);
}

inline Tensor rotate_down_right(const FibreContext& ctx, const Tensor& t) {
    if (t.n_upper() < 1) throw std::invalid_argument("rotate_down_right: no upper leg");
    const int d = ctx.dim();
    int next = 0;
    std::vector<int> uppers, lowers;
    for (int j = 0; j < t.n_upper(); ++j) uppers.push_back(next++);
    for (int i = 0; i < t.n_lower(); ++i) lowers.push_back(next++);
    int fresh = next++;
    std::vector<fibre_detail::Labeled> fs;
    std::vector<int> tl = uppers;
    tl.insert(tl.end(), lowers.begin(), lowers.end());
    fs.push_back(fibre_detail::as_labeled(t, tl));
    fs.push_back(
        fibre_detail::as_labeled(black_spider_tensor(ctx.space, 2, 0), {uppers.back(), fresh}));
    std::vector<int> out_upper(uppers.begin(), uppers.end() - 1);
    std::vector<int> out_lower = lowers;
    out_lower.push_back(fresh);
    return fibre_detail::into_boundary(fibre_detail::contract_all(std::move(fs), d), out_upper,
                                       out_lower, d);
}

// Left transposition: all inputs bent up on the left, all outputs bent
// down on the right.  Involutive because the duality cup is symmetric.
inline Tensor transpose_tensor(const FibreContext& ctx, const Tensor& t) {
    Tensor r = t;
    const int k = t.n_lower(), l = t.n_upper();
    for (int i = 0; i < k; ++i) r = rotate_up_left(ctx, r);
    for (int j = 0; j < l; ++j) r = rotate_down_right(ctx, r);
    return r;
}

// Categorical trace of a square slot: i-th input joined with i-th output.
inline ExactScalar trace_tensor(const FibreContext& ctx, const Tensor& t) {
    if (t.n_lower() != t.n_upper()) throw std::invalid_argument("trace_tensor: slot not square");
    const int d = ctx.dim();
    std::vector<int> labels;
    for (int j = 0; j < t.n_upper(); ++j) labels.push_back(j);
    for (int i = 0; i < t.n_lower(); ++i) labels.push_back(i);
    std::vector<fibre_detail::Labeled> fs;
    fs.push_back(fibre_detail::as_labeled(t, labels));
    fibre_detail::Labeled r = fibre_detail::contract_all(std::move(fs), d);
    return r.t.scale() * ExactScalar::rational(BigRat(r.t.entries()[0]));
}

// Close the generator images under dagger, boundary rotations, tensoring
// with the identity strand and pairwise composition, tracking an exact
// basis per slot with fraction-free elimination.  Returns the rank and the
// retained basis at the requested slot.
struct SpanResult {
    int rank = 0;
    std::vector<Tensor> basis;
};

inline SpanResult span_saturate(const FibreContext& ctx, const std::vector<Diagram>& generators,
                                std::pair<int, int> slot, int leg_bound) {
    if (slot.first + slot.second > leg_bound)
        throw std::invalid_argument("span_saturate: slot exceeds leg bound");
    struct SlotData {
        IntEchelon ech;
        std::vector<Tensor> basis;
        std::unordered_set<std::string> seen;
    };
    std::map<std::pair<int, int>, SlotData> slots;
    std::vector<std::pair<std::pair<int, int>, Tensor>> work;

    auto offer = [&](const Tensor& t) {
        if (t.n_lower() + t.n_upper() > leg_bound) return;
        Tensor c = t.canonical();
        if (c.is_zero()) return;
        std::pair<int, int> key{c.n_lower(), c.n_upper()};
        SlotData& sd = slots[key];
        std::string fp;
        fp.reserve(c.size() * 3);
        for (const auto& e : c.entries()) {
            fp += e.str();
            fp += ',';
        }
        if (!sd.seen.insert(fp).second) return;
        if (!sd.ech.insert(c.entries())) return;
        sd.basis.push_back(c);
        work.push_back({key, c});
    };

    for (const auto& g : generators) offer(evaluate(g, ctx));

    Tensor id1 = Tensor::identity(1, ctx.dim());
    std::size_t processed = 0;
    while (processed < work.size()) {
        auto [key, t] = work[processed++];
        if (processed > 4000) throw std::logic_error("span_saturate: runaway closure");
        offer(dagger(t));
        if (t.n_lower() >= 1) {
            offer(rotate_up_left(ctx, t));
            offer(rotate_up_right(ctx, t));
        }
        if (t.n_upper() >= 1) {
            offer(rotate_down_left(ctx, t));
            offer(rotate_down_right(ctx, t));
        }
        if (key.first + key.second + 2 <= leg_bound) {
            offer(tensor_product(t, id1));
            offer(tensor_product(id1, t));
        }
        // compose with every retained basis element, both ways; snapshot
        // first because offers grow the slot map
        std::vector<Tensor> partners;
        for (const auto& [okey, sd] : slots)
            for (const Tensor& b : sd.basis)
                if (b.n_upper() == t.n_lower() || b.n_lower() == t.n_upper())
                    partners.push_back(b);
        for (const Tensor& b : partners) {
            if (t.n_lower() == b.n_upper() && b.n_lower() + t.n_upper() <= leg_bound)
                offer(compose(t, b));
            if (b.n_lower() == t.n_upper() && t.n_lower() + b.n_upper() <= leg_bound)
                offer(compose(b, t));
        }
    }

    SpanResult r;
    auto it = slots.find(slot);
    if (it != slots.end()) {
        r.rank = static_cast<int>(it->second.ech.rank());
        r.basis = it->second.basis;
    }
    return r;
}

}  // namespace spidercalc
