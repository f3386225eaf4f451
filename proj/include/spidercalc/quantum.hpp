#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "hadamard.hpp"
#include "tensor.hpp"

namespace spidercalc {

// Finite quantum space carrying a tracial delta-form: `blocks` copies of
// the m x m matrix algebra, all blocks the same size.  l2(X) has dimension
// blocks * m^2; the closed-loop value is delta^2 = dim.  Basis vectors are
// the rescaled matrix units, indexed (block, row, col) and packed
// block-major, so block_size = 1 is the classical space of `blocks` points.
struct QuantumSpace {
    int blocks = 1;
    int block_size = 1;

    int dim() const { return blocks * block_size * block_size; }
    int delta_sq() const { return dim(); }
    bool classical_points() const { return block_size == 1; }

    int pack(int b, int i, int j) const { return (b * block_size + i) * block_size + j; }
    int block_of(int t) const { return t / (block_size * block_size); }
    int row_of(int t) const { return (t / block_size) % block_size; }
    int col_of(int t) const { return t % block_size; }

    static QuantumSpace classical(int n) { return QuantumSpace{n, 1}; }
    static QuantumSpace matrix_block(int m) { return QuantumSpace{1, m}; }

    bool operator==(const QuantumSpace& o) const {
        return blocks == o.blocks && block_size == o.block_size;
    }
};

// Spider with k inputs and l outputs built from the multiplication of X:
// iterated product followed by the iterated coproduct.  In the scaled
// matrix unit basis the entry at lower legs (b_t, i_t, j_t) and upper legs
// (c_t, p_t, q_t) is 1 exactly when every leg sits in one common block,
// the indices chain within each row (j_t = i_{t+1} and q_t = p_{t+1}) and
// the two chains share both endpoints; everything carries a global factor
// sqrt(m)^(2-k-l).  With block_size = 1 this is the plain coincidence
// tensor on `blocks` points; the normalization makes the product map an
// isometry after its adjoint (special Frobenius) and the loop delta^2.
inline Tensor black_spider_tensor(const QuantumSpace& qs, int k, int l) {
    if (k < 0 || l < 0) throw std::invalid_argument("black_spider_tensor: negative arity");
    const int d = qs.dim();
    const int m = qs.block_size;
    Tensor t(k, l, d, ExactScalar::half_power(m, 2 - k - l));
    if (k == 0 && l == 0) {
        t.entries()[0] = BigInt(qs.blocks) * m;
        return t;
    }
    const int legs = k + l;
    std::vector<int> v(legs, 0);  // U1..Ul then L1..Lk, matching entry layout
    const std::size_t total = t.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int a = legs - 1; a >= 0; --a) {
            v[a] = static_cast<int>(rest % d);
            rest /= d;
        }
        const int* u = v.data();      // l upper legs
        const int* w = v.data() + l;  // k lower legs
        bool ok = true;
        int b = qs.block_of(v[0]);
        for (int a = 1; a < legs && ok; ++a) ok = qs.block_of(v[a]) == b;
        for (int a = 0; a + 1 < k && ok; ++a) ok = qs.col_of(w[a]) == qs.row_of(w[a + 1]);
        for (int a = 0; a + 1 < l && ok; ++a) ok = qs.col_of(u[a]) == qs.row_of(u[a + 1]);
        if (ok) {
            if (k > 0 && l > 0)
                ok = qs.row_of(w[0]) == qs.row_of(u[0]) && qs.col_of(w[k - 1]) == qs.col_of(u[l - 1]);
            else if (k == 0)
                ok = qs.row_of(u[0]) == qs.col_of(u[l - 1]);
            else
                ok = qs.row_of(w[0]) == qs.col_of(w[k - 1]);
        }
        if (ok) t.entries()[idx] = 1;
    }
    return t;
}

inline Tensor identity_map(const QuantumSpace& qs) { return Tensor::identity(1, qs.dim()); }

// Schur-product unit eta eta^dagger; the all-ones map when block_size = 1.
inline Tensor all_ones_map(const QuantumSpace& qs) {
    Tensor eta = black_spider_tensor(qs, 0, 1);
    return compose(eta, dagger(eta));
}

// Schur product of two (1,1)-maps: mult (a (x) b) mult^dagger.  Entrywise
// product when block_size = 1.
inline Tensor schur_product(const QuantumSpace& qs, const Tensor& a, const Tensor& b) {
    if (a.n_lower() != 1 || a.n_upper() != 1 || b.n_lower() != 1 || b.n_upper() != 1 ||
        a.dim() != qs.dim() || b.dim() != qs.dim())
        throw std::invalid_argument("schur_product: need (1,1)-maps on the space");
    Tensor mul = black_spider_tensor(qs, 2, 1);
    return compose(compose(mul, tensor_product(a, b)), dagger(mul));
}

// Transpose through the Frobenius cup/cap pair: (cap (x) id)(id (x) a (x) id)
// (id (x) cup).  Matrix transpose when block_size = 1; equals the adjoint
// exactly when the map is real.
inline Tensor transpose_map(const QuantumSpace& qs, const Tensor& a) {
    if (a.n_lower() != 1 || a.n_upper() != 1 || a.dim() != qs.dim())
        throw std::invalid_argument("transpose_map: need a (1,1)-map on the space");
    Tensor cup = black_spider_tensor(qs, 0, 2);
    Tensor cap = black_spider_tensor(qs, 2, 0);
    Tensor idt = identity_map(qs);
    Tensor mid = tensor_product(tensor_product(idt, a), idt);
    return compose(tensor_product(cap, idt), compose(mid, tensor_product(idt, cup)));
}

// A +-1 matrix as a (1,1)-tensor on the classical space of its size.
inline Tensor tensor_from_matrix(const IntMatrix& m) {
    int n = static_cast<int>(m.size());
    Tensor t(1, 1, n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(m[i].size()) != n)
            throw std::invalid_argument("tensor_from_matrix: matrix not square");
        for (int j = 0; j < n; ++j) t.at({i}, {j}) = m[i][j];
    }
    return t;
}

// Hadamard axioms for a (1,1)-map h on X: unitary up to delta^2, Schur
// square equal to the Schur unit, and transpose equal to adjoint (real
// coefficients).  For block_size = 1 these reduce to the familiar +-1
// entries with orthogonal rows and columns.
struct QuantumHadamardCheck {
    bool unitary = false;
    bool schur_square_unit = false;
    bool real_transposed = false;
    bool ok() const { return unitary && schur_square_unit && real_transposed; }
};

inline QuantumHadamardCheck check_quantum_hadamard(const QuantumSpace& qs, const Tensor& h) {
    QuantumHadamardCheck c;
    Tensor scaled_id = identity_map(qs) * ExactScalar::integer(qs.delta_sq());
    c.unitary = compose(h, dagger(h)) == scaled_id && compose(dagger(h), h) == scaled_id;
    c.schur_square_unit = schur_product(qs, h, h) == all_ones_map(qs);
    c.real_transposed = transpose_map(qs, h) == dagger(h);
    return c;
}

// The rescaled transpose map a -> n a^T on the single block M_n, the
// smallest genuinely quantum Hadamard matrix (n >= 2).
inline Tensor quantum_hadamard_transpose(int n) {
    if (n < 1) throw std::invalid_argument("quantum_hadamard_transpose: need n >= 1");
    QuantumSpace qs = QuantumSpace::matrix_block(n);
    Tensor t(1, 1, qs.dim(), ExactScalar::integer(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.at({qs.pack(0, j, i)}, {qs.pack(0, i, j)}) = 1;
    return t;
}

// Graph attached to a (quantum) Hadamard matrix on X.  The vertex space is
// four copies of X in the order row+, row-, col+, col-; the adjacency map
// has blocks (unit +- h)/2 between row and column copies and their
// adjoints below the diagonal.  `looped` adds the identity on both row
// copies.  For block_size = 1 this reproduces the bipartite +-1-pattern
// graph of the matrix.
struct QuantumGraphData {
    QuantumSpace vertex_space;
    Tensor adjacency;
    bool looped = false;
};

inline QuantumGraphData quantum_graph(const QuantumSpace& qs, const Tensor& h, bool looped) {
    if (h.n_lower() != 1 || h.n_upper() != 1 || h.dim() != qs.dim())
        throw std::invalid_argument("quantum_graph: need a (1,1)-map on the space");
    const int d = qs.dim();
    QuantumGraphData g;
    g.vertex_space = QuantumSpace{4 * qs.blocks, qs.block_size};
    g.looped = looped;
    auto embed = [&](const Tensor& blk, int copy_out, int copy_in) {
        Tensor e(1, 1, 4 * d, blk.scale());
        for (int u = 0; u < d; ++u)
            for (int w = 0; w < d; ++w)
                e.entries()[static_cast<std::size_t>(copy_out * d + u) * (4 * d) + (copy_in * d + w)] =
                    blk.entries()[static_cast<std::size_t>(u) * d + w];
        return e;
    };
    ExactScalar half = ExactScalar::rational(BigRat(1, 2));
    Tensor hp = all_ones_map(qs) * half + h * half;
    Tensor hm = all_ones_map(qs) * half - h * half;
    Tensor a = embed(hp, 0, 2) + embed(hm, 0, 3) + embed(hm, 1, 2) + embed(hp, 1, 3) +
               embed(dagger(hp), 2, 0) + embed(dagger(hm), 2, 1) + embed(dagger(hm), 3, 0) +
               embed(dagger(hp), 3, 1);
    if (looped) {
        Tensor idx = identity_map(qs);
        a = a + embed(idx, 0, 0) + embed(idx, 1, 1);
    }
    g.adjacency = std::move(a);
    return g;
}

// Structural checks for the graph: Schur idempotent, self-adjoint, and the
// diagonal part (Schur product with the identity) empty when unlooped or
// exactly the two row-copy identities when looped.
struct QuantumGraphCheck {
    bool schur_idempotent = false;
    bool self_adjoint = false;
    bool diagonal_part = false;
    bool ok() const { return schur_idempotent && self_adjoint && diagonal_part; }
};

inline QuantumGraphCheck check_quantum_graph(const QuantumGraphData& g) {
    QuantumGraphCheck c;
    const QuantumSpace& y = g.vertex_space;
    c.schur_idempotent = schur_product(y, g.adjacency, g.adjacency) == g.adjacency;
    c.self_adjoint = dagger(g.adjacency) == g.adjacency;
    Tensor diag = schur_product(y, g.adjacency, identity_map(y));
    if (!g.looped) {
        c.diagonal_part = diag.is_zero();
    } else {
        const int d = y.dim();
        Tensor rows(1, 1, d);
        for (int t = 0; t < d / 2; ++t) rows.entries()[static_cast<std::size_t>(t) * d + t] = 1;
        c.diagonal_part = diag == rows;
    }
    return c;
}

}  // namespace spidercalc
