#pragma once

#include <vector>

#include "fibre.hpp"
#include "hadamard.hpp"
#include "partition.hpp"

namespace spidercalc {

// The size-4 reconstruction: with H the +-1 matrix that is +1 exactly on
// the diagonal and F the Fourier matrix of Z_2 x Z_2, the images of the
// four-legged spiders land in the span of five explicit integer tensors.
// Indices 0..3 are read as two-bit vectors; xor is the group operation.

struct So4Report {
    bool h_hadamard = false;
    bool f_hadamard = false;
    bool h_self_inverse = false;  // H == dagger(H), H.H == 4 id
    bool f_self_inverse = false;
    bool h_from_diagram = false;  // H == 2 id - all-ones
    bool black_identity = false;
    bool white_identity = false;
    bool difference_form = false;
    bool sum_form = false;
    bool fourier_spider = false;  // conjugated spiders give 4^(1-l) xor deltas

    bool ok() const {
        return h_hadamard && f_hadamard && h_self_inverse && f_self_inverse &&
               h_from_diagram && black_identity && white_identity && difference_form &&
               sum_form && fourier_spider;
    }
};

inline IntMatrix so4_h_matrix() {
    IntMatrix h(4, std::vector<int>(4, -1));
    for (int i = 0; i < 4; ++i) h[i][i] = 1;
    return h;
}

inline IntMatrix so4_fourier_matrix() {
    IntMatrix f(4, std::vector<int>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int dots = ((i & 1) * (j & 1)) ^ (((i >> 1) & 1) * ((j >> 1) & 1));
            f[i][j] = dots ? -1 : 1;
        }
    return f;
}

// entries 1 exactly when all four indices are pairwise distinct
inline Tensor so4_distinct_tensor() {
    Tensor t(2, 2, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    if (i != j && i != k && i != l && j != k && j != l && k != l)
                        t.at({i, j}, {k, l}) = 1;
    return t;
}

// 2 black4 - crossing: +1 on i=j=k=l, -1 on i=l != j=k
inline Tensor so4_twisted_crossing() {
    QuantumSpace pts = QuantumSpace::classical(4);
    Tensor cross = partition_tensor(SetPartition{2, 2, {{1, 4}, {2, 3}}}, 4);
    return black_spider_tensor(pts, 2, 2) * ExactScalar::integer(2) - cross;
}

inline So4Report so4_check() {
    So4Report rep;
    const IntMatrix hm = so4_h_matrix();
    const IntMatrix fm = so4_fourier_matrix();
    rep.h_hadamard = is_hadamard(HadamardMatrix(hm));
    rep.f_hadamard = is_hadamard(HadamardMatrix(fm)) && fm == walsh(2).entries();

    QuantumSpace pts = QuantumSpace::classical(4);
    Tensor ht = tensor_from_matrix(hm);
    Tensor ft = tensor_from_matrix(fm);
    Tensor id4 = Tensor::identity(1, 4);
    Tensor four_id = id4 * ExactScalar::integer(4);
    rep.h_self_inverse = ht == dagger(ht) && compose(ht, ht) == four_id;
    rep.f_self_inverse = ft == dagger(ft) && compose(ft, ft) == four_id;
    rep.h_from_diagram = ht == id4 * ExactScalar::integer(2) - all_ones_map(pts);

    FibreContext ctx_h = FibreContext::classical(HadamardMatrix(hm));
    Tensor black4 = spider_tensor(ctx_h, Color::black, 2, 2);
    Tensor white4 = spider_tensor(ctx_h, Color::white, 2, 2);

    Tensor paabb = partition_tensor(SetPartition{2, 2, {{1, 2}, {3, 4}}}, 4);
    Tensor pabba = partition_tensor(SetPartition{2, 2, {{1, 3}, {2, 4}}}, 4);
    Tensor phat = so4_distinct_tensor();
    Tensor twisted = so4_twisted_crossing();

    Tensor ff = tensor_product(ft, ft);
    ExactScalar quarter = ExactScalar::rational(BigRat(1, 4));
    Tensor ffinv = tensor_product(ft * quarter, ft * quarter);

    Tensor plus = -twisted + phat + paabb + pabba;
    Tensor minus = -twisted - phat + paabb + pabba;
    rep.black_identity = black4 == compose(ff, compose(plus, ffinv)) * quarter;
    rep.white_identity = white4 == compose(ff, compose(minus, ffinv)) * quarter;

    ExactScalar half = ExactScalar::rational(BigRat(1, 2));
    rep.difference_form =
        compose(ffinv, compose(black4 - white4, ff)) == phat * half;
    rep.sum_form =
        compose(ffinv, compose(black4 + white4, ff)) == (-twisted + paabb + pabba) * half;

    rep.fourier_spider = true;
    Tensor ftinv = ft * quarter;
    for (int k = 0; k <= 4 && rep.fourier_spider; ++k)
        for (int l = 0; k + l <= 4 && rep.fourier_spider; ++l) {
            Tensor lhs = compose(tensor_power(ftinv, l),
                                 compose(black_spider_tensor(pts, k, l), tensor_power(ft, k)));
            Tensor want(k, l, 4, ExactScalar::half_power(4, 2 - 2 * l));
            std::vector<int> v(k + l, 0);
            for (std::size_t idx = 0; idx < want.size(); ++idx) {
                std::size_t rest = idx;
                for (int a = k + l - 1; a >= 0; --a) {
                    v[a] = static_cast<int>(rest % 4);
                    rest /= 4;
                }
                int xu = 0, xw = 0;
                for (int a = 0; a < l; ++a) xu ^= v[a];
                for (int a = l; a < k + l; ++a) xw ^= v[a];
                if (xu == xw) want.entries()[idx] = 1;
            }
            rep.fourier_spider = lhs == want;
        }
    return rep;
}

}  // namespace spidercalc
