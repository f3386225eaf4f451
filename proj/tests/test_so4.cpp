#include <catch2/catch_amalgamated.hpp>

#include "spidercalc/so4.hpp"

using namespace spidercalc;

TEST_CASE("the two size-4 matrices are the frozen literals") {
    IntMatrix h = so4_h_matrix();
    CHECK(h == IntMatrix{{1, -1, -1, -1},
                         {-1, 1, -1, -1},
                         {-1, -1, 1, -1},
                         {-1, -1, -1, 1}});
    IntMatrix f = so4_fourier_matrix();
    CHECK(f == IntMatrix{{1, 1, 1, 1},
                         {1, -1, 1, -1},
                         {1, 1, -1, -1},
                         {1, -1, -1, 1}});
    CHECK(f == walsh(2).entries());
    CHECK(is_hadamard(HadamardMatrix(h)));
    CHECK(is_hadamard(HadamardMatrix(f)));
}

TEST_CASE("the twisted crossing has the three frozen entry cases") {
    Tensor t = so4_twisted_crossing();
    for (int i = 0; i < 4; ++i) CHECK(t.value_at({i, i}, {i, i}) == ExactScalar::one());
    CHECK(t.value_at({0, 1}, {1, 0}) == ExactScalar::integer(-1));
    CHECK(t.value_at({2, 3}, {3, 2}) == ExactScalar::integer(-1));
    CHECK(t.value_at({0, 1}, {0, 1}).is_zero());
    CHECK(t.value_at({0, 0}, {1, 1}).is_zero());
    CHECK(t.value_at({0, 1}, {2, 3}).is_zero());
}

TEST_CASE("the all-distinct tensor marks the 24 permutations") {
    Tensor t = so4_distinct_tensor();
    int ones = 0;
    for (const auto& e : t.entries()) {
        CHECK((e == 0 || e == 1));
        if (e == 1) ++ones;
    }
    CHECK(ones == 24);
    CHECK(t.value_at({0, 1}, {2, 3}) == ExactScalar::one());
    CHECK(t.value_at({3, 1}, {2, 0}) == ExactScalar::one());
    CHECK(t.value_at({0, 1}, {2, 2}).is_zero());
    CHECK(t.value_at({0, 1}, {0, 3}).is_zero());
}

TEST_CASE("every reconstruction identity holds") {
    So4Report rep = so4_check();
    CHECK(rep.h_hadamard);
    CHECK(rep.f_hadamard);
    CHECK(rep.h_self_inverse);
    CHECK(rep.f_self_inverse);
    CHECK(rep.h_from_diagram);
    CHECK(rep.black_identity);
    CHECK(rep.white_identity);
    CHECK(rep.difference_form);
    CHECK(rep.sum_form);
    CHECK(rep.fourier_spider);
    CHECK(rep.ok());
}

TEST_CASE("the white identity is specific to the diagonal-sign matrix") {
    // the same right-hand side does not describe the Fourier matrix's own
    // white spider
    FibreContext ctx = FibreContext::classical(walsh(2));
    Tensor white4 = spider_tensor(ctx, Color::white, 2, 2);
    Tensor ft = tensor_from_matrix(so4_fourier_matrix());
    ExactScalar quarter = ExactScalar::rational(BigRat(1, 4));
    Tensor ff = tensor_product(ft, ft);
    Tensor ffinv = tensor_product(ft * quarter, ft * quarter);
    Tensor minus = -so4_twisted_crossing() - so4_distinct_tensor() +
                   partition_tensor(SetPartition{2, 2, {{1, 2}, {3, 4}}}, 4) +
                   partition_tensor(SetPartition{2, 2, {{1, 3}, {2, 4}}}, 4);
    CHECK_FALSE(white4 == compose(ff, compose(minus, ffinv)) * quarter);
}
