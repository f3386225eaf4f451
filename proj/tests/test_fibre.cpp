#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "spidercalc/fibre.hpp"
#include "spidercalc/hadamard.hpp"
#include "spidercalc/partition.hpp"
#include "spidercalc/rewrite.hpp"

using namespace spidercalc;

namespace {

FibreContext walsh_ctx(int k) { return FibreContext::classical(walsh(k)); }

FibreContext m2_ctx() {
    return FibreContext::quantum(QuantumSpace::matrix_block(2), quantum_hadamard_transpose(2));
}

Tensor pairing(const std::vector<std::vector<int>>& blocks, int n) {
    return partition_tensor(SetPartition{2, 2, blocks}, n);
}

// same shape of random closed diagram as the rewrite suite uses
Diagram random_even_closed(std::mt19937_64& rng, int mid_layers) {
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
    Diagram d = Diagram::identity(0);
    d = tensor_product(Diagram::cup(), d);
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

ExactScalar closed_value(const Tensor& t) {
    REQUIRE(t.n_lower() == 0);
    REQUIRE(t.n_upper() == 0);
    return t.value_at({}, {});
}

}  // namespace

TEST_CASE("white spider entries are frozen for the 2x2 Walsh matrix") {
    FibreContext ctx = walsh_ctx(1);
    Tensor w21 = spider_tensor(ctx, Color::white, 2, 1);
    REQUIRE(w21.n_lower() == 2);
    REQUIRE(w21.n_upper() == 1);
    // sum_j H[i][j] H[k][j] H[l][j] / sqrt(2)^3, frozen by hand
    CHECK(w21.value_at({0}, {0, 0}) == ExactScalar::half_power(2, -1));
    CHECK(w21.value_at({1}, {1, 0}) == ExactScalar::half_power(2, -1));
    CHECK(w21.value_at({1}, {0, 1}) == ExactScalar::half_power(2, -1));
    CHECK(w21.value_at({0}, {1, 1}) == ExactScalar::half_power(2, -1));
    CHECK(w21.value_at({0}, {0, 1}).is_zero());
    CHECK(w21.value_at({1}, {1, 1}).is_zero());
    CHECK(w21.value_at({0}, {1, 0}).is_zero());
    CHECK(w21.value_at({1}, {0, 0}).is_zero());

    Tensor w00 = spider_tensor(ctx, Color::white, 0, 0);
    CHECK(closed_value(w00) == ExactScalar::integer(2));
}

TEST_CASE("white spiders factor through the transposed matrix") {
    // white(2,1) == G^-1 . black(2,1) . (G x G) / sqrt(N) with G the
    // transposed Hadamard matrix; for symmetric matrices G is the matrix
    auto factored = [](const HadamardMatrix& h) {
        const int n = h.size();
        IntMatrix gt(n, std::vector<int>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) gt[i][j] = h.at(j, i);
        Tensor g = tensor_from_matrix(gt);
        Tensor ginv = tensor_from_matrix(h.entries()) * ExactScalar::rational(BigRat(1, n));
        QuantumSpace pts = QuantumSpace::classical(n);
        Tensor m = black_spider_tensor(pts, 2, 1);
        Tensor t = compose(ginv, compose(m, tensor_product(g, g)));
        return t * ExactScalar::half_power(n, -1);
    };
    for (const HadamardMatrix& h : {walsh(1), walsh(2), paley_type1(3)}) {
        FibreContext ctx = FibreContext::classical(h);
        CHECK(spider_tensor(ctx, Color::white, 2, 1) == factored(h));
    }
}

TEST_CASE("degenerate white spiders collapse to identity and cup") {
    for (const HadamardMatrix& h : {walsh(1), walsh(2), paley_type1(3)}) {
        FibreContext ctx = FibreContext::classical(h);
        CHECK(spider_tensor(ctx, Color::white, 1, 1) == Tensor::identity(1, h.size()));
        CHECK(spider_tensor(ctx, Color::white, 0, 2) ==
              black_spider_tensor(ctx.space, 0, 2));
        CHECK(spider_tensor(ctx, Color::white, 2, 0) ==
              black_spider_tensor(ctx.space, 2, 0));
    }
    for (int n : {2, 3}) {
        QuantumSpace qs = QuantumSpace::matrix_block(n);
        FibreContext ctx = FibreContext::quantum(qs, quantum_hadamard_transpose(n));
        CHECK(spider_tensor(ctx, Color::white, 1, 1) == Tensor::identity(1, qs.dim()));
        CHECK(spider_tensor(ctx, Color::white, 0, 2) == black_spider_tensor(qs, 0, 2));
        CHECK(spider_tensor(ctx, Color::white, 2, 0) == black_spider_tensor(qs, 2, 0));
    }
}

TEST_CASE("evaluation reproduces the generator tensors") {
    std::vector<FibreContext> ctxs = {FibreContext::standard(3), walsh_ctx(2), m2_ctx()};
    for (const FibreContext& ctx : ctxs) {
        const int d = ctx.dim();
        CHECK(evaluate(Diagram::identity(1), ctx) == Tensor::identity(1, d));
        CHECK(evaluate(Diagram::identity(2), ctx) == Tensor::identity(2, d));
        CHECK(evaluate(Diagram::cup(), ctx) == black_spider_tensor(ctx.space, 0, 2));
        CHECK(evaluate(Diagram::cap(), ctx) == black_spider_tensor(ctx.space, 2, 0));
        for (auto [k, l] : {std::pair{2, 1}, {0, 3}, {2, 2}, {1, 0}}) {
            CHECK(evaluate(Diagram::black_spider(k, l), ctx) ==
                  black_spider_tensor(ctx.space, k, l));
            if (ctx.has_hadamard)
                CHECK(evaluate(Diagram::white_spider(k, l), ctx) ==
                      spider_tensor(ctx, Color::white, k, l));
        }
    }
    // crossing swaps the two strands
    Tensor flip = pairing({{1, 4}, {2, 3}}, 4);
    CHECK(evaluate(Diagram::crossing(), walsh_ctx(2)) == flip);
}

TEST_CASE("evaluation is functorial for composition, tensor and dagger") {
    std::vector<FibreContext> ctxs = {FibreContext::standard(3), walsh_ctx(2), m2_ctx()};
    std::mt19937_64 rng(90125);
    for (const FibreContext& ctx : ctxs) {
        std::vector<Diagram> pool = {Diagram::identity(1), Diagram::cup(), Diagram::cap(),
                                     Diagram::black_spider(1, 1), Diagram::black_spider(2, 1),
                                     Diagram::black_spider(0, 2), Diagram::black_spider(2, 2),
                                     Diagram::black_spider(1, 2)};
        if (ctx.has_hadamard) {
            pool.push_back(Diagram::white_spider(2, 1));
            pool.push_back(Diagram::white_spider(1, 2));
            pool.push_back(Diagram::white_spider(0, 2));
        }
        if (ctx.kind != FibreContext::Kind::quantum_space)
            pool.push_back(Diagram::crossing());
        int done = 0;
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        while (done < 70) {
            const Diagram& f = pool[pick(rng)];
            const Diagram& g = pool[pick(rng)];
            if (f.n_lower + g.n_upper + f.n_upper + g.n_lower > 7) continue;
            Tensor ft = evaluate(f, ctx), gt = evaluate(g, ctx);
            if (f.n_lower == g.n_upper)
                CHECK(evaluate(compose(f, g), ctx) == compose(ft, gt));
            CHECK(evaluate(tensor_product(f, g), ctx) == tensor_product(ft, gt));
            CHECK(evaluate(dagger(f), ctx) == dagger(ft));
            ++done;
        }
    }
}

TEST_CASE("snake equations straighten under every context") {
    Diagram left = compose(tensor_product(Diagram::cap(), Diagram::identity(1)),
                           tensor_product(Diagram::identity(1), Diagram::cup()));
    Diagram right = compose(tensor_product(Diagram::identity(1), Diagram::cap()),
                            tensor_product(Diagram::cup(), Diagram::identity(1)));
    for (const FibreContext& ctx :
         {FibreContext::standard(4), walsh_ctx(2), m2_ctx(),
          FibreContext::quantum(QuantumSpace{2, 2})}) {
        CHECK(evaluate(left, ctx) == Tensor::identity(1, ctx.dim()));
        CHECK(evaluate(right, ctx) == Tensor::identity(1, ctx.dim()));
    }
}

TEST_CASE("the associativity square holds in every context") {
    // (1 x m)(m* x 1) == m* m == (m x 1)(1 x m*) on two strands
    Diagram d1 = compose(tensor_product(Diagram::identity(1), Diagram::black_spider(2, 1)),
                         tensor_product(Diagram::black_spider(1, 2), Diagram::identity(1)));
    Diagram d2 = compose(Diagram::black_spider(1, 2), Diagram::black_spider(2, 1));
    Diagram d3 = compose(tensor_product(Diagram::black_spider(2, 1), Diagram::identity(1)),
                         tensor_product(Diagram::identity(1), Diagram::black_spider(1, 2)));
    for (const FibreContext& ctx :
         {FibreContext::standard(2), FibreContext::standard(4), walsh_ctx(3),
          FibreContext::quantum(QuantumSpace::matrix_block(2)),
          FibreContext::quantum(QuantumSpace{2, 2})}) {
        Tensor t1 = evaluate(d1, ctx);
        CHECK(t1 == evaluate(d2, ctx));
        CHECK(t1 == evaluate(d3, ctx));
        CHECK(t1 == black_spider_tensor(ctx.space, 2, 2));
    }
}

TEST_CASE("a double two-colored edge contracts to pendant vertices over 1/N") {
    Diagram lhs = compose(Diagram::black_spider(2, 1), Diagram::white_spider(1, 2));
    Diagram rhs = compose(Diagram::black_spider(0, 1), Diagram::white_spider(1, 0));
    std::vector<FibreContext> ctxs = {walsh_ctx(1), walsh_ctx(2), walsh_ctx(3),
                                      FibreContext::classical(paley_type1(3)), m2_ctx()};
    ctxs.push_back(
        FibreContext::quantum(QuantumSpace::matrix_block(3), quantum_hadamard_transpose(3)));
    for (const FibreContext& ctx : ctxs) {
        Tensor l = evaluate(lhs, ctx);
        Tensor r = evaluate(rhs, ctx) *
                   ExactScalar::rational(BigRat(1, ctx.loop_value()));
        CHECK(l == r);
    }
}

TEST_CASE("closed diagrams match the rewrite engine scalar") {
    std::mt19937_64 rng(5552368);
    HadamardMatrix w2 = walsh(2);
    FibreContext cw2 = FibreContext::classical(w2);
    FibreContext cp3 = FibreContext::classical(paley_type1(3));
    int checked = 0;
    while (checked < 40) {
        Diagram d = random_even_closed(rng, 2);
        if (d.edges.size() > 14) continue;
        auto sym = evaluate_closed(d, 4);
        REQUIRE(sym.has_value());
        CHECK(closed_value(evaluate(d, cw2)) == sym.value());
        CHECK(closed_value(evaluate(d, cp3)) == sym.value());
        ++checked;
    }
}

TEST_CASE("open diagrams keep their tensor through normalization") {
    std::mt19937_64 rng(333667);
    FibreContext ctx = walsh_ctx(2);
    int checked = 0;
    while (checked < 30) {
        Diagram top = random_even_closed(rng, 1);
        // cut it open: tensor with an identity strand and bend with a cup
        Diagram d = tensor_product(top, compose(Diagram::black_spider(1, 2),
                                                Diagram::white_spider(2, 1)));
        NormalizeResult nr = normalize(d);
        CHECK(evaluate(d, ctx) == evaluate(nr.diagram, ctx));
        ++checked;
    }
}

TEST_CASE("gram matrix of the five four-leg maps is frozen") {
    const int n = 4;
    FibreContext ctx = walsh_ctx(2);
    Tensor p_aabb = pairing({{1, 2}, {3, 4}}, n);
    Tensor p_abba = pairing({{1, 3}, {2, 4}}, n);
    Tensor black4 = spider_tensor(ctx, Color::black, 2, 2);
    Tensor white4 = spider_tensor(ctx, Color::white, 2, 2);
    Tensor cross = pairing({{1, 4}, {2, 3}}, n);
    std::vector<Tensor> fam = {p_aabb, p_abba, black4, white4, cross};

    auto g = gram_matrix(fam);
    // frozen Hilbert-Schmidt pairings: pairings meet in N or N^2 points,
    // spiders in N, the two spider colors in exactly 1
    CHECK(g[0][0] == ExactScalar::integer(16));
    CHECK(g[1][1] == ExactScalar::integer(16));
    CHECK(g[4][4] == ExactScalar::integer(16));
    CHECK(g[0][1] == ExactScalar::integer(4));
    CHECK(g[0][4] == ExactScalar::integer(4));
    CHECK(g[2][2] == ExactScalar::integer(4));
    CHECK(g[3][3] == ExactScalar::integer(4));
    CHECK(g[2][3] == ExactScalar::one());
    CHECK(g[3][2] == ExactScalar::one());
    CHECK(g[0][2] == ExactScalar::integer(4));
    CHECK(g[1][3] == ExactScalar::integer(4));

    CHECK(gram_det(fam) == ExactScalar::integer(10368));
}

TEST_CASE("gram determinant is matrix independent and grows with N") {
    auto five = [](const HadamardMatrix& h) {
        FibreContext ctx = FibreContext::classical(h);
        const int n = h.size();
        return std::vector<Tensor>{pairing({{1, 2}, {3, 4}}, n), pairing({{1, 3}, {2, 4}}, n),
                                   spider_tensor(ctx, Color::black, 2, 2),
                                   spider_tensor(ctx, Color::white, 2, 2),
                                   pairing({{1, 4}, {2, 3}}, n)};
    };
    CHECK(gram_det(five(paley_type1(3))) == ExactScalar::integer(10368));
    CHECK(gram_det(five(walsh(3))) == ExactScalar::integer(7375872));
    CHECK(gram_det({Tensor::identity(1, 5)}) == ExactScalar::integer(5));
}

TEST_CASE("boundary rotations bend one leg at a time") {
    FibreContext ctx = walsh_ctx(2);
    Tensor id1 = Tensor::identity(1, 4);
    Tensor cup = black_spider_tensor(ctx.space, 0, 2);
    Tensor cap = black_spider_tensor(ctx.space, 2, 0);
    CHECK(rotate_up_left(ctx, id1) == cup);
    CHECK(rotate_up_right(ctx, id1) == cup);
    CHECK(rotate_down_left(ctx, cup) == id1);
    CHECK(rotate_down_right(ctx, cup) == id1);
    CHECK(rotate_up_left(ctx, cap) == id1);
    CHECK(rotate_down_left(ctx, rotate_up_left(ctx, id1)) == id1);

    FibreContext qm = m2_ctx();
    Tensor qid = Tensor::identity(1, 4);
    CHECK(rotate_down_left(qm, rotate_up_left(qm, qid)) == qid);
    Tensor qb = black_spider_tensor(qm.space, 2, 1);
    Tensor back = rotate_down_left(qm, rotate_up_left(qm, qb));
    CHECK(back == qb);
}

TEST_CASE("transpose through cups matches the matrix transpose") {
    FibreContext ctx = FibreContext::classical(paley_type1(3));
    Tensor h = tensor_from_matrix(ctx.matrix);
    IntMatrix ht(4, std::vector<int>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ht[i][j] = ctx.matrix[j][i];
    CHECK(transpose_tensor(ctx, h) == tensor_from_matrix(ht));
    CHECK(transpose_tensor(ctx, transpose_tensor(ctx, h)) == h);

    // over a quantum space it is the cup-and-cap bend from the structure maps
    FibreContext qm = m2_ctx();
    Tensor a(1, 1, 4);
    a.entries() = {1, 2, 0, -1, 3, 0, 5, 1, 0, 7, 2, 4, -2, 1, 0, 6};
    CHECK(transpose_tensor(qm, a) == transpose_map(qm.space, a));
    CHECK(transpose_tensor(qm, transpose_tensor(qm, a)) == a);
}

TEST_CASE("categorical trace sums the diagonal") {
    FibreContext ctx = walsh_ctx(2);
    CHECK(trace_tensor(ctx, Tensor::identity(1, 4)) == ExactScalar::integer(4));
    CHECK(trace_tensor(ctx, Tensor::identity(2, 4)) == ExactScalar::integer(16));

    Tensor b4 = spider_tensor(ctx, Color::black, 2, 2);
    Tensor w4 = spider_tensor(ctx, Color::white, 2, 2);
    CHECK(trace_tensor(ctx, compose(w4, b4)) == ExactScalar::one());

    // the same value through the rewrite engine on the closed diagram
    Diagram pair = compose(Diagram::white_spider(2, 2), Diagram::black_spider(2, 2));
    Diagram inner = tensor_product(Diagram::identity(1),
                                   tensor_product(Diagram::cap(), Diagram::identity(1)));
    Diagram caps = compose(Diagram::cap(), inner);
    Diagram closed = compose(caps, compose(tensor_product(pair, Diagram::identity(2)),
                                           dagger(caps)));
    auto sym = evaluate_closed(closed, 4);
    REQUIRE(sym.has_value());
    CHECK(sym.value() == ExactScalar::one());
    CHECK(closed_value(evaluate(closed, ctx)) == ExactScalar::one());

    // trace of the quantum identity is the full dimension
    FibreContext qm = m2_ctx();
    CHECK(trace_tensor(qm, Tensor::identity(1, 4)) == ExactScalar::integer(4));
}

TEST_CASE("span saturation reaches the expected small ranks") {
    FibreContext ctx = walsh_ctx(2);
    std::vector<Diagram> gens = {Diagram::black_spider(2, 2), Diagram::white_spider(2, 2),
                                 Diagram::cap()};
    CHECK(span_saturate(ctx, gens, {0, 0}, 4).rank == 1);
    CHECK(span_saturate(ctx, gens, {1, 1}, 4).rank == 1);
    CHECK(span_saturate(ctx, gens, {2, 0}, 4).rank == 1);
    CHECK(span_saturate(ctx, gens, {0, 2}, 4).rank == 1);
    SpanResult r22 = span_saturate(ctx, gens, {2, 2}, 4);
    CHECK(r22.rank == 4);
    CHECK(span_saturate(ctx, gens, {0, 4}, 4).rank == 4);
    CHECK(span_saturate(ctx, gens, {4, 0}, 4).rank == 4);
    CHECK(span_saturate(ctx, gens, {2, 1}, 4).rank == 0);  // odd slots stay empty

    // the crossing is independent of the saturated (2,2) span
    IntEchelon ech;
    for (const Tensor& b : r22.basis) ech.insert(b.entries());
    REQUIRE(ech.rank() == 4);
    CHECK(ech.insert(pairing({{1, 4}, {2, 3}}, 4).entries()));
}

TEST_CASE("vertex legs without a block split only evaluate classically") {
    // a self-loop between rotation-adjacent legs leaves the cyclic role
    // word L U L U, which has no contiguous lower block
    Diagram d;
    d.n_lower = 1;
    d.n_upper = 1;
    int v = d.add_vertex(Color::black,
                         {Role::lower, Role::upper, Role::lower, Role::upper});
    const auto& rot = d.vertices.at(v).rotation;
    d.edges.push_back({End::at_boundary(false, 1), End::at_slot(rot[0])});
    d.edges.push_back({End::at_slot(rot[1]), End::at_slot(rot[2])});
    d.edges.push_back({End::at_boundary(true, 1), End::at_slot(rot[3])});
    FibreContext ctx = walsh_ctx(2);
    CHECK(evaluate(d, ctx) == Tensor::identity(1, 4));
    CHECK_THROWS_AS(evaluate(d, m2_ctx()), std::invalid_argument);
}

TEST_CASE("shape and datum errors are rejected") {
    FibreContext std4 = FibreContext::standard(4);
    CHECK_THROWS_AS(spider_tensor(std4, Color::white, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(Diagram::white_spider(1, 1), std4), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(Diagram::white_spider(2, 2),
                             FibreContext::quantum(QuantumSpace::matrix_block(2))),
                    std::invalid_argument);
    CHECK_THROWS_AS(gram_matrix({Tensor::identity(1, 4), Tensor::identity(2, 4)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(trace_tensor(std4, black_spider_tensor(std4.space, 2, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(FibreContext::quantum(QuantumSpace::matrix_block(2),
                                          quantum_hadamard_transpose(3)),
                    std::invalid_argument);
}
