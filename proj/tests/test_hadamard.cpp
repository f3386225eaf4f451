#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <spidercalc/hadamard.hpp>

using namespace spidercalc;

namespace {

HadamardMatrix two_id_minus_allones() {
    return HadamardMatrix{{{1, -1, -1, -1}, {-1, 1, -1, -1}, {-1, -1, 1, -1}, {-1, -1, -1, 1}}};
}

}  // namespace

TEST_CASE("walsh construction") {
    auto w1 = walsh(1);
    CHECK(w1.entries() == IntMatrix{{1, 1}, {1, -1}});

    // walsh(2) is the Fourier transform on the 2x2 Klein group
    auto w2 = walsh(2);
    CHECK(w2.entries() == IntMatrix{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}});

    for (int n = 1; n <= 6; ++n) {
        auto w = walsh(n);
        CHECK(w.size() == (1 << n));
        CHECK(is_hadamard(w));
    }
    CHECK_THROWS(walsh(0));
}

TEST_CASE("tensor product of sign matrices") {
    CHECK(tensor_product(walsh(1), walsh(1)) == walsh(2));
    CHECK(tensor_product(walsh(2), walsh(1)).size() == 8);
    CHECK(is_hadamard(tensor_product(walsh(2), walsh(1))));
}

TEST_CASE("paley construction") {
    auto p3 = paley_type1(3);
    CHECK(p3.entries() ==
          IntMatrix{{1, 1, 1, 1}, {-1, 1, -1, 1}, {-1, 1, 1, -1}, {-1, -1, 1, 1}});
    CHECK(is_hadamard(p3));

    auto p7 = paley_type1(7);
    CHECK(p7.size() == 8);
    CHECK(is_hadamard(p7));
    int trace = 0;
    for (int i = 0; i < 8; ++i) trace += p7.at(i, i);
    CHECK(trace == 8);

    auto p11 = paley_type1(11);
    CHECK(p11.size() == 12);
    CHECK(is_hadamard(p11));
    for (int i = 0; i < 12; ++i) CHECK(p11.at(i, i) == 1);

    CHECK_THROWS(paley_type1(5));
    CHECK_THROWS(paley_type1(9));
}

TEST_CASE("orthogonality detector") {
    CHECK(is_hadamard(walsh(3)));
    CHECK(is_hadamard(two_id_minus_allones()));
    HadamardMatrix bad{{{1, 1}, {1, 1}}};
    CHECK(!is_hadamard(bad));
    CHECK_THROWS(HadamardMatrix{{{1, 0}, {0, 1}}});
}

TEST_CASE("signed permutations") {
    auto id = SignedPermutation::identity(3);
    CHECK(id.as_matrix() == mat_identity(3));

    SignedPermutation s{{1, 2, 0}, {1, -1, 1}};
    CHECK(s.compose(s.inverse()) == SignedPermutation::identity(3));
    CHECK(s.inverse().compose(s) == SignedPermutation::identity(3));
    CHECK(mat_mul(s.as_matrix(), s.inverse().as_matrix()) == mat_identity(3));
    // matrix of compose = product of matrices
    SignedPermutation t{{2, 0, 1}, {-1, -1, 1}};
    CHECK(s.compose(t).as_matrix() == mat_mul(s.as_matrix(), t.as_matrix()));

    CHECK(as_signed_permutation(s.as_matrix()).value() == s);
    CHECK(!as_signed_permutation(IntMatrix{{1, 1}, {0, 1}}));
    CHECK(all_signed_permutations(2).size() == 8);
    CHECK(all_signed_permutations(4).size() == 384);
}

TEST_CASE("equivalence transformations") {
    auto w2 = walsh(2);
    auto id = SignedPermutation::identity(4);
    CHECK(equivalent_transform(w2, id, id) == w2);

    // negating one row keeps orthogonality
    SignedPermutation neg = id;
    neg.signs[0] = -1;
    auto w1neg = equivalent_transform(walsh(1), SignedPermutation{{0, 1}, {-1, 1}},
                                      SignedPermutation::identity(2));
    CHECK(w1neg.entries() == IntMatrix{{-1, -1}, {1, -1}});
    CHECK(is_hadamard(w1neg));

    SignedPermutation p{{2, 0, 3, 1}, {1, -1, -1, 1}};
    SignedPermutation q{{1, 3, 0, 2}, {-1, 1, 1, -1}};
    auto moved = equivalent_transform(w2, p, q);
    CHECK(is_hadamard(moved));
    CHECK(row_triple_profile(moved) == row_triple_profile(w2));
    CHECK(equivalent_exhaustive(w2, moved));
}

TEST_CASE("all size-4 sign matrices with orthogonal rows are equivalent") {
    CHECK(equivalent_exhaustive(walsh(2), paley_type1(3)));
    CHECK(equivalent_exhaustive(walsh(2), two_id_minus_allones()));
    CHECK(equivalent_exhaustive(paley_type1(3), two_id_minus_allones()));
}

TEST_CASE("automorphism search against exhaustive oracle") {
    // N=2: all 8 signed permutations qualify
    auto g2 = automorphism_group(walsh(1));
    CHECK(g2.size() == 8);
    CHECK(is_group(g2));

    for (const auto& h : {walsh(2), paley_type1(3), two_id_minus_allones()}) {
        auto g = automorphism_group(h);
        CHECK(g.size() == 192);
        CHECK(is_group(g));
        std::set<SignedPermutation> found(g.begin(), g.end());
        int oracle = 0;
        for (const auto& q : all_signed_permutations(4)) {
            bool hit = is_automorphism(h, q);
            if (hit) ++oracle;
            CHECK(found.count(q) == static_cast<std::size_t>(hit ? 1 : 0));
        }
        CHECK(oracle == 192);
        // companions are again automorphism data
        for (const auto& q : g) {
            auto p = companion(h, q);
            REQUIRE(p.has_value());
            CHECK(found.count(*p) == 1);
            CHECK(equivalent_transform(h, *p, q) == h);
        }
    }
}

TEST_CASE("graph encoding") {
    auto w1 = walsh(1);
    auto g = hadamard_graph(w1, false);
    // H+ = [[1,1],[1,0]], H- = [[0,0],[0,1]]
    CHECK(g.adjacency[0][4] == 1);
    CHECK(g.adjacency[0][5] == 1);
    CHECK(g.adjacency[1][4] == 1);
    CHECK(g.adjacency[1][5] == 0);
    CHECK(g.adjacency[1][7] == 1);
    CHECK(g.labels[0] == "r1+");
    CHECK(g.labels[3] == "r2-");
    CHECK(g.labels[4] == "c1+");
    CHECK(g.labels[7] == "c2-");

    // symmetric, bipartite, every vertex degree N
    CHECK(g.adjacency == mat_transpose(g.adjacency));
    for (int i = 0; i < 8; ++i) {
        int deg = 0;
        for (int j = 0; j < 8; ++j) deg += g.adjacency[i][j];
        CHECK(deg == 2);
        for (int j = 0; j < 8; ++j)
            if ((i < 4) == (j < 4)) CHECK(g.adjacency[i][j] == 0);
    }

    auto g0 = hadamard_graph(w1, true);
    for (int i = 0; i < 8; ++i) CHECK(g0.adjacency[i][i] == (i < 4 ? 1 : 0));

    auto dot = graph_to_dot(g);
    CHECK(dot.find("\"r1+\" -- \"c1+\"") != std::string::npos);
    auto adj = graph_to_adjacency_text(g0);
    CHECK(adj.find("vertices 8 looped") == 0);
}

TEST_CASE("magic action on the graph") {
    auto w2 = walsh(2);
    auto a = hadamard_graph(w2, false).adjacency;
    auto a0 = hadamard_graph(w2, true).adjacency;

    auto id = SignedPermutation::identity(4);
    CHECK(magic_from_automorphism(w2, id) == mat_identity(16));

    for (const auto& q : automorphism_group(w2)) {
        auto u = magic_from_automorphism(w2, q);
        CHECK(is_permutation_matrix(u));
        CHECK(mat_mul(u, a) == mat_mul(a, u));
        CHECK(mat_mul(u, a0) == mat_mul(a0, u));
    }

    // same for the 2x2 case, including the row swap
    auto w1 = walsh(1);
    auto b = hadamard_graph(w1, false).adjacency;
    auto b0 = hadamard_graph(w1, true).adjacency;
    for (const auto& q : automorphism_group(w1)) {
        auto u = magic_from_automorphism(w1, q);
        CHECK(is_permutation_matrix(u));
        CHECK(mat_mul(u, b) == mat_mul(b, u));
        CHECK(mat_mul(u, b0) == mat_mul(b0, u));
    }

    SignedPermutation bad{{0, 1, 3, 2}, {1, 1, 1, -1}};
    if (!is_automorphism(w2, bad)) CHECK_THROWS(magic_from_automorphism(w2, bad));
}

TEST_CASE("equivalent matrices have isomorphic graphs") {
    auto h = walsh(2);
    SignedPermutation p{{2, 0, 3, 1}, {1, -1, -1, 1}};
    SignedPermutation q{{1, 3, 0, 2}, {-1, 1, 1, -1}};
    auto h2 = equivalent_transform(h, p, q);

    // vertex permutation induced by (p, q): same block shape as the magic action
    IntMatrix u = int_matrix(16, 16);
    auto fill = [&](const SignedPermutation& s, int base) {
        for (int j = 0; j < 4; ++j) {
            int off = s.signs[j] == 1 ? 0 : 4;
            u[base + s.perm[j] + off][base + j] = 1;
            u[base + s.perm[j] + (4 - off)][base + 4 + j] = 1;
        }
    };
    fill(p, 0);
    fill(q, 8);
    CHECK(is_permutation_matrix(u));
    for (bool looped : {false, true}) {
        auto a = hadamard_graph(h, looped).adjacency;
        auto a2 = hadamard_graph(h2, looped).adjacency;
        CHECK(mat_mul(u, a) == mat_mul(a2, u));
    }
}

TEST_CASE("matrix text round trip") {
    for (const auto& h : {walsh(1), walsh(2), paley_type1(3), paley_type1(7)}) {
        auto text = matrix_to_text(h);
        CHECK(matrix_from_text(text) == h);
    }
    CHECK(matrix_to_text(walsh(1)) == "2\n++\n+-\n");
    CHECK(matrix_from_text("2\n+ +\n+ -\n") == walsh(1));
    CHECK_THROWS(matrix_from_text("2\n++\n"));
    CHECK_THROWS(matrix_from_text("2\n+x\n++\n"));
    CHECK_THROWS(matrix_from_text("0\n"));
}

TEST_CASE("row triple profile is an equivalence invariant") {
    auto w2 = walsh(2);
    auto prof = row_triple_profile(w2);
    CHECK(prof.size() == 4);
    CHECK(prof == row_triple_profile(paley_type1(3)));
    CHECK(row_triple_profile(walsh(3)) == row_triple_profile(paley_type1(7)));
}
