#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <sstream>
#include <string>

#include "spidercalc/family.hpp"
#include "spidercalc/fibre.hpp"

using namespace spidercalc;

namespace {

int catalan_sq(int m) {
    int c = static_cast<int>(catalan(m));
    return c * c;
}

std::string partition_key(SetPartition p) {
    p.canonicalize();
    std::ostringstream os;
    for (const auto& b : p.blocks) {
        for (int x : b) os << x << ",";
        os << "|";
    }
    return os.str();
}

}  // namespace

TEST_CASE("boundary bends round trip and match tensor rotations") {
    Diagram b = Diagram::black_spider(2, 2);

    Diagram up = bend_up_right(b);
    REQUIRE(up.n_lower == 1);
    REQUIRE(up.n_upper == 3);
    Diagram back = normalize(bend_down_right(up)).diagram;
    REQUIRE(canonical_key(back) == canonical_key(b));
    REQUIRE(back.prefactor == Prefactor{});

    Diagram left = normalize(bend_down_left(bend_up_left(b))).diagram;
    REQUIRE(canonical_key(left) == canonical_key(b));

    REQUIRE(canonical_key(normalize(bend_up_right(Diagram::identity(1))).diagram) ==
            canonical_key(Diagram::cup()));
    REQUIRE(canonical_key(normalize(bend_down_right(Diagram::identity(1))).diagram) ==
            canonical_key(Diagram::cap()));

    FibreContext ctx = FibreContext::classical(HadamardMatrix(walsh(2).entries()));
    for (const Diagram& d : {Diagram::black_spider(2, 2), Diagram::white_spider(2, 1)}) {
        Tensor t = evaluate(d, ctx);
        REQUIRE(evaluate(bend_up_right(d), ctx) == rotate_up_right(ctx, t));
        REQUIRE(evaluate(bend_up_left(d), ctx) == rotate_up_left(ctx, t));
        REQUIRE(evaluate(bend_down_right(d), ctx) == rotate_down_right(ctx, t));
        REQUIRE(evaluate(bend_down_left(d), ctx) == rotate_down_left(ctx, t));
    }
}

TEST_CASE("saturated family slot counts are squared Catalan numbers") {
    std::vector<Diagram> fam = reduced_families();
    int total = 0;
    for (int k = 0; k <= 6; ++k)
        for (int l = 0; l + k <= 6; ++l) {
            auto slot = family_slot(fam, k, l);
            if ((k + l) % 2) {
                REQUIRE(slot.empty());
                continue;
            }
            int m = (k + l) / 2;
            INFO("slot (" << k << "," << l << ")");
            REQUIRE(static_cast<int>(slot.size()) == catalan_sq(m));
            total += static_cast<int>(slot.size());
        }
    REQUIRE(total == static_cast<int>(fam.size()));
    REQUIRE(total == 1 + 3 * 1 + 5 * 4 + 7 * 25);

    for (const auto& d : fam) {
        REQUIRE(is_reduced(d));
        REQUIRE(d.prefactor == Prefactor{});
        REQUIRE(d.bare_loops == 0);
    }
}

TEST_CASE("region coloring pairs separate the reduced kets") {
    std::vector<Diagram> fam = reduced_families();
    for (int l : {2, 4, 6}) {
        auto kets = family_slot(fam, 0, l);
        std::set<std::string> images;
        for (const auto& d : kets) {
            auto [blk, wht] = region_coloring_pair(d);
            images.insert(partition_key(blk) + "/" + partition_key(wht));
        }
        INFO("kets (0," << l << ")");
        REQUIRE(images.size() == kets.size());
        int m = l / 2;
        REQUIRE(static_cast<int>(images.size()) == catalan_sq(m));
    }
}

TEST_CASE("pairing kets yields a large closed family") {
    std::vector<Diagram> fam = reduced_families();
    std::vector<Diagram> closed = closed_pair_family(fam, 12);
    REQUIRE(closed.size() >= 100);
    REQUIRE(closed.size() == 209);
    std::set<std::string> keys;
    for (const auto& d : closed) {
        REQUIRE(d.n_lower == 0);
        REQUIRE(d.n_upper == 0);
        REQUIRE(static_cast<int>(d.edges.size()) <= 12);
        validate(d);
        for (const auto& [id, v] : d.vertices) REQUIRE(v.rotation.size() % 2 == 0);
        keys.insert(canonical_key(d));
    }
    REQUIRE(keys.size() == closed.size());

    // scalar of <p|p> for the cup ket is the loop value
    auto pair2 = family_slot(fam, 0, 2);
    Diagram loop = compose(dagger(pair2[0]), pair2[0]);
    auto v = evaluate_closed(loop, 4);
    REQUIRE(v.has_value());
    REQUIRE(*v == ExactScalar::integer(4));
}

TEST_CASE("random even closed diagrams stay valid and reduce") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 60; ++i) {
        Diagram d = random_even_closed_diagram(rng, 2);
        validate(d);
        REQUIRE(d.n_lower == 0);
        REQUIRE(d.n_upper == 0);
        NormalizeResult r = normalize(d);
        REQUIRE(is_empty_scalar(r.diagram));
    }
}

TEST_CASE("stock matrices satisfy the defining identities") {
    for (int n : {4, 8, 12}) {
        auto mats = stock_matrices(n);
        REQUIRE(mats.size() == (n == 4 ? 4 : n == 8 ? 3 : 1));
        std::set<std::string> texts;
        for (const auto& h : mats) {
            REQUIRE(h.size() == n);
            REQUIRE(is_hadamard(h));
            REQUIRE(check_hadamard_axioms(h).ok());
            texts.insert(matrix_to_text(h));
        }
        REQUIRE(texts.size() == mats.size());
    }
    REQUIRE_THROWS_AS(stock_matrices(6), std::invalid_argument);

    // axiom checker rejects corrupted entries
    IntMatrix m = walsh(2).entries();
    m[0][0] = -1;  // still sign entries but no longer orthogonal rows
    REQUIRE_FALSE(check_hadamard_axioms(HadamardMatrix(m)).unitary_scaled);
}
