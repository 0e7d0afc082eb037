#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pmres/labeling.hpp"
#include "pmres/projection.hpp"

using namespace pmres;
using namespace pmres::testing;

namespace {

GoodLabeling vertex_labels(const PseudoManifold& pm) {
    GoodLabeling lab;
    for (const Cell& f : proper_faces(pm.complex))
        if (cell_dim(f) == 0) lab.labels[f] = f[0];
    return lab;
}

}  // namespace

TEST_CASE("projection weights", "[projection]") {
    std::vector<Cell> chain = {{0, 1, 2}, {0, 1}, {0}};
    auto p0 = g_eval(chain, {0.0, 0.0});
    CHECK(p0.weights == std::vector<double>{1.0, 0.0, 0.0});
    auto p1 = g_eval(chain, {1.0, 1.0});
    CHECK(p1.weights == std::vector<double>{0.0, 0.0, 1.0});

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 10000; ++trial) {
        int n = 1 + trial % 4;
        std::vector<double> t(static_cast<std::size_t>(n));
        for (auto& x : t) x = dist(rng);
        auto w = g_weights(t);
        double sum = 0;
        for (double x : w) sum += x;
        REQUIRE(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("weights invert away from the degenerate set", "[projection]") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    double worst = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        int n = 1 + trial % 4;
        std::vector<double> t(static_cast<std::size_t>(n));
        for (auto& x : t) x = dist(rng);
        auto back = g_invert(g_weights(t));
        for (std::size_t i = 0; i < t.size(); ++i) worst = std::max(worst, std::abs(back[i] - t[i]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("flag signs on the digon", "[projection]") {
    auto pm = make_pseudo_manifold(polygon(2));
    ResolutionEngine eng(pm, vertex_labels(pm));
    // orientation (+1, -1); permutation parity alternates within a facet
    CHECK(flag_sign(eng, 0) == 1);   // facet 0, ascending order
    CHECK(flag_sign(eng, 1) == -1);  // facet 0, descending
    CHECK(flag_sign(eng, 2) == -1);  // facet 1, ascending
    CHECK(flag_sign(eng, 3) == 1);
}

TEST_CASE("degree of the polygon resolutions", "[projection]") {
    for (int m = 2; m <= 8; ++m) {
        auto pm = make_pseudo_manifold(polygon(m));
        ResolutionEngine eng(pm, vertex_labels(pm));
        auto comp = explore_component(eng, 0, 1000000);
        auto q = build_quotient(eng, comp);
        auto signs = orient_quotient(q, comp);
        auto deg = degree(eng, comp, signs);
        long expect = (m % 2 == 0) ? 1 : 2;
        CHECK(deg.r == expect);
        CHECK(deg.all_flags_hit);
        // pigeonhole when all local signs agree
        CHECK(comp.count == deg.abs_r * eng.flag_count());

        auto cov = covering_check(eng, comp, q);
        CHECK(cov.sheet_count == expect);
        CHECK(cov.sheets_constant);
        CHECK(cov.walls_ok);
        CHECK(cov.generic_fibers_ok);
        CHECK(cov.branch_points.empty());  // no codimension-2 cells when n = 1
        CHECK(cov.confined_to_codim2());
    }
}

TEST_CASE("degree and covering on surface runs", "[projection]") {
    struct Case {
        PseudoManifold pm;
        GoodLabeling lab;
    };
    std::vector<Case> cases;
    {
        auto oct = make_pseudo_manifold(octahedron());
        cases.push_back({oct, labeling_from_coloring(oct, octahedron_coloring())});
        auto r = ensure_good(make_pseudo_manifold(simplex_boundary(2)));
        cases.push_back({r.pm, r.labeling});
        auto p = ensure_good(make_pseudo_manifold(pinched_sphere()));
        cases.push_back({p.pm, p.labeling});
    }
    for (auto& c : cases) {
        ResolutionEngine eng(c.pm, c.lab);
        auto comp = explore_component(eng, 0, 1000000);
        auto q = build_quotient(eng, comp);
        auto signs = orient_quotient(q, comp);
        auto deg = degree(eng, comp, signs);
        CHECK(deg.r >= 1);
        CHECK(deg.all_flags_hit);
        CHECK(comp.count == deg.abs_r * eng.flag_count());

        auto cov = covering_check(eng, comp, q);
        CHECK(cov.sheets_constant);
        CHECK(cov.sheet_count == deg.abs_r);
        CHECK(cov.walls_ok);
        CHECK(cov.generic_fibers_ok);
        CHECK(cov.confined_to_codim2());
        // all branching sits over the barycenters of cells of codimension >= 2
        for (const auto& b : cov.branch_points) CHECK(b.image_dim <= q.n - 2);
    }
}

TEST_CASE("branch data distinguishes the pinched run", "[projection]") {
    auto p = ensure_good(make_pseudo_manifold(pinched_sphere()));
    ResolutionEngine eng(p.pm, p.labeling);
    auto comp = explore_component(eng, 0, 1000000);
    auto q = build_quotient(eng, comp);
    auto cov = covering_check(eng, comp, q);
    CHECK_FALSE(cov.branch_points.empty());
    for (const auto& b : cov.branch_points) {
        CHECK(b.image_dim == 0);
        CHECK(b.cubes == b.sectors * b.multiplicity);
        CHECK(b.sectors <= b.full_sectors);
    }
}
