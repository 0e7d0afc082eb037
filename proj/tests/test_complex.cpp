#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pmres/pseudo_manifold.hpp"

using namespace pmres;
using namespace pmres::testing;

TEST_CASE("boundary of the 3-simplex is a clean sphere", "[complex]") {
    auto c = simplex_boundary(2);
    REQUIRE(c.facets.size() == 4);
    auto rep = validate(c);
    CHECK(rep.ok());
    CHECK(rep.singular_faces.empty());
    CHECK(rep.exact);
    CHECK(rep.ridge_degree_histogram.at(2) == 6);
    CHECK(euler_characteristic(c) == 2);

    auto pm = make_pseudo_manifold(c);
    CHECK(pm.orientation[0] == 1);
    CHECK(orientation_coherent(c, pm.orientation));
}

TEST_CASE("two spheres sharing a vertex are not strongly connected", "[complex]") {
    auto a = simplex_boundary(2);  // vertices 0..3
    std::vector<Cell> facets = a.facets;
    // second copy on vertices {3,4,5,6} shares only vertex 3
    for (Cell f : simplex_boundary(2).facets) {
        for (auto& v : f) v += 3;
        facets.push_back(f);
    }
    auto c = make_complex(2, facets);
    auto rep = validate(c);
    CHECK(rep.ridge_degrees_ok);
    CHECK_FALSE(rep.strongly_connected);
    CHECK_THROWS_MATCHES(make_pseudo_manifold(c), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == "NotStronglyConnected";
                         }));
}

TEST_CASE("digon is a valid pseudo-manifold", "[complex]") {
    auto c = polygon(2);
    REQUIRE(c.facets.size() == 2);
    auto rep = validate(c);
    CHECK(rep.ok());
    CHECK(euler_characteristic(c) == 0);
    auto pm = make_pseudo_manifold(c);
    CHECK(pm.orientation == std::vector<signed char>{1, -1});

    auto lk = link(pm, Cell{0});
    CHECK(lk.dimension == 0);
    CHECK(lk.facets.size() == 2);  // two edge ends
}

TEST_CASE("pinched sphere: valid, orientable, one singular vertex", "[complex]") {
    auto c = pinched_sphere();
    auto rep = validate(c);
    REQUIRE(rep.ok());
    REQUIRE(rep.singular_faces.size() == 1);
    CHECK(rep.singular_faces[0].face == Cell{0});
    CHECK(euler_characteristic(c) == 1);

    // the merged vertex's link is two disjoint circles
    auto lk = link(c, Cell{0});
    auto comp = facet_components(lk);
    int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
    CHECK(ncomp == 2);
    for (int side = 0; side < 2; ++side) {
        SimplicialComplex part;
        part.dimension = 1;
        for (std::size_t i = 0; i < lk.facets.size(); ++i)
            if (comp[i] == side) part.facets.push_back(lk.facets[i]);
        std::sort(part.facets.begin(), part.facets.end());
        CHECK(is_circle(part));
    }

    CHECK(orientable_by_enumeration(c));
    CHECK_NOTHROW(make_pseudo_manifold(c));
}

TEST_CASE("6-vertex projective plane is not orientable", "[complex]") {
    auto c = rp2_6();
    auto rep = validate(c);
    REQUIRE(rep.ok());
    CHECK(euler_characteristic(c) == 1);
    CHECK_FALSE(orientable_by_enumeration(c));
    CHECK_THROWS_MATCHES(make_pseudo_manifold(c), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == "NonOrientable";
                         }));
}

TEST_CASE("7-vertex torus validates", "[complex]") {
    auto c = torus7();
    REQUIRE(c.facets.size() == 14);
    auto rep = validate(c);
    CHECK(rep.ok());
    CHECK(euler_characteristic(c) == 0);
    CHECK(orientable_by_enumeration(c));
    CHECK_NOTHROW(make_pseudo_manifold(c));
}

TEST_CASE("links", "[complex]") {
    auto pm = make_pseudo_manifold(simplex_boundary(2));
    auto lk = link(pm, Cell{0});
    CHECK(lk.dimension == 1);
    CHECK(is_circle(lk));
    CHECK(lk.facets.size() == 3);

    auto lk2 = link(pm, Cell{0, 1});
    CHECK(lk2.dimension == 0);
    CHECK(lk2.facets.size() == 2);

    CHECK_THROWS_AS(link(pm, Cell{0, 9}), Error);
}

TEST_CASE("face intervals are boolean", "[complex]") {
    Cell f{1};
    Cell g{1, 2, 3};
    auto iv = face_interval(f, g);
    REQUIRE(iv.size() == 4);  // 2^(dim gap)
    CHECK(iv[0] == Cell{1});
    CHECK(iv[1] == Cell{1, 2});
    CHECK(iv[2] == Cell{1, 3});
    CHECK(iv[3] == Cell{1, 2, 3});

    CHECK(face_interval(g, g) == std::vector<Cell>{g});

    // dimension gap 2 leaves exactly two middle cells (diamond)
    auto iv2 = face_interval(Cell{1}, Cell{1, 2, 3});
    int middles = 0;
    for (const Cell& h : iv2)
        if (cell_dim(h) == 1) middles++;
    CHECK(middles == 2);

    CHECK_THROWS_MATCHES(face_interval(Cell{4}, Cell{1, 2}), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == "NotNested";
                         }));
}

TEST_CASE("euler characteristic of the small zoo", "[complex]") {
    CHECK(euler_characteristic(simplex_boundary(2)) == 2);
    CHECK(euler_characteristic(torus7()) == 0);
    CHECK(euler_characteristic(pinched_sphere()) == 1);
    CHECK(euler_characteristic(polygon(5)) == 0);
    CHECK(euler_characteristic(simplex_boundary(3)) == 0);
}

TEST_CASE("schema rejections", "[complex]") {
    CHECK_THROWS_AS(make_complex(1, {{0, 0}}), Error);
    CHECK_THROWS_AS(make_complex(2, {{0, 1}}), Error);
    CHECK_THROWS_AS(make_complex(1, {}), Error);
}
