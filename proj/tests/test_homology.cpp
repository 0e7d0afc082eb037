#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pmres/homology.hpp"
#include "pmres/recognition.hpp"

using namespace pmres;
using namespace pmres::testing;

TEST_CASE("smith normal form of a frozen matrix", "[homology]") {
    auto r = smith_normal_form({{2, 4}, {6, 8}});
    REQUIRE(r.rank == 2);
    CHECK(r.diagonal == std::vector<long long>{2, 4});

    auto r2 = smith_normal_form({{1, 0}, {0, 0}});
    CHECK(r2.rank == 1);
    CHECK(r2.diagonal == std::vector<long long>{1});
}

TEST_CASE("reduced homology of spheres", "[homology]") {
    for (int n = 1; n <= 3; ++n) {
        auto h = reduced_homology(simplex_boundary(n));
        for (int d = 0; d < n; ++d) CHECK(h[static_cast<std::size_t>(d)].trivial());
        CHECK(h[static_cast<std::size_t>(n)].is_free_of_rank(1));
    }
}

TEST_CASE("reduced homology of the torus and projective plane", "[homology]") {
    auto ht = reduced_homology(torus7());
    CHECK(ht[0].trivial());
    CHECK(ht[1].is_free_of_rank(2));
    CHECK(ht[2].is_free_of_rank(1));

    auto hp = reduced_homology(rp2_6());
    CHECK(hp[0].trivial());
    CHECK(hp[1].rank == 0);
    REQUIRE(hp[1].torsion.size() == 1);
    CHECK(hp[1].torsion[0] == 2);
    CHECK(hp[2].trivial());
}

TEST_CASE("homology of the digon is a circle's", "[homology]") {
    auto h = reduced_homology(polygon(2));
    CHECK(h[0].trivial());
    CHECK(h[1].is_free_of_rank(1));
}

TEST_CASE("homology certificate backs sphere recognition in dimension 3", "[homology]") {
    auto c = simplex_boundary(3);
    auto sc = check_sphere(c);
    CHECK(sc.is_sphere);
    CHECK_FALSE(sc.exact);

    auto sus = suspension(torus7());  // not a sphere; H1 survives
    CHECK_FALSE(check_sphere(sus).is_sphere);
}

TEST_CASE("pinched sphere fails the sphere check at dimension 2", "[homology]") {
    CHECK_FALSE(is_two_sphere(pinched_sphere()));
    CHECK(is_two_sphere(octahedron()));
    CHECK(is_two_sphere(simplex_boundary(2)));
    CHECK_FALSE(is_two_sphere(torus7()));
    CHECK_FALSE(is_two_sphere(rp2_6()));
}
