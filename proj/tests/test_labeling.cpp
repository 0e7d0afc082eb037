#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pmres/labeling.hpp"

using namespace pmres;
using namespace pmres::testing;

namespace {

GoodLabeling distinct_vertex_labels(const PseudoManifold& pm) {
    // n = 1: ridges are vertices; any labeling is good
    GoodLabeling lab;
    for (const Cell& f : proper_faces(pm.complex))
        if (cell_dim(f) == 0) lab.labels[f] = f[0];
    return lab;
}

// independent check of both conditions by direct enumeration
bool brute_good(const PseudoManifold& pm, const GoodLabeling& lab) {
    const int n = pm.dimension();
    auto faces = proper_faces(pm.complex);
    auto cset = [&](const Cell& f) {
        std::set<int> s;
        for (const auto& [ridge, lbl] : lab.labels)
            if (cell_contains(ridge, f)) s.insert(lbl);
        return s;
    };
    for (const Cell& f : faces)
        if (static_cast<int>(cset(f).size()) != n - cell_dim(f)) return false;
    for (const Cell& f : faces)
        for (const Cell& g : pm.complex.facets) {
            if (!cell_contains(g, f)) continue;
            std::set<std::set<int>> seen;
            for (const Cell& h : face_interval(f, g)) {
                std::set<int> ch = (cell_dim(h) == n) ? std::set<int>{} : cset(h);
                if (!seen.insert(ch).second) return false;
            }
        }
    return true;
}

}  // namespace

TEST_CASE("octahedron with the antipodal coloring is well labeled", "[labeling]") {
    auto pm = make_pseudo_manifold(octahedron());
    auto lab = labeling_from_coloring(pm, octahedron_coloring());
    auto rep = verify_good(pm, lab);
    CHECK(rep.good);
    CHECK(brute_good(pm, lab));
}

TEST_CASE("coloring validation errors", "[labeling]") {
    auto pm = make_pseudo_manifold(octahedron());

    auto bad = octahedron_coloring();
    bad[1] = 1;  // vertex 1 now collides with 2/3 inside shared facets
    CHECK_THROWS_MATCHES(labeling_from_coloring(pm, bad), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind() == "NotProperColoring"; }));

    auto extra = octahedron_coloring();
    extra[1] = 3;  // proper, but facets through 1 miss a color of the universe
    CHECK_THROWS_MATCHES(labeling_from_coloring(pm, extra), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind() == "WrongColorCount"; }));

    auto missing = octahedron_coloring();
    missing.erase(5);
    CHECK_THROWS_AS(labeling_from_coloring(pm, missing), Error);
}

TEST_CASE("any vertex labeling of a polygon is good", "[labeling]") {
    for (int m : {2, 3, 6}) {
        auto pm = make_pseudo_manifold(polygon(m));
        auto lab = distinct_vertex_labels(pm);
        CHECK(verify_good(pm, lab).good);
        // even the all-equal labeling satisfies both conditions when n = 1
        GoodLabeling flat;
        for (const auto& [r, l] : lab.labels) flat.labels[r] = 7;
        CHECK(verify_good(pm, flat).good);
    }
}

TEST_CASE("condition 2 violations are reported with their witnesses", "[labeling]") {
    auto pm = make_pseudo_manifold(simplex_boundary(2));
    GoodLabeling lab;
    // edges of facet {0,1,2}: give {0,1} and {0,2} the same label
    lab.labels[{0, 1}] = 0;
    lab.labels[{0, 2}] = 0;
    lab.labels[{1, 2}] = 1;
    lab.labels[{0, 3}] = 1;
    lab.labels[{1, 3}] = 2;
    lab.labels[{2, 3}] = 0;
    auto rep = verify_good(pm, lab);
    REQUIRE_FALSE(rep.good);
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.kind == "condition2" && v.face == Cell{0}) found = true;
    CHECK(found);
    CHECK_FALSE(brute_good(pm, lab));
}

TEST_CASE("labelset basics", "[labeling]") {
    auto pm = make_pseudo_manifold(octahedron());
    auto lab = labeling_from_coloring(pm, octahedron_coloring());
    // a ridge carries its own label
    Cell ridge{0, 2};
    CHECK(labelset(pm, lab, ridge) == std::set<int>{lab.labels.at(ridge)});
    // facets carry the empty set
    CHECK(labelset(pm, lab, Cell{0, 2, 4}).empty());
    // vertices of a 2-complex carry two labels
    CHECK(labelset(pm, lab, Cell{0}).size() == 2);
}

TEST_CASE("face_by_labelset inverts the label map on every interval", "[labeling]") {
    auto pm = make_pseudo_manifold(octahedron());
    auto lab = labeling_from_coloring(pm, octahedron_coloring());
    for (const Cell& f : proper_faces(pm.complex)) {
        for (const Cell& g : pm.complex.facets) {
            if (!cell_contains(g, f)) continue;
            CHECK(face_by_labelset(pm, lab, f, g, {}) == g);
            CHECK(face_by_labelset(pm, lab, f, g, labelset(pm, lab, f)) == f);
            std::set<Cell> hit;
            auto interval = face_interval(f, g);
            for (const Cell& h : interval) {
                std::set<int> ch = (cell_dim(h) == pm.dimension()) ? std::set<int>{} : labelset(pm, lab, h);
                Cell back = face_by_labelset(pm, lab, f, g, ch);
                CHECK(back == h);
                hit.insert(back);
            }
            CHECK(hit.size() == interval.size());  // bijection onto the interval
        }
    }
}

TEST_CASE("face_by_labelset surfaces broken labelings", "[labeling]") {
    auto pm = make_pseudo_manifold(simplex_boundary(2));
    GoodLabeling lab;
    lab.labels[{0, 1}] = 0;
    lab.labels[{0, 2}] = 0;
    lab.labels[{1, 2}] = 1;
    lab.labels[{0, 3}] = 1;
    lab.labels[{1, 3}] = 2;
    lab.labels[{2, 3}] = 2;
    CHECK_THROWS_MATCHES(face_by_labelset(pm, lab, Cell{0}, Cell{0, 1, 2}, {0}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind() == "NotUnique"; }));
    CHECK_THROWS_MATCHES(face_by_labelset(pm, lab, Cell{0}, Cell{0, 1, 2}, {5}), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind() == "NoSuchFace"; }));
}

TEST_CASE("ensure_good picks the route the input allows", "[labeling]") {
    // user labels: direct
    auto pg = make_pseudo_manifold(polygon(4));
    auto r1 = ensure_good(pg, std::nullopt, distinct_vertex_labels(pg));
    CHECK(r1.provenance == LabelingProvenance::direct);
    CHECK(r1.pm.complex.facets.size() == 4);

    // user coloring: direct
    auto oct = make_pseudo_manifold(octahedron());
    auto r2 = ensure_good(oct, octahedron_coloring(), std::nullopt);
    CHECK(r2.provenance == LabelingProvenance::direct);

    // nothing supplied: subdivision; the 7-vertex torus is not 3-colorable
    auto t7 = make_pseudo_manifold(torus7());
    CHECK_FALSE(has_proper_coloring(t7.complex, 3));
    auto r3 = ensure_good(t7);
    CHECK(r3.provenance == LabelingProvenance::subdivided);
    CHECK(r3.pm.complex.facets.size() == 14 * 6);
    CHECK(verify_good(r3.pm, r3.labeling).good);

    // subdivided pinched sphere gets a good labeling too
    auto pinched = make_pseudo_manifold(pinched_sphere());
    auto r4 = ensure_good(pinched);
    CHECK(r4.provenance == LabelingProvenance::subdivided);
    CHECK(verify_good(r4.pm, r4.labeling).good);

    // bad user labels are rejected
    GoodLabeling junk;
    for (const auto& [ridge, fs] : ridge_stars(oct.complex)) junk.labels[ridge] = 0;
    CHECK_THROWS_MATCHES(ensure_good(oct, std::nullopt, junk), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind() == "BadLabeling"; }));
}

TEST_CASE("subdivision labelings of random pseudo-manifolds are good; mutations are caught",
          "[labeling][property]") {
    int checked = 0;
    std::mt19937 rng(20240811);
    for (unsigned seed = 1; seed <= 20; ++seed) {
        SimplicialComplex base;
        switch (seed % 4) {
            case 0: base = stacked_sphere(2, 2 + static_cast<int>(seed % 3), seed); break;
            case 1: base = stacked_sphere(3, 1 + static_cast<int>(seed % 2), seed); break;
            case 2: base = stacked_sphere(1, static_cast<int>(seed % 5), seed); break;
            default: base = (seed % 2) ? torus7() : pinched_sphere(); break;
        }
        auto pm = make_pseudo_manifold(base);
        auto r = ensure_good(pm);
        auto rep = verify_good(r.pm, r.labeling);
        CHECK(rep.good);
        ++checked;

        if (r.pm.dimension() < 2) continue;
        // flip one ridge label; verify_good must notice
        GoodLabeling mutated = r.labeling;
        std::uniform_int_distribution<std::size_t> pick(0, mutated.labels.size() - 1);
        auto it = std::next(mutated.labels.begin(), static_cast<std::ptrdiff_t>(pick(rng)));
        it->second = (it->second + 1) % (r.pm.dimension() + 1);
        CHECK_FALSE(verify_good(r.pm, mutated).good);
    }
    CHECK(checked == 20);
}
