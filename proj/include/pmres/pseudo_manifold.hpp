#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmres/complex.hpp"
#include "pmres/recognition.hpp"

namespace pmres {

struct SingularFace {
    Cell face;
    int link_dimension = 0;
    bool exact = true;       // false when the verdict rests on a homology certificate
    std::string detail;
};

struct SkeletonReport {
    bool pure = true;
    std::map<int, long> ridge_degree_histogram;
    bool ridge_degrees_ok = true;
    bool strongly_connected = true;
    std::vector<SingularFace> singular_faces;
    bool exact = true;  // every link check was exact

    bool ok() const { return pure && ridge_degrees_ok && strongly_connected; }
};

// Pseudo-manifold skeleton checks plus a census of singular faces (faces whose
// link is not a sphere).  Report-based; make_pseudo_manifold throws instead.
// The singular-face scan is the expensive part; callers that only need the
// skeleton checks pass find_singular = false.
inline SkeletonReport validate(const SimplicialComplex& c, bool find_singular = true) {
    SkeletonReport rep;
    for (const Cell& f : c.facets)
        if (cell_dim(f) != c.dimension) rep.pure = false;

    for (const auto& [ridge, fs] : ridge_stars(c)) {
        rep.ridge_degree_histogram[static_cast<int>(fs.size())]++;
        if (fs.size() != 2) rep.ridge_degrees_ok = false;
    }

    for (int k : facet_components(c))
        if (k != 0) rep.strongly_connected = false;

    if (find_singular && rep.pure && rep.ridge_degrees_ok) {
        // links of faces of codimension >= 2; ridge links are covered above
        for (const auto& [f, star] : face_star_map(c)) {
            if (cell_dim(f) > c.dimension - 2) continue;
            SimplicialComplex lk;
            lk.dimension = c.dimension - cell_dim(f) - 1;
            for (std::int32_t fi : star) lk.facets.push_back(cell_minus(c.facets[static_cast<std::size_t>(fi)], f));
            std::sort(lk.facets.begin(), lk.facets.end());
            SphereCheck sc = check_sphere(lk);
            if (!sc.exact) rep.exact = false;
            if (!sc.is_sphere)
                rep.singular_faces.push_back({f, lk.dimension, sc.exact, sc.detail});
        }
    }
    return rep;
}

// Coherent orientation with the lexicographically smallest facet assigned +1.
inline std::vector<signed char> orient(const SimplicialComplex& c) {
    auto signs = orient_or_empty(c);
    if (signs.empty()) throw err::non_orientable("orientation propagation hit a contradiction");
    if (!signs.empty() && signs[0] < 0)
        for (auto& s : signs) s = static_cast<signed char>(-s);
    return signs;
}

struct PseudoManifold {
    SimplicialComplex complex;
    std::vector<signed char> orientation;  // per facet instance, coherent

    int dimension() const { return complex.dimension; }
};

inline PseudoManifold make_pseudo_manifold(SimplicialComplex c,
                                           std::optional<std::vector<signed char>> orientation = std::nullopt) {
    SkeletonReport rep = validate(c, false);
    if (!rep.pure) throw err::schema("complex is not pure");
    if (!rep.ridge_degrees_ok) {
        std::string bad;
        for (const auto& [deg, cnt] : rep.ridge_degree_histogram)
            if (deg != 2) bad += std::to_string(cnt) + " ridge(s) of degree " + std::to_string(deg) + "; ";
        throw err::ridge_degree_violation(bad);
    }
    if (!rep.strongly_connected) throw err::not_strongly_connected("facet graph is disconnected");

    PseudoManifold pm;
    if (orientation) {
        if (orientation->size() != c.facets.size())
            throw err::schema("orientation length does not match facet count");
        for (signed char s : *orientation)
            if (s != 1 && s != -1) throw err::schema("orientation entries must be +1 or -1");
        if (!orientation_coherent(c, *orientation))
            throw err::non_orientable("supplied orientation is not coherent");
        pm.orientation = std::move(*orientation);
    } else {
        pm.orientation = orient(c);
    }
    pm.complex = std::move(c);
    return pm;
}

inline SimplicialComplex link(const PseudoManifold& pm, const Cell& f) { return link(pm.complex, f); }

}  // namespace pmres
