#pragma once

#include <map>
#include <string>

#include "pmres/complex.hpp"
#include "pmres/homology.hpp"

namespace pmres {

// Sphere recognition verdicts.  Exact procedures exist for dimensions <= 2;
// above that we fall back to an integer-homology certificate and say so.
struct SphereCheck {
    bool is_sphere = false;
    bool exact = true;  // false when only homology-certified
    std::string detail;
};

// S^0: exactly two point instances.
inline bool is_zero_sphere(const SimplicialComplex& c) {
    return c.dimension == 0 && c.facets.size() == 2;
}

// Circle: connected, closed, every vertex meets exactly two edge instances.
inline bool is_circle(const SimplicialComplex& c) {
    if (c.dimension != 1 || c.facets.empty()) return false;
    std::map<VertexId, int> deg;
    for (const Cell& e : c.facets) {
        deg[e[0]]++;
        deg[e[1]]++;
    }
    for (const auto& [v, d] : deg)
        if (d != 2) return false;
    auto comp = facet_components(c);
    for (int k : comp)
        if (k != 0) return false;
    return true;
}

// 2-sphere: closed connected orientable surface with Euler characteristic 2.
inline bool is_two_sphere(const SimplicialComplex& c) {
    if (c.dimension != 2 || c.facets.empty()) return false;
    for (const auto& [ridge, fs] : ridge_stars(c))
        if (fs.size() != 2) return false;
    auto comp = facet_components(c);
    for (int k : comp)
        if (k != 0) return false;
    if (orient_or_empty(c).empty()) return false;
    return euler_characteristic(c) == 2;
}

// Homology certificate: reduced homology of S^d (free of rank 1 in degree d,
// trivial elsewhere) plus closedness and connectivity.  Necessary, not
// sufficient, hence the exact=false marker.
inline bool homology_sphere_certificate(const SimplicialComplex& c) {
    if (c.facets.empty()) return false;
    for (const auto& [ridge, fs] : ridge_stars(c))
        if (fs.size() != 2) return false;
    for (int k : facet_components(c))
        if (k != 0) return false;
    auto h = reduced_homology(c);
    for (int d = 0; d < c.dimension; ++d)
        if (!h[static_cast<std::size_t>(d)].trivial()) return false;
    return h[static_cast<std::size_t>(c.dimension)].is_free_of_rank(1);
}

inline SphereCheck check_sphere(const SimplicialComplex& c) {
    SphereCheck out;
    switch (c.dimension) {
        case 0:
            out.is_sphere = is_zero_sphere(c);
            out.detail = out.is_sphere ? "two points" : "not two points";
            return out;
        case 1:
            out.is_sphere = is_circle(c);
            out.detail = out.is_sphere ? "circle" : "not a circle";
            return out;
        case 2:
            out.is_sphere = is_two_sphere(c);
            out.detail = out.is_sphere ? "2-sphere" : "not a 2-sphere";
            return out;
        default:
            out.exact = false;
            out.is_sphere = homology_sphere_certificate(c);
            out.detail = out.is_sphere ? "homology-sphere certificate" : "homology certificate failed";
            return out;
    }
}

}  // namespace pmres
