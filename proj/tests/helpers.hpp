#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "pmres/labeling.hpp"
#include "pmres/pseudo_manifold.hpp"

namespace pmres::testing {

// m-gon as a 1-complex; m = 2 is the digon (two edge instances on {0,1})
inline SimplicialComplex polygon(int m) {
    std::vector<Cell> facets;
    for (int i = 0; i < m; ++i) facets.push_back({i, (i + 1) % m});
    return make_complex(1, std::move(facets));
}

// boundary of the (n+1)-simplex
inline SimplicialComplex simplex_boundary(int n) {
    std::vector<Cell> facets;
    const int m = n + 2;
    for (int drop = 0; drop < m; ++drop) {
        Cell f;
        for (int v = 0; v < m; ++v)
            if (v != drop) f.push_back(v);
        facets.push_back(std::move(f));
    }
    return make_complex(n, std::move(facets));
}

// octahedron with antipodal pairs (0,1), (2,3), (4,5)
inline SimplicialComplex octahedron() {
    std::vector<Cell> facets;
    for (int a = 0; a <= 1; ++a)
        for (int b = 2; b <= 3; ++b)
            for (int c = 4; c <= 5; ++c) facets.push_back({a, b, c});
    return make_complex(2, std::move(facets));
}

inline std::map<VertexId, int> octahedron_coloring() {
    return {{0, 0}, {1, 0}, {2, 1}, {3, 1}, {4, 2}, {5, 2}};
}

// 0 = north pole, 1-5 upper ring, 6-10 lower ring, 11 = south pole
inline std::vector<Cell> icosahedron_facets() {
    std::vector<Cell> f = {
        {0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
        {1, 2, 6}, {2, 6, 7}, {2, 3, 7}, {3, 7, 8}, {3, 4, 8},
        {4, 8, 9}, {4, 5, 9}, {5, 9, 10}, {5, 1, 10}, {1, 6, 10},
        {11, 6, 7}, {11, 7, 8}, {11, 8, 9}, {11, 9, 10}, {11, 6, 10}};
    return f;
}

inline SimplicialComplex icosahedron() { return make_complex(2, icosahedron_facets()); }

// Pinched sphere: icosahedron with the antipodal pair {0, 11} identified.
// The merged vertex has two disjoint pentagon links.
inline SimplicialComplex pinched_sphere() {
    auto facets = icosahedron_facets();
    for (auto& f : facets)
        for (auto& v : f)
            if (v == 11) v = 0;
    return make_complex(2, std::move(facets));
}

// the 7-vertex (Moebius-Kantor) torus; 2-neighborly, 14 facets
inline SimplicialComplex torus7() {
    std::vector<Cell> facets;
    for (int i = 0; i < 7; ++i) {
        facets.push_back({i, (i + 1) % 7, (i + 3) % 7});
        facets.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return make_complex(2, std::move(facets));
}

// minimal 6-vertex projective plane (antipodal quotient of the icosahedron)
inline SimplicialComplex rp2_6() {
    std::vector<Cell> facets = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                                {1, 2, 4}, {2, 4, 5}, {2, 3, 5}, {1, 3, 5}, {1, 3, 4}};
    return make_complex(2, std::move(facets));
}

inline SimplicialComplex suspension(const SimplicialComplex& c) {
    VertexId top = 0;
    for (const Cell& f : c.facets) top = std::max(top, f.back());
    std::vector<Cell> facets;
    for (const Cell& f : c.facets) {
        Cell a = f, b = f;
        a.push_back(top + 1);
        b.push_back(top + 2);
        facets.push_back(std::move(a));
        facets.push_back(std::move(b));
    }
    return make_complex(c.dimension + 1, std::move(facets));
}

// random stacked sphere: repeatedly cone a fresh vertex over a random facet
inline SimplicialComplex stacked_sphere(int n, int steps, unsigned seed) {
    SimplicialComplex c = simplex_boundary(n);
    std::mt19937 rng(seed);
    VertexId next = n + 2;
    for (int s = 0; s < steps; ++s) {
        std::uniform_int_distribution<std::size_t> pick(0, c.facets.size() - 1);
        std::size_t fi = pick(rng);
        Cell f = c.facets[fi];
        c.facets.erase(c.facets.begin() + static_cast<std::ptrdiff_t>(fi));
        for (std::size_t drop = 0; drop < f.size(); ++drop) {
            Cell g;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (i != drop) g.push_back(f[i]);
            g.push_back(next);
            std::sort(g.begin(), g.end());
            c.facets.push_back(std::move(g));
        }
        ++next;
        std::sort(c.facets.begin(), c.facets.end());
    }
    return c;
}

// brute-force orientability oracle: try every sign vector (facet 0 pinned to +1)
inline bool orientable_by_enumeration(const SimplicialComplex& c) {
    const std::size_t m = c.facets.size();
    if (m > 24) throw err::internal("enumeration oracle limited to 24 facets");
    for (std::uint64_t bits = 0; bits < (1ull << (m - 1)); ++bits) {
        std::vector<signed char> signs(m);
        signs[0] = 1;
        for (std::size_t i = 1; i < m; ++i) signs[i] = (bits >> (i - 1)) & 1 ? 1 : -1;
        if (orientation_coherent(c, signs)) return true;
    }
    return false;
}

// exhaustive proper-coloring search (small vertex counts only)
inline bool has_proper_coloring(const SimplicialComplex& c, int colors) {
    std::set<VertexId> vs;
    for (const Cell& f : c.facets) vs.insert(f.begin(), f.end());
    std::vector<VertexId> verts(vs.begin(), vs.end());
    std::set<std::pair<VertexId, VertexId>> edges;
    for (const Cell& f : c.facets)
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t k = i + 1; k < f.size(); ++k) edges.emplace(f[i], f[k]);
    std::map<VertexId, int> col;
    // also require every facet to see all colors, as the labeling needs
    auto facets_ok = [&]() {
        for (const Cell& f : c.facets) {
            std::set<int> seen;
            for (VertexId v : f) seen.insert(col.at(v));
            if (static_cast<int>(seen.size()) != c.dimension + 1) return false;
        }
        return true;
    };
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == verts.size()) return facets_ok();
        for (int k = 0; k < colors; ++k) {
            bool ok = true;
            for (const auto& [a, b] : edges) {
                if (a == verts[i] && col.count(b) && col[b] == k) ok = false;
                if (b == verts[i] && col.count(a) && col[a] == k) ok = false;
            }
            if (!ok) continue;
            col[verts[i]] = k;
            if (go(i + 1)) return true;
            col.erase(verts[i]);
        }
        return false;
    };
    return go(0);
}

}  // namespace pmres::testing
