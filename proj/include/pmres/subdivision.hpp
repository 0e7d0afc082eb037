#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "pmres/pseudo_manifold.hpp"

namespace pmres {

// Barycentric subdivision.  New vertices are the faces of the input (proper
// faces as vertex sets, top cells as instances); facets are the maximal chains.
// The dimension of the represented face is a proper (n+1)-coloring.
struct Subdivision {
    PseudoManifold pm;
    std::vector<int> vertex_coloring;        // new vertex -> dim of represented face
    std::vector<Cell> vertex_face;           // new vertex -> vertex set of that face
    std::vector<std::int32_t> vertex_facet;  // facet index when the face is a top cell, else -1
};

inline Subdivision barycentric_subdivision(const PseudoManifold& in) {
    const int n = in.dimension();
    const auto& facets = in.complex.facets;

    Subdivision out;
    std::map<Cell, std::int32_t> proper_id;
    for (const Cell& f : proper_faces(in.complex)) {
        proper_id[f] = static_cast<std::int32_t>(out.vertex_face.size());
        out.vertex_face.push_back(f);
        out.vertex_coloring.push_back(cell_dim(f));
        out.vertex_facet.push_back(-1);
    }
    std::vector<std::int32_t> top_id(facets.size());
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
        top_id[fi] = static_cast<std::int32_t>(out.vertex_face.size());
        out.vertex_face.push_back(facets[fi]);
        out.vertex_coloring.push_back(n);
        out.vertex_facet.push_back(static_cast<std::int32_t>(fi));
    }

    // one facet of the subdivision per (facet instance, vertex order);
    // chain ids ascend with dimension, so the chain is already sorted and the
    // carried sign is the input facet's sign times the order's parity
    std::vector<Cell> sub_facets;
    std::vector<signed char> sub_signs;
    std::vector<int> order(static_cast<std::size_t>(n) + 1);
    for (std::size_t fi = 0; fi < facets.size(); ++fi) {
        const Cell& g = facets[fi];
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        do {
            Cell chain_cell;
            Cell prefix;
            for (int k = 0; k <= n; ++k) {
                prefix.push_back(g[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);
                std::sort(prefix.begin(), prefix.end());
                chain_cell.push_back(k == n ? top_id[fi] : proper_id.at(prefix));
            }
            sub_facets.push_back(std::move(chain_cell));
            sub_signs.push_back(static_cast<signed char>(in.orientation[fi] * permutation_sign(order)));
        } while (std::next_permutation(order.begin(), order.end()));
    }

    // canonical facet order with signs carried along
    std::vector<std::size_t> idx(sub_facets.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return sub_facets[a] < sub_facets[b]; });
    SimplicialComplex sc;
    sc.dimension = n;
    std::vector<signed char> signs;
    for (std::size_t i : idx) {
        sc.facets.push_back(std::move(sub_facets[i]));
        signs.push_back(sub_signs[i]);
    }

    out.pm = make_pseudo_manifold(std::move(sc), std::move(signs));
    return out;
}

}  // namespace pmres
