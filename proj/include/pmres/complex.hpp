#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "pmres/errors.hpp"

namespace pmres {

using VertexId = std::int32_t;

// A cell is its strictly increasing vertex list; equal sequences mean equal cells.
using Cell = std::vector<VertexId>;

inline bool is_canonical_cell(const Cell& c) {
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i - 1] >= c[i]) return false;
    return true;
}

inline int cell_dim(const Cell& c) { return static_cast<int>(c.size()) - 1; }

inline bool cell_contains(const Cell& big, const Cell& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

inline Cell cell_minus(const Cell& big, const Cell& small) {
    Cell out;
    std::set_difference(big.begin(), big.end(), small.begin(), small.end(), std::back_inserter(out));
    return out;
}

inline int permutation_sign(const std::vector<int>& perm) {
    int sign = 1;
    std::vector<bool> seen(perm.size(), false);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<std::size_t>(perm[j]);
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

inline std::string cell_to_string(const Cell& c) {
    std::string s = "{";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    return s + "}";
}

// Pure n-dimensional complex given by its top cells.  Facets are kept as a
// sorted list and may repeat: two facets with the same vertex set are distinct
// top cells glued along their common boundary (the digon, for instance, is the
// 1-complex with facets {a,b} twice).  All proper faces are plain vertex sets.
struct SimplicialComplex {
    int dimension = 0;
    std::vector<Cell> facets;  // lexicographically sorted, duplicates adjacent

    std::size_t facet_count() const { return facets.size(); }
};

inline SimplicialComplex make_complex(int dimension, std::vector<Cell> facets) {
    if (dimension < 1) throw err::schema("dimension must be >= 1, got " + std::to_string(dimension));
    for (auto& f : facets) {
        std::sort(f.begin(), f.end());
        if (f.size() != static_cast<std::size_t>(dimension) + 1)
            throw err::schema("facet " + cell_to_string(f) + " does not have " +
                              std::to_string(dimension + 1) + " vertices");
        for (std::size_t i = 1; i < f.size(); ++i)
            if (f[i - 1] == f[i]) throw err::schema("facet " + cell_to_string(f) + " repeats a vertex");
        if (f.front() < 0) throw err::schema("negative vertex id in facet " + cell_to_string(f));
    }
    if (facets.empty()) throw err::schema("complex has no facets");
    std::sort(facets.begin(), facets.end());
    SimplicialComplex c;
    c.dimension = dimension;
    c.facets = std::move(facets);
    return c;
}

// All proper faces of every dimension, as distinct vertex sets, sorted (dim, lex).
inline std::vector<Cell> proper_faces(const SimplicialComplex& c) {
    std::set<Cell> seen;
    for (const Cell& f : c.facets) {
        const std::size_t m = f.size();
        for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
            Cell sub;
            for (std::size_t i = 0; i < m; ++i)
                if (mask & (1u << i)) sub.push_back(f[i]);
            seen.insert(std::move(sub));
        }
    }
    std::vector<Cell> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

// Face counts per dimension; top dimension counts facet instances.
inline std::vector<long> face_counts(const SimplicialComplex& c) {
    std::vector<long> counts(static_cast<std::size_t>(c.dimension) + 1, 0);
    for (const Cell& f : proper_faces(c)) counts[static_cast<std::size_t>(cell_dim(f))]++;
    counts[static_cast<std::size_t>(c.dimension)] = static_cast<long>(c.facets.size());
    return counts;
}

inline long euler_characteristic(const SimplicialComplex& c) {
    long chi = 0;
    int d = 0;
    for (long k : face_counts(c)) chi += (d++ % 2 == 0) ? k : -k;
    return chi;
}

inline bool has_face(const SimplicialComplex& c, const Cell& f) {
    if (f.empty() || !is_canonical_cell(f)) return false;
    for (const Cell& g : c.facets)
        if (cell_contains(g, f)) return true;
    return false;
}

// All faces H with f <= H <= g, ordered by dimension then lexicographically.
inline std::vector<Cell> face_interval(const Cell& f, const Cell& g) {
    if (!cell_contains(g, f)) throw err::not_nested(cell_to_string(f) + " not contained in " + cell_to_string(g));
    Cell extra = cell_minus(g, f);
    const std::size_t m = extra.size();
    std::vector<Cell> out;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        Cell h = f;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) h.push_back(extra[i]);
        std::sort(h.begin(), h.end());
        out.push_back(std::move(h));
    }
    std::stable_sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

// Every proper face mapped to the facet instances containing it.
inline std::map<Cell, std::vector<std::int32_t>> face_star_map(const SimplicialComplex& c) {
    std::map<Cell, std::vector<std::int32_t>> star;
    for (std::size_t fi = 0; fi < c.facets.size(); ++fi) {
        const Cell& f = c.facets[fi];
        const std::size_t m = f.size();
        for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
            Cell sub;
            for (std::size_t i = 0; i < m; ++i)
                if (mask & (1u << i)) sub.push_back(f[i]);
            star[sub].push_back(static_cast<std::int32_t>(fi));
        }
    }
    return star;
}

// Ridges (codimension-1 faces) mapped to the facet instances containing them.
inline std::map<Cell, std::vector<std::int32_t>> ridge_stars(const SimplicialComplex& c) {
    std::map<Cell, std::vector<std::int32_t>> stars;
    for (std::size_t fi = 0; fi < c.facets.size(); ++fi) {
        const Cell& f = c.facets[fi];
        for (std::size_t drop = 0; drop < f.size(); ++drop) {
            Cell r;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (i != drop) r.push_back(f[i]);
            stars[r].push_back(static_cast<std::int32_t>(fi));
        }
    }
    return stars;
}

// Connected components of the facet graph (facets adjacent through a shared ridge).
inline std::vector<int> facet_components(const SimplicialComplex& c) {
    std::vector<int> parent(c.facets.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (const auto& [ridge, fs] : ridge_stars(c)) {
        for (std::size_t i = 1; i < fs.size(); ++i) {
            int a = find(fs[0]), b = find(fs[i]);
            if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
        }
    }
    std::map<int, int> renumber;
    std::vector<int> comp(c.facets.size());
    for (std::size_t i = 0; i < c.facets.size(); ++i) {
        int root = find(static_cast<int>(i));
        auto it = renumber.find(root);
        if (it == renumber.end()) it = renumber.emplace(root, static_cast<int>(renumber.size())).first;
        comp[i] = it->second;
    }
    return comp;
}

// link(f) = { G \ f : G a face containing f }, a complex of dimension n - dim f - 1.
// Facet instances of the link come from facet instances of the input.
inline SimplicialComplex link(const SimplicialComplex& c, const Cell& f) {
    if (!has_face(c, f)) throw err::face_not_present("no face " + cell_to_string(f));
    if (cell_dim(f) >= c.dimension)
        throw err::face_not_present("link of a top-dimensional cell is empty");
    SimplicialComplex out;
    out.dimension = c.dimension - cell_dim(f) - 1;
    for (const Cell& g : c.facets)
        if (cell_contains(g, f)) out.facets.push_back(cell_minus(g, f));
    std::sort(out.facets.begin(), out.facets.end());
    return out;
}

// Induced sign of a ridge inside an oriented facet: the facet's sign times the
// parity of the dropped vertex position (boundary-operator convention).
inline int induced_ridge_sign(const Cell& facet, int facet_sign, const Cell& ridge) {
    for (std::size_t i = 0; i < facet.size(); ++i) {
        Cell r;
        for (std::size_t k = 0; k < facet.size(); ++k)
            if (k != i) r.push_back(facet[k]);
        if (r == ridge) return (i % 2 == 0) ? facet_sign : -facet_sign;
    }
    throw err::internal("ridge " + cell_to_string(ridge) + " not in facet " + cell_to_string(facet));
}

inline bool orientation_coherent(const SimplicialComplex& c, const std::vector<signed char>& signs) {
    if (signs.size() != c.facets.size()) return false;
    for (const auto& [ridge, fs] : ridge_stars(c)) {
        if (fs.size() != 2) continue;  // only two-sided ridges constrain signs
        int s0 = induced_ridge_sign(c.facets[static_cast<std::size_t>(fs[0])], signs[static_cast<std::size_t>(fs[0])], ridge);
        int s1 = induced_ridge_sign(c.facets[static_cast<std::size_t>(fs[1])], signs[static_cast<std::size_t>(fs[1])], ridge);
        if (s0 != -s1) return false;
    }
    return true;
}

// Propagate facet signs across two-sided ridges; empty result means a
// contradiction was hit (non-orientable) or some ridge is not two-sided.
inline std::vector<signed char> orient_or_empty(const SimplicialComplex& c) {
    auto stars = ridge_stars(c);
    std::vector<std::vector<std::int32_t>> nbr(c.facets.size());
    for (const auto& [ridge, fs] : stars) {
        if (fs.size() != 2) return {};
        nbr[static_cast<std::size_t>(fs[0])].push_back(fs[1]);
        nbr[static_cast<std::size_t>(fs[1])].push_back(fs[0]);
    }
    std::vector<signed char> signs(c.facets.size(), 0);
    for (std::size_t seed = 0; seed < c.facets.size(); ++seed) {
        if (signs[seed] != 0) continue;
        signs[seed] = 1;
        std::vector<std::int32_t> stack{static_cast<std::int32_t>(seed)};
        while (!stack.empty()) {
            std::int32_t cur = stack.back();
            stack.pop_back();
            for (std::int32_t nx : nbr[static_cast<std::size_t>(cur)]) {
                // facets may share several ridges (multiset complexes); every
                // shared ridge constrains the neighbor sign and all must agree
                bool fixed = false;
                signed char want = 0;
                const Cell& a = c.facets[static_cast<std::size_t>(cur)];
                const Cell& b = c.facets[static_cast<std::size_t>(nx)];
                for (std::size_t i = 0; i < a.size(); ++i) {
                    Cell r;
                    for (std::size_t k = 0; k < a.size(); ++k)
                        if (k != i) r.push_back(a[k]);
                    if (!cell_contains(b, r)) continue;
                    int sa = induced_ridge_sign(a, signs[static_cast<std::size_t>(cur)], r);
                    int sb_plus = induced_ridge_sign(b, 1, r);
                    signed char needed = static_cast<signed char>(sa == sb_plus ? -1 : 1);
                    if (fixed && needed != want) return {};
                    want = needed;
                    fixed = true;
                }
                if (!fixed) continue;
                if (signs[static_cast<std::size_t>(nx)] == 0) {
                    signs[static_cast<std::size_t>(nx)] = want;
                    stack.push_back(nx);
                } else if (signs[static_cast<std::size_t>(nx)] != want) {
                    return {};
                }
            }
        }
    }
    return signs;
}

}  // namespace pmres
