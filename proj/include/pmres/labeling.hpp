#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmres/pseudo_manifold.hpp"
#include "pmres/subdivision.hpp"

namespace pmres {

// Labels live on ridges; c(F) is the set of labels of ridges containing F.
// A labeling is good when |c(F)| = n - dim F for every cell and H -> c(H) is
// injective on every interval [F, G] up to a top cell G.
struct GoodLabeling {
    std::map<Cell, int> labels;
};

namespace detail {

// distinct ridges of the complex containing f
inline std::vector<Cell> ridges_above(const SimplicialComplex& c,
                                      const std::map<Cell, std::vector<std::int32_t>>& star, const Cell& f) {
    std::set<Cell> out;
    if (cell_dim(f) == c.dimension - 1) {
        out.insert(f);
    } else {
        auto it = star.find(f);
        if (it == star.end()) throw err::face_not_present("no face " + cell_to_string(f));
        for (std::int32_t fi : it->second) {
            const Cell& g = c.facets[static_cast<std::size_t>(fi)];
            for (VertexId v : cell_minus(g, f)) {
                Cell r;
                for (VertexId w : g)
                    if (w != v) r.push_back(w);
                out.insert(std::move(r));
            }
        }
    }
    return {out.begin(), out.end()};
}

}  // namespace detail

inline std::set<int> labelset(const PseudoManifold& pm, const GoodLabeling& lab, const Cell& f) {
    if (cell_dim(f) == pm.dimension()) return {};  // top cells have empty label
    auto star = face_star_map(pm.complex);
    std::set<int> out;
    for (const Cell& r : detail::ridges_above(pm.complex, star, f)) out.insert(lab.labels.at(r));
    return out;
}

struct LabelingViolation {
    std::string kind;  // "missing_label", "condition1", "condition2"
    Cell face;
    Cell witness_a, witness_b;  // condition2: the two interval cells with equal labels
    std::string detail;
};

struct GoodLabelingReport {
    bool good = true;
    std::vector<LabelingViolation> violations;
};

// Exhaustive check of both conditions; reports every violating pair.
inline GoodLabelingReport verify_good(const PseudoManifold& pm, const GoodLabeling& lab) {
    GoodLabelingReport rep;
    const int n = pm.dimension();
    auto star = face_star_map(pm.complex);

    auto cset = [&](const Cell& f) {
        std::set<int> s;
        for (const Cell& r : detail::ridges_above(pm.complex, star, f)) {
            auto it = lab.labels.find(r);
            if (it == lab.labels.end()) return std::optional<std::set<int>>();
            s.insert(it->second);
        }
        return std::optional<std::set<int>>(std::move(s));
    };

    for (const Cell& f : proper_faces(pm.complex)) {
        auto cs = cset(f);
        if (!cs) {
            rep.good = false;
            rep.violations.push_back({"missing_label", f, {}, {}, "some ridge above this face is unlabeled"});
            continue;
        }
        if (static_cast<int>(cs->size()) != n - cell_dim(f)) {
            rep.good = false;
            rep.violations.push_back({"condition1", f, {}, {},
                                      "|c(F)| = " + std::to_string(cs->size()) + ", expected " +
                                          std::to_string(n - cell_dim(f))});
        }
        // condition 2 on every interval up to a containing top cell
        auto sit = star.find(f);
        if (sit == star.end()) continue;
        for (std::int32_t fi : sit->second) {
            const Cell& g = pm.complex.facets[static_cast<std::size_t>(fi)];
            auto interval = face_interval(f, g);
            std::map<std::set<int>, Cell> seen;
            for (const Cell& h : interval) {
                std::set<int> ch;
                if (cell_dim(h) < n) {
                    auto c = cset(h);
                    if (!c) continue;
                    ch = *c;
                }
                auto [it, inserted] = seen.emplace(ch, h);
                if (!inserted) {
                    rep.good = false;
                    rep.violations.push_back({"condition2", f, it->second, h,
                                              "interval to " + cell_to_string(g) + " repeats a label set"});
                }
            }
        }
    }
    return rep;
}

// The unique H with F <= H <= G and c(H) = S; G must be a top cell.
inline Cell face_by_labelset(const PseudoManifold& pm, const GoodLabeling& lab, const Cell& f, const Cell& g,
                             const std::set<int>& s) {
    const int n = pm.dimension();
    std::optional<Cell> found;
    for (const Cell& h : face_interval(f, g)) {
        std::set<int> ch = (cell_dim(h) == n) ? std::set<int>{} : labelset(pm, lab, h);
        if (ch == s) {
            if (found) throw err::not_unique("two cells between " + cell_to_string(f) + " and " +
                                             cell_to_string(g) + " carry the same label set");
            found = h;
        }
    }
    if (!found)
        throw err::no_such_face("no cell between " + cell_to_string(f) + " and " + cell_to_string(g) +
                                " has the requested label set");
    return *found;
}

// Each ridge is labeled by the unique color absent from it.  The coloring must
// be proper on the 1-skeleton and every top cell must carry all n+1 colors.
inline GoodLabeling labeling_from_coloring(const PseudoManifold& pm, const std::map<VertexId, int>& coloring) {
    const int n = pm.dimension();
    std::set<int> universe;
    for (const Cell& g : pm.complex.facets)
        for (VertexId v : g) {
            auto it = coloring.find(v);
            if (it == coloring.end()) throw err::schema("coloring misses vertex " + std::to_string(v));
            universe.insert(it->second);
        }
    if (static_cast<int>(universe.size()) != n + 1)
        throw err::wrong_color_count("coloring uses " + std::to_string(universe.size()) + " colors, expected " +
                                     std::to_string(n + 1));
    for (const Cell& g : pm.complex.facets) {
        std::set<int> colors;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t k = i + 1; k < g.size(); ++k)
                if (coloring.at(g[i]) == coloring.at(g[k]))
                    throw err::not_proper_coloring("vertices " + std::to_string(g[i]) + " and " +
                                                   std::to_string(g[k]) + " share color inside facet " +
                                                   cell_to_string(g));
        for (VertexId v : g) colors.insert(coloring.at(v));
        if (colors != universe)
            throw err::wrong_color_count("facet " + cell_to_string(g) + " does not carry all colors");
    }

    GoodLabeling lab;
    for (const auto& [ridge, fs] : ridge_stars(pm.complex)) {
        std::set<int> present;
        for (VertexId v : ridge) present.insert(coloring.at(v));
        std::vector<int> missing;
        for (int c : universe)
            if (!present.count(c)) missing.push_back(c);
        if (missing.size() != 1)
            throw err::not_proper_coloring("ridge " + cell_to_string(ridge) + " repeats a color");
        lab.labels[ridge] = missing[0];
    }
    return lab;
}

enum class LabelingProvenance { direct, subdivided };

inline const char* to_string(LabelingProvenance p) {
    return p == LabelingProvenance::direct ? "direct" : "subdivided";
}

struct EnsureGoodResult {
    PseudoManifold pm;
    GoodLabeling labeling;
    LabelingProvenance provenance = LabelingProvenance::direct;
    std::optional<Subdivision> subdivision;
};

// Use supplied labels or coloring when given; otherwise fall back to the
// barycentric subdivision with its dimension coloring (always good).
inline EnsureGoodResult ensure_good(const PseudoManifold& pm,
                                    const std::optional<std::map<VertexId, int>>& coloring = std::nullopt,
                                    const std::optional<GoodLabeling>& labels = std::nullopt) {
    EnsureGoodResult out;
    if (labels) {
        auto rep = verify_good(pm, *labels);
        if (!rep.good) {
            std::string w = "supplied labeling fails: ";
            for (std::size_t i = 0; i < rep.violations.size() && i < 3; ++i)
                w += rep.violations[i].kind + " at " + cell_to_string(rep.violations[i].face) + "; ";
            throw err::bad_labeling(w);
        }
        out.pm = pm;
        out.labeling = *labels;
        out.provenance = LabelingProvenance::direct;
        return out;
    }
    if (coloring) {
        out.labeling = labeling_from_coloring(pm, *coloring);
        out.pm = pm;
        out.provenance = LabelingProvenance::direct;
        return out;
    }
    Subdivision sd = barycentric_subdivision(pm);
    std::map<VertexId, int> dim_coloring;
    for (std::size_t v = 0; v < sd.vertex_coloring.size(); ++v)
        dim_coloring[static_cast<VertexId>(v)] = sd.vertex_coloring[v];
    out.labeling = labeling_from_coloring(sd.pm, dim_coloring);
    out.pm = sd.pm;
    out.provenance = LabelingProvenance::subdivided;
    out.subdivision = std::move(sd);
    return out;
}

}  // namespace pmres
