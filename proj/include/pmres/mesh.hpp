#pragma once

// OFF export of the order complex for surface runs (n = 2).  Coordinates come
// from pushing each face class's center through the projection and lifting the
// barycentric point to coordinates of Z: user-supplied ones when present,
// otherwise a deterministic spring layout.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "pmres/pipeline.hpp"

namespace pmres {

using Point3 = std::array<double, 3>;

namespace detail {

inline Point3 operator_add(const Point3& a, const Point3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline Point3 scale(const Point3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline Point3 normalize(const Point3& a) {
    double len = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
    if (len < 1e-12) return {1, 0, 0};
    return scale(a, 1.0 / len);
}

// deterministic layout: golden-spiral start, neighbor averaging on the sphere
inline std::map<VertexId, Point3> spring_embedding(const SimplicialComplex& c) {
    std::set<VertexId> vs;
    for (const Cell& f : c.facets) vs.insert(f.begin(), f.end());
    std::map<VertexId, Point3> pos;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    std::size_t i = 0;
    for (VertexId v : vs) {
        double y = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(vs.size());
        double rad = std::sqrt(std::max(0.0, 1.0 - y * y));
        double th = golden * static_cast<double>(i);
        pos[v] = {rad * std::cos(th), y, rad * std::sin(th)};
        ++i;
    }
    std::map<VertexId, std::set<VertexId>> nbr;
    for (const Cell& f : c.facets)
        for (std::size_t a = 0; a < f.size(); ++a)
            for (std::size_t b = a + 1; b < f.size(); ++b) {
                nbr[f[a]].insert(f[b]);
                nbr[f[b]].insert(f[a]);
            }
    for (int round = 0; round < 100; ++round) {
        std::map<VertexId, Point3> next;
        for (const auto& [v, p] : pos) {
            Point3 acc{0, 0, 0};
            for (VertexId w : nbr[v]) acc = operator_add(acc, pos[w]);
            acc = scale(acc, 1.0 / std::max<std::size_t>(nbr[v].size(), 1));
            next[v] = normalize(operator_add(scale(p, 0.5), scale(acc, 0.5)));
        }
        pos = std::move(next);
    }
    return pos;
}

}  // namespace detail

inline std::string export_off(const ResolveOutcome& out,
                              const std::optional<std::map<VertexId, Point3>>& input_coords) {
    if (out.engine->n() != 2) throw err::schema("OFF export is defined for surface runs (n = 2) only");
    const auto& pm = out.labeled.pm;

    // coordinates of the resolved complex's vertices
    std::map<VertexId, Point3> zcoords;
    bool lifted = false;
    if (input_coords && out.labeled.provenance == LabelingProvenance::subdivided) {
        const auto& sd = *out.labeled.subdivision;
        lifted = true;
        for (std::size_t v = 0; v < sd.vertex_face.size(); ++v) {
            Point3 acc{0, 0, 0};
            for (VertexId w : sd.vertex_face[v]) {
                auto it = input_coords->find(w);
                if (it == input_coords->end()) {
                    lifted = false;
                    break;
                }
                acc = detail::operator_add(acc, it->second);
            }
            if (!lifted) break;
            zcoords[static_cast<VertexId>(v)] = detail::scale(acc, 1.0 / sd.vertex_face[v].size());
        }
    } else if (input_coords && out.labeled.provenance == LabelingProvenance::direct) {
        lifted = true;
        for (const Cell& f : pm.complex.facets)
            for (VertexId v : f) {
                auto it = input_coords->find(v);
                if (it == input_coords->end()) lifted = false;
            }
        if (lifted)
            for (const auto& [v, p] : *input_coords) zcoords[v] = p;
    }
    if (!lifted) zcoords = detail::spring_embedding(pm.complex);

    auto oc = order_complex(out.quotient, out.cube_signs);
    const auto& q = out.quotient;
    const auto& eng = *out.engine;

    // class centers through the projection
    std::vector<Point3> vpos(q.class_count, {0, 0, 0});
    for (std::uint32_t cls = 0; cls < q.class_count; ++cls) {
        std::uint32_t key = q.members[q.member_begin[cls]];
        std::uint32_t cube = key / q.npat, pat = key % q.npat;
        std::vector<double> t;
        std::uint32_t p = pat;
        for (int j = 1; j <= q.n; ++j, p /= 3) {
            int digit = static_cast<int>(p % 3);
            t.push_back(digit == 2 ? 0.5 : static_cast<double>(digit));
        }
        auto w = g_weights(t);
        auto chain = eng.flag_chain(eng.state_flag(cube));
        Point3 acc{0, 0, 0};
        for (std::size_t i = 0; i < chain.size(); ++i) {
            Point3 b{0, 0, 0};
            for (VertexId v : chain[i]) b = detail::operator_add(b, zcoords.at(v));
            b = detail::scale(b, 1.0 / chain[i].size());
            acc = detail::operator_add(acc, detail::scale(b, w[i]));
        }
        vpos[cls] = acc;
    }

    std::ostringstream off;
    off << "OFF\n" << q.class_count << " " << oc.pm.complex.facets.size() << " 0\n";
    off.precision(9);
    for (std::uint32_t i = 0; i < q.class_count; ++i) {
        std::uint32_t cls = oc.vertex_class[i];
        off << vpos[cls][0] << " " << vpos[cls][1] << " " << vpos[cls][2] << "\n";
    }
    for (const Cell& f : oc.pm.complex.facets) off << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
    return off.str();
}

}  // namespace pmres
