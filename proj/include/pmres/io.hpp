#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "pmres/census.hpp"
#include "pmres/pipeline.hpp"

namespace pmres {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Complex files
// ---------------------------------------------------------------------------

struct ComplexFile {
    int dimension = 0;
    std::vector<Cell> facets;  // as listed in the file
    std::optional<std::vector<signed char>> orientation;
    std::optional<std::map<VertexId, int>> coloring;
    std::optional<GoodLabeling> labels;
    std::optional<std::map<VertexId, std::array<double, 3>>> coordinates;
};

namespace ioutil {

inline json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw err::schema(what + ": not valid JSON");
    return j;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw err::schema("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw err::schema("cannot write " + path);
    out << text;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Cell cell_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw err::schema(field + ": expected a non-empty vertex list");
    Cell c;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw err::schema(field + ": vertex ids must be integers");
        c.push_back(v.get<VertexId>());
    }
    return c;
}

}  // namespace ioutil

inline ComplexFile parse_complex_file(const json& j) {
    if (!j.is_object()) throw err::schema("complex file: expected an object");
    ComplexFile f;
    if (!j.contains("dimension") || !j["dimension"].is_number_integer())
        throw err::schema("complex file: missing integer field 'dimension'");
    f.dimension = j["dimension"].get<int>();
    if (!j.contains("facets") || !j["facets"].is_array() || j["facets"].empty())
        throw err::schema("complex file: missing non-empty array field 'facets'");
    for (const auto& fj : j["facets"]) f.facets.push_back(ioutil::cell_from_json(fj, "facets"));

    if (j.contains("orientation")) {
        if (!j["orientation"].is_array() || j["orientation"].size() != f.facets.size())
            throw err::schema("orientation: expected one entry per facet");
        std::vector<signed char> signs;
        for (const auto& s : j["orientation"]) {
            if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1))
                throw err::schema("orientation: entries must be +1 or -1");
            signs.push_back(static_cast<signed char>(s.get<int>()));
        }
        f.orientation = std::move(signs);
    }
    if (j.contains("coloring")) {
        if (!j["coloring"].is_array()) throw err::schema("coloring: expected a list of [vertex, color] pairs");
        std::map<VertexId, int> col;
        for (const auto& p : j["coloring"]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
                throw err::schema("coloring: entries must be [vertex, color]");
            col[p[0].get<VertexId>()] = p[1].get<int>();
        }
        f.coloring = std::move(col);
    }
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) throw err::schema("labels: expected a list of [ridge, label] pairs");
        GoodLabeling lab;
        for (const auto& p : j["labels"]) {
            if (!p.is_array() || p.size() != 2 || !p[1].is_number_integer())
                throw err::schema("labels: entries must be [ridge, label]");
            Cell ridge = ioutil::cell_from_json(p[0], "labels");
            std::sort(ridge.begin(), ridge.end());
            lab.labels[ridge] = p[1].get<int>();
        }
        f.labels = std::move(lab);
    }
    if (j.contains("coordinates")) {
        if (!j["coordinates"].is_array()) throw err::schema("coordinates: expected a list");
        std::map<VertexId, std::array<double, 3>> coords;
        for (const auto& p : j["coordinates"]) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_array() ||
                p[1].size() != 3)
                throw err::schema("coordinates: entries must be [vertex, [x, y, z]]");
            coords[p[0].get<VertexId>()] = {p[1][0].get<double>(), p[1][1].get<double>(),
                                            p[1][2].get<double>()};
        }
        f.coordinates = std::move(coords);
    }
    return f;
}

inline ComplexFile parse_complex_path(const std::string& path) {
    return parse_complex_file(ioutil::parse_json(ioutil::read_file(path), path));
}

// Canonical emission: facets sorted, orientation relative to sorted vertex order.
inline json emit_complex_file(const ComplexFile& f) {
    // canonicalize facet vertex order first, fixing orientation signs
    std::vector<std::pair<Cell, signed char>> tagged;
    for (std::size_t i = 0; i < f.facets.size(); ++i) {
        Cell sorted = f.facets[i];
        std::sort(sorted.begin(), sorted.end());
        signed char sign = f.orientation ? (*f.orientation)[i] : 1;
        if (f.orientation) {
            std::vector<int> perm(sorted.size());
            for (std::size_t k = 0; k < sorted.size(); ++k)
                perm[k] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), f.facets[i][k]) -
                                           sorted.begin());
            sign = static_cast<signed char>(sign * permutation_sign(perm));
        }
        tagged.emplace_back(std::move(sorted), sign);
    }
    std::stable_sort(tagged.begin(), tagged.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    json j;
    j["dimension"] = f.dimension;
    j["facets"] = json::array();
    for (const auto& [cell, sign] : tagged) j["facets"].push_back(cell);
    if (f.orientation) {
        j["orientation"] = json::array();
        for (const auto& [cell, sign] : tagged) j["orientation"].push_back(static_cast<int>(sign));
    }
    if (f.coloring) {
        j["coloring"] = json::array();
        for (const auto& [v, c] : *f.coloring) j["coloring"].push_back(json::array({v, c}));
    }
    if (f.labels) {
        j["labels"] = json::array();
        for (const auto& [ridge, lbl] : f.labels->labels) j["labels"].push_back(json::array({ridge, lbl}));
    }
    if (f.coordinates) {
        j["coordinates"] = json::array();
        for (const auto& [v, xyz] : *f.coordinates)
            j["coordinates"].push_back(json::array({v, json::array({xyz[0], xyz[1], xyz[2]})}));
    }
    return j;
}

// validated pseudo-manifold from a file (parses, canonicalizes, orients)
inline PseudoManifold file_to_pseudo_manifold(const ComplexFile& f) {
    // make_complex sorts facet vertices; carry the orientation through the
    // same permutation, then through the facet sort
    ComplexFile canon = f;
    json j = emit_complex_file(f);
    canon = parse_complex_file(j);
    SimplicialComplex c = make_complex(canon.dimension, canon.facets);
    std::optional<std::vector<signed char>> ori;
    if (canon.orientation) ori = canon.orientation;
    return make_pseudo_manifold(std::move(c), std::move(ori));
}

inline std::string input_digest(const ComplexFile& f) {
    return ioutil::fnv1a64_hex(emit_complex_file(f).dump());
}

// ---------------------------------------------------------------------------
// Run reports
// ---------------------------------------------------------------------------

inline json manifold_report_json(const ManifoldReport& m) {
    json j;
    j["ok"] = m.ok();
    j["exact"] = m.exact;
    j["codim1_two_sided"] = m.codim1_two_sided;
    j["vertex_links_ok"] = m.vertex_links_ok;
    j["low_dim_links_ok"] = m.low_dim_links_ok;
    j["vertex_classes"] = m.vertex_classes;
    j["failures"] = json::array();
    for (std::size_t i = 0; i < m.failures.size() && i < 16; ++i) {
        json f;
        f["class"] = m.failures[i].class_id;
        f["face_dim"] = m.failures[i].face_dim;
        f["detail"] = m.failures[i].detail;
        j["failures"].push_back(f);
    }
    return j;
}

inline json covering_report_json(const CoveringReport& c) {
    json j;
    j["sheet_count"] = c.sheet_count;
    j["sheets_constant"] = c.sheets_constant;
    j["walls_ok"] = c.walls_ok;
    j["generic_fibers_ok"] = c.generic_fibers_ok;
    j["confined_to_codim2"] = c.confined_to_codim2();
    j["branch_point_count"] = c.branch_points.size();
    // grouped branch summary keeps the report small and deterministic
    std::map<std::tuple<int, long, long, long>, long> groups;
    for (const auto& b : c.branch_points) groups[{b.image_dim, b.multiplicity, b.sectors, b.full_sectors}]++;
    j["branch_summary"] = json::array();
    for (const auto& [key, count] : groups) {
        json g;
        g["image_dim"] = std::get<0>(key);
        g["multiplicity"] = std::get<1>(key);
        g["sectors"] = std::get<2>(key);
        g["full_sectors"] = std::get<3>(key);
        g["count"] = count;
        j["branch_summary"].push_back(g);
    }
    if (!c.generic_violations.empty()) {
        j["violations"] = json::array();
        for (std::size_t i = 0; i < c.generic_violations.size() && i < 16; ++i)
            j["violations"].push_back(c.generic_violations[i]);
    }
    return j;
}

inline json build_run_report(const ComplexFile& input, const ResolveOutcome& out, std::uint64_t cap,
                             double wall_ms) {
    json j;
    j["schema_version"] = 1;
    j["tool"] = "pmres";
    {
        json in;
        in["digest_fnv1a64"] = input_digest(input);
        in["dimension"] = input.dimension;
        in["facet_count"] = input.facets.size();
        j["input"] = in;
    }
    j["provenance"] = to_string(out.labeled.provenance);
    {
        json rz;
        rz["dimension"] = out.labeled.pm.dimension();
        rz["facet_count"] = out.labeled.pm.complex.facets.size();
        rz["flag_count"] = out.engine->flag_count();
        rz["euler_characteristic"] = euler_characteristic(out.labeled.pm.complex);
        j["resolved"] = rz;
    }
    {
        json comp;
        comp["seed_flag"] = out.comp.seed_flag;
        comp["states"] = out.comp.count;
        comp["cap"] = cap;
        comp["complete"] = out.comp.complete;
        j["component"] = comp;
    }
    {
        json q;
        q["face_counts"] = out.quotient.face_counts;
        q["euler_characteristic"] = out.quotient.euler_characteristic();
        j["quotient"] = q;
    }
    j["manifold"] = manifold_report_json(out.manifold);
    j["orientable"] = true;  // orient_quotient throws otherwise
    {
        json d;
        d["r"] = out.deg.r;
        d["abs_r"] = out.deg.abs_r;
        d["all_flags_hit"] = out.deg.all_flags_hit;
        j["degree"] = d;
    }
    j["covering"] = covering_report_json(out.covering);
    {
        json t;
        t["wall_ms"] = wall_ms;
        j["timing"] = t;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Export bundle: the report plus everything needed to re-verify M
// ---------------------------------------------------------------------------

inline json export_bundle(const ComplexFile& input, const ResolveOutcome& out, std::uint64_t cap,
                          double wall_ms) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "pmres-resolution";
    j["report"] = build_run_report(input, out, cap, wall_ms);
    {
        ComplexFile rz;
        rz.dimension = out.labeled.pm.dimension();
        rz.facets = out.labeled.pm.complex.facets;
        rz.orientation = out.labeled.pm.orientation;
        rz.labels = out.labeled.labeling;
        j["resolved_complex"] = emit_complex_file(rz);
    }
    const auto& eng = *out.engine;
    j["cubes"] = json::array();
    for (std::uint32_t s = 0; s < out.comp.count; ++s) {
        json c;
        c["facet"] = eng.flag_facet(eng.state_flag(s));
        json chain = json::array();
        for (const Cell& f : eng.flag_chain(eng.state_flag(s))) chain.push_back(f);
        c["flag"] = chain;
        c["h"] = eng.state_h(s);
        j["cubes"].push_back(c);
    }
    j["adjacency"] = json::array();
    const int n = eng.n();
    for (std::uint32_t s = 0; s < out.comp.count; ++s) {
        json row = json::array();
        for (int jj = 1; jj <= n; ++jj)
            for (int eps = 0; eps <= 1; ++eps) row.push_back(out.comp.partner_of(s, jj, eps, n));
        j["adjacency"].push_back(row);
    }
    j["cube_signs"] = json::array();
    for (signed char s : out.cube_signs) j["cube_signs"].push_back(static_cast<int>(s));
    return j;
}

// ---------------------------------------------------------------------------
// Census reports
// ---------------------------------------------------------------------------

inline json census_report_json(const CensusReport& rep) {
    json j;
    j["matched"] = rep.matched;
    j["r"] = rep.r;
    j["classes"] = json::array();
    for (const auto& c : rep.classes) {
        json cj;
        cj["class"] = c.class_id;
        cj["links"] = c.link_count;
        cj["prescribed"] = c.prescribed;
        cj["amphichiral"] = c.amphichiral;
        cj["mirror_class"] = c.mirror_class;
        cj["facets"] = c.facets;
        j["classes"].push_back(cj);
    }
    j["residual_pairs"] = json::array();
    for (const auto& p : rep.residual_pairs)
        j["residual_pairs"].push_back(json{{"class", p.class_id}, {"mirror_class", p.mirror_class}, {"pairs", p.pairs}});
    j["leftovers"] = json::array();
    for (const auto& [c, count] : rep.leftovers)
        j["leftovers"].push_back(json{{"class", c}, {"count", count}});
    return j;
}

}  // namespace pmres
