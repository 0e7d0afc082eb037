#pragma once

// Engine-free re-verification of an exported resolution bundle.  Rebuilds the
// quotient from the stored cubes and gluings and re-runs every invariant
// check, then compares the verdicts against the stored report.

#include <map>
#include <string>
#include <vector>

#include "pmres/io.hpp"
#include "pmres/quotient.hpp"
#include "pmres/resolution.hpp"

namespace pmres {

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> problems;

    void fail(const std::string& what) {
        ok = false;
        if (problems.size() < 32) problems.push_back(what);
    }
};

namespace detail {

// labels as c-sets for the wall checks
inline std::set<int> cset_of(const std::map<Cell, int>& labels, const Cell& f, int n) {
    std::set<int> s;
    if (cell_dim(f) == n) return s;
    for (const auto& [ridge, lbl] : labels)
        if (cell_contains(ridge, f)) s.insert(lbl);
    return s;
}

}  // namespace detail

inline VerifyReport verify_bundle(const json& bundle) {
    VerifyReport rep;
    if (!bundle.is_object() || bundle.value("kind", "") != "pmres-resolution") {
        throw err::schema("not a resolution bundle");
    }
    const json& report = bundle.at("report");
    ComplexFile rz = parse_complex_file(bundle.at("resolved_complex"));
    PseudoManifold pm = file_to_pseudo_manifold(rz);
    if (!rz.labels) throw err::schema("bundle misses the resolved labeling");
    const int n = pm.dimension();
    const auto& tables = FlagTables::get(n);

    // --- cubes ---
    const json& cubes = bundle.at("cubes");
    const std::uint32_t count = static_cast<std::uint32_t>(cubes.size());
    std::vector<std::uint32_t> flag_of(count);
    std::vector<std::uint16_t> h_of(count);
    std::vector<std::vector<Cell>> chain_of(count);
    for (std::uint32_t s = 0; s < count; ++s) {
        const json& c = cubes[s];
        std::uint32_t facet = c.at("facet").get<std::uint32_t>();
        if (facet >= pm.complex.facets.size()) {
            rep.fail("cube " + std::to_string(s) + " references a facet out of range");
            continue;
        }
        std::vector<Cell> chain;
        for (const auto& fj : c.at("flag")) chain.push_back(ioutil::cell_from_json(fj, "flag"));
        if (chain.size() != static_cast<std::size_t>(n) + 1 || chain[0] != pm.complex.facets[facet]) {
            rep.fail("cube " + std::to_string(s) + " has a malformed flag");
            continue;
        }
        // vertex order -> permutation rank
        std::vector<std::uint8_t> perm(static_cast<std::size_t>(n) + 1);
        bool good_chain = true;
        for (int k = 0; k <= n && good_chain; ++k) {
            const Cell& small = chain[static_cast<std::size_t>(n - k)];
            Cell diff = (k == 0) ? small : cell_minus(small, chain[static_cast<std::size_t>(n - k + 1)]);
            if (static_cast<int>(small.size()) != k + 1 || diff.size() != 1) {
                good_chain = false;
                break;
            }
            const Cell& g = pm.complex.facets[facet];
            auto it = std::lower_bound(g.begin(), g.end(), diff[0]);
            if (it == g.end() || *it != diff[0]) {
                good_chain = false;
                break;
            }
            perm[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(it - g.begin());
        }
        auto rank_it = good_chain ? tables.rank_of.find(FlagTables::encode(perm)) : tables.rank_of.end();
        if (rank_it == tables.rank_of.end()) {
            rep.fail("cube " + std::to_string(s) + " flag is not a maximal chain");
            continue;
        }
        flag_of[s] = facet * tables.fact + rank_it->second;
        h_of[s] = c.at("h").get<std::uint16_t>();
        chain_of[s] = std::move(chain);
    }
    if (!rep.ok) return rep;

    // --- adjacency ---
    const json& adjacency = bundle.at("adjacency");
    if (adjacency.size() != count) throw err::schema("adjacency row count mismatch");
    Component comp;
    comp.count = count;
    comp.expanded = count;
    comp.complete = true;
    comp.partner.reserve(static_cast<std::size_t>(count) * 2 * static_cast<std::size_t>(n));
    for (std::uint32_t s = 0; s < count; ++s) {
        if (adjacency[s].size() != static_cast<std::size_t>(2 * n))
            throw err::schema("adjacency row " + std::to_string(s) + " has the wrong length");
        for (const auto& p : adjacency[s]) {
            std::uint32_t w = p.get<std::uint32_t>();
            if (w >= count) throw err::schema("adjacency entry out of range");
            comp.partner.push_back(w);
        }
    }
    for (std::uint32_t s = 0; s < count; ++s)
        for (int j = 1; j <= n; ++j)
            for (int eps = 0; eps <= 1; ++eps) {
                std::uint32_t w = comp.partner_of(s, j, eps, n);
                if (w == s) rep.fail("gluing fixes cube " + std::to_string(s));
                if (comp.partner_of(w, j, eps, n) != s)
                    rep.fail("gluing at cube " + std::to_string(s) + " is not an involution");
            }

    // --- wall structure against the labeling ---
    const auto& labels = rz.labels->labels;
    for (std::uint32_t s = 0; s < count; ++s) {
        for (int j = 1; j <= n; ++j) {
            std::uint32_t w0 = comp.partner_of(s, j, 0, n);
            if (h_of[w0] != h_of[s]) rep.fail("flip partner changes h at cube " + std::to_string(s));
            for (int i = 0; i <= n; ++i)
                if (i != j && chain_of[w0][static_cast<std::size_t>(i)] != chain_of[s][static_cast<std::size_t>(i)])
                    rep.fail("flip partner moves F_" + std::to_string(i) + " at cube " + std::to_string(s));
            if (chain_of[w0][static_cast<std::size_t>(j)] == chain_of[s][static_cast<std::size_t>(j)])
                rep.fail("flip partner keeps F_j at cube " + std::to_string(s));

            std::uint32_t w1 = comp.partner_of(s, j, 1, n);
            if (h_of[w1] != (h_of[s] ^ (1u << (j - 1))))
                rep.fail("pairing partner has the wrong h at cube " + std::to_string(s));
            for (int i = j; i <= n; ++i)
                if (chain_of[w1][static_cast<std::size_t>(i)] != chain_of[s][static_cast<std::size_t>(i)])
                    rep.fail("pairing partner moves F_" + std::to_string(i) + " at cube " + std::to_string(s));
            for (int i = 1; i < j; ++i)
                if (detail::cset_of(labels, chain_of[w1][static_cast<std::size_t>(i)], n) !=
                    detail::cset_of(labels, chain_of[s][static_cast<std::size_t>(i)], n))
                    rep.fail("pairing partner changes a label set at cube " + std::to_string(s));
        }
        if (!rep.ok) break;
    }

    // --- quotient, links, orientation ---
    QuotientComplex q = build_quotient_n(n, comp);
    {
        std::vector<long> want = report.at("quotient").at("face_counts").get<std::vector<long>>();
        if (q.face_counts != want) rep.fail("face counts differ from the report");
        if (q.euler_characteristic() != report.at("quotient").at("euler_characteristic").get<long>())
            rep.fail("euler characteristic differs from the report");
    }
    ManifoldReport man = verify_manifold(q);
    {
        const json& m = report.at("manifold");
        if (man.ok() != m.at("ok").get<bool>() || man.exact != m.at("exact").get<bool>() ||
            man.vertex_links_ok != m.at("vertex_links_ok").get<bool>())
            rep.fail("manifold verdicts differ from the report");
        if (!man.ok()) rep.fail("manifold checks fail on the exported complex");
    }
    std::vector<signed char> signs;
    try {
        signs = orient_quotient(q, comp);
    } catch (const Error& e) {
        rep.fail(std::string("orientation: ") + e.what());
        return rep;
    }
    {
        const json& stored = bundle.at("cube_signs");
        for (std::uint32_t s = 0; s < count; ++s)
            if (stored[s].get<int>() != signs[s]) {
                rep.fail("stored cube signs differ from propagation");
                break;
            }
    }

    // --- degree and sheets ---
    {
        std::vector<long long> signed_count(pm.complex.facets.size() * tables.fact, 0);
        std::vector<long long> unsigned_count(signed_count.size(), 0);
        for (std::uint32_t s = 0; s < count; ++s) {
            int sigma = tables.parity[flag_of[s] % tables.fact] * pm.orientation[flag_of[s] / tables.fact];
            signed_count[flag_of[s]] += signs[s] * sigma;
            unsigned_count[flag_of[s]] += 1;
        }
        long long r = signed_count.empty() ? 0 : signed_count[0];
        long long sheets = unsigned_count.empty() ? 0 : unsigned_count[0];
        for (std::size_t u = 0; u < signed_count.size(); ++u) {
            if (signed_count[u] != r) rep.fail("degree is not constant across flags");
            if (unsigned_count[u] != sheets) rep.fail("sheet count is not constant across flags");
        }
        if (r != report.at("degree").at("r").get<long long>()) rep.fail("degree differs from the report");
        if (sheets != report.at("covering").at("sheet_count").get<long long>())
            rep.fail("sheet count differs from the report");
    }
    return rep;
}

}  // namespace pmres
