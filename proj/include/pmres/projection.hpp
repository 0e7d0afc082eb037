#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pmres/quotient.hpp"
#include "pmres/resolution.hpp"

namespace pmres {

// ---------------------------------------------------------------------------
// The projection g sends (t, state) to a convex combination of the barycenters
// of the state's flag cells.  Degree bookkeeping is purely combinatorial; the
// evaluation below exists for export and numeric spot checks.
// ---------------------------------------------------------------------------

struct BarycentricPoint {
    std::vector<Cell> chain;      // F_0 ... F_n
    std::vector<double> weights;  // w_0 ... w_n, sum 1
};

inline std::vector<double> g_weights(const std::vector<double>& t) {
    const std::size_t n = t.size();
    std::vector<double> w(n + 1, 0.0);
    double prod = 1.0;  // running product of (1 - t_i) from the top down
    for (std::size_t j = n; j >= 1; --j) {
        w[j] = t[j - 1] * prod;
        prod *= (1.0 - t[j - 1]);
    }
    w[0] = prod;
    return w;
}

inline BarycentricPoint g_eval(const std::vector<Cell>& chain, const std::vector<double>& t) {
    if (chain.size() != t.size() + 1) throw err::schema("g_eval: flag length and point dimension disagree");
    BarycentricPoint p;
    p.chain = chain;
    p.weights = g_weights(t);
    return p;
}

// Inverse of the weight map on the open cube; valid away from t_i = 1.
inline std::vector<double> g_invert(const std::vector<double>& w) {
    if (w.empty()) throw err::schema("g_invert: empty weights");
    const std::size_t n = w.size() - 1;
    std::vector<double> t(n, 0.0);
    double prod = 1.0;
    for (std::size_t j = n; j >= 1; --j) {
        t[j - 1] = w[j] / prod;
        prod *= (1.0 - t[j - 1]);
    }
    return t;
}

// Sign of the flag simplex of Z against Z's orientation: the facet's sign
// times the parity of the vertex order that lists barycenters by dimension.
inline int flag_sign(const ResolutionEngine& eng, std::uint32_t flag) {
    return eng.flag_perm_parity(flag) * eng.manifold().orientation[eng.flag_facet(flag)];
}

struct DegreeReport {
    long long r = 0;               // common signed count over every flag
    long long abs_r = 0;
    std::uint64_t flag_total = 0;  // flags of the resolved complex
    std::uint64_t states = 0;
    bool all_flags_hit = true;
};

// Count component states over each flag of Z, signed by cube orientation
// against the flag simplex orientation.  A covering forces one common value.
inline DegreeReport degree(const ResolutionEngine& eng, const Component& comp,
                           const std::vector<signed char>& cube_signs) {
    DegreeReport rep;
    rep.flag_total = eng.flag_count();
    rep.states = comp.count;
    std::vector<long long> signed_count(rep.flag_total, 0);
    std::vector<long long> unsigned_count(rep.flag_total, 0);
    for (std::uint32_t s = 0; s < comp.count; ++s) {
        std::uint32_t u = eng.state_flag(s);
        signed_count[u] += cube_signs[s] * flag_sign(eng, u);
        unsigned_count[u] += 1;
    }
    rep.r = signed_count[0];
    rep.abs_r = std::llabs(rep.r);
    for (std::uint64_t u = 0; u < rep.flag_total; ++u) {
        if (signed_count[u] != rep.r)
            throw err::inconsistent_degree("flag " + std::to_string(u) + " carries signed count " +
                                           std::to_string(signed_count[u]) + ", flag 0 carries " +
                                           std::to_string(rep.r));
        if (unsigned_count[u] == 0) rep.all_flags_hit = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Covering structure off the codimension-2 skeleton
// ---------------------------------------------------------------------------

struct BranchPoint {
    std::uint32_t class_id = 0;
    Cell image_face;        // cell of Z whose barycenter the vertex maps to
    int image_dim = 0;
    long cubes = 0;         // cube corners merged into this vertex
    long sectors = 0;       // distinct flags among them
    long full_sectors = 0;  // flag simplices around the barycenter in Z
    long multiplicity = 1;  // cubes per covered sector
};

struct CoveringReport {
    bool sheets_constant = true;
    long long sheet_count = 0;                    // states over each flag
    std::vector<std::uint64_t> mismatched_flags;  // first few offenders
    bool walls_ok = true;
    bool generic_fibers_ok = true;
    std::vector<std::string> generic_violations;
    std::vector<BranchPoint> branch_points;

    bool confined_to_codim2() const { return sheets_constant && walls_ok && generic_fibers_ok; }
};

// Everything a consumer needs to read off the realization statement: M is a
// closed oriented manifold projecting to Z with constant degree r off the
// codimension-2 skeleton, so composing any singular cycle with the projection
// realizes r times its class.
struct RealizationSummary {
    bool manifold_ok = false;
    bool manifold_exact = true;
    bool orientable = false;
    long long r = 0;
    long long abs_r = 0;
    bool covering_confined = false;
    std::size_t branch_point_count = 0;
    std::uint32_t component_size = 0;
    long euler_m = 0;
    long euler_z = 0;
};

inline CoveringReport covering_check(const ResolutionEngine& eng, const Component& comp,
                                     const QuotientComplex& q) {
    CoveringReport rep;
    const int n = eng.n();

    // sheet counts over open flag simplices
    std::vector<long long> unsigned_count(eng.flag_count(), 0);
    for (std::uint32_t s = 0; s < comp.count; ++s) unsigned_count[eng.state_flag(s)]++;
    rep.sheet_count = unsigned_count[0];
    for (std::uint64_t u = 0; u < eng.flag_count(); ++u)
        if (unsigned_count[u] != rep.sheet_count) {
            rep.sheets_constant = false;
            if (rep.mismatched_flags.size() < 16) rep.mismatched_flags.push_back(u);
        }

    // each gluing joins the two flags adjacent across the corresponding wall
    for (std::uint32_t s = 0; s < comp.count && rep.walls_ok; ++s) {
        for (int j = 1; j <= n; ++j) {
            std::uint32_t w0 = comp.partner_of(s, j, 0, n);
            if (eng.state_flag(w0) != eng.flip_flag(eng.state_flag(s), j)) rep.walls_ok = false;
        }
        std::uint32_t w1 = comp.partner_of(s, 1, 1, n);
        for (int i = 1; i <= n; ++i)
            if (eng.flag_cell(eng.state_flag(w1), i) != eng.flag_cell(eng.state_flag(s), i)) rep.walls_ok = false;
    }

    // Vertex classes: a corner whose top pinned-1 coordinate is J maps to the
    // barycenter of F_J.  For J <= 1 the barycenter is off the codimension-2
    // skeleton and the class must be exactly one covering sheet.  For J >= 2
    // the star of the vertex may cover only part of the surrounding sectors
    // and may cover them several times; such classes are listed as branching.
    auto factorial = [](int k) {
        long f = 1;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    std::set<std::uint64_t> flags_seen;
    for (std::uint32_t cls = 0; cls < q.class_count; ++cls) {
        if (q.class_dim[cls] != 0) continue;
        const std::uint32_t size = q.member_begin[cls + 1] - q.member_begin[cls];
        const std::uint32_t key = q.members[q.member_begin[cls]];
        const std::uint32_t cube = key / q.npat, pat = key % q.npat;
        int J = 0;
        {
            std::uint32_t p = pat;
            for (int j = 1; j <= n; ++j, p /= 3)
                if (p % 3 == 1) J = j;
        }
        long full;
        Cell image;
        if (J == 0) {
            full = factorial(n + 1);
            image = eng.manifold().complex.facets[eng.flag_facet(eng.state_flag(cube))];
        } else {
            std::int32_t cid = eng.flag_cell(eng.state_flag(cube), J);
            image = eng.cell(cid);
            const int k = n - J;
            full = factorial(k + 1) * static_cast<long>(eng.star_members(cid).size()) * factorial(J);
        }
        // every member must sit over the same cell of Z, each flag uniformly often
        flags_seen.clear();
        bool mixed = false;
        for (std::uint32_t mi = q.member_begin[cls]; mi < q.member_begin[cls + 1]; ++mi) {
            std::uint32_t mcube = q.members[mi] / q.npat;
            flags_seen.insert(eng.state_flag(mcube));
            Cell other = (J == 0)
                             ? eng.manifold().complex.facets[eng.flag_facet(eng.state_flag(mcube))]
                             : eng.cell(eng.flag_cell(eng.state_flag(mcube), J));
            if (other != image) mixed = true;
        }
        if (mixed) {
            rep.generic_fibers_ok = false;
            rep.generic_violations.push_back("class " + std::to_string(cls) +
                                             " mixes base cells of the projection");
            continue;
        }
        const long sectors = static_cast<long>(flags_seen.size());
        if (size % sectors != 0) {
            rep.generic_fibers_ok = false;
            rep.generic_violations.push_back("vertex class " + std::to_string(cls) +
                                             " covers its sectors unevenly");
            continue;
        }
        const long mult = static_cast<long>(size) / sectors;
        if (J <= 1) {
            if (size != full) {
                rep.generic_fibers_ok = false;
                rep.generic_violations.push_back("generic vertex class " + std::to_string(cls) +
                                                 " has size " + std::to_string(size) + ", expected " +
                                                 std::to_string(full));
            }
        } else if (mult > 1 || sectors != full) {
            rep.branch_points.push_back({cls, image, n - J, static_cast<long>(size), sectors, full, mult});
        }
    }
    return rep;
}

}  // namespace pmres
