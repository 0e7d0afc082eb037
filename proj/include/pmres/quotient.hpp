#pragma once

#include <bit>
#include <string>
#include <vector>

#include "pmres/recognition.hpp"
#include "pmres/resolution.hpp"

namespace pmres {

// One generator-closed orbit of states.  State ids are discovery order, so a
// freshly seeded engine yields ids 0..count-1 and the seed is id 0.
struct Component {
    std::uint32_t seed_flag = 0;
    std::uint32_t count = 0;     // states interned
    std::uint32_t expanded = 0;  // states with a complete partner row
    bool complete = true;
    std::vector<std::uint32_t> partner;  // expanded * 2n entries

    std::uint32_t partner_of(std::uint32_t s, int j, int eps, int n) const {
        return partner[static_cast<std::size_t>(s) * (2 * static_cast<std::size_t>(n)) +
                       static_cast<std::size_t>(j - 1) * 2 + static_cast<std::size_t>(eps)];
    }
};

// Breadth-first closure under all phi(j, eps).  Throws CapExceeded once more
// than `cap` states exist, unless allow_partial is set, in which case the
// explored prefix is returned with complete == false.
inline Component explore_component(ResolutionEngine& eng, std::uint32_t seed_flag, std::uint64_t cap,
                                   bool allow_partial = false) {
    if (eng.state_count() != 0) throw err::internal("explore_component needs a freshly built engine");
    if (cap < 1) throw err::schema("state cap must be >= 1");
    const int n = eng.n();
    Component comp;
    comp.seed_flag = seed_flag;
    eng.initial_state(seed_flag);

    std::uint32_t next = 0;
    while (next < eng.state_count()) {
        if (eng.state_count() > cap) {
            comp.count = static_cast<std::uint32_t>(eng.state_count());
            comp.expanded = next;
            comp.complete = false;
            if (allow_partial) return comp;
            throw err::cap_exceeded("state cap " + std::to_string(cap) + " exceeded; " +
                                    std::to_string(eng.state_count()) + " states interned, " +
                                    std::to_string(next) + " expanded");
        }
        for (int j = 1; j <= n; ++j)
            for (int eps = 0; eps <= 1; ++eps)
                comp.partner.push_back(eng.phi(j, eps, next));
        ++next;
    }
    comp.count = static_cast<std::uint32_t>(eng.state_count());
    comp.expanded = next;
    comp.complete = true;
    return comp;
}

// ---------------------------------------------------------------------------
// The cube complex M = [0,1]^n x V / ~ over one component.  Faces of a cube
// are patterns over {0, 1, free}; identifications never change the pattern,
// only the state, so a face class is (pattern, orbit of states).
// ---------------------------------------------------------------------------

struct QuotientComplex {
    int n = 0;
    std::uint32_t cubes = 0;
    std::uint32_t npat = 0;  // 3^n patterns per cube
    std::uint32_t class_count = 0;
    std::vector<std::uint32_t> class_id;   // cube * npat + pattern -> class
    std::vector<std::uint8_t> class_dim;   // free-coordinate count per class
    std::vector<long> face_counts;         // classes per dimension
    // class members in CSR form, keys sorted ascending
    std::vector<std::uint32_t> member_begin;
    std::vector<std::uint32_t> members;

    int pattern_digit(std::uint32_t pat, int j) const {  // j in 1..n
        for (int i = 1; i < j; ++i) pat /= 3;
        return static_cast<int>(pat % 3);
    }

    long euler_characteristic() const {
        long chi = 0;
        for (std::size_t d = 0; d < face_counts.size(); ++d)
            chi += (d % 2 == 0) ? face_counts[d] : -face_counts[d];
        return chi;
    }
};

inline QuotientComplex build_quotient_n(int n, const Component& comp) {
    if (!comp.complete) throw err::internal("cannot build the quotient of a partial component");
    QuotientComplex q;
    q.n = n;
    q.cubes = comp.count;
    q.npat = 1;
    for (int i = 0; i < n; ++i) q.npat *= 3;
    const std::uint64_t total = static_cast<std::uint64_t>(q.cubes) * q.npat;
    if (total >= (1ull << 32)) throw err::cap_exceeded("quotient face table too large");

    std::vector<std::uint32_t> parent(total);
    for (std::uint32_t i = 0; i < total; ++i) parent[i] = i;
    auto find = [&](std::uint32_t x) {
        std::uint32_t root = x;
        while (parent[root] != root) root = parent[root];
        while (parent[x] != root) {
            std::uint32_t up = parent[x];
            parent[x] = root;
            x = up;
        }
        return root;
    };
    auto unite = [&](std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b)
            parent[b] = a;  // min-key roots keep class ids deterministic
        else
            parent[a] = b;
    };

    // patterns with a given pinned digit, precomputed per (j, eps)
    std::vector<std::vector<std::uint32_t>> pinned(static_cast<std::size_t>(2 * n));
    for (std::uint32_t pat = 0; pat < q.npat; ++pat) {
        std::uint32_t p = pat;
        for (int j = 1; j <= n; ++j, p /= 3) {
            int digit = static_cast<int>(p % 3);
            if (digit <= 1) pinned[static_cast<std::size_t>((j - 1) * 2 + digit)].push_back(pat);
        }
    }
    for (std::uint32_t s = 0; s < q.cubes; ++s)
        for (int j = 1; j <= n; ++j)
            for (int eps = 0; eps <= 1; ++eps) {
                std::uint32_t w = comp.partner_of(s, j, eps, n);
                for (std::uint32_t pat : pinned[static_cast<std::size_t>((j - 1) * 2 + eps)])
                    unite(s * q.npat + pat, w * q.npat + pat);
            }

    q.class_id.resize(total);
    q.face_counts.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::uint32_t k = 0; k < total; ++k) {
        if (find(k) != k) continue;
        std::uint32_t pat = k % q.npat;
        int dim = 0;
        for (std::uint32_t p = pat; p > 0; p /= 3) dim += (p % 3 == 2);
        q.class_dim.push_back(static_cast<std::uint8_t>(dim));
        q.face_counts[static_cast<std::size_t>(dim)]++;
        q.class_id[k] = q.class_count++;
    }
    for (std::uint32_t k = 0; k < total; ++k)
        q.class_id[k] = q.class_id[find(k)];

    q.member_begin.assign(q.class_count + 1, 0);
    for (std::uint32_t k = 0; k < total; ++k) q.member_begin[q.class_id[k] + 1]++;
    for (std::size_t i = 1; i < q.member_begin.size(); ++i) q.member_begin[i] += q.member_begin[i - 1];
    q.members.resize(total);
    {
        std::vector<std::uint32_t> cursor(q.member_begin.begin(), q.member_begin.end() - 1);
        for (std::uint32_t k = 0; k < total; ++k) q.members[cursor[q.class_id[k]]++] = k;
    }
    return q;
}

inline QuotientComplex build_quotient(const ResolutionEngine& eng, const Component& comp) {
    return build_quotient_n(eng.n(), comp);
}

// ---------------------------------------------------------------------------
// Manifold verification through links
// ---------------------------------------------------------------------------

struct LinkFailure {
    std::uint32_t class_id = 0;
    int face_dim = 0;
    std::string detail;
};

struct ManifoldReport {
    bool codim1_two_sided = true;
    bool vertex_links_ok = true;
    bool low_dim_links_ok = true;  // links of positive-dimension faces up to dim 2
    bool exact = true;
    long vertex_classes = 0;
    std::vector<LinkFailure> failures;

    bool ok() const { return codim1_two_sided && vertex_links_ok && low_dim_links_ok; }
};

namespace detail {

// Link of a face class in the cube complex: one (k-1)-simplex per incident
// k-face class, with vertices the incident (d+1)-face classes.
inline SimplicialComplex quotient_link(const QuotientComplex& q, std::uint32_t cls) {
    const int n = q.n;
    const int d = q.class_dim[cls];
    SimplicialComplex out;
    out.dimension = n - d - 1;
    for (std::uint32_t mi = q.member_begin[cls]; mi < q.member_begin[cls + 1]; ++mi) {
        std::uint32_t key = q.members[mi];
        std::uint32_t cube = key / q.npat, pat = key % q.npat;
        Cell simplex;
        std::uint32_t place = 1;
        for (int j = 1; j <= n; ++j, place *= 3) {
            if ((pat / place) % 3 == 2) continue;  // already free
            std::uint32_t freed = pat + place * (2 - (pat / place) % 3);
            simplex.push_back(static_cast<VertexId>(q.class_id[cube * q.npat + freed]));
        }
        std::sort(simplex.begin(), simplex.end());
        out.facets.push_back(std::move(simplex));
    }
    std::sort(out.facets.begin(), out.facets.end());
    return out;
}

}  // namespace detail

inline ManifoldReport verify_manifold(const QuotientComplex& q) {
    ManifoldReport rep;
    const int n = q.n;
    for (std::uint32_t cls = 0; cls < q.class_count; ++cls) {
        const int d = q.class_dim[cls];
        const std::uint32_t size = q.member_begin[cls + 1] - q.member_begin[cls];
        if (d == n - 1 && size != 2) {
            rep.codim1_two_sided = false;
            rep.failures.push_back({cls, d, "codimension-1 class of size " + std::to_string(size)});
        }
        if (d == 0) rep.vertex_classes++;
        if (d > n - 1) continue;
        const int link_dim = n - d - 1;
        if (d == 0 || (d >= 1 && link_dim >= 1 && link_dim <= 2)) {
            if (d >= 1 && link_dim == 0) continue;  // covered by the two-sided check
            SimplicialComplex lk = detail::quotient_link(q, cls);
            SphereCheck sc = check_sphere(lk);
            if (!sc.exact) rep.exact = false;
            if (!sc.is_sphere) {
                if (d == 0)
                    rep.vertex_links_ok = false;
                else
                    rep.low_dim_links_ok = false;
                rep.failures.push_back({cls, d, "link is " + sc.detail});
            }
        }
    }
    return rep;
}

// Orientation of M: propagate cube signs so glued codimension-1 faces induce
// opposite orientations; with identity gluings in the coordinates this means
// adjacent cubes carry opposite signs.  Seed cube gets +1.
inline std::vector<signed char> orient_quotient(const QuotientComplex& q, const Component& comp) {
    const int n = q.n;
    std::vector<signed char> sign(q.cubes, 0);
    sign[0] = 1;
    std::vector<std::uint32_t> queue{0};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        std::uint32_t s = queue[qi];
        for (int j = 1; j <= n; ++j)
            for (int eps = 0; eps <= 1; ++eps) {
                std::uint32_t w = comp.partner_of(s, j, eps, n);
                signed char want = static_cast<signed char>(-sign[s]);
                if (sign[w] == 0) {
                    sign[w] = want;
                    queue.push_back(w);
                } else if (sign[w] != want) {
                    throw err::non_orientable_quotient("sign contradiction between cubes " + std::to_string(s) +
                                                       " and " + std::to_string(w));
                }
            }
    }
    return sign;
}

// ---------------------------------------------------------------------------
// Order complex: chains of face classes, one barycentric simplex per
// (cube, corner, coordinate-release order).  Triangulates M.
// ---------------------------------------------------------------------------

struct OrderComplexResult {
    PseudoManifold pm;
    std::vector<std::uint32_t> vertex_class;  // order-complex vertex -> face class
};

inline OrderComplexResult order_complex(const QuotientComplex& q, const std::vector<signed char>& cube_signs) {
    const int n = q.n;
    // order-complex vertex ids sorted by (dimension, class id) so that chains
    // are ascending and the carried signs refer to sorted simplices
    std::vector<std::uint32_t> order(q.class_count);
    for (std::uint32_t i = 0; i < q.class_count; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (q.class_dim[a] != q.class_dim[b]) return q.class_dim[a] < q.class_dim[b];
        return a < b;
    });
    std::vector<std::uint32_t> ocv(q.class_count);
    for (std::uint32_t i = 0; i < q.class_count; ++i) ocv[order[i]] = i;

    std::vector<std::pair<Cell, signed char>> tagged;
    std::vector<int> release(static_cast<std::size_t>(n));
    for (std::uint32_t cube = 0; cube < q.cubes; ++cube) {
        for (std::uint32_t corner = 0; corner < (1u << n); ++corner) {
            // corner as a base-3 pattern with all coordinates pinned
            std::uint32_t base = 0, place = 1;
            for (int j = 0; j < n; ++j, place *= 3) base += ((corner >> j) & 1u) * place;
            for (std::size_t i = 0; i < release.size(); ++i) release[i] = static_cast<int>(i);
            do {
                Cell chain(static_cast<std::size_t>(n) + 1);
                std::uint32_t pat = base;
                chain[0] = static_cast<VertexId>(ocv[q.class_id[cube * q.npat + pat]]);
                std::uint32_t pl = 1;
                for (int k = 0; k < n; ++k) {
                    int j = release[static_cast<std::size_t>(k)];
                    pl = 1;
                    for (int i = 0; i < j; ++i) pl *= 3;
                    pat += pl * (2 - (pat / pl) % 3);
                    chain[static_cast<std::size_t>(k) + 1] = static_cast<VertexId>(ocv[q.class_id[cube * q.npat + pat]]);
                }
                signed char sgn = static_cast<signed char>(cube_signs[cube] * permutation_sign(release) *
                                                           (std::popcount(corner) % 2 == 0 ? 1 : -1));
                tagged.emplace_back(std::move(chain), sgn);
            } while (std::next_permutation(release.begin(), release.end()));
        }
    }
    std::sort(tagged.begin(), tagged.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SimplicialComplex sc;
    sc.dimension = n;
    std::vector<signed char> signs;
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        if (i > 0 && tagged[i].first == tagged[i - 1].first) {
            if (tagged[i].second != tagged[i - 1].second)
                throw err::internal("order complex got conflicting signs for one chain");
            continue;
        }
        sc.facets.push_back(tagged[i].first);
        signs.push_back(tagged[i].second);
    }

    OrderComplexResult out;
    out.vertex_class.resize(q.class_count);
    for (std::uint32_t cls = 0; cls < q.class_count; ++cls) out.vertex_class[ocv[cls]] = cls;
    out.pm = make_pseudo_manifold(std::move(sc), std::move(signs));
    return out;
}

}  // namespace pmres
