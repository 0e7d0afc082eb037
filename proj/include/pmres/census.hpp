#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmres/pseudo_manifold.hpp"
#include "pmres/recognition.hpp"

namespace pmres {

struct OrientedSphere {
    SimplicialComplex complex;
    std::vector<signed char> orientation;
    bool sphere_exact = true;  // false when certified by homology only
};

inline OrientedSphere make_oriented_sphere(SimplicialComplex c,
                                           std::optional<std::vector<signed char>> orientation = std::nullopt) {
    SphereCheck sc = check_sphere(c);
    if (!sc.is_sphere) throw err::schema("complex is not a sphere: " + sc.detail);
    OrientedSphere out;
    out.sphere_exact = sc.exact;
    if (orientation) {
        if (orientation->size() != c.facets.size()) throw err::schema("orientation length mismatch");
        if (c.dimension >= 1 && !orientation_coherent(c, *orientation))
            throw err::non_orientable("supplied sphere orientation is not coherent");
        out.orientation = std::move(*orientation);
    } else if (c.dimension == 0) {
        out.orientation = {1, -1};
    } else {
        out.orientation = orient(c);
    }
    out.complex = std::move(c);
    return out;
}

inline OrientedSphere mirror(OrientedSphere s) {
    for (auto& x : s.orientation) x = static_cast<signed char>(-x);
    return s;
}

namespace detail {

inline OrientedSphere link_from_star(const SimplicialComplex& c, const std::vector<signed char>& orientation,
                                     VertexId v, const std::vector<std::int32_t>& star) {
    OrientedSphere out;
    out.complex.dimension = c.dimension - 1;
    std::vector<std::pair<Cell, signed char>> tagged;
    for (std::int32_t fi : star) {
        const Cell& g = c.facets[static_cast<std::size_t>(fi)];
        auto it = std::lower_bound(g.begin(), g.end(), v);
        int pos = static_cast<int>(it - g.begin());
        Cell r;
        for (VertexId w : g)
            if (w != v) r.push_back(w);
        tagged.emplace_back(std::move(r), static_cast<signed char>(pos % 2 == 0
                                                                       ? orientation[static_cast<std::size_t>(fi)]
                                                                       : -orientation[static_cast<std::size_t>(fi)]));
    }
    std::sort(tagged.begin(), tagged.end());
    for (auto& [f, s] : tagged) {
        out.complex.facets.push_back(std::move(f));
        out.orientation.push_back(s);
    }
    return out;
}

// vertex -> containing facet instances, one pass
inline std::map<VertexId, std::vector<std::int32_t>> vertex_stars(const SimplicialComplex& c) {
    std::map<VertexId, std::vector<std::int32_t>> stars;
    for (std::size_t fi = 0; fi < c.facets.size(); ++fi)
        for (VertexId v : c.facets[fi]) stars[v].push_back(static_cast<std::int32_t>(fi));
    return stars;
}

}  // namespace detail

// Link of a vertex with the induced orientation.
inline OrientedSphere vertex_link_oriented(const SimplicialComplex& c,
                                           const std::vector<signed char>& orientation, VertexId v) {
    std::vector<std::int32_t> star;
    for (std::size_t fi = 0; fi < c.facets.size(); ++fi)
        if (std::binary_search(c.facets[fi].begin(), c.facets[fi].end(), v))
            star.push_back(static_cast<std::int32_t>(fi));
    if (star.empty()) throw err::face_not_present("vertex " + std::to_string(v) + " not in the complex");
    return detail::link_from_star(c, orientation, v, star);
}

enum class IsoMode { preserve, reverse, either };

struct IsoCertificate {
    std::map<VertexId, VertexId> vertex_map;
    bool orientation_preserving = true;
};

namespace detail {

inline std::vector<long> iso_invariant(const OrientedSphere& s) {
    std::vector<long> key;
    key.push_back(s.complex.dimension);
    for (long c : face_counts(s.complex)) key.push_back(c);
    std::map<VertexId, long> deg;
    for (const Cell& f : s.complex.facets)
        for (VertexId v : f) deg[v]++;
    std::vector<long> degs;
    for (const auto& [v, d] : deg) degs.push_back(d);
    std::sort(degs.begin(), degs.end());
    key.push_back(-1);
    key.insert(key.end(), degs.begin(), degs.end());
    return key;
}

// oriented traversal of a circle: vertices in the order the edges chain them,
// starting from the first facet, following its induced direction
inline std::vector<VertexId> circle_loop(const OrientedSphere& s, bool along_orientation) {
    const auto& facets = s.complex.facets;
    std::map<VertexId, std::vector<std::size_t>> at;
    for (std::size_t i = 0; i < facets.size(); ++i) {
        at[facets[i][0]].push_back(i);
        at[facets[i][1]].push_back(i);
    }
    // edge {a,b} with sign +1 is the oriented edge a -> b
    std::size_t e = 0;
    int dir = (s.orientation[0] > 0) == along_orientation ? 1 : 0;
    VertexId start = facets[0][1 - dir], cur = facets[0][dir];
    std::vector<VertexId> loop{start};
    std::size_t prev = 0;
    while (cur != start || loop.size() == 1) {
        loop.push_back(cur);
        const auto& candidates = at.at(cur);
        std::size_t nxt = (candidates[0] == prev && candidates.size() > 1) ? candidates[1] : candidates[0];
        if (candidates.size() == 2 && candidates[1] == prev) nxt = candidates[0];
        if (candidates.size() == 2 && candidates[0] == prev) nxt = candidates[1];
        prev = nxt;
        cur = facets[nxt][0] == cur ? facets[nxt][1] : facets[nxt][0];
        e++;
        if (e > 2 * facets.size()) throw err::internal("circle traversal did not close");
    }
    return loop;  // length = number of edges
}

}  // namespace detail

// Simplicial isomorphism with prescribed orientation behavior.  Deterministic:
// the first certificate in scan order is returned.  Exact in all dimensions
// (propagation across ridges pins everything down once a facet is matched).
inline std::optional<IsoCertificate> iso(const OrientedSphere& a, const OrientedSphere& b, IsoMode mode) {
    if (a.complex.dimension != b.complex.dimension) return std::nullopt;
    if (a.complex.facets.size() != b.complex.facets.size()) return std::nullopt;
    if (detail::iso_invariant(a) != detail::iso_invariant(b)) return std::nullopt;
    const int dim = a.complex.dimension;

    if (dim == 0) {
        // oriented S^0: two signed points
        auto pick = [](const OrientedSphere& s, int want) {
            for (std::size_t i = 0; i < s.complex.facets.size(); ++i)
                if (s.orientation[i] == want) return s.complex.facets[i][0];
            return VertexId(-1);
        };
        VertexId ap = pick(a, 1), am = pick(a, -1), bp = pick(b, 1), bm = pick(b, -1);
        if (ap < 0 || am < 0 || bp < 0 || bm < 0) return std::nullopt;
        IsoCertificate cert;
        if (mode != IsoMode::reverse) {
            cert.vertex_map = {{ap, bp}, {am, bm}};
            cert.orientation_preserving = true;
            return cert;
        }
        cert.vertex_map = {{ap, bm}, {am, bp}};
        cert.orientation_preserving = false;
        return cert;
    }

    if (dim == 1) {
        // circles of equal length are isomorphic both ways; build the map by
        // aligned traversal
        bool preserve = (mode != IsoMode::reverse);
        auto la = detail::circle_loop(a, true);
        auto lb = detail::circle_loop(b, preserve);
        if (la.size() != lb.size()) return std::nullopt;
        IsoCertificate cert;
        cert.orientation_preserving = preserve;
        for (std::size_t i = 0; i < la.size(); ++i) {
            auto [it, fresh] = cert.vertex_map.emplace(la[i], lb[i]);
            if (!fresh && it->second != lb[i]) return std::nullopt;  // multi-edge collision
        }
        return cert;
    }

    const auto& fa = a.complex.facets;
    const auto& fb = b.complex.facets;
    auto stars_a = ridge_stars(a.complex);
    auto stars_b = ridge_stars(b.complex);

    std::vector<int> perm(fa[0].size());
    for (std::size_t target = 0; target < fb.size(); ++target) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::map<VertexId, VertexId> vmap, inv;
            bool ok = true;
            for (std::size_t i = 0; i < fa[0].size() && ok; ++i) {
                VertexId x = fa[0][i], y = fb[target][static_cast<std::size_t>(perm[i])];
                vmap[x] = y;
                inv[y] = x;
            }
            std::vector<std::int32_t> match(fa.size(), -1);
            std::vector<bool> used(fb.size(), false);
            match[0] = static_cast<std::int32_t>(target);
            used[target] = true;
            std::vector<std::size_t> queue{0};
            for (std::size_t qi = 0; qi < queue.size() && ok; ++qi) {
                std::size_t cur = queue[qi];
                const Cell& g = fa[cur];
                const Cell& gi = fb[static_cast<std::size_t>(match[cur])];
                for (std::size_t drop = 0; drop < g.size() && ok; ++drop) {
                    Cell r;
                    for (std::size_t i = 0; i < g.size(); ++i)
                        if (i != drop) r.push_back(g[i]);
                    const auto& sa = stars_a.at(r);
                    if (sa.size() != 2) continue;
                    std::size_t nxt = static_cast<std::size_t>(sa[0] == static_cast<std::int32_t>(cur) ? sa[1] : sa[0]);
                    Cell ri;
                    for (VertexId v : r) ri.push_back(vmap.at(v));
                    std::sort(ri.begin(), ri.end());
                    auto itb = stars_b.find(ri);
                    if (itb == stars_b.end() || itb->second.size() != 2 ||
                        !cell_contains(gi, ri)) {
                        ok = false;
                        break;
                    }
                    std::int32_t low = itb->second[0], high = itb->second[1];
                    std::int32_t self = match[cur];
                    std::int32_t nb;
                    if (low == self)
                        nb = high;
                    else if (high == self)
                        nb = low;
                    else {
                        ok = false;
                        break;
                    }
                    VertexId v_new = cell_minus(fa[nxt], r)[0];
                    VertexId w_new = cell_minus(fb[static_cast<std::size_t>(nb)], ri)[0];
                    auto itv = vmap.find(v_new);
                    if (itv != vmap.end()) {
                        if (itv->second != w_new) {
                            ok = false;
                            break;
                        }
                    } else if (inv.count(w_new)) {
                        ok = false;  // image vertex already taken
                        break;
                    } else {
                        vmap[v_new] = w_new;
                        inv[w_new] = v_new;
                    }
                    if (match[nxt] == -1) {
                        if (used[static_cast<std::size_t>(nb)]) {
                            ok = false;
                            break;
                        }
                        match[nxt] = nb;
                        used[static_cast<std::size_t>(nb)] = true;
                        queue.push_back(nxt);
                    } else if (match[nxt] != nb) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok && queue.size() == fa.size()) {
                // orientation behavior must be uniform; read it off facet 0
                int behavior = 0;
                bool uniform = true;
                for (std::size_t i = 0; i < fa.size() && uniform; ++i) {
                    std::vector<int> order(fa[i].size());
                    const Cell& gi = fb[static_cast<std::size_t>(match[i])];
                    for (std::size_t k = 0; k < fa[i].size(); ++k) {
                        VertexId w = vmap.at(fa[i][k]);
                        order[k] = static_cast<int>(std::lower_bound(gi.begin(), gi.end(), w) - gi.begin());
                    }
                    int s = permutation_sign(order) * a.orientation[i] * b.orientation[static_cast<std::size_t>(match[i])];
                    if (behavior == 0)
                        behavior = s;
                    else if (behavior != s)
                        uniform = false;
                }
                if (uniform) {
                    bool preserving = behavior > 0;
                    if (mode == IsoMode::either || (mode == IsoMode::preserve && preserving) ||
                        (mode == IsoMode::reverse && !preserving)) {
                        IsoCertificate cert;
                        cert.vertex_map = vmap;
                        cert.orientation_preserving = preserving;
                        return cert;
                    }
                }
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classification of links up to oriented isomorphism
// ---------------------------------------------------------------------------

class LinkClassifier {
public:
    // returns the class id, registering a new class when nothing matches
    int classify(const OrientedSphere& s) {
        auto key = detail::iso_invariant(s);
        auto& bucket = buckets_[key];
        for (int c : bucket)
            if (iso(s, reps_[static_cast<std::size_t>(c)], IsoMode::preserve)) return c;
        int id = static_cast<int>(reps_.size());
        reps_.push_back(s);
        bucket.push_back(id);
        return id;
    }

    const OrientedSphere& rep(int c) const { return reps_[static_cast<std::size_t>(c)]; }
    int class_count() const { return static_cast<int>(reps_.size()); }

    bool amphichiral(int c) {
        auto it = amphi_.find(c);
        if (it != amphi_.end()) return it->second;
        bool a = iso(reps_[static_cast<std::size_t>(c)], reps_[static_cast<std::size_t>(c)], IsoMode::reverse).has_value();
        amphi_[c] = a;
        return a;
    }

    // class of the mirrored representative; may create it
    int mirror_class(int c) {
        auto it = mirror_.find(c);
        if (it != mirror_.end()) return it->second;
        int m = classify(mirror(reps_[static_cast<std::size_t>(c)]));
        mirror_[c] = m;
        mirror_[m] = c;
        return m;
    }

private:
    std::vector<OrientedSphere> reps_;
    std::map<std::vector<long>, std::vector<int>> buckets_;
    std::map<int, bool> amphi_;
    std::map<int, int> mirror_;
};

// ---------------------------------------------------------------------------
// Balanced sets
// ---------------------------------------------------------------------------

struct VertexRef {
    int sphere = 0;
    VertexId vertex = 0;
};

struct BalancedPair {
    VertexRef a, b;
    IsoCertificate certificate;  // orientation-reversing between the two links
};

struct BalancedReport {
    bool balanced = true;
    std::vector<BalancedPair> pairs;
    std::vector<std::string> offending;
};

// Vertices of all spheres pair off iff every chiral link class is matched by
// its mirror class with equal multiplicity and amphichiral classes are even.
inline BalancedReport balanced_check(const std::vector<OrientedSphere>& ys) {
    BalancedReport rep;
    if (ys.empty()) return rep;
    for (const auto& y : ys)
        if (y.complex.dimension != ys[0].complex.dimension)
            throw err::schema("balanced_check needs spheres of one dimension");

    LinkClassifier cls;
    std::map<int, std::vector<std::pair<VertexRef, OrientedSphere>>> by_class;
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
        for (const auto& [v, star] : detail::vertex_stars(ys[yi].complex)) {
            auto lk = detail::link_from_star(ys[yi].complex, ys[yi].orientation, v, star);
            int c = cls.classify(lk);
            by_class[c].push_back({{static_cast<int>(yi), v}, std::move(lk)});
        }
    }

    std::set<int> done;
    for (auto& [c, items] : by_class) {
        if (done.count(c)) continue;
        if (cls.amphichiral(c)) {
            done.insert(c);
            if (items.size() % 2 != 0) {
                rep.balanced = false;
                rep.offending.push_back("amphichiral link class " + std::to_string(c) + " has odd count " +
                                        std::to_string(items.size()));
                continue;
            }
            for (std::size_t i = 0; i + 1 < items.size(); i += 2) {
                auto cert = iso(items[i].second, items[i + 1].second, IsoMode::reverse);
                if (!cert) throw err::internal("amphichiral class lost its reversing certificate");
                rep.pairs.push_back({items[i].first, items[i + 1].first, *cert});
            }
        } else {
            int m = cls.mirror_class(c);
            done.insert(c);
            done.insert(m);
            auto& others = by_class[m];
            if (others.size() != items.size()) {
                rep.balanced = false;
                rep.offending.push_back("chiral link class " + std::to_string(c) + " has count " +
                                        std::to_string(items.size()) + " but its mirror has " +
                                        std::to_string(others.size()));
                continue;
            }
            for (std::size_t i = 0; i < items.size(); ++i) {
                auto cert = iso(items[i].second, others[i].second, IsoMode::reverse);
                if (!cert) throw err::internal("mirror classes lost their reversing certificate");
                rep.pairs.push_back({items[i].first, others[i].first, *cert});
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Census of a manifold's vertex links against a prescription
// ---------------------------------------------------------------------------

struct CensusClassInfo {
    int class_id = 0;
    long link_count = 0;
    long prescribed = 0;
    bool amphichiral = false;
    int mirror_class = 0;
    long facets = 0;  // size of the representative, for the report
};

struct ResidualPair {
    int class_id = 0;
    int mirror_class = 0;
    long pairs = 0;
};

struct CensusReport {
    bool matched = false;
    long r = 0;
    std::vector<CensusClassInfo> classes;
    std::vector<ResidualPair> residual_pairs;
    std::vector<std::pair<int, long>> leftovers;  // class id, count (when the pattern fails)
};

namespace detail {

// feasibility of a residual multiset splitting into mirror pairs
inline bool residual_splits(LinkClassifier& cls, const std::map<int, long>& residual,
                            std::vector<ResidualPair>* pairs) {
    std::set<int> done;
    for (const auto& [c, cnt] : residual) {
        if (done.count(c) || cnt == 0) continue;
        if (cls.amphichiral(c)) {
            done.insert(c);
            if (cnt % 2 != 0) return false;
            if (pairs) pairs->push_back({c, c, cnt / 2});
        } else {
            int m = cls.mirror_class(c);
            done.insert(c);
            done.insert(m);
            long other = residual.count(m) ? residual.at(m) : 0;
            if (other != cnt) return false;
            if (pairs) pairs->push_back({std::min(c, m), std::max(c, m), cnt});
        }
    }
    return true;
}

inline CensusReport census_from_counts(LinkClassifier& cls, const std::map<int, long>& link_counts,
                                       const std::map<int, long>& prescribed) {
    CensusReport rep;
    long upper = -1;
    for (const auto& [c, k] : prescribed) {
        long have = link_counts.count(c) ? link_counts.at(c) : 0;
        long bound = have / k;
        upper = (upper < 0) ? bound : std::min(upper, bound);
    }
    if (prescribed.empty()) upper = 0;

    for (long r = upper; r >= 0; --r) {
        std::map<int, long> residual = link_counts;
        bool ok = true;
        for (const auto& [c, k] : prescribed) {
            residual[c] -= r * k;
            if (residual[c] < 0) ok = false;
        }
        if (!ok) continue;
        std::vector<ResidualPair> pairs;
        if (residual_splits(cls, residual, &pairs)) {
            rep.matched = true;
            rep.r = r;
            rep.residual_pairs = std::move(pairs);
            break;
        }
    }
    if (!rep.matched)
        for (const auto& [c, cnt] : link_counts)
            if (cnt > 0) rep.leftovers.push_back({c, cnt});

    std::set<int> all;
    for (const auto& [c, cnt] : link_counts) all.insert(c);
    for (const auto& [c, cnt] : prescribed) all.insert(c);
    for (int c : all) {
        CensusClassInfo info;
        info.class_id = c;
        info.link_count = link_counts.count(c) ? link_counts.at(c) : 0;
        info.prescribed = prescribed.count(c) ? prescribed.at(c) : 0;
        info.amphichiral = cls.amphichiral(c);
        info.mirror_class = cls.mirror_class(c);
        info.facets = static_cast<long>(cls.rep(c).complex.facets.size());
        rep.classes.push_back(info);
    }
    return rep;
}

}  // namespace detail

// Largest r such that removing r copies of every prescribed sphere leaves a
// residual that splits into mirror pairs.
inline CensusReport census_match(const PseudoManifold& m, const std::vector<OrientedSphere>& ys) {
    LinkClassifier cls;
    std::map<int, long> link_counts;
    for (const auto& [v, star] : detail::vertex_stars(m.complex))
        link_counts[cls.classify(detail::link_from_star(m.complex, m.orientation, v, star))]++;
    std::map<int, long> prescribed;
    for (const auto& y : ys) {
        if (y.complex.dimension != m.dimension() - 1)
            throw err::schema("prescription dimension does not match the manifold's links");
        prescribed[cls.classify(y)]++;
    }
    return detail::census_from_counts(cls, link_counts, prescribed);
}

}  // namespace pmres
