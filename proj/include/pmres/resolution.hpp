#pragma once

#include <algorithm>
#include <bit>
#include <cstring>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "pmres/labeling.hpp"
#include "pmres/pseudo_manifold.hpp"

namespace pmres {

// ---------------------------------------------------------------------------
// Flags
//
// A flag (F_0 > F_1 > ... > F_n) in a simplicial top cell is the same thing as
// an ordering y_0,...,y_n of the cell's vertices with F_k = {y_0,...,y_{n-k}}.
// Replacing F_j by the unique other cell in its diamond swaps y_{n-j} and
// y_{n-j+1}, so flag surgery is permutation surgery.
// ---------------------------------------------------------------------------

struct FlagTables {
    int n = 0;
    std::uint32_t fact = 1;                         // (n+1)!
    std::vector<std::vector<std::uint8_t>> perms;   // rank -> y positions, chain-lex order
    std::vector<signed char> parity;                // rank -> permutation sign
    std::vector<std::vector<std::uint32_t>> flip;   // [j-1][rank] -> rank after diamond flip
    std::unordered_map<std::uint32_t, std::uint32_t> rank_of;  // encoded perm -> rank

    static std::uint32_t encode(const std::vector<std::uint8_t>& p) {
        std::uint32_t code = 0;
        for (std::uint8_t v : p) code = code * 16 + v;
        return code;
    }

    static const FlagTables& get(int n);
};

namespace detail {

inline bool chain_lex_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    // compare the chains (F_1, F_2, ...) they induce; prefixes as sorted sets
    const std::size_t m = a.size();
    for (std::size_t len = m - 1; len >= 1; --len) {
        std::vector<std::uint8_t> pa(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(len));
        std::vector<std::uint8_t> pb(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(len));
        std::sort(pa.begin(), pa.end());
        std::sort(pb.begin(), pb.end());
        if (pa != pb) return pa < pb;
    }
    return false;
}

}  // namespace detail

inline const FlagTables& FlagTables::get(int n) {
    static std::map<int, FlagTables> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    FlagTables t;
    t.n = n;
    const int m = n + 1;
    for (int i = 2; i <= m; ++i) t.fact *= static_cast<std::uint32_t>(i);
    std::vector<std::uint8_t> p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), 0);
    do {
        t.perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    std::sort(t.perms.begin(), t.perms.end(), detail::chain_lex_less);

    for (std::uint32_t r = 0; r < t.fact; ++r) {
        t.rank_of[encode(t.perms[r])] = r;
        std::vector<int> as_int(t.perms[r].begin(), t.perms[r].end());
        t.parity.push_back(static_cast<signed char>(permutation_sign(as_int)));
    }
    t.flip.assign(static_cast<std::size_t>(n), {});
    for (int j = 1; j <= n; ++j) {
        auto& row = t.flip[static_cast<std::size_t>(j - 1)];
        row.resize(t.fact);
        for (std::uint32_t r = 0; r < t.fact; ++r) {
            auto q = t.perms[r];
            std::swap(q[static_cast<std::size_t>(n - j)], q[static_cast<std::size_t>(n - j + 1)]);
            row[r] = t.rank_of.at(encode(q));
        }
    }
    return cache.emplace(n, std::move(t)).first->second;
}

// All maximal chains as explicit cell sequences, in canonical order
// (facet index, then chain-lexicographic).  |U| = facets * (n+1)!.
inline std::vector<std::vector<Cell>> enumerate_flags(const PseudoManifold& pm) {
    const int n = pm.dimension();
    const auto& t = FlagTables::get(n);
    std::vector<std::vector<Cell>> out;
    for (const Cell& g : pm.complex.facets) {
        for (std::uint32_t r = 0; r < t.fact; ++r) {
            std::vector<Cell> chain(static_cast<std::size_t>(n) + 1);
            Cell prefix;
            for (int k = 0; k <= n; ++k) {
                prefix.push_back(g[t.perms[r][static_cast<std::size_t>(k)]]);
                std::sort(prefix.begin(), prefix.end());
                chain[static_cast<std::size_t>(n - k)] = prefix;
            }
            out.push_back(std::move(chain));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Star sets
// ---------------------------------------------------------------------------

struct StarSet {
    Cell center;
    std::vector<std::int32_t> members;   // facet instances containing the center, sorted
    std::vector<std::uint8_t> colors;    // 0 black / 1 white, parallel to members
};

// Regularity check usable on any candidate coloring: adjacent members (sharing
// a ridge that contains the center) must differ, and the counts must balance.
inline void check_star_colors(const StarSet& s, const SimplicialComplex& c) {
    long black = 0;
    for (std::uint8_t col : s.colors) black += (col == 0);
    if (2 * black != static_cast<long>(s.colors.size()))
        throw err::unbalanced_colors("star of " + cell_to_string(s.center) + " has " + std::to_string(black) +
                                     " black of " + std::to_string(s.colors.size()));
    auto stars = ridge_stars(c);
    for (const auto& [ridge, fs] : stars) {
        if (!cell_contains(ridge, s.center) || fs.size() != 2) continue;
        auto ia = std::lower_bound(s.members.begin(), s.members.end(), fs[0]);
        auto ib = std::lower_bound(s.members.begin(), s.members.end(), fs[1]);
        if (ia == s.members.end() || ib == s.members.end() || *ia != fs[0] || *ib != fs[1]) continue;
        if (s.colors[static_cast<std::size_t>(ia - s.members.begin())] ==
            s.colors[static_cast<std::size_t>(ib - s.members.begin())])
            throw err::not_bipartite("adjacent members " + std::to_string(fs[0]) + "," + std::to_string(fs[1]) +
                                     " of the star of " + cell_to_string(s.center) + " share a color");
    }
}

// Two-coloring by breadth-first search, component by component, seeding each
// component's smallest member black.
inline StarSet star_set(const PseudoManifold& pm, const Cell& f) {
    if (cell_dim(f) >= pm.dimension()) throw err::face_not_present("star center must be a proper cell");
    StarSet s;
    s.center = f;
    for (std::size_t fi = 0; fi < pm.complex.facets.size(); ++fi)
        if (cell_contains(pm.complex.facets[fi], f)) s.members.push_back(static_cast<std::int32_t>(fi));
    if (s.members.empty()) throw err::face_not_present("no face " + cell_to_string(f));

    std::map<std::int32_t, std::size_t> member_idx;
    for (std::size_t i = 0; i < s.members.size(); ++i) member_idx[s.members[i]] = i;
    std::vector<std::vector<std::size_t>> adj(s.members.size());
    for (const auto& [ridge, fs] : ridge_stars(pm.complex)) {
        if (fs.size() != 2 || !cell_contains(ridge, f)) continue;
        auto a = member_idx.find(fs[0]), b = member_idx.find(fs[1]);
        if (a == member_idx.end() || b == member_idx.end()) continue;
        adj[a->second].push_back(b->second);
        adj[b->second].push_back(a->second);
    }
    s.colors.assign(s.members.size(), 2);
    for (std::size_t seed = 0; seed < s.members.size(); ++seed) {
        if (s.colors[seed] != 2) continue;
        s.colors[seed] = 0;
        std::vector<std::size_t> queue{seed};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            std::size_t cur = queue[qi];
            for (std::size_t nx : adj[cur]) {
                if (s.colors[nx] == 2) {
                    s.colors[nx] = static_cast<std::uint8_t>(1 - s.colors[cur]);
                    queue.push_back(nx);
                } else if (s.colors[nx] == s.colors[cur]) {
                    throw err::not_bipartite("odd cycle in the star of " + cell_to_string(f));
                }
            }
        }
    }
    long black = 0;
    for (std::uint8_t col : s.colors) black += (col == 0);
    if (2 * black != static_cast<long>(s.colors.size()))
        throw err::unbalanced_colors("star of " + cell_to_string(f) + " has " + std::to_string(black) +
                                     " black of " + std::to_string(s.colors.size()));
    return s;
}

// Deterministic initial pairing: sorted blacks to sorted whites, i-th to i-th.
inline std::vector<std::uint16_t> canonical_pairing(const StarSet& s) {
    std::vector<std::uint16_t> blacks, whites;
    for (std::size_t i = 0; i < s.members.size(); ++i)
        (s.colors[i] == 0 ? blacks : whites).push_back(static_cast<std::uint16_t>(i));
    std::vector<std::uint16_t> perm(s.members.size());
    for (std::size_t i = 0; i < blacks.size(); ++i) {
        perm[blacks[i]] = whites[i];
        perm[whites[i]] = blacks[i];
    }
    return perm;
}

// ---------------------------------------------------------------------------
// Resolution engine
//
// States (flag, pairing family, parity vector) are interned: equal states get
// equal ids, so orbit exploration is hashing plus table lookups.  Pairing
// families are flat arrays over the cells whose pairing can ever change
// (dimension <= n-2; ridge pairings are the unique swap and stay implicit).
// ---------------------------------------------------------------------------

class ResolutionEngine {
public:
    using StateId = std::uint32_t;

    ResolutionEngine(PseudoManifold pm, GoodLabeling lab) : pm_(std::move(pm)), tables_(FlagTables::get(pm_.dimension())) {
        n_ = pm_.dimension();
        fanout_ = 1u << (n_ + 1);
        build_cells();
        attach_labels(lab);
        build_stars();
        build_masks();
        check_labeling();
    }

    int n() const { return n_; }
    const PseudoManifold& manifold() const { return pm_; }
    std::uint32_t facet_count() const { return static_cast<std::uint32_t>(pm_.complex.facets.size()); }
    std::uint64_t flag_count() const { return static_cast<std::uint64_t>(facet_count()) * tables_.fact; }
    std::size_t state_count() const { return states_.size(); }
    std::size_t proper_cell_count() const { return cells_.size(); }
    std::size_t mutable_cell_count() const { return mutable_cells_.size(); }

    // --- cells ---
    std::int32_t cell_id(const Cell& f) const {
        auto it = cell_id_.find(f);
        if (it == cell_id_.end()) throw err::face_not_present("no face " + cell_to_string(f));
        return it->second;
    }
    const Cell& cell(std::int32_t cid) const { return cells_[static_cast<std::size_t>(cid)]; }
    const std::vector<int>& cset(std::int32_t cid) const { return cset_[static_cast<std::size_t>(cid)]; }
    int ridge_label(std::int32_t cid) const { return ridge_label_[static_cast<std::size_t>(cid)]; }
    const std::vector<std::int32_t>& star_members(std::int32_t cid) const { return star_[static_cast<std::size_t>(cid)]; }
    const std::vector<std::uint8_t>& star_colors(std::int32_t cid) const { return colors_[static_cast<std::size_t>(cid)]; }

    // --- flags ---
    std::uint32_t flag_facet(std::uint32_t flag) const { return flag / tables_.fact; }
    std::uint32_t flag_perm(std::uint32_t flag) const { return flag % tables_.fact; }
    signed char flag_perm_parity(std::uint32_t flag) const { return tables_.parity[flag_perm(flag)]; }

    std::vector<Cell> flag_chain(std::uint32_t flag) const {
        const Cell& g = pm_.complex.facets[flag_facet(flag)];
        const auto& y = tables_.perms[flag_perm(flag)];
        std::vector<Cell> chain(static_cast<std::size_t>(n_) + 1);
        Cell prefix;
        for (int k = 0; k <= n_; ++k) {
            prefix.push_back(g[y[static_cast<std::size_t>(k)]]);
            std::sort(prefix.begin(), prefix.end());
            chain[static_cast<std::size_t>(n_ - k)] = prefix;
        }
        return chain;
    }

    std::uint32_t flip_flag(std::uint32_t flag, int j) const {
        require_j(j);
        return flag_facet(flag) * tables_.fact + tables_.flip[static_cast<std::size_t>(j - 1)][flag_perm(flag)];
    }

    // cell id of flag entry F_i (1 <= i <= n)
    std::int32_t flag_cell(std::uint32_t flag, int i) const {
        const auto& y = tables_.perms[flag_perm(flag)];
        std::uint32_t mask = 0;
        for (int k = 0; k <= n_ - i; ++k) mask |= (1u << y[static_cast<std::size_t>(k)]);
        return facet_sub_[flag_facet(flag) * fanout_ + mask];
    }

    // --- states ---
    StateId initial_state(std::uint32_t seed_flag = 0) {
        if (seed_flag >= flag_count()) throw err::schema("seed flag index out of range");
        std::vector<std::uint16_t> fam(mutable_cells_.size(), 0);
        return intern_state(seed_flag, 0, intern_family(fam.data()));
    }

    std::uint32_t state_flag(StateId s) const { return states_[s].flag; }
    std::uint16_t state_h(StateId s) const { return states_[s].h; }
    std::uint32_t state_family(StateId s) const { return states_[s].family; }

    // pairing at a proper cell, as a permutation of the star member list
    std::vector<std::uint16_t> state_pairing(StateId s, std::int32_t cid) const {
        if (cell_dim(cells_[static_cast<std::size_t>(cid)]) == n_ - 1) return {1, 0};
        std::int32_t mi = mutable_idx_[static_cast<std::size_t>(cid)];
        const std::uint16_t* fam = family_data(states_[s].family);
        return pools_[static_cast<std::size_t>(mi)].perms[fam[mi]];
    }

    StateId phi(int j, int eps, StateId s) {
        require_j(j);
        if (eps == 0) return intern_state(flip_flag(states_[s].flag, j), states_[s].h, states_[s].family);
        if (eps != 1) throw err::schema("eps must be 0 or 1");
        return phi1(j, s);
    }

    // ---------------------------------------------------------------------
private:
    struct StateRec {
        std::uint32_t flag;
        std::uint32_t family;
        std::uint16_t h;
    };

    void require_j(int j) const {
        if (j < 1 || j > n_) throw err::schema("direction j out of range");
    }

    void build_cells() {
        const auto& facets = pm_.complex.facets;
        for (const Cell& f : proper_faces(pm_.complex)) {
            cell_id_[f] = static_cast<std::int32_t>(cells_.size());
            cells_.push_back(f);
        }
        facet_sub_.assign(facets.size() * fanout_, -1);
        star_.assign(cells_.size(), {});
        for (std::size_t fi = 0; fi < facets.size(); ++fi) {
            const Cell& g = facets[fi];
            for (std::uint32_t mask = 1; mask + 1 < fanout_; ++mask) {
                Cell sub;
                for (int i = 0; i <= n_; ++i)
                    if (mask & (1u << i)) sub.push_back(g[static_cast<std::size_t>(i)]);
                std::int32_t cid = cell_id_.at(sub);
                facet_sub_[fi * fanout_ + mask] = cid;
                star_[static_cast<std::size_t>(cid)].push_back(static_cast<std::int32_t>(fi));
            }
        }
        for (auto& st : star_) {
            std::sort(st.begin(), st.end());
            st.erase(std::unique(st.begin(), st.end()), st.end());
        }
        // distinct ridges above each cell
        ridges_above_.assign(cells_.size(), {});
        for (std::size_t cid = 0; cid < cells_.size(); ++cid) {
            const Cell& f = cells_[cid];
            if (cell_dim(f) == n_ - 1) {
                ridges_above_[cid] = {static_cast<std::int32_t>(cid)};
                continue;
            }
            std::vector<std::int32_t> rs;
            for (std::int32_t fi : star_[cid]) {
                std::uint32_t fmask = mask_in_facet(static_cast<std::uint32_t>(fi), f);
                for (int i = 0; i <= n_; ++i) {
                    std::uint32_t m = (fanout_ - 1) & ~(1u << i);
                    if ((m & fmask) == fmask) rs.push_back(facet_sub_[static_cast<std::size_t>(fi) * fanout_ + m]);
                }
            }
            std::sort(rs.begin(), rs.end());
            rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
            ridges_above_[cid] = std::move(rs);
        }
    }

    void attach_labels(const GoodLabeling& lab) {
        ridge_label_.assign(cells_.size(), 0);
        for (std::size_t cid = 0; cid < cells_.size(); ++cid) {
            if (cell_dim(cells_[cid]) != n_ - 1) continue;
            auto it = lab.labels.find(cells_[cid]);
            if (it == lab.labels.end())
                throw err::bad_labeling("ridge " + cell_to_string(cells_[cid]) + " is unlabeled");
            ridge_label_[cid] = it->second;
        }
        cset_.assign(cells_.size(), {});
        cset_id_.assign(cells_.size(), 0);
        cset_rank_[{}] = 0;  // empty set id, used by top cells
        cset_values_.push_back({});
        for (std::size_t cid = 0; cid < cells_.size(); ++cid) {
            std::vector<int> s;
            for (std::int32_t r : ridges_above_[cid]) s.push_back(ridge_label_[static_cast<std::size_t>(r)]);
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            auto [it, inserted] = cset_rank_.emplace(s, static_cast<std::int32_t>(cset_values_.size()));
            if (inserted) cset_values_.push_back(s);
            cset_[cid] = std::move(s);
            cset_id_[cid] = it->second;
        }
    }

    void build_stars() {
        colors_.assign(cells_.size(), {});
        mutable_idx_.assign(cells_.size(), -1);
        for (std::size_t cid = 0; cid < cells_.size(); ++cid) {
            const auto& members = star_[cid];
            auto& col = colors_[cid];
            col.assign(members.size(), 2);
            // adjacency through ridges above this cell
            std::vector<std::vector<std::uint16_t>> adj(members.size());
            for (std::int32_t rid : ridges_above_[cid]) {
                const auto& pair = star_[static_cast<std::size_t>(rid)];
                if (pair.size() != 2) throw err::internal("ridge star of size != 2 in a validated complex");
                std::uint16_t a = member_index(static_cast<std::int32_t>(cid), pair[0]);
                std::uint16_t b = member_index(static_cast<std::int32_t>(cid), pair[1]);
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
            for (std::size_t seed = 0; seed < members.size(); ++seed) {
                if (col[seed] != 2) continue;
                col[seed] = 0;
                std::vector<std::size_t> queue{seed};
                for (std::size_t qi = 0; qi < queue.size(); ++qi) {
                    std::size_t cur = queue[qi];
                    for (std::uint16_t nx : adj[cur]) {
                        if (col[nx] == 2) {
                            col[nx] = static_cast<std::uint8_t>(1 - col[cur]);
                            queue.push_back(nx);
                        } else if (col[nx] == col[cur]) {
                            throw err::not_bipartite("odd cycle in the star of " + cell_to_string(cells_[cid]));
                        }
                    }
                }
            }
            long black = 0;
            for (std::uint8_t c : col) black += (c == 0);
            if (2 * black != static_cast<long>(col.size()))
                throw err::unbalanced_colors("star of " + cell_to_string(cells_[cid]) + " is unbalanced");
            if (cell_dim(cells_[cid]) <= n_ - 2) {
                mutable_idx_[cid] = static_cast<std::int32_t>(mutable_cells_.size());
                mutable_cells_.push_back(static_cast<std::int32_t>(cid));
            }
        }
        pools_.resize(mutable_cells_.size());
        for (std::size_t mi = 0; mi < mutable_cells_.size(); ++mi) {
            StarSet s;
            std::int32_t cid = mutable_cells_[mi];
            s.center = cells_[static_cast<std::size_t>(cid)];
            s.members = star_[static_cast<std::size_t>(cid)];
            s.colors = colors_[static_cast<std::size_t>(cid)];
            intern_pairing(static_cast<std::int32_t>(mi), canonical_pairing(s));
        }
    }

    // conditions (1) and (2), on the fast structures
    void check_labeling() const {
        for (std::size_t cid = 0; cid < cells_.size(); ++cid)
            if (static_cast<int>(cset_[cid].size()) != n_ - cell_dim(cells_[cid]))
                throw err::bad_labeling("label count at " + cell_to_string(cells_[cid]) + " is " +
                                        std::to_string(cset_[cid].size()));
        std::vector<std::int32_t> ids;
        for (std::uint32_t fi = 0; fi < facet_count(); ++fi) {
            for (std::uint32_t fmask = 1; fmask + 1 < fanout_; ++fmask) {
                ids.clear();
                ids.push_back(0);  // the top cell's empty label set
                for (std::uint32_t m = fmask;; m = (m + 1) | fmask) {
                    if (m + 1 >= fanout_) break;
                    if ((m & fmask) == fmask)
                        ids.push_back(cset_id_[static_cast<std::size_t>(facet_sub_[fi * fanout_ + m])]);
                }
                std::sort(ids.begin(), ids.end());
                if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
                    throw err::bad_labeling("label sets repeat in an interval of facet " + std::to_string(fi));
            }
        }
    }

    std::uint32_t mask_in_facet(std::uint32_t fi, const Cell& f) const {
        const Cell& g = pm_.complex.facets[fi];
        std::uint32_t mask = 0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < g.size() && k < f.size(); ++i)
            if (g[i] == f[k]) {
                mask |= (1u << i);
                ++k;
            }
        if (k != f.size()) throw err::internal("cell not inside facet");
        return mask;
    }

    std::uint16_t member_index(std::int32_t cid, std::int32_t facet) const {
        const auto& members = star_[static_cast<std::size_t>(cid)];
        auto it = std::lower_bound(members.begin(), members.end(), facet);
        if (it == members.end() || *it != facet) throw err::internal("facet not in star");
        return static_cast<std::uint16_t>(it - members.begin());
    }

    // unique H with F <= H <= G and c(H) = S (S nonempty, so H is proper)
    std::int32_t lookup_by_labelset(std::uint32_t fi, std::uint32_t fmask, std::int32_t set_id,
                                    int set_size) const {
        const int want_verts = n_ + 1 - set_size;
        std::int32_t found = -1;
        for (std::uint32_t m = fmask;; m = (m + 1) | fmask) {
            if (m + 1 >= fanout_) break;
            if ((m & fmask) != fmask || std::popcount(m) != want_verts) continue;
            std::int32_t cid = facet_sub_[fi * fanout_ + m];
            if (cset_id_[static_cast<std::size_t>(cid)] == set_id) {
                if (found >= 0)
                    throw err::not_unique("two cells with one label set inside facet " + std::to_string(fi));
                found = cid;
            }
        }
        if (found < 0)
            throw err::no_such_face("no cell with the requested label set inside facet " + std::to_string(fi));
        return found;
    }

    // pairing application, reading the given family
    std::int32_t apply_pairing(std::int32_t cid, std::int32_t facet, const std::uint16_t* fam) const {
        const auto& members = star_[static_cast<std::size_t>(cid)];
        std::uint16_t idx = member_index(cid, facet);
        if (cell_dim(cells_[static_cast<std::size_t>(cid)]) == n_ - 1) return members[1 - idx];
        std::int32_t mi = mutable_idx_[static_cast<std::size_t>(cid)];
        return members[pools_[static_cast<std::size_t>(mi)].perms[fam[mi]][idx]];
    }

    StateId phi1(int j, StateId s) {
        const StateRec rec = states_[s];
        const std::uint32_t fi = flag_facet(rec.flag);
        const auto& y = tables_.perms[flag_perm(rec.flag)];
        const Cell& g = pm_.complex.facets[fi];
        const std::uint16_t* fam = family_data(rec.family);

        // cell ids of F_1..F_n in the current facet
        std::vector<std::int32_t> fcell(static_cast<std::size_t>(n_) + 1, -1);
        {
            std::uint32_t mask = fanout_ - 1;
            for (int i = 1; i <= n_; ++i) {
                mask &= ~(1u << y[static_cast<std::size_t>(n_ - i + 1)]);
                fcell[static_cast<std::size_t>(i)] = facet_sub_[fi * fanout_ + mask];
            }
        }
        const std::int32_t fj = fcell[static_cast<std::size_t>(j)];
        const std::int32_t set_id = cset_id_[static_cast<std::size_t>(fj)];
        const int set_size = j;

        // new top cell across the pairing at F_j
        const std::int32_t gi2 = apply_pairing(fj, static_cast<std::int32_t>(fi), fam);
        const std::uint32_t fi2 = static_cast<std::uint32_t>(gi2);
        const Cell& g2 = pm_.complex.facets[fi2];
        const std::uint32_t fj_mask2 = mask_in_facet(fi2, cells_[static_cast<std::size_t>(fj)]);

        // middle cells keep their label sets
        std::vector<Cell> new_chain(static_cast<std::size_t>(j));  // F~_i for i = 0..j-1
        new_chain[0] = g2;
        for (int i = 1; i < j; ++i) {
            std::int32_t hid = lookup_by_labelset(fi2, fj_mask2, cset_id_[static_cast<std::size_t>(fcell[static_cast<std::size_t>(i)])],
                                                  n_ - cell_dim(cells_[static_cast<std::size_t>(fcell[static_cast<std::size_t>(i)])]));
            new_chain[static_cast<std::size_t>(i)] = cells_[static_cast<std::size_t>(hid)];
        }

        // assemble the new vertex order: positions 0..n-j are unchanged
        std::vector<VertexId> yverts(static_cast<std::size_t>(n_) + 1);
        for (int k = 0; k <= n_ - j; ++k) yverts[static_cast<std::size_t>(k)] = g[y[static_cast<std::size_t>(k)]];
        {
            Cell prev = cells_[static_cast<std::size_t>(fj)];
            for (int i = j - 1; i >= 0; --i) {
                Cell diff = cell_minus(new_chain[static_cast<std::size_t>(i)], prev);
                if (diff.size() != 1) throw err::internal("flag rebuild produced a non-chain");
                yverts[static_cast<std::size_t>(n_ - i)] = diff[0];
                prev = new_chain[static_cast<std::size_t>(i)];
            }
        }
        std::vector<std::uint8_t> yperm(static_cast<std::size_t>(n_) + 1);
        for (int k = 0; k <= n_; ++k) {
            auto it = std::lower_bound(g2.begin(), g2.end(), yverts[static_cast<std::size_t>(k)]);
            yperm[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(it - g2.begin());
        }
        const std::uint32_t new_flag = fi2 * tables_.fact + tables_.rank_of.at(FlagTables::encode(yperm));

        // family update at every cell whose label set strictly contains c(F_j)
        scratch_fam_.assign(fam, fam + mutable_cells_.size());
        for (std::int32_t cid : update_list(set_id)) {
            const auto& members = star_[static_cast<std::size_t>(cid)];
            const auto& cols = colors_[static_cast<std::size_t>(cid)];
            const std::int32_t mi = mutable_idx_[static_cast<std::size_t>(cid)];
            const auto& lam = pools_[static_cast<std::size_t>(mi)].perms[fam[mi]];
            std::vector<std::uint16_t> np(members.size());
            for (std::size_t gix = 0; gix < members.size(); ++gix) {
                const std::uint32_t mg = static_cast<std::uint32_t>(members[gix]);
                const std::uint32_t fm = star_mask_[static_cast<std::size_t>(cid)][gix];
                const std::int32_t h1 = lookup_by_labelset(mg, fm, set_id, set_size);
                const std::int32_t g1 = apply_pairing(h1, members[gix], fam);
                const std::uint16_t g2i = lam[member_index(cid, g1)];
                const std::uint32_t mg2 = static_cast<std::uint32_t>(members[g2i]);
                const std::int32_t h2 = lookup_by_labelset(mg2, star_mask_[static_cast<std::size_t>(cid)][g2i], set_id, set_size);
                const std::int32_t g3 = apply_pairing(h2, members[g2i], fam);
                np[gix] = member_index(cid, g3);
            }
            for (std::size_t a = 0; a < np.size(); ++a) {
                if (np[np[a]] != a || np[a] == a || cols[np[a]] == cols[a])
                    throw err::pairing_broken("updated pairing at " +
                                              cell_to_string(cells_[static_cast<std::size_t>(cid)]) +
                                              " is not a color-reversing involution");
            }
            scratch_fam_[static_cast<std::size_t>(mi)] = intern_pairing(mi, std::move(np));
        }

        const std::uint16_t new_h = static_cast<std::uint16_t>(rec.h ^ (1u << (j - 1)));
        return intern_state(new_flag, new_h, intern_family(scratch_fam_.data()));
    }

    const std::vector<std::int32_t>& update_list(std::int32_t set_id) {
        auto it = update_lists_.find(set_id);
        if (it != update_lists_.end()) return it->second;
        std::vector<std::int32_t> out;
        const auto& s = cset_values_[static_cast<std::size_t>(set_id)];
        for (std::int32_t cid : mutable_cells_) {
            const auto& cs = cset_[static_cast<std::size_t>(cid)];
            if (cs.size() > s.size() && std::includes(cs.begin(), cs.end(), s.begin(), s.end()))
                out.push_back(cid);
        }
        return update_lists_.emplace(set_id, std::move(out)).first->second;
    }

    // --- interning ---

    std::uint16_t intern_pairing(std::int32_t mi, std::vector<std::uint16_t> perm) {
        auto& pool = pools_[static_cast<std::size_t>(mi)];
        auto it = pool.rank.find(perm);
        if (it != pool.rank.end()) return it->second;
        if (pool.perms.size() >= 65535) throw err::internal("pairing pool overflow");
        std::uint16_t id = static_cast<std::uint16_t>(pool.perms.size());
        pool.rank.emplace(perm, id);
        pool.perms.push_back(std::move(perm));
        return id;
    }

    const std::uint16_t* family_data(std::uint32_t famId) const {
        return famdata_.data() + static_cast<std::size_t>(famId) * mutable_cells_.size();
    }

    std::uint32_t intern_family(const std::uint16_t* bytes) {
        const std::size_t m = mutable_cells_.size();
        if (m == 0) return 0;  // nothing mutable (n = 1): a single shared family
        std::uint64_t h = 1469598103934665603ull;
        for (std::size_t i = 0; i < m; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
        auto& bucket = fam_buckets_[h];
        for (std::uint32_t id : bucket)
            if (std::memcmp(family_data(id), bytes, m * sizeof(std::uint16_t)) == 0) return id;
        std::uint32_t id = static_cast<std::uint32_t>(famdata_.size() / m);
        famdata_.insert(famdata_.end(), bytes, bytes + m);
        bucket.push_back(id);
        return id;
    }

    StateId intern_state(std::uint32_t flag, std::uint16_t h, std::uint32_t family) {
        std::uint64_t hash =
            (static_cast<std::uint64_t>(flag) * 0x9e3779b97f4a7c15ull) ^ (static_cast<std::uint64_t>(h) * 0xc2b2ae3d27d4eb4full) ^
            (static_cast<std::uint64_t>(family) * 0x165667b19e3779f9ull);
        auto& bucket = state_buckets_[hash];
        for (StateId id : bucket) {
            const StateRec& r = states_[id];
            if (r.flag == flag && r.h == h && r.family == family) return id;
        }
        StateId id = static_cast<StateId>(states_.size());
        states_.push_back({flag, family, h});
        bucket.push_back(id);
        return id;
    }

    // --- data ---
    PseudoManifold pm_;
    const FlagTables& tables_;
    int n_ = 0;
    std::uint32_t fanout_ = 0;

    std::vector<Cell> cells_;
    std::map<Cell, std::int32_t> cell_id_;
    std::vector<std::int32_t> facet_sub_;
    std::vector<std::vector<std::int32_t>> star_;
    std::vector<std::vector<std::uint32_t>> star_mask_;  // per cell: mask of the cell in each star member
    std::vector<std::vector<std::int32_t>> ridges_above_;
    std::vector<int> ridge_label_;
    std::vector<std::vector<int>> cset_;
    std::vector<std::int32_t> cset_id_;
    std::map<std::vector<int>, std::int32_t> cset_rank_;
    std::vector<std::vector<int>> cset_values_;
    std::vector<std::vector<std::uint8_t>> colors_;
    std::vector<std::int32_t> mutable_idx_;
    std::vector<std::int32_t> mutable_cells_;

    struct PairingPool {
        std::vector<std::vector<std::uint16_t>> perms;
        std::map<std::vector<std::uint16_t>, std::uint16_t> rank;
    };
    std::vector<PairingPool> pools_;

    std::vector<std::uint16_t> famdata_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> fam_buckets_;

    std::vector<StateRec> states_;
    std::unordered_map<std::uint64_t, std::vector<StateId>> state_buckets_;
    std::map<std::int32_t, std::vector<std::int32_t>> update_lists_;

    std::vector<std::uint16_t> scratch_fam_;

    void build_masks() {
        star_mask_.assign(cells_.size(), {});
        for (std::size_t cid = 0; cid < cells_.size(); ++cid) {
            auto& masks = star_mask_[cid];
            masks.reserve(star_[cid].size());
            for (std::int32_t fi : star_[cid])
                masks.push_back(mask_in_facet(static_cast<std::uint32_t>(fi), cells_[cid]));
        }
    }
};

}  // namespace pmres
