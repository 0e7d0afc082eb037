#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <vector>

#include "pmres/complex.hpp"
#include "pmres/errors.hpp"

namespace pmres {

// Smith normal form over the integers, dense, with overflow detection.
// Good for the small matrices arising from links and low-dimensional inputs.

struct SmithResult {
    std::vector<long long> diagonal;  // nonzero invariant factors d1 | d2 | ...
    int rank = 0;
};

namespace detail {

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw err::internal("integer overflow in Smith normal form");
    return r;
}

inline long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw err::internal("integer overflow in Smith normal form");
    return r;
}

}  // namespace detail

inline SmithResult smith_normal_form(std::vector<std::vector<long long>> m) {
    SmithResult res;
    if (m.empty() || m[0].empty()) return res;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // find a nonzero entry of minimal magnitude in the remaining block
        std::size_t pr = t, pc = t;
        long long best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (m[i][j] != 0 && (best == 0 || std::llabs(m[i][j]) < std::llabs(best))) {
                    best = m[i][j];
                    pr = i;
                    pc = j;
                }
        if (best == 0) break;
        std::swap(m[t], m[pr]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pc]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (m[i][t] == 0) continue;
                long long q = m[i][t] / m[t][t];
                for (std::size_t j = t; j < cols; ++j)
                    m[i][j] = detail::checked_sub(m[i][j], detail::checked_mul(q, m[t][j]));
                if (m[i][t] != 0) {  // remainder smaller than pivot; swap up and restart
                    std::swap(m[t], m[i]);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (m[t][j] == 0) continue;
                long long q = m[t][j] / m[t][t];
                for (std::size_t i = t; i < rows; ++i)
                    m[i][j] = detail::checked_sub(m[i][j], detail::checked_mul(q, m[i][t]));
                if (m[t][j] != 0) {
                    for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][j]);
                    clean = false;
                }
            }
            if (!clean) continue;
            // pivot must divide the remaining block for correct invariant factors
            for (std::size_t i = t + 1; i < rows && clean; ++i)
                for (std::size_t j = t + 1; j < cols && clean; ++j)
                    if (m[i][j] % m[t][t] != 0) {
                        for (std::size_t k = t; k < cols; ++k)
                            m[t][k] = detail::checked_sub(m[t][k], detail::checked_mul(-1, m[i][k]));
                        clean = false;
                    }
        }
        ++t;
    }
    for (std::size_t i = 0; i < t; ++i) {
        long long d = std::llabs(m[i][i]);
        if (d != 0) res.diagonal.push_back(d);
    }
    res.rank = static_cast<int>(res.diagonal.size());
    return res;
}

struct HomologyGroup {
    long rank = 0;
    std::vector<long long> torsion;  // invariant factors > 1

    bool trivial() const { return rank == 0 && torsion.empty(); }
    bool is_free_of_rank(long r) const { return rank == r && torsion.empty(); }
};

// Reduced integer homology of a pure complex.  Top-dimensional chain group is
// generated by facet instances, lower ones by distinct faces, so multiset
// complexes (repeated facets) are handled as the spaces they are.
inline std::vector<HomologyGroup> reduced_homology(const SimplicialComplex& c) {
    const int n = c.dimension;
    std::vector<std::vector<Cell>> gen(static_cast<std::size_t>(n));  // dims 0..n-1
    {
        auto faces = proper_faces(c);
        for (auto& f : faces) gen[static_cast<std::size_t>(cell_dim(f))].push_back(std::move(f));
    }
    std::vector<std::map<Cell, int>> index(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d)
        for (std::size_t i = 0; i < gen[static_cast<std::size_t>(d)].size(); ++i)
            index[static_cast<std::size_t>(d)][gen[static_cast<std::size_t>(d)][i]] = static_cast<int>(i);

    auto chain_count = [&](int d) -> std::size_t {
        if (d < 0) return 1;  // augmentation
        if (d == n) return c.facets.size();
        return gen[static_cast<std::size_t>(d)].size();
    };

    // boundary matrix from dimension d to d-1 (d >= 1); d == 0 is augmentation
    auto boundary = [&](int d) -> std::vector<std::vector<long long>> {
        std::vector<std::vector<long long>> mat(chain_count(d - 1),
                                                std::vector<long long>(chain_count(d), 0));
        if (d == 0) {
            for (std::size_t j = 0; j < chain_count(0); ++j) mat[0][j] = 1;
            return mat;
        }
        auto cell_at = [&](int dd, std::size_t j) -> const Cell& {
            return dd == n ? c.facets[j] : gen[static_cast<std::size_t>(dd)][j];
        };
        for (std::size_t j = 0; j < chain_count(d); ++j) {
            const Cell& f = cell_at(d, j);
            int sign = 1;
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                Cell r;
                for (std::size_t i = 0; i < f.size(); ++i)
                    if (i != drop) r.push_back(f[i]);
                mat[static_cast<std::size_t>(index[static_cast<std::size_t>(d - 1)].at(r))][j] += sign;
                sign = -sign;
            }
        }
        return mat;
    };

    std::vector<SmithResult> snf(static_cast<std::size_t>(n) + 1);
    for (int d = 0; d <= n; ++d) snf[static_cast<std::size_t>(d)] = smith_normal_form(boundary(d));

    std::vector<HomologyGroup> h(static_cast<std::size_t>(n) + 1);
    for (int d = 0; d <= n; ++d) {
        long kernel = static_cast<long>(chain_count(d)) - snf[static_cast<std::size_t>(d)].rank;
        long image = (d == n) ? 0 : snf[static_cast<std::size_t>(d) + 1].rank;
        h[static_cast<std::size_t>(d)].rank = kernel - image;
        if (d < n)
            for (long long v : snf[static_cast<std::size_t>(d) + 1].diagonal)
                if (v > 1) h[static_cast<std::size_t>(d)].torsion.push_back(v);
    }
    return h;
}

}  // namespace pmres
