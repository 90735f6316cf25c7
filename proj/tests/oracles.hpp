// Brute-force reference checkers for small graphs. Deliberately naive and
// independent of the library algorithms: everything works on a bitmask
// adjacency matrix.
#ifndef RIGSIM_TESTS_ORACLES_HPP
#define RIGSIM_TESTS_ORACLES_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "rigsim/graph.hpp"

namespace oracle {

struct Small {
    unsigned n = 0;
    std::vector<std::uint32_t> adj;  // bit j of adj[i] set iff ij is an edge

    explicit Small(const rigsim::Graph& g) : n(g.vertex_count()), adj(n, 0) {
        for (const auto& e : g.edges()) {
            adj[e.u] |= 1u << e.v;
            adj[e.v] |= 1u << e.u;
        }
    }
    [[nodiscard]] bool edge(unsigned a, unsigned b) const { return (adj[a] >> b) & 1u; }
};

/// Connected after deleting the vertices in `removed`; fewer than two
/// remaining vertices count as connected.
inline bool connected_without(const Small& g, std::uint32_t removed) {
    const std::uint32_t all = (g.n == 32 ? ~0u : ((1u << g.n) - 1)) & ~removed;
    if (std::popcount(all) <= 1) return true;
    const std::uint32_t start = all & (~all + 1);
    std::uint32_t seen = start, frontier = start;
    while (frontier) {
        std::uint32_t next = 0;
        for (std::uint32_t f = frontier; f; f &= f - 1) next |= g.adj[std::countr_zero(f)];
        next &= all & ~seen;
        seen |= next;
        frontier = next;
    }
    return seen == all;
}

inline bool connected(const Small& g) { return connected_without(g, 0); }

/// n > k and no removal of fewer than k vertices disconnects the graph.
inline bool k_connected(const Small& g, unsigned k) {
    if (g.n <= k) return false;
    for (std::uint32_t s = 0; s < (1u << g.n); ++s) {
        if (static_cast<unsigned>(std::popcount(s)) < k && !connected_without(g, s)) return false;
    }
    return true;
}

/// Exhaustive search over edge subsets that pair up vertices: the lowest
/// uncovered vertex must be matched to some uncovered neighbour.
inline bool perfect_matching(const Small& g, std::uint32_t covered = 0) {
    const std::uint32_t all = (1u << g.n) - 1;
    if (covered == all) return true;
    const unsigned v = static_cast<unsigned>(std::countr_zero(~covered & all));
    for (unsigned u = v + 1; u < g.n; ++u) {
        if (!(covered >> u & 1u) && g.edge(v, u) && perfect_matching(g, covered | (1u << v) | (1u << u))) {
            return true;
        }
    }
    return false;
}

/// Maximum matching size by the same exhaustive branching (v matched or not).
inline unsigned max_matching(const Small& g, std::uint32_t covered = 0) {
    const std::uint32_t all = (1u << g.n) - 1;
    if ((covered & all) == all) return 0;
    const unsigned v = static_cast<unsigned>(std::countr_zero(~covered & all));
    unsigned best = max_matching(g, covered | (1u << v));
    for (unsigned u = v + 1; u < g.n; ++u) {
        if (!(covered >> u & 1u) && g.edge(v, u)) {
            best = std::max(best, 1 + max_matching(g, covered | (1u << v) | (1u << u)));
        }
    }
    return best;
}

/// Permutation search: vertex 0 fixed first, every ordering of the rest tried.
inline bool hamiltonian(const Small& g) {
    if (g.n < 3) return false;
    std::vector<unsigned> perm(g.n - 1);
    for (unsigned i = 0; i + 1 < g.n; ++i) perm[i] = i + 1;
    do {
        bool ok = g.edge(0, perm.front()) && g.edge(perm.back(), 0);
        for (std::size_t i = 0; ok && i + 1 < perm.size(); ++i) ok = g.edge(perm[i], perm[i + 1]);
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// The graph on n vertices whose edges are the set bits of `mask` over the
/// lexicographic pair order (0,1), (0,2), ..., (n-2,n-1).
inline rigsim::Graph from_mask(rigsim::Vertex n, std::uint64_t mask) {
    std::vector<rigsim::Edge> edges;
    unsigned bit = 0;
    for (rigsim::Vertex u = 0; u < n; ++u)
        for (rigsim::Vertex v = u + 1; v < n; ++v, ++bit)
            if (mask >> bit & 1u) edges.emplace_back(u, v);
    return rigsim::Graph::from_sorted_edges(n, std::move(edges));
}

}  // namespace oracle

#endif  // RIGSIM_TESTS_ORACLES_HPP
