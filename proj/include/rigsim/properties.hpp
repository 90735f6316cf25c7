#ifndef RIGSIM_PROPERTIES_HPP
#define RIGSIM_PROPERTIES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rigsim/graph.hpp"
#include "rigsim/rng.hpp"

namespace rigsim {

[[nodiscard]] bool is_connected(const Graph& g);

/// True iff n > k and removing fewer than k vertices never disconnects g.
/// k <= 2 is decided by connectivity / articulation points; larger k by
/// is_k_connected_flow.
[[nodiscard]] bool is_k_connected(const Graph& g, std::size_t k);

/// Same decision, always through unit-capacity vertex-split max-flow: fix k
/// vertices S and require k internally disjoint paths from every s in S to
/// each vertex not adjacent to s.
[[nodiscard]] bool is_k_connected_flow(const Graph& g, std::size_t k);

/// Vertices whose removal disconnects their component.
[[nodiscard]] std::vector<Vertex> articulation_points(const Graph& g);

/// Maximum matching in a general graph (Edmonds' blossom contraction,
/// greedy warm start). mate[v] == v means v is unmatched.
[[nodiscard]] std::vector<Vertex> maximum_matching(const Graph& g);

[[nodiscard]] bool has_perfect_matching(const Graph& g);

[[nodiscard]] bool min_degree_at_least(const Graph& g, std::size_t k);

enum class Verdict { yes, no, unresolved };

enum class NoReason {
    none,
    disconnected,
    min_degree_below_two,
    cut_vertex,           // Hamiltonian graphs are 2-connected
    forced_degree_conflict,  // some vertex has three or more degree-2 neighbours
    exhausted_search,
};

[[nodiscard]] std::string to_string(Verdict v);
[[nodiscard]] std::string to_string(NoReason r);

struct HamiltonVerdict {
    Verdict status = Verdict::unresolved;
    std::vector<Vertex> certificate;  // Hamilton cycle (each vertex once) when yes
    NoReason reason = NoReason::none;
    Vertex witness = 0;               // offending vertex for min-degree / cut-vertex / forced reasons
};

struct HamiltonBudget {
    std::size_t restarts = 20;
    std::size_t rotations_per_vertex = 100;
    std::size_t exact_max_n = 28;
    std::uint64_t exact_node_limit = 0;  // 0 = unlimited
    std::uint64_t seed = 0x5EED;
};

/// Three tiers: cheap necessary-condition rejects, rotation-extension
/// heuristic with restarts, then exact backtracking when n <= exact_max_n.
/// Never wrong; returns unresolved when every tier gives up. Throws for n < 3.
HamiltonVerdict hamilton_solve(const Graph& g, const HamiltonBudget& budget = {});

/// Exact backtracking only (n <= 64).
HamiltonVerdict hamilton_exact(const Graph& g, std::uint64_t node_limit = 0);

/// True iff cycle visits every vertex exactly once along edges of g.
[[nodiscard]] bool is_hamilton_cycle(const Graph& g, const std::vector<Vertex>& cycle);

}  // namespace rigsim

#endif  // RIGSIM_PROPERTIES_HPP
