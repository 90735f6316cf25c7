#ifndef RIGSIM_GRAPH_HPP
#define RIGSIM_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rigsim {

using Vertex = std::uint32_t;
using Feature = std::uint32_t;

/// Unordered vertex pair stored canonically with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Thrown when two graphs over different vertex sets are combined.
class IncompatibleVertexSets : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Simple undirected graph on vertices 0..n-1. Immutable after construction:
/// the canonical edge list is sorted lexicographically and each adjacency
/// list is sorted ascending.
class Graph {
public:
    Graph() = default;
    explicit Graph(Vertex n);

    /// Builds from arbitrary pairs; duplicates are merged. Throws on
    /// self-loops and out-of-range endpoints.
    static Graph from_edges(Vertex n, std::vector<Edge> edges);

    /// Builds from pairs already canonical, sorted and unique (checked).
    static Graph from_sorted_edges(Vertex n, std::vector<Edge> edges);

    [[nodiscard]] Vertex vertex_count() const { return n_; }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
    [[nodiscard]] std::span<const Edge> edges() const { return edges_; }

    [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    [[nodiscard]] std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
    [[nodiscard]] bool has_edge(Vertex a, Vertex b) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    void build_adjacency();

    Vertex n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Vertex> adjacency_;
};

/// Feature sets W_v of every vertex together with the inverse index V_w.
/// Both directions are stored in compressed form; only features held by at
/// least one vertex occupy space, so m may be large.
class FeatureAssignment {
public:
    FeatureAssignment() = default;

    /// features_of[v] lists W_v (any order, duplicates rejected).
    static FeatureAssignment from_vertex_lists(Feature m,
                                               const std::vector<std::vector<Feature>>& features_of);

    /// vertices_of[w] lists V_w for w in 0..m-1.
    static FeatureAssignment from_feature_lists(Vertex n,
                                                const std::vector<std::vector<Vertex>>& vertices_of);

    [[nodiscard]] Vertex vertex_count() const { return n_; }
    [[nodiscard]] Feature feature_count() const { return m_; }

    /// W_v, sorted ascending.
    [[nodiscard]] std::span<const Feature> features_of(Vertex v) const {
        return {vertex_features_.data() + vertex_offsets_[v],
                vertex_features_.data() + vertex_offsets_[v + 1]};
    }

    /// V_w, sorted ascending (empty for features nobody chose).
    [[nodiscard]] std::span<const Vertex> vertices_of(Feature w) const;

    /// Features with nonempty V_w, ascending.
    [[nodiscard]] std::span<const Feature> used_features() const { return used_features_; }

    /// V_w for the i-th used feature.
    [[nodiscard]] std::span<const Vertex> used_feature_vertices(std::size_t i) const {
        return {feature_vertices_.data() + feature_offsets_[i],
                feature_vertices_.data() + feature_offsets_[i + 1]};
    }

    /// Sum over v of |W_v| (equals the sum over w of |V_w|).
    [[nodiscard]] std::size_t incidence_count() const { return vertex_features_.size(); }

    friend bool operator==(const FeatureAssignment& a, const FeatureAssignment& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.vertex_offsets_ == b.vertex_offsets_ &&
               a.vertex_features_ == b.vertex_features_;
    }

private:
    void build(std::vector<std::pair<Vertex, Feature>> incidences);

    Vertex n_ = 0;
    Feature m_ = 0;
    std::vector<std::size_t> vertex_offsets_{0};
    std::vector<Feature> vertex_features_;
    std::vector<Feature> used_features_;
    std::vector<std::size_t> feature_offsets_{0};
    std::vector<Vertex> feature_vertices_;
};

/// Ordered uniform pair draws (repetitions allowed) before collapsing into a graph.
class DrawSequence {
public:
    DrawSequence() = default;
    DrawSequence(Vertex n, std::vector<Edge> draws);

    [[nodiscard]] Vertex vertex_count() const { return n_; }
    [[nodiscard]] std::size_t length() const { return draws_.size(); }
    [[nodiscard]] std::span<const Edge> draws() const { return draws_; }

    [[nodiscard]] DrawSequence prefix(std::size_t k) const;

private:
    Vertex n_ = 0;
    std::vector<Edge> draws_;
};

[[nodiscard]] std::size_t min_degree(const Graph& g);
[[nodiscard]] bool is_subgraph(const Graph& smaller, const Graph& larger);
[[nodiscard]] Graph graph_union(const Graph& a, const Graph& b);
[[nodiscard]] Graph collapse(const DrawSequence& draws);
[[nodiscard]] Graph intersection_graph(const FeatureAssignment& assignment);

/// Small named graphs used by tests and examples.
namespace named {
Graph empty(Vertex n);
Graph complete(Vertex n);
Graph cycle(Vertex n);
Graph path(Vertex n);
Graph star(Vertex leaves);
Graph petersen();
}  // namespace named

/// Edge-list text format: "n <n>" then one "u v" line per edge (u < v,
/// lexicographic order).
void write_edge_list(std::ostream& out, const Graph& g);

/// Assignment lines "v: w1 w2 ...", one per vertex.
void write_features(std::ostream& out, const FeatureAssignment& a);

struct EdgeListDocument {
    Graph graph;
    std::optional<FeatureAssignment> assignment;
};

/// Parses the edge-list format; optional "v: ..." feature lines are accepted.
/// Throws std::runtime_error with the offending line number on bad input.
EdgeListDocument read_edge_list(std::istream& in);

}  // namespace rigsim

#endif  // RIGSIM_GRAPH_HPP
