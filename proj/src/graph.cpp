#include "rigsim/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

namespace rigsim {

Graph::Graph(Vertex n) : n_(n), offsets_(static_cast<std::size_t>(n) + 1, 0) {}

Graph Graph::from_edges(Vertex n, std::vector<Edge> edges) {
    for (const Edge& e : edges) {
        if (e.u == e.v) throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(e.u));
        if (e.v >= n) throw std::invalid_argument("Graph: endpoint " + std::to_string(e.v) + " out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
}

Graph Graph::from_sorted_edges(Vertex n, std::vector<Edge> edges) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.u >= e.v || e.v >= n) throw std::invalid_argument("Graph: non-canonical edge");
        if (i > 0 && !(edges[i - 1] < e)) throw std::invalid_argument("Graph: edges not sorted/unique");
    }
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
}

void Graph::build_adjacency() {
    offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const Edge& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    adjacency_.resize(edges_.size() * 2);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Lexicographic edge order fills every list in ascending order: all (y, x)
    // with y < x precede every (x, z).
    for (const Edge& e : edges_) {
        adjacency_[cursor[e.u]++] = e.v;
        adjacency_[cursor[e.v]++] = e.u;
    }
}

bool Graph::has_edge(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_ || a == b) return false;
    if (degree(a) > degree(b)) std::swap(a, b);
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

FeatureAssignment FeatureAssignment::from_vertex_lists(
    Feature m, const std::vector<std::vector<Feature>>& features_of) {
    std::vector<std::pair<Vertex, Feature>> incidences;
    for (std::size_t v = 0; v < features_of.size(); ++v) {
        for (Feature w : features_of[v]) {
            if (w >= m) throw std::invalid_argument("FeatureAssignment: feature out of range");
            incidences.emplace_back(static_cast<Vertex>(v), w);
        }
    }
    FeatureAssignment a;
    a.n_ = static_cast<Vertex>(features_of.size());
    a.m_ = m;
    a.build(std::move(incidences));
    return a;
}

FeatureAssignment FeatureAssignment::from_feature_lists(
    Vertex n, const std::vector<std::vector<Vertex>>& vertices_of) {
    std::vector<std::pair<Vertex, Feature>> incidences;
    for (std::size_t w = 0; w < vertices_of.size(); ++w) {
        for (Vertex v : vertices_of[w]) {
            if (v >= n) throw std::invalid_argument("FeatureAssignment: vertex out of range");
            incidences.emplace_back(v, static_cast<Feature>(w));
        }
    }
    FeatureAssignment a;
    a.n_ = n;
    a.m_ = static_cast<Feature>(vertices_of.size());
    a.build(std::move(incidences));
    return a;
}

void FeatureAssignment::build(std::vector<std::pair<Vertex, Feature>> incidences) {
    std::sort(incidences.begin(), incidences.end());
    if (std::adjacent_find(incidences.begin(), incidences.end()) != incidences.end()) {
        throw std::invalid_argument("FeatureAssignment: repeated (vertex, feature) incidence");
    }
    vertex_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    vertex_features_.clear();
    vertex_features_.reserve(incidences.size());
    for (const auto& [v, w] : incidences) {
        ++vertex_offsets_[v + 1];
        vertex_features_.push_back(w);
    }
    for (std::size_t i = 1; i < vertex_offsets_.size(); ++i) vertex_offsets_[i] += vertex_offsets_[i - 1];

    std::sort(incidences.begin(), incidences.end(),
              [](const auto& a, const auto& b) { return std::tie(a.second, a.first) < std::tie(b.second, b.first); });
    used_features_.clear();
    feature_offsets_.assign(1, 0);
    feature_vertices_.clear();
    feature_vertices_.reserve(incidences.size());
    for (std::size_t i = 0; i < incidences.size(); ++i) {
        if (i == 0 || incidences[i].second != incidences[i - 1].second) {
            if (i > 0) feature_offsets_.push_back(feature_vertices_.size());
            used_features_.push_back(incidences[i].second);
        }
        feature_vertices_.push_back(incidences[i].first);
    }
    if (!incidences.empty()) feature_offsets_.push_back(feature_vertices_.size());
}

std::span<const Vertex> FeatureAssignment::vertices_of(Feature w) const {
    auto it = std::lower_bound(used_features_.begin(), used_features_.end(), w);
    if (it == used_features_.end() || *it != w) return {};
    return used_feature_vertices(static_cast<std::size_t>(it - used_features_.begin()));
}

DrawSequence::DrawSequence(Vertex n, std::vector<Edge> draws) : n_(n), draws_(std::move(draws)) {
    for (const Edge& e : draws_) {
        if (e.u == e.v || e.v >= n_) throw std::invalid_argument("DrawSequence: invalid pair");
    }
}

DrawSequence DrawSequence::prefix(std::size_t k) const {
    k = std::min(k, draws_.size());
    return DrawSequence(n_, std::vector<Edge>(draws_.begin(), draws_.begin() + static_cast<std::ptrdiff_t>(k)));
}

std::size_t min_degree(const Graph& g) {
    if (g.vertex_count() == 0) throw std::invalid_argument("min_degree: graph has no vertices");
    std::size_t best = g.degree(0);
    for (Vertex v = 1; v < g.vertex_count(); ++v) best = std::min(best, g.degree(v));
    return best;
}

bool is_subgraph(const Graph& smaller, const Graph& larger) {
    if (smaller.vertex_count() != larger.vertex_count()) {
        throw IncompatibleVertexSets("is_subgraph: graphs have different vertex counts");
    }
    auto a = smaller.edges();
    auto b = larger.edges();
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Graph graph_union(const Graph& a, const Graph& b) {
    if (a.vertex_count() != b.vertex_count()) {
        throw IncompatibleVertexSets("graph_union: graphs have different vertex counts");
    }
    std::vector<Edge> merged;
    merged.reserve(a.edge_count() + b.edge_count());
    std::set_union(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end(),
                   std::back_inserter(merged));
    return Graph::from_sorted_edges(a.vertex_count(), std::move(merged));
}

Graph collapse(const DrawSequence& draws) {
    return Graph::from_edges(draws.vertex_count(), {draws.draws().begin(), draws.draws().end()});
}

Graph intersection_graph(const FeatureAssignment& assignment) {
    std::vector<Edge> pairs;
    std::size_t total = 0;
    for (std::size_t i = 0; i < assignment.used_features().size(); ++i) {
        const std::size_t s = assignment.used_feature_vertices(i).size();
        total += s * (s - 1) / 2;
    }
    pairs.reserve(total);
    for (std::size_t i = 0; i < assignment.used_features().size(); ++i) {
        auto members = assignment.used_feature_vertices(i);
        for (std::size_t x = 0; x < members.size(); ++x) {
            for (std::size_t y = x + 1; y < members.size(); ++y) {
                pairs.emplace_back(members[x], members[y]);
            }
        }
    }
    return Graph::from_edges(assignment.vertex_count(), std::move(pairs));
}

namespace named {

Graph empty(Vertex n) { return Graph(n); }

Graph complete(Vertex n) {
    std::vector<Edge> e;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return Graph::from_sorted_edges(n, std::move(e));
}

Graph cycle(Vertex n) {
    std::vector<Edge> e;
    for (Vertex v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
    return Graph::from_edges(n, std::move(e));
}

Graph path(Vertex n) {
    std::vector<Edge> e;
    for (Vertex v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
    return Graph::from_edges(n, std::move(e));
}

Graph star(Vertex leaves) {
    std::vector<Edge> e;
    for (Vertex v = 1; v <= leaves; ++v) e.emplace_back(0, v);
    return Graph::from_edges(leaves + 1, std::move(e));
}

Graph petersen() {
    std::vector<Edge> e;
    for (Vertex i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);      // outer cycle
        e.emplace_back(i, i + 5);            // spokes
        e.emplace_back(i + 5, (i + 2) % 5 + 5);  // inner pentagram
    }
    return Graph::from_edges(10, std::move(e));
}

}  // namespace named

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "n " << g.vertex_count() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_features(std::ostream& out, const FeatureAssignment& a) {
    for (Vertex v = 0; v < a.vertex_count(); ++v) {
        out << v << ':';
        for (Feature w : a.features_of(v)) out << ' ' << w;
        out << '\n';
    }
}

EdgeListDocument read_edge_list(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("edge list line " + std::to_string(line_no) + ": " + what);
    };

    std::optional<Vertex> n;
    std::vector<Edge> edges;
    std::vector<std::vector<Feature>> features;
    bool has_features = false;
    Feature max_feature = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!n) {
            std::string tag;
            long long value = -1;
            if (!(ls >> tag >> value) || tag != "n" || value < 0) fail("expected header 'n <count>'");
            n = static_cast<Vertex>(value);
            features.resize(*n);
            continue;
        }
        if (auto colon = line.find(':'); colon != std::string::npos) {
            std::istringstream head(line.substr(0, colon));
            long long v = -1;
            if (!(head >> v) || v < 0 || v >= static_cast<long long>(*n)) fail("bad feature line vertex");
            std::istringstream tail(line.substr(colon + 1));
            long long w;
            while (tail >> w) {
                if (w < 0) fail("negative feature");
                features[static_cast<std::size_t>(v)].push_back(static_cast<Feature>(w));
                max_feature = std::max(max_feature, static_cast<Feature>(w));
            }
            has_features = true;
            continue;
        }
        long long u = -1, v = -1;
        if (!(ls >> u >> v)) fail("expected 'u v'");
        if (u < 0 || v < 0 || u >= static_cast<long long>(*n) || v >= static_cast<long long>(*n)) {
            fail("vertex out of range");
        }
        if (u == v) fail("self-loop");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    if (!n) throw std::runtime_error("edge list: missing header 'n <count>'");

    EdgeListDocument doc{Graph::from_edges(*n, std::move(edges)), std::nullopt};
    if (has_features) doc.assignment = FeatureAssignment::from_vertex_lists(max_feature + 1, features);
    return doc;
}

}  // namespace rigsim
