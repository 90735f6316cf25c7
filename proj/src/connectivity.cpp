#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

#include "rigsim/properties.hpp"

namespace rigsim {

bool is_connected(const Graph& g) {
    const Vertex n = g.vertex_count();
    if (n == 0) throw std::invalid_argument("is_connected: graph has no vertices");
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        for (Vertex u : g.neighbors(v)) {
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == n;
}

bool min_degree_at_least(const Graph& g, std::size_t k) {
    if (k == 0) return true;
    return min_degree(g) >= k;
}

std::vector<Vertex> articulation_points(const Graph& g) {
    const Vertex n = g.vertex_count();
    constexpr Vertex kNone = std::numeric_limits<Vertex>::max();
    std::vector<Vertex> order(n, kNone), low(n, 0), parent(n, kNone);
    std::vector<std::size_t> next_edge(n, 0);
    std::vector<char> is_cut(n, 0);
    Vertex timer = 0;

    // Iterative Tarjan lowpoint DFS.
    for (Vertex root = 0; root < n; ++root) {
        if (order[root] != kNone) continue;
        std::size_t root_children = 0;
        std::vector<Vertex> stack{root};
        order[root] = low[root] = timer++;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            auto nb = g.neighbors(v);
            if (next_edge[v] < nb.size()) {
                const Vertex u = nb[next_edge[v]++];
                if (order[u] == kNone) {
                    parent[u] = v;
                    order[u] = low[u] = timer++;
                    if (v == root) ++root_children;
                    stack.push_back(u);
                } else if (u != parent[v]) {
                    low[v] = std::min(low[v], order[u]);
                }
            } else {
                stack.pop_back();
                if (parent[v] != kNone) {
                    const Vertex p = parent[v];
                    low[p] = std::min(low[p], low[v]);
                    if (p != root && low[v] >= order[p]) is_cut[p] = 1;
                }
            }
        }
        if (root_children > 1) is_cut[root] = 1;
    }
    std::vector<Vertex> cuts;
    for (Vertex v = 0; v < n; ++v)
        if (is_cut[v]) cuts.push_back(v);
    return cuts;
}

namespace {

/// Unit vertex capacities via splitting: v_in = 2v, v_out = 2v + 1.
class VertexSplitNetwork {
public:
    explicit VertexSplitNetwork(const Graph& g) : nodes_(2 * static_cast<std::size_t>(g.vertex_count())) {
        head_.assign(nodes_, kNil);
        for (Vertex v = 0; v < g.vertex_count(); ++v) add_arc(2 * v, 2 * v + 1);
        for (const Edge& e : g.edges()) {
            add_arc(2 * e.u + 1, 2 * e.v);
            add_arc(2 * e.v + 1, 2 * e.u);
        }
        flow_.assign(to_.size(), 0);
        pred_.assign(nodes_, kNil);
    }

    /// Number of internally vertex-disjoint s-t paths, stopping at cap.
    std::size_t disjoint_paths(Vertex s, Vertex t, std::size_t cap) {
        std::fill(flow_.begin(), flow_.end(), 0);
        const std::size_t source = 2 * static_cast<std::size_t>(s) + 1;
        const std::size_t sink = 2 * static_cast<std::size_t>(t);
        std::size_t found = 0;
        std::vector<std::size_t> queue;
        queue.reserve(nodes_);
        while (found < cap) {
            std::fill(pred_.begin(), pred_.end(), kNil);
            queue.clear();
            queue.push_back(source);
            pred_[source] = kRoot;
            bool reached = false;
            for (std::size_t qi = 0; qi < queue.size() && !reached; ++qi) {
                const std::size_t x = queue[qi];
                for (std::size_t a = head_[x]; a != kNil; a = next_[a]) {
                    const std::size_t y = to_[a];
                    if (pred_[y] != kNil || residual(a) <= 0) continue;
                    pred_[y] = a;
                    if (y == sink) {
                        reached = true;
                        break;
                    }
                    queue.push_back(y);
                }
            }
            if (!reached) break;
            for (std::size_t y = sink; y != source;) {
                const std::size_t a = pred_[y];
                flow_[a] += 1;
                flow_[a ^ 1] -= 1;
                y = to_[a ^ 1];
            }
            ++found;
        }
        return found;
    }

private:
    static constexpr std::size_t kNil = std::numeric_limits<std::size_t>::max();
    static constexpr std::size_t kRoot = kNil - 1;

    void add_arc(std::size_t from, std::size_t to) {
        to_.push_back(to);
        cap_.push_back(1);
        next_.push_back(head_[from]);
        head_[from] = to_.size() - 1;
        to_.push_back(from);
        cap_.push_back(0);
        next_.push_back(head_[to]);
        head_[to] = to_.size() - 1;
    }

    [[nodiscard]] int residual(std::size_t a) const { return cap_[a] - flow_[a]; }

    std::size_t nodes_;
    std::vector<std::size_t> head_, next_, to_, pred_;
    std::vector<int> cap_, flow_;
};

}  // namespace

bool is_k_connected_flow(const Graph& g, std::size_t k) {
    if (k == 0) throw std::invalid_argument("is_k_connected: k must be positive");
    const Vertex n = g.vertex_count();
    if (n <= k) return false;
    if (!min_degree_at_least(g, k)) return false;

    VertexSplitNetwork network(g);
    std::vector<char> adjacent(n, 0);
    for (Vertex s = 0; s < static_cast<Vertex>(k); ++s) {
        for (Vertex u : g.neighbors(s)) adjacent[u] = 1;
        for (Vertex t = 0; t < n; ++t) {
            if (t == s || adjacent[t]) continue;
            // pairs inside S are tested once
            if (t < static_cast<Vertex>(k) && t < s) continue;
            if (network.disjoint_paths(s, t, k) < k) return false;
        }
        for (Vertex u : g.neighbors(s)) adjacent[u] = 0;
    }
    return true;
}

bool is_k_connected(const Graph& g, std::size_t k) {
    if (k == 0) throw std::invalid_argument("is_k_connected: k must be positive");
    const Vertex n = g.vertex_count();
    if (n <= k) return false;
    if (!min_degree_at_least(g, k)) return false;
    if (k == 1) return is_connected(g);
    if (k == 2) return is_connected(g) && articulation_points(g).empty();
    return is_k_connected_flow(g, k);
}

}  // namespace rigsim
