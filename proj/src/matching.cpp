#include <limits>

#include "rigsim/properties.hpp"

namespace rigsim {

namespace {

constexpr Vertex kUnmatched = std::numeric_limits<Vertex>::max();

// Edmonds' algorithm: alternating BFS from a free root, contracting odd
// cycles (blossoms) by relabelling their base.
class BlossomMatcher {
public:
    explicit BlossomMatcher(const Graph& g)
        : g_(g), n_(g.vertex_count()), mate_(n_, kUnmatched), parent_(n_), base_(n_),
          used_(n_), in_blossom_(n_), lca_mark_(n_) {}

    std::vector<Vertex> run() {
        greedy_start();
        for (Vertex root = 0; root < n_; ++root) {
            if (mate_[root] != kUnmatched || g_.degree(root) == 0) continue;
            const Vertex end = find_augmenting_path(root);
            if (end != kUnmatched) augment(end);
        }
        std::vector<Vertex> result(n_);
        for (Vertex v = 0; v < n_; ++v) result[v] = mate_[v] == kUnmatched ? v : mate_[v];
        return result;
    }

private:
    void greedy_start() {
        for (const Edge& e : g_.edges()) {
            if (mate_[e.u] == kUnmatched && mate_[e.v] == kUnmatched) {
                mate_[e.u] = e.v;
                mate_[e.v] = e.u;
            }
        }
    }

    Vertex lowest_common_base(Vertex a, Vertex b) {
        std::fill(lca_mark_.begin(), lca_mark_.end(), 0);
        for (;;) {
            a = base_[a];
            lca_mark_[a] = 1;
            if (mate_[a] == kUnmatched) break;
            a = parent_[mate_[a]];
        }
        for (;;) {
            b = base_[b];
            if (lca_mark_[b]) return b;
            b = parent_[mate_[b]];
        }
    }

    void mark_path(Vertex v, Vertex blossom_base, Vertex child) {
        while (base_[v] != blossom_base) {
            in_blossom_[base_[v]] = 1;
            in_blossom_[base_[mate_[v]]] = 1;
            parent_[v] = child;
            child = mate_[v];
            v = parent_[mate_[v]];
        }
    }

    Vertex find_augmenting_path(Vertex root) {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(parent_.begin(), parent_.end(), kUnmatched);
        for (Vertex v = 0; v < n_; ++v) base_[v] = v;
        used_[root] = 1;
        queue_.clear();
        queue_.push_back(root);
        for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
            const Vertex v = queue_[qi];
            for (Vertex to : g_.neighbors(v)) {
                if (base_[v] == base_[to] || mate_[v] == to) continue;
                if (to == root || (mate_[to] != kUnmatched && parent_[mate_[to]] != kUnmatched)) {
                    const Vertex current_base = lowest_common_base(v, to);
                    std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
                    mark_path(v, current_base, to);
                    mark_path(to, current_base, v);
                    for (Vertex i = 0; i < n_; ++i) {
                        if (in_blossom_[base_[i]]) {
                            base_[i] = current_base;
                            if (!used_[i]) {
                                used_[i] = 1;
                                queue_.push_back(i);
                            }
                        }
                    }
                } else if (parent_[to] == kUnmatched) {
                    parent_[to] = v;
                    if (mate_[to] == kUnmatched) return to;
                    used_[mate_[to]] = 1;
                    queue_.push_back(mate_[to]);
                }
            }
        }
        return kUnmatched;
    }

    void augment(Vertex v) {
        while (v != kUnmatched) {
            const Vertex pv = parent_[v];
            const Vertex ppv = mate_[pv];
            mate_[v] = pv;
            mate_[pv] = v;
            v = ppv;
        }
    }

    const Graph& g_;
    Vertex n_;
    std::vector<Vertex> mate_, parent_, base_;
    std::vector<char> used_, in_blossom_, lca_mark_;
    std::vector<Vertex> queue_;
};

}  // namespace

std::vector<Vertex> maximum_matching(const Graph& g) { return BlossomMatcher(g).run(); }

bool has_perfect_matching(const Graph& g) {
    const Vertex n = g.vertex_count();
    if (n % 2 != 0) return false;
    if (n == 0) return true;
    if (min_degree(g) == 0) return false;
    const auto mate = maximum_matching(g);
    for (Vertex v = 0; v < n; ++v)
        if (mate[v] == v) return false;
    return true;
}

}  // namespace rigsim
