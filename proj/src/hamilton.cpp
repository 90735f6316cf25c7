#include <algorithm>
#include <bit>
#include <cstdint>

#include "rigsim/properties.hpp"

namespace rigsim {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::unresolved: return "unresolved";
    }
    return "unresolved";
}

std::string to_string(NoReason r) {
    switch (r) {
        case NoReason::none: return "none";
        case NoReason::disconnected: return "disconnected";
        case NoReason::min_degree_below_two: return "min-degree<2";
        case NoReason::cut_vertex: return "cut-vertex";
        case NoReason::forced_degree_conflict: return "forced-degree-conflict";
        case NoReason::exhausted_search: return "exhausted";
    }
    return "none";
}

bool is_hamilton_cycle(const Graph& g, const std::vector<Vertex>& cycle) {
    const Vertex n = g.vertex_count();
    if (n < 3 || cycle.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (Vertex v : cycle) {
        if (v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (!g.has_edge(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
    }
    return true;
}

namespace {

HamiltonVerdict make_no(NoReason reason, Vertex witness = 0) {
    HamiltonVerdict v;
    v.status = Verdict::no;
    v.reason = reason;
    v.witness = witness;
    return v;
}

/// Sound necessary-condition rejects; nullopt when none applies.
std::optional<HamiltonVerdict> quick_reject(const Graph& g) {
    const Vertex n = g.vertex_count();
    for (Vertex v = 0; v < n; ++v) {
        if (g.degree(v) < 2) return make_no(NoReason::min_degree_below_two, v);
    }
    if (!is_connected(g)) return make_no(NoReason::disconnected);
    if (auto cuts = articulation_points(g); !cuts.empty()) return make_no(NoReason::cut_vertex, cuts.front());
    // A degree-2 vertex forces both of its edges into the cycle.
    for (Vertex v = 0; v < n; ++v) {
        std::size_t forced = 0;
        for (Vertex u : g.neighbors(v))
            if (g.degree(u) == 2) ++forced;
        if (forced > 2) return make_no(NoReason::forced_degree_conflict, v);
    }
    return std::nullopt;
}

/// Rotation-extension search over one Hamilton path attempt.
class RotationExtension {
public:
    RotationExtension(const Graph& g, CounterRng& rng)
        : g_(g), n_(g.vertex_count()), rng_(rng), pos_(n_, -1), free_degree_(n_) {}

    std::optional<std::vector<Vertex>> attempt(Vertex start, std::size_t max_steps) {
        path_.clear();
        std::fill(pos_.begin(), pos_.end(), -1);
        for (Vertex v = 0; v < n_; ++v) free_degree_[v] = static_cast<std::uint32_t>(g_.degree(v));
        append(start);

        for (std::size_t steps = 0; steps < max_steps;) {
            const Vertex end = path_.back();
            if (path_.size() == n_) {
                if (g_.has_edge(end, path_.front())) return path_;
                if (!rotate(/*want_closure=*/true)) return std::nullopt;
                ++steps;
                continue;
            }
            if (extend_from(end)) continue;
            if (free_degree_[path_.front()] > 0) {
                reverse_segment(0);
                continue;
            }
            if (path_.size() >= 3 && g_.has_edge(end, path_.front()) && open_cycle()) {
                ++steps;
                continue;
            }
            if (!rotate(/*want_closure=*/false)) return std::nullopt;
            ++steps;
        }
        return std::nullopt;
    }

private:
    void append(Vertex v) {
        pos_[v] = static_cast<std::int64_t>(path_.size());
        path_.push_back(v);
        for (Vertex u : g_.neighbors(v)) --free_degree_[u];
    }

    // Prefer the off-path neighbour with the fewest off-path neighbours.
    bool extend_from(Vertex end) {
        Vertex best = n_;
        std::uint32_t best_free = 0;
        std::size_t ties = 0;
        for (Vertex u : g_.neighbors(end)) {
            if (pos_[u] >= 0) continue;
            if (best == n_ || free_degree_[u] < best_free) {
                best = u;
                best_free = free_degree_[u];
                ties = 1;
            } else if (free_degree_[u] == best_free && rng_.below(++ties) == 0) {
                best = u;
            }
        }
        if (best == n_) return false;
        append(best);
        return true;
    }

    void reverse_segment(std::size_t from) {
        std::reverse(path_.begin() + static_cast<std::ptrdiff_t>(from), path_.end());
        for (std::size_t i = from; i < path_.size(); ++i) pos_[path_[i]] = static_cast<std::int64_t>(i);
    }

    // The path closes into a cycle: reopen it next to a vertex that still has
    // an off-path neighbour so the new endpoint can extend.
    bool open_cycle() {
        const std::size_t len = path_.size();
        const std::size_t offset = rng_.below(len);
        for (std::size_t j = 0; j < len; ++j) {
            const std::size_t i = (offset + j) % len;
            if (free_degree_[path_[i]] == 0 || i == len - 1) continue;
            std::rotate(path_.begin(), path_.begin() + static_cast<std::ptrdiff_t>(i + 1), path_.end());
            for (std::size_t k = 0; k < len; ++k) pos_[path_[k]] = static_cast<std::int64_t>(k);
            return true;
        }
        return false;
    }

    // Posa rotation: for an endpoint neighbour y = path[i], reverse
    // path[i+1..] so path[i+1] becomes the new endpoint.
    bool rotate(bool want_closure) {
        const Vertex end = path_.back();
        const auto last = static_cast<std::int64_t>(path_.size()) - 1;
        candidates_.clear();
        preferred_.clear();
        for (Vertex y : g_.neighbors(end)) {
            const std::int64_t i = pos_[y];
            if (i < 0 || i >= last - 1) continue;
            candidates_.push_back(static_cast<std::size_t>(i));
            const Vertex new_end = path_[static_cast<std::size_t>(i + 1)];
            const bool good = want_closure ? g_.has_edge(new_end, path_.front()) : free_degree_[new_end] > 0;
            if (good) preferred_.push_back(static_cast<std::size_t>(i));
        }
        if (candidates_.empty()) return false;
        const auto& pool = preferred_.empty() ? candidates_ : preferred_;
        const std::size_t i = pool[rng_.below(pool.size())];
        reverse_segment(i + 1);
        return true;
    }

    const Graph& g_;
    Vertex n_;
    CounterRng& rng_;
    std::vector<Vertex> path_;
    std::vector<std::int64_t> pos_;
    std::vector<std::uint32_t> free_degree_;
    std::vector<std::size_t> candidates_, preferred_;
};

class ExactSearch {
public:
    ExactSearch(const Graph& g, std::uint64_t node_limit) : n_(g.vertex_count()), node_limit_(node_limit) {
        adj_.assign(n_, 0);
        for (const Edge& e : g.edges()) {
            adj_[e.u] |= bit(e.v);
            adj_[e.v] |= bit(e.u);
        }
        full_ = n_ == 64 ? ~0ULL : (bit(n_) - 1);
    }

    HamiltonVerdict run() {
        // Start at a minimum-degree vertex: fewest first branches.
        start_ = 0;
        for (Vertex v = 1; v < n_; ++v)
            if (std::popcount(adj_[v]) < std::popcount(adj_[start_])) start_ = v;
        path_.assign(1, start_);
        const bool found = extend(start_, bit(start_));
        HamiltonVerdict verdict;
        if (found) {
            verdict.status = Verdict::yes;
            verdict.certificate = path_;
        } else if (aborted_) {
            verdict.status = Verdict::unresolved;
        } else {
            verdict = make_no(NoReason::exhausted_search);
        }
        return verdict;
    }

private:
    static std::uint64_t bit(Vertex v) { return 1ULL << v; }

    bool extend(Vertex current, std::uint64_t visited) {
        if (node_limit_ != 0 && ++nodes_ > node_limit_) {
            aborted_ = true;
            return false;
        }
        const std::uint64_t remaining = full_ & ~visited;
        if (remaining == 0) return (adj_[current] & bit(start_)) != 0;
        if (!feasible(current, remaining)) return false;

        // Branch on neighbours with the fewest remaining options first.
        std::uint64_t options = adj_[current] & remaining;
        Vertex order[64];
        int count = 0;
        while (options) {
            order[count++] = static_cast<Vertex>(std::countr_zero(options));
            options &= options - 1;
        }
        std::sort(order, order + count, [&](Vertex a, Vertex b) {
            return std::popcount(adj_[a] & remaining) < std::popcount(adj_[b] & remaining);
        });
        for (int i = 0; i < count && !aborted_; ++i) {
            path_.push_back(order[i]);
            if (extend(order[i], visited | bit(order[i]))) return true;
            path_.pop_back();
        }
        return false;
    }

    bool feasible(Vertex current, std::uint64_t remaining) const {
        if ((adj_[current] & remaining) == 0 || (adj_[start_] & remaining) == 0) return false;
        const std::uint64_t ends = bit(current) | bit(start_);
        const std::uint64_t allowed = remaining | ends;
        std::uint64_t forced_at_current = 0;
        for (std::uint64_t r = remaining; r; r &= r - 1) {
            const auto u = static_cast<Vertex>(std::countr_zero(r));
            const std::uint64_t avail = adj_[u] & allowed;
            const int deg = std::popcount(avail);
            if (deg < 2) return false;
            // u forced onto both ends would close the cycle early
            if (deg == 2 && avail == ends && std::popcount(remaining) > 1) return false;
            if (deg == 2 && (avail & bit(current)) && current != start_) ++forced_at_current;
        }
        if (forced_at_current > 1) return false;
        // The unvisited vertices are traversed as one contiguous stretch.
        const std::uint64_t seed = remaining & (~remaining + 1);
        std::uint64_t reached = seed, frontier = seed;
        while (frontier) {
            std::uint64_t next = 0;
            for (std::uint64_t f = frontier; f; f &= f - 1) next |= adj_[std::countr_zero(f)];
            next &= remaining & ~reached;
            reached |= next;
            frontier = next;
        }
        return reached == remaining;
    }

    Vertex n_;
    std::uint64_t node_limit_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    std::vector<std::uint64_t> adj_;
    std::uint64_t full_ = 0;
    Vertex start_ = 0;
    std::vector<Vertex> path_;
};

}  // namespace

HamiltonVerdict hamilton_exact(const Graph& g, std::uint64_t node_limit) {
    if (g.vertex_count() < 3) throw std::invalid_argument("hamilton: need at least 3 vertices");
    if (g.vertex_count() > 64) throw std::invalid_argument("hamilton_exact: at most 64 vertices");
    return ExactSearch(g, node_limit).run();
}

HamiltonVerdict hamilton_solve(const Graph& g, const HamiltonBudget& budget) {
    const Vertex n = g.vertex_count();
    if (n < 3) throw std::invalid_argument("hamilton: need at least 3 vertices");
    if (auto rejected = quick_reject(g)) return *rejected;

    std::vector<Vertex> low_degree;
    std::size_t delta = g.degree(0);
    for (Vertex v = 1; v < n; ++v) delta = std::min(delta, g.degree(v));
    for (Vertex v = 0; v < n; ++v)
        if (g.degree(v) == delta) low_degree.push_back(v);

    for (std::size_t r = 0; r < budget.restarts; ++r) {
        CounterRng rng(Seed{budget.seed, r});
        RotationExtension search(g, rng);
        const Vertex start = low_degree[rng.below(low_degree.size())];
        if (auto cycle = search.attempt(start, budget.rotations_per_vertex * n)) {
            HamiltonVerdict verdict;
            verdict.status = Verdict::yes;
            verdict.certificate = std::move(*cycle);
            return verdict;
        }
    }
    if (n <= budget.exact_max_n && n <= 64) return hamilton_exact(g, budget.exact_node_limit);
    return HamiltonVerdict{};
}

}  // namespace rigsim
