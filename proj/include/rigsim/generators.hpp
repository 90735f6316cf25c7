#ifndef RIGSIM_GENERATORS_HPP
#define RIGSIM_GENERATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rigsim/graph.hpp"
#include "rigsim/rng.hpp"

namespace rigsim {

/// Law of the draw count M behind G*(M).
struct MSpec {
    enum class Kind { constant, binomial, poisson };

    Kind kind = Kind::constant;
    std::uint64_t count = 0;  // constant t, or binomial trials N
    double q = 0.0;           // binomial success probability
    double lambda = 0.0;      // poisson mean

    static MSpec constant(std::uint64_t t) { return {Kind::constant, t, 0.0, 0.0}; }
    static MSpec binomial(std::uint64_t trials, double q) { return {Kind::binomial, trials, q, 0.0}; }
    static MSpec poisson(double lambda) { return {Kind::poisson, 0, 0.0, lambda}; }

    /// Throws std::invalid_argument when parameters are out of range.
    void validate() const;
    [[nodiscard]] double mean() const;
    [[nodiscard]] double variance() const;
    /// P(M = t).
    [[nodiscard]] double pmf(std::uint64_t t) const;
    std::uint64_t sample(CounterRng& rng) const;

    /// "const:T", "bin:N:Q" or "po:LAMBDA".
    static MSpec parse(const std::string& text);
    [[nodiscard]] std::string to_string() const;
};

struct RigSample {
    FeatureAssignment assignment;
    Graph graph;
};

struct GStarSample {
    DrawSequence draws;
    Graph graph;
};

/// G(n, p_hat): every pair independently with probability p_hat
/// (geometric skipping over the pair index).
Graph gen_gnp(Vertex n, double p_hat, Seed seed);

/// G(n, m, p): each (vertex, feature) incidence independently with
/// probability p. Per vertex draws |W_v| ~ Bin(m, p) then a uniform subset
/// of that size, so cost scales with n*m*p rather than n*m.
RigSample gen_rig(Vertex n, Feature m, double p, Seed seed);

/// Uniform model: each W_v an independent uniform d-subset of the m features.
RigSample gen_uniform_rig(Vertex n, Feature m, Feature d, Seed seed);

/// G*(M): M ~ mspec, then M independent uniform pairs, collapsed.
GStarSample gen_gstar(Vertex n, const MSpec& mspec, Seed seed);

/// One uniform unordered pair of distinct vertices (n >= 2).
Edge uniform_pair(CounterRng& rng, Vertex n);

/// Z_v = sum over w in W_v of (|V_w| - 1): edges between W_v and the other
/// vertices in the vertex/feature incidence graph.
std::vector<std::uint64_t> aux_degree_stats(const FeatureAssignment& a);

}  // namespace rigsim

#endif  // RIGSIM_GENERATORS_HPP
