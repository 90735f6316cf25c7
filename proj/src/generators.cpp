#include "rigsim/generators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rigsim {

void MSpec::validate() const {
    switch (kind) {
        case Kind::constant:
            return;
        case Kind::binomial:
            if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("MSpec: binomial q outside [0,1]");
            return;
        case Kind::poisson:
            if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
                throw std::invalid_argument("MSpec: poisson mean must be finite and nonnegative");
            }
            return;
    }
}

double MSpec::mean() const {
    switch (kind) {
        case Kind::constant: return static_cast<double>(count);
        case Kind::binomial: return static_cast<double>(count) * q;
        case Kind::poisson: return lambda;
    }
    return 0.0;
}

double MSpec::variance() const {
    switch (kind) {
        case Kind::constant: return 0.0;
        case Kind::binomial: return static_cast<double>(count) * q * (1.0 - q);
        case Kind::poisson: return lambda;
    }
    return 0.0;
}

double MSpec::pmf(std::uint64_t t) const {
    switch (kind) {
        case Kind::constant:
            return t == count ? 1.0 : 0.0;
        case Kind::binomial: {
            if (t > count) return 0.0;
            if (q == 0.0) return t == 0 ? 1.0 : 0.0;
            if (q == 1.0) return t == count ? 1.0 : 0.0;
            const double td = static_cast<double>(t);
            return std::exp(log_choose(count, t) + td * std::log(q) +
                            static_cast<double>(count - t) * std::log1p(-q));
        }
        case Kind::poisson: {
            if (lambda == 0.0) return t == 0 ? 1.0 : 0.0;
            return std::exp(-lambda + static_cast<double>(t) * std::log(lambda) - log_factorial(t));
        }
    }
    return 0.0;
}

std::uint64_t MSpec::sample(CounterRng& rng) const {
    switch (kind) {
        case Kind::constant: return count;
        case Kind::binomial: return sample_binomial(rng, count, q);
        case Kind::poisson: return sample_poisson(rng, lambda);
    }
    return 0;
}

MSpec MSpec::parse(const std::string& text) {
    std::istringstream in(text);
    std::string kind;
    std::getline(in, kind, ':');
    std::string a, b;
    std::getline(in, a, ':');
    std::getline(in, b, ':');
    MSpec spec;
    try {
        if (kind == "const") {
            spec = constant(std::stoull(a));
        } else if (kind == "bin") {
            spec = binomial(std::stoull(a), std::stod(b));
        } else if (kind == "po") {
            spec = poisson(std::stod(a));
        } else {
            throw std::invalid_argument("unknown kind");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("MSpec: cannot parse '" + text + "' (expected const:T, bin:N:Q or po:LAMBDA)");
    }
    spec.validate();
    return spec;
}

std::string MSpec::to_string() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind) {
        case Kind::constant: out << "const:" << count; break;
        case Kind::binomial: out << "bin:" << count << ':' << q; break;
        case Kind::poisson: out << "po:" << lambda; break;
    }
    return out.str();
}

Edge uniform_pair(CounterRng& rng, Vertex n) {
    const auto a = static_cast<Vertex>(rng.below(n));
    auto b = static_cast<Vertex>(rng.below(n - 1));
    if (b >= a) ++b;
    return Edge(a, b);
}

Graph gen_gnp(Vertex n, double p_hat, Seed seed) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw std::invalid_argument("gen_gnp: p_hat outside [0,1]");
    if (p_hat == 0.0 || n < 2) return Graph(n);
    if (p_hat == 1.0) return named::complete(n);

    CounterRng rng(seed);
    const double log_q = std::log1p(-p_hat);
    const double total_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(total_pairs * p_hat * 1.1) + 16);

    // Pairs enumerated column by column: (0,1), (0,2), (1,2), (0,3), ...
    std::int64_t v = 1;
    std::int64_t w = -1;
    const auto nn = static_cast<std::int64_t>(n);
    while (v < nn) {
        const double skip = std::floor(std::log(rng.uniform_open()) / log_q);
        if (skip >= total_pairs) break;
        w += 1 + static_cast<std::int64_t>(skip);
        while (w >= v && v < nn) {
            w -= v;
            ++v;
        }
        if (v < nn) edges.emplace_back(static_cast<Vertex>(w), static_cast<Vertex>(v));
    }
    return Graph::from_edges(n, std::move(edges));
}

RigSample gen_rig(Vertex n, Feature m, double p, Seed seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_rig: p outside [0,1]");
    CounterRng rng(seed);
    std::vector<std::vector<Feature>> features(n);
    for (Vertex v = 0; v < n; ++v) {
        const auto count = static_cast<Feature>(sample_binomial(rng, m, p));
        features[v] = sample_distinct(rng, m, count);
    }
    auto assignment = FeatureAssignment::from_vertex_lists(m, features);
    auto graph = intersection_graph(assignment);
    return {std::move(assignment), std::move(graph)};
}

RigSample gen_uniform_rig(Vertex n, Feature m, Feature d, Seed seed) {
    if (d > m) throw std::invalid_argument("gen_uniform_rig: d exceeds m");
    CounterRng rng(seed);
    std::vector<std::vector<Feature>> features(n);
    for (Vertex v = 0; v < n; ++v) features[v] = sample_distinct(rng, m, d);
    auto assignment = FeatureAssignment::from_vertex_lists(m, features);
    auto graph = intersection_graph(assignment);
    return {std::move(assignment), std::move(graph)};
}

GStarSample gen_gstar(Vertex n, const MSpec& mspec, Seed seed) {
    mspec.validate();
    CounterRng rng(seed);
    const std::uint64_t draws_wanted = mspec.sample(rng);
    if (draws_wanted > 0 && n < 2) throw std::invalid_argument("gen_gstar: need n >= 2 to draw pairs");
    std::vector<Edge> draws;
    draws.reserve(draws_wanted);
    for (std::uint64_t i = 0; i < draws_wanted; ++i) draws.push_back(uniform_pair(rng, n));
    DrawSequence sequence(n, std::move(draws));
    Graph graph = collapse(sequence);
    return {std::move(sequence), std::move(graph)};
}

std::vector<std::uint64_t> aux_degree_stats(const FeatureAssignment& a) {
    std::vector<std::uint64_t> z(a.vertex_count(), 0);
    for (std::size_t i = 0; i < a.used_features().size(); ++i) {
        auto members = a.used_feature_vertices(i);
        for (Vertex v : members) z[v] += members.size() - 1;
    }
    return z;
}

}  // namespace rigsim
