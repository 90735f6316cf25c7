#include "rigsim/coupling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rigsim {

std::string to_string(Regime r) { return r == Regime::small_np ? "small_np" : "large_np"; }

std::string to_string(FailureStage s) {
    return s == FailureStage::count_domination ? "count_domination" : "bin_po_mismatch";
}

Regime parse_regime(const std::string& text) {
    if (text == "small_np" || text == "small") return Regime::small_np;
    if (text == "large_np" || text == "large") return Regime::large_np;
    throw std::invalid_argument("unknown regime '" + text + "' (expected small_np or large_np)");
}

Regime select_regime(Vertex n, double p) {
    return static_cast<double>(n) * p < 1.0 ? Regime::small_np : Regime::large_np;
}

bool regime_unsupported(Vertex n, double p) {
    const double np = static_cast<double>(n) * p;
    return np >= 0.5 && np <= 2.0;
}

double default_omega_c(Vertex n, Feature m, double p) {
    return std::pow(static_cast<double>(m) * static_cast<double>(n) * p, 0.25);
}

void CouplingParams::validate() const {
    if (n < 2) throw std::invalid_argument("coupling: n must be at least 2");
    if (m < 1) throw std::invalid_argument("coupling: m must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("coupling: p outside [0,1]");
    if (static_cast<double>(m) * p * p >= 1.0) {
        throw std::invalid_argument("coupling: requires m p^2 < 1");
    }
    const Regime r = regime.value_or(select_regime(n, p));
    if (r == Regime::large_np) {
        const double mnp = static_cast<double>(m) * static_cast<double>(n) * p;
        const double w = omega_c.value_or(default_omega_c(n, m, p));
        if (!(w > 0.0)) throw std::invalid_argument("coupling: omega_c must be positive");
        if (!(w < std::sqrt(mnp))) throw std::invalid_argument("coupling: omega_c must be below sqrt(m n p)");
    }
}

PhatMinus phat_minus(Vertex n, Feature m, double p, std::optional<double> omega_c,
                     std::optional<Regime> regime) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("phat_minus: p outside [0,1]");
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    const double mp2 = md * p * p;
    if (mp2 >= 1.0) throw std::invalid_argument("phat_minus: requires m p^2 < 1");

    PhatMinus out;
    out.regime = regime.value_or(select_regime(n, p));
    if (p == 0.0) return out;

    if (out.regime == Regime::small_np) {
        out.raw = mp2 * (1.0 - (nd - 2.0) * p - mp2 / 2.0);
    } else {
        const double mnp = md * nd * p;
        out.omega_c = omega_c.value_or(default_omega_c(n, m, p));
        out.raw = (md * p / nd) *
                  (1.0 - out.omega_c / std::sqrt(mnp) - 2.0 / (nd * p) - md * p / (2.0 * nd));
    }
    out.degenerate = !(out.raw > 0.0);
    out.value = out.degenerate ? 0.0 : out.raw;
    return out;
}

namespace {

/// P(X >= 2) for X ~ Bin(n, p), summed from the upper tail to avoid cancellation.
double prob_at_least_two(Vertex n, double p) {
    if (n < 2 || p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    const MSpec law = MSpec::binomial(n, p);
    double term = law.pmf(2);
    double sum = 0.0;
    const double ratio = p / (1.0 - p);
    for (std::uint64_t j = 2; j <= n; ++j) {
        sum += term;
        term *= ratio * static_cast<double>(n - j) / static_cast<double>(j + 1);
        if (term < sum * 1e-18 && static_cast<double>(j) > static_cast<double>(n) * p) break;
    }
    return std::min(sum, 1.0);
}

void fisher_yates(CounterRng& rng, std::vector<std::uint32_t>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[rng.below(i)]);
    }
}

}  // namespace

CouplingPlan::CouplingPlan(const CouplingParams& params) : params_(params) {
    params_.validate();
    const double nd = static_cast<double>(params_.n);
    const double md = static_cast<double>(params_.m);
    const double pairs = nd * (nd - 1.0) / 2.0;
    const double p = params_.p;
    phat_ = phat_minus(params_.n, params_.m, p, params_.omega_c, params_.regime);

    if (phat_.regime == Regime::small_np) {
        q_ = prob_at_least_two(params_.n, p);
        lambda_ = md * q_;
        const MSpec bin = MSpec::binomial(params_.m, q_);
        const MSpec po = MSpec::poisson(lambda_);
        const auto kmax = static_cast<std::uint64_t>(lambda_ + 20.0 * std::sqrt(lambda_) + 50.0);
        double total = 0.0;
        residual_cdf_.reserve(kmax + 1);
        for (std::uint64_t k = 0; k <= kmax; ++k) {
            total += std::max(0.0, po.pmf(k) - bin.pmf(k));
            residual_cdf_.push_back(total);
        }
    } else if (p > 0.0) {
        const double mnp = md * nd * p;
        const double w = phat_.omega_c;
        lambda_ = std::max(0.0, (mnp / 2.0) * (1.0 - w / std::sqrt(mnp) - 2.0 / (nd * p)));
        pivot_ = (mnp / 2.0) * (1.0 - w / (2.0 * std::sqrt(mnp)) - 2.0 / (nd * p));
    }
    p_hat_prime_ = -std::expm1(-lambda_ / pairs);
    // The lower probability never exceeds the Poisson edge probability for
    // valid parameters; the min keeps g_lower well defined at the boundary.
    thinning_ = p_hat_prime_ > 0.0 ? std::min(1.0, phat_.value / p_hat_prime_) : 0.0;
}

std::uint64_t CouplingPlan::coupled_count(CounterRng& rng, std::uint64_t z) const {
    // Maximal coupling: keep z with probability min(1, Po(z)/Bin(z)),
    // otherwise draw from the normalised excess of Po over Bin.
    const double po = MSpec::poisson(lambda_).pmf(z);
    const double bin = MSpec::binomial(params_.m, q_).pmf(z);
    const double u = rng.uniform();
    if (residual_cdf_.empty() || residual_cdf_.back() <= 0.0 || bin <= 0.0 || u * bin < po) return z;
    const double target = rng.uniform() * residual_cdf_.back();
    auto it = std::upper_bound(residual_cdf_.begin(), residual_cdf_.end(), target);
    if (it == residual_cdf_.end()) --it;
    return static_cast<std::uint64_t>(it - residual_cdf_.begin());
}

CouplingOutcome CouplingPlan::sample(Seed seed) const {
    CounterRng rng(seed);
    const Vertex n = params_.n;
    const Feature m = params_.m;

    CouplingOutcome out;
    out.regime = phat_.regime;
    out.regime_unsupported = regime_unsupported(n, params_.p);
    out.degenerate = phat_.degenerate;

    // Per feature: floor(X_w/2) uniform draws, then V_w = the draws' non-isolated
    // vertices plus uniformly chosen extra vertices up to X_w.
    std::vector<std::vector<Vertex>> members(m);
    std::vector<std::vector<Edge>> feature_draws;
    std::vector<std::uint32_t> drawing_features;
    std::uint64_t z1 = 0, z2 = 0, t = 0;
    std::vector<Vertex> touched;
    for (Feature w = 0; w < m; ++w) {
        const auto x = static_cast<Vertex>(sample_binomial(rng, n, params_.p));
        z2 += x;
        if (x == 0) continue;
        touched.clear();
        if (x >= 2) {
            ++z1;
            std::vector<Edge> draws(x / 2);
            for (auto& d : draws) {
                d = uniform_pair(rng, n);
                touched.push_back(d.u);
                touched.push_back(d.v);
            }
            t += draws.size();
            drawing_features.push_back(static_cast<std::uint32_t>(feature_draws.size()));
            feature_draws.push_back(std::move(draws));
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        }
        const auto extra = static_cast<std::uint32_t>(x - touched.size());
        auto picks = sample_distinct(rng, n - static_cast<Vertex>(touched.size()), extra);
        // map indices into the complement of `touched`
        std::vector<Vertex> chosen = touched;
        std::size_t skip = 0;
        for (std::uint32_t idx : picks) {
            Vertex v = idx + static_cast<Vertex>(skip);
            while (skip < touched.size() && touched[skip] <= v) {
                ++skip;
                v = idx + static_cast<Vertex>(skip);
            }
            chosen.push_back(v);
        }
        std::sort(chosen.begin(), chosen.end());
        members[w] = std::move(chosen);
    }
    out.assignment = FeatureAssignment::from_feature_lists(n, members);
    out.g_rig = intersection_graph(out.assignment);
    out.counters.t = t;

    if (phat_.degenerate) {
        out.g_lower = Graph(n);
        out.success = true;
        out.counters.z = phat_.regime == Regime::small_np ? z1 : z2;
        return out;
    }

    std::uint64_t k = 0;
    if (phat_.regime == Regime::small_np) {
        out.counters.z = z1;
        k = coupled_count(rng, z1);
        if (k > t) {
            out.failure_stage = FailureStage::count_domination;
        } else if (k > z1) {
            out.failure_stage = FailureStage::bin_po_mismatch;
        }
    } else {
        out.counters.z = z2;
        out.counters.pivot = pivot_;
        k = sample_poisson(rng, lambda_);
        const double available = static_cast<double>(z2) / 2.0 - static_cast<double>(m);
        if (static_cast<double>(k) > pivot_ || available < pivot_) {
            out.failure_stage = FailureStage::count_domination;
        }
    }
    out.counters.k = k;
    out.success = !out.failure_stage.has_value();

    // Features in uniformly random order, first draw of each feature first.
    // After a failure the feature draws may run out; fresh pairs top up the
    // sequence so g_lower keeps its exact marginal law either way.
    fisher_yates(rng, drawing_features);
    std::vector<Edge> taken;
    taken.reserve(k);
    for (std::uint32_t f : drawing_features) {
        if (taken.size() == k) break;
        taken.push_back(feature_draws[f].front());
    }
    for (std::uint32_t f : drawing_features) {
        for (std::size_t i = 1; i < feature_draws[f].size() && taken.size() < k; ++i) {
            taken.push_back(feature_draws[f][i]);
        }
    }
    while (taken.size() < k) taken.push_back(uniform_pair(rng, n));
    const Graph poisson_graph = collapse(DrawSequence(n, std::move(taken)));
    std::vector<Edge> kept;
    kept.reserve(poisson_graph.edge_count());
    for (const Edge& e : poisson_graph.edges()) {
        if (rng.bernoulli(thinning_)) kept.push_back(e);
    }
    out.g_lower = Graph::from_sorted_edges(n, std::move(kept));

    if (out.success && !is_subgraph(out.g_lower, out.g_rig)) {
        throw std::logic_error("couple: successful outcome is not nested");
    }
    return out;
}

CouplingOutcome couple(const CouplingParams& params, Seed seed) { return CouplingPlan(params).sample(seed); }

std::pair<Graph, Graph> couple_gnp_monotone(Vertex n, double p_low, double p_high, Seed seed) {
    if (!(0.0 <= p_low && p_low <= p_high && p_high <= 1.0)) {
        throw std::invalid_argument("couple_gnp_monotone: need 0 <= p_low <= p_high <= 1");
    }
    Graph upper = gen_gnp(n, p_high, seed);
    CounterRng rng(seed.derive(1));
    const double keep = p_high > 0.0 ? p_low / p_high : 0.0;
    std::vector<Edge> kept;
    for (const Edge& e : upper.edges())
        if (rng.bernoulli(keep)) kept.push_back(e);
    return {Graph::from_sorted_edges(n, std::move(kept)), std::move(upper)};
}

std::pair<RigSample, RigSample> couple_rig_monotone(Vertex n, Feature m, double p_low, double p_high,
                                                    Seed seed) {
    if (!(0.0 <= p_low && p_low <= p_high && p_high <= 1.0)) {
        throw std::invalid_argument("couple_rig_monotone: need 0 <= p_low <= p_high <= 1");
    }
    RigSample upper = gen_rig(n, m, p_high, seed);
    CounterRng rng(seed.derive(1));
    const double keep = p_high > 0.0 ? p_low / p_high : 0.0;
    std::vector<std::vector<Feature>> thinned(n);
    for (Vertex v = 0; v < n; ++v) {
        for (Feature w : upper.assignment.features_of(v))
            if (rng.bernoulli(keep)) thinned[v].push_back(w);
    }
    auto assignment = FeatureAssignment::from_vertex_lists(m, thinned);
    Graph graph = intersection_graph(assignment);
    return {RigSample{std::move(assignment), std::move(graph)}, std::move(upper)};
}

std::size_t CouplingRun::successes() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                  [](const CouplingRecord& r) { return r.success; }));
}

std::size_t CouplingRun::failures(FailureStage stage) const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [&](const CouplingRecord& r) {
        return r.failure_stage && *r.failure_stage == stage;
    }));
}

CouplingRun run_coupling(const CouplingParams& params, std::size_t samples, std::uint64_t seed) {
    const CouplingPlan plan(params);
    CouplingRun run;
    run.params = params;
    run.phat = plan.phat();
    run.lambda = plan.lambda();
    run.p_hat_prime = plan.p_hat_prime();
    run.regime_unsupported = regime_unsupported(params.n, params.p);
    run.seed = seed;
    run.records.resize(samples);

    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
        try {
            const auto outcome = plan.sample(Seed{seed, static_cast<std::uint64_t>(i)});
            auto& rec = run.records[static_cast<std::size_t>(i)];
            rec.sample = static_cast<std::size_t>(i);
            rec.success = outcome.success;
            rec.failure_stage = outcome.failure_stage;
            rec.counters = outcome.counters;
            rec.lower_edges = outcome.g_lower.edge_count();
            rec.rig_edges = outcome.g_rig.edge_count();
        } catch (...) {
#pragma omp critical(rigsim_coupling_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return run;
}

void write_coupling_csv(std::ostream& out, const CouplingRun& run) {
    out << "sample,success,failure_stage,regime,z,k,t,lower_edges,rig_edges\n";
    for (const auto& r : run.records) {
        out << r.sample << ',' << (r.success ? 1 : 0) << ','
            << (r.failure_stage ? to_string(*r.failure_stage) : std::string("none")) << ','
            << to_string(run.phat.regime) << ',' << r.counters.z << ',' << r.counters.k << ','
            << r.counters.t << ',' << r.lower_edges << ',' << r.rig_edges << '\n';
    }
}

void write_coupling_summary(std::ostream& out, const CouplingRun& run) {
    const auto total = run.records.size();
    auto rate = [&](std::size_t c) { return total ? static_cast<double>(c) / static_cast<double>(total) : 0.0; };
    out << "n=" << run.params.n << " m=" << run.params.m << " p=" << run.params.p
        << " regime=" << to_string(run.phat.regime) << (run.regime_unsupported ? " (regime-unsupported)" : "")
        << "\n";
    out << "phat_minus=" << run.phat.value << (run.phat.degenerate ? " (degenerate, clamped)" : "")
        << " lambda=" << run.lambda << " phat_prime=" << run.p_hat_prime << "\n";
    out << "samples=" << total << " success_rate=" << rate(run.successes())
        << " count_domination=" << rate(run.failures(FailureStage::count_domination))
        << " bin_po_mismatch=" << rate(run.failures(FailureStage::bin_po_mismatch)) << "\n";
}

GraphLaw GraphLaw::parse(const std::string& text) {
    if (text.rfind("gnp:", 0) == 0) {
        double p = 0.0;
        try {
            p = std::stod(text.substr(4));
        } catch (const std::exception&) {
            throw std::invalid_argument("GraphLaw: cannot parse '" + text + "'");
        }
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("GraphLaw: gnp probability outside [0,1]");
        return gnp(p);
    }
    return gstar(MSpec::parse(text));
}

std::string GraphLaw::to_string() const {
    if (kind == Kind::gstar) return "gstar(" + mspec.to_string() + ")";
    std::ostringstream s;
    s.precision(17);
    s << "gnp(" << p_hat << ")";
    return s.str();
}

namespace {

/// P(t uniform draws from `pairs` cover exactly a given set of `edges` pairs).
long double surjection_probability(unsigned pairs, unsigned edges, std::uint64_t t) {
    long double sum = 0.0L;
    long double binom = 1.0L;
    for (unsigned j = 0; j <= edges; ++j) {
        const long double frac = static_cast<long double>(edges - j) / static_cast<long double>(pairs);
        const long double term = binom * (t == 0 ? 1.0L : std::pow(frac, static_cast<long double>(t)));
        sum += (j % 2 == 0) ? term : -term;
        binom = binom * static_cast<long double>(edges - j) / static_cast<long double>(j + 1);
    }
    return sum;
}

}  // namespace

long double graph_probability(const GraphLaw& law, unsigned pairs, unsigned edges) {
    if (edges > pairs) return 0.0L;
    if (pairs == 0) return 1.0L;
    if (law.kind == GraphLaw::Kind::gnp) {
        const long double p = law.p_hat;
        return std::pow(p, static_cast<long double>(edges)) *
               std::pow(1.0L - p, static_cast<long double>(pairs - edges));
    }
    const MSpec& m = law.mspec;
    m.validate();
    switch (m.kind) {
        case MSpec::Kind::constant:
            return surjection_probability(pairs, edges, m.count);
        case MSpec::Kind::binomial: {
            long double total = 0.0L;
            for (std::uint64_t t = 0; t <= m.count; ++t) {
                total += static_cast<long double>(m.pmf(t)) * surjection_probability(pairs, edges, t);
            }
            return total;
        }
        case MSpec::Kind::poisson: {
            long double total = 0.0L;
            long double pmf = std::exp(-static_cast<long double>(m.lambda));
            long double mass = 0.0L;
            for (std::uint64_t t = 0;; ++t) {
                if (t > 0) pmf *= static_cast<long double>(m.lambda) / static_cast<long double>(t);
                total += pmf * surjection_probability(pairs, edges, t);
                mass += pmf;
                if (1.0L - mass < 1e-13L && static_cast<double>(t) > m.lambda) break;
                if (t > 100000) throw std::runtime_error("graph_probability: Poisson tail did not converge");
            }
            return total;
        }
    }
    return 0.0L;
}

double exact_tv_small(Vertex n, const GraphLaw& a, const GraphLaw& b) {
    if (n > 5) throw std::invalid_argument("exact_tv_small: n must be at most 5");
    const unsigned pairs = n * (n - 1) / 2;
    std::vector<long double> pa(pairs + 1), pb(pairs + 1);
    for (unsigned e = 0; e <= pairs; ++e) {
        pa[e] = graph_probability(a, pairs, e);
        pb[e] = graph_probability(b, pairs, e);
    }
    long double tv = 0.0L;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
        const auto e = static_cast<unsigned>(std::popcount(mask));
        tv += std::fabs(pa[e] - pb[e]);
    }
    return static_cast<double>(tv);
}

double tv_bound(std::uint64_t /*m*/, double p_hat) {
    if (!(p_hat >= 0.0 && p_hat <= 1.0)) throw std::invalid_argument("tv_bound: p_hat outside [0,1]");
    return 2.0 * p_hat;
}

double chernoff_bound(double mean, double t) {
    if (!(mean >= 0.0)) throw std::invalid_argument("chernoff_bound: mean must be nonnegative");
    if (!(t > 0.0)) throw std::invalid_argument("chernoff_bound: t must be positive");
    return 2.0 * std::exp(-3.0 * t * t / (2.0 * (3.0 * mean + t)));
}

PoissonChernoff chernoff_poisson_bound(double lambda, double t, unsigned order) {
    PoissonChernoff out;
    out.leading = chernoff_bound(lambda, t);
    out.caveat = "+ o(n^-" + std::to_string(order) + ") additive term (no explicit constant)";
    return out;
}

}  // namespace rigsim
