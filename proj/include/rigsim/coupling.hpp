#ifndef RIGSIM_COUPLING_HPP
#define RIGSIM_COUPLING_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigsim/generators.hpp"
#include "rigsim/graph.hpp"
#include "rigsim/rng.hpp"

namespace rigsim {

/// Which expansion of the lower edge probability applies: np -> 0 or np -> infinity.
enum class Regime { small_np, large_np };

enum class FailureStage { count_domination, bin_po_mismatch };

[[nodiscard]] std::string to_string(Regime r);
[[nodiscard]] std::string to_string(FailureStage s);
[[nodiscard]] Regime parse_regime(const std::string& text);

/// small_np iff np < 1.
[[nodiscard]] Regime select_regime(Vertex n, double p);

/// Finite-n stand-in for "np -> constant", which neither expansion covers:
/// 0.5 <= np <= 2.
[[nodiscard]] bool regime_unsupported(Vertex n, double p);

/// (mnp)^(1/4).
[[nodiscard]] double default_omega_c(Vertex n, Feature m, double p);

struct CouplingParams {
    Vertex n = 0;
    Feature m = 0;
    double p = 0.0;
    std::optional<double> omega_c;  // large_np only; default (mnp)^(1/4)
    std::optional<Regime> regime;   // forced regime; otherwise select_regime

    /// Throws std::invalid_argument naming the violated condition.
    void validate() const;
};

struct PhatMinus {
    double value = 0.0;  // clamped to >= 0
    double raw = 0.0;    // formula value before clamping
    Regime regime = Regime::small_np;
    bool degenerate = false;
    double omega_c = 0.0;
};

/// Lower edge probability for G(n, p_hat) sitting inside G(n, m, p):
///   small_np: m p^2 (1 - (n-2) p - m p^2 / 2)
///   large_np: (m p / n)(1 - w / sqrt(m n p) - 2 / (n p) - m p / (2 n))
/// Requires m p^2 < 1.
PhatMinus phat_minus(Vertex n, Feature m, double p, std::optional<double> omega_c = std::nullopt,
                     std::optional<Regime> regime = std::nullopt);

struct CouplingCounters {
    std::uint64_t z = 0;       // Z1 = #{w : X_w >= 2} or Z2 = sum of X_w
    std::uint64_t k = 0;       // Poisson draw count
    std::uint64_t t = 0;       // sum of floor(X_w / 2)
    double pivot = 0.0;        // large_np comparison level a
};

struct CouplingOutcome {
    Graph g_lower;
    Graph g_rig;
    FeatureAssignment assignment;
    bool success = false;
    std::optional<FailureStage> failure_stage;
    Regime regime = Regime::small_np;
    bool regime_unsupported = false;
    bool degenerate = false;
    CouplingCounters counters;
};

/// Parameter-dependent constants of the joint construction, computed once
/// and shared by every sample.
class CouplingPlan {
public:
    explicit CouplingPlan(const CouplingParams& params);

    [[nodiscard]] const CouplingParams& params() const { return params_; }
    [[nodiscard]] Regime regime() const { return phat_.regime; }
    [[nodiscard]] const PhatMinus& phat() const { return phat_; }
    /// Poisson mean of the draw count K.
    [[nodiscard]] double lambda() const { return lambda_; }
    /// Edge probability of G*(Po(lambda)) = G(n, 1 - exp(-lambda / C(n,2))).
    [[nodiscard]] double p_hat_prime() const { return p_hat_prime_; }
    /// P(X_w >= 2) for X_w ~ Bin(n, p).
    [[nodiscard]] double q() const { return q_; }

    /// One joint sample. Throws std::logic_error if a success is not nested.
    [[nodiscard]] CouplingOutcome sample(Seed seed) const;

private:
    std::uint64_t coupled_count(CounterRng& rng, std::uint64_t z) const;

    CouplingParams params_;
    PhatMinus phat_;
    double lambda_ = 0.0;
    double p_hat_prime_ = 0.0;
    double thinning_ = 0.0;
    double q_ = 0.0;
    double pivot_ = 0.0;
    // small_np: residual law max(0, Po - Bin) for the maximal coupling
    std::vector<double> residual_cdf_;
};

CouplingOutcome couple(const CouplingParams& params, Seed seed);

/// Thinning couplings: the first graph is distributed with the lower
/// parameter, the second with the higher one, and the first is a subgraph.
std::pair<Graph, Graph> couple_gnp_monotone(Vertex n, double p_low, double p_high, Seed seed);
std::pair<RigSample, RigSample> couple_rig_monotone(Vertex n, Feature m, double p_low, double p_high,
                                                    Seed seed);

struct CouplingRecord {
    std::size_t sample = 0;
    bool success = false;
    std::optional<FailureStage> failure_stage;
    CouplingCounters counters;
    std::size_t lower_edges = 0;
    std::size_t rig_edges = 0;
};

struct CouplingRun {
    CouplingParams params;
    PhatMinus phat;
    double lambda = 0.0;
    double p_hat_prime = 0.0;
    bool regime_unsupported = false;
    std::uint64_t seed = 0;
    std::vector<CouplingRecord> records;

    [[nodiscard]] std::size_t successes() const;
    [[nodiscard]] std::size_t failures(FailureStage stage) const;
};

/// `samples` independent joint samples, substream i for sample i.
CouplingRun run_coupling(const CouplingParams& params, std::size_t samples, std::uint64_t seed);

/// Per-sample CSV: sample,success,failure_stage,regime,z,k,t,lower_edges,rig_edges
void write_coupling_csv(std::ostream& out, const CouplingRun& run);
void write_coupling_summary(std::ostream& out, const CouplingRun& run);

/// Law of a random graph on n vertices: either G*(M) for a draw-count law,
/// or G(n, p_hat).
struct GraphLaw {
    enum class Kind { gstar, gnp };
    Kind kind = Kind::gnp;
    MSpec mspec;
    double p_hat = 0.0;

    static GraphLaw gstar(MSpec m) { return {Kind::gstar, m, 0.0}; }
    static GraphLaw gnp(double p) { return {Kind::gnp, MSpec{}, p}; }
    /// "gnp:P" or any MSpec form ("const:T", "bin:N:Q", "po:L").
    static GraphLaw parse(const std::string& text);
    [[nodiscard]] std::string to_string() const;
};

/// Probability of one specific graph with `edges` edges out of `pairs`
/// possible ones. For G*(t) this counts surjections of the t draws onto the
/// edge set by inclusion-exclusion; draw-count laws are summed until the
/// remaining tail mass is below 1e-12.
long double graph_probability(const GraphLaw& law, unsigned pairs, unsigned edges);

/// Total variation distance between two graph laws on n <= 5 vertices,
/// computed by enumerating every labelled graph. Uses the sum convention
/// sum_G |P1(G) - P2(G)| (twice the max-over-events form).
double exact_tv_small(Vertex n, const GraphLaw& a, const GraphLaw& b);

/// Bound on the graph-level distance between G*(Bin(m, p_hat)) and its Poisson
/// counterpart: 2 * p_hat.
double tv_bound(std::uint64_t m, double p_hat);

/// P(|X - EX| >= t) <= 2 exp(-3 t^2 / (2 (3 EX + t))) for binomial X.
double chernoff_bound(double mean, double t);

struct PoissonChernoff {
    double leading = 0.0;
    std::string caveat;  // the additive o(n^-i) term has no explicit constant
};

/// Poisson analogue of chernoff_bound; the o(n^-i) correction is reported
/// as text only.
PoissonChernoff chernoff_poisson_bound(double lambda, double t, unsigned order);

}  // namespace rigsim

#endif  // RIGSIM_COUPLING_HPP
