#ifndef RIGSIM_THRESHOLDS_HPP
#define RIGSIM_THRESHOLDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rigsim/graph.hpp"
#include "rigsim/properties.hpp"

namespace rigsim {

enum class Model { gnp, rig };

enum class PropertyKind { connectivity, k_connectivity, perfect_matching, hamilton, min_degree_k };

[[nodiscard]] std::string to_string(Model m);
[[nodiscard]] std::string to_string(PropertyKind k);
[[nodiscard]] Model parse_model(const std::string& text);
[[nodiscard]] PropertyKind parse_property(const std::string& text);

/// Derived probability falls outside [0, 1] (or a logarithm/root argument is negative).
class ThresholdOutOfRange : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ThresholdQuery {
    Model model = Model::rig;
    Vertex n = 0;
    std::optional<double> alpha;   // m = round(n^alpha) unless m is given
    std::optional<Feature> m;
    std::size_t k = 1;
    double omega = 0.0;
    PropertyKind kind = PropertyKind::connectivity;
    /// Overrides the (k-1) ln ln n order used by the formula, e.g. 1 to
    /// sweep a Hamilton property on the connectivity scale.
    std::optional<std::size_t> formula_order;

    /// Throws std::invalid_argument on n < 2, k < 1, or a rig query without m/alpha.
    void validate() const;
    [[nodiscard]] Feature resolved_m() const;
    [[nodiscard]] double resolved_alpha() const;
};

/// Order r in ln n + (r-1) ln ln n + omega: 1 for connectivity and perfect
/// matching, 2 for Hamilton cycles, k for k-connectivity and min degree k.
[[nodiscard]] std::size_t formula_order(const ThresholdQuery& q);

/// Minimum degree that is necessary for the property (the paired check).
[[nodiscard]] std::size_t necessary_min_degree(PropertyKind kind, std::size_t k);

/// gnp: (ln n + (r-1) ln ln n + w) / n
/// rig, m > n: sqrt((ln n + (r-1) ln ln n + w) / (m n))
/// rig, m <= n: (ln n + (r-1) ln ln n + w) / m
double threshold_p(const ThresholdQuery& q);

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval. Throws for trials == 0 or successes > trials.
ConfidenceInterval wilson_ci(std::size_t successes, std::size_t trials, double confidence = 0.95);

/// Weighted pool-adjacent-violators fit (nondecreasing).
std::vector<double> isotonic_regression(const std::vector<double>& values, const std::vector<double>& weights);

/// 0.5 crossing of the isotonic fit by linear interpolation; nullopt if the
/// fitted curve never reaches 0.5 or already exceeds it at the first point.
std::optional<double> crossing_estimate(const std::vector<double>& omegas, const std::vector<double>& estimates,
                                        const std::vector<double>& weights = {});

struct SweepPoint {
    double omega = 0.0;
    std::optional<double> p;  // nullopt: point skipped (p out of range)
    std::string skip_reason;
    std::size_t samples = 0;
    std::size_t successes = 0;
    std::size_t unresolved = 0;
    std::vector<Verdict> outcomes;  // per sample, paired across series

    [[nodiscard]] std::size_t resolved() const { return samples - unresolved; }
    [[nodiscard]] std::size_t failures() const { return samples - successes - unresolved; }
    /// successes / resolved, nullopt when nothing resolved.
    [[nodiscard]] std::optional<double> estimate() const;
    [[nodiscard]] std::optional<ConfidenceInterval> ci() const;
};

struct SweepSeries {
    PropertyKind property = PropertyKind::connectivity;
    std::size_t k = 1;  // order relevant to the property (paired min degree)
    std::vector<SweepPoint> points;
};

struct SweepSpec {
    Model model = Model::rig;
    Vertex n = 0;
    std::optional<double> alpha;
    std::optional<Feature> m;
    std::size_t k = 1;
    std::vector<PropertyKind> properties;
    std::vector<double> grid;
    std::size_t samples = 300;
    std::uint64_t seed = 1;
    HamiltonBudget budget;
    std::optional<std::size_t> formula_order;

    void validate() const;
    [[nodiscard]] ThresholdQuery query(PropertyKind kind, double omega) const;
};

/// For every property a series plus its paired min-degree series
/// (companions[i] pairs with series[i], sample by sample).
struct SweepCurve {
    SweepSpec spec;
    std::vector<SweepSeries> series;
    std::vector<SweepSeries> companions;
};

/// Parallel sweep (OpenMP over grid points x samples). threads <= 0 uses
/// the runtime default. Output is independent of the thread count.
SweepCurve sweep(const SweepSpec& spec, int threads = 0);

/// Single-threaded reference with identical output.
SweepCurve sweep_serial(const SweepSpec& spec);

struct DisagreementPoint {
    double omega = 0.0;
    std::size_t disagreements = 0;
    std::size_t resolved = 0;
    std::size_t unresolved = 0;
    [[nodiscard]] double rate() const {
        return resolved ? static_cast<double>(disagreements) / static_cast<double>(resolved) : 0.0;
    }
};

/// Per grid point fraction of samples where property != (min degree >= k);
/// unresolved samples are excluded and counted. Throws std::invalid_argument
/// on mismatched grids or sample pairing.
std::vector<DisagreementPoint> mindeg_phenomenon_report(const SweepSeries& property, const SweepSeries& mindeg);

/// One row per grid point per series (property rows, then min-degree rows).
void write_sweep_csv(std::ostream& out, const SweepCurve& curve);

/// Two-column "omega estimate" blocks, one per series, blank-line separated.
void write_sweep_plot(std::ostream& out, const SweepCurve& curve);

struct Lemma7Report {
    Vertex n = 0;
    Feature m = 0;
    double alpha = 0.0;
    double omega = 0.0;
    double p = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> normalized;  // delta * m / (n ln n), per sample
    double q05 = 0.0;
    double median = 0.0;
    double q95 = 0.0;
    double minimum = 0.0;
    bool flagged = false;  // 5th percentile below 0.5
};

/// Samples G(n, m, p1) with m < n and reports the spread of the normalised
/// minimum degree. Throws for m >= n, omega < ln ln n, or p1 out of range.
Lemma7Report lemma7_mindeg_check(Vertex n, Feature m, double omega, std::size_t samples, std::uint64_t seed);

void write_lemma7_csv(std::ostream& out, const Lemma7Report& report);

/// Linear-interpolation quantile (type 7) of unsorted data.
double quantile(std::vector<double> values, double prob);

/// Fixed-format number rendering shared by every CSV writer ("%.10g").
std::string format_number(double value);

}  // namespace rigsim

#endif  // RIGSIM_THRESHOLDS_HPP
