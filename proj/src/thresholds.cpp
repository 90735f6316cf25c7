#include "rigsim/thresholds.hpp"

#include "rigsim/generators.hpp"

#include <boost/math/distributions/normal.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace rigsim {

std::string to_string(Model m) { return m == Model::gnp ? "gnp" : "rig"; }

std::string to_string(PropertyKind k) {
    switch (k) {
        case PropertyKind::connectivity: return "connectivity";
        case PropertyKind::k_connectivity: return "k_connectivity";
        case PropertyKind::perfect_matching: return "perfect_matching";
        case PropertyKind::hamilton: return "hamilton";
        case PropertyKind::min_degree_k: return "min_degree_k";
    }
    return "connectivity";
}

Model parse_model(const std::string& text) {
    if (text == "gnp") return Model::gnp;
    if (text == "rig") return Model::rig;
    throw std::invalid_argument("unknown model '" + text + "' (expected gnp or rig)");
}

PropertyKind parse_property(const std::string& text) {
    if (text == "connectivity" || text == "connected") return PropertyKind::connectivity;
    if (text == "k_connectivity" || text == "kconn") return PropertyKind::k_connectivity;
    if (text == "perfect_matching" || text == "matching") return PropertyKind::perfect_matching;
    if (text == "hamilton") return PropertyKind::hamilton;
    if (text == "min_degree_k" || text == "mindeg") return PropertyKind::min_degree_k;
    throw std::invalid_argument("unknown property '" + text +
                                "' (expected connectivity, k_connectivity, perfect_matching, hamilton, min_degree_k)");
}

void ThresholdQuery::validate() const {
    if (n < 2) throw std::invalid_argument("threshold: n must be at least 2");
    if (k < 1) throw std::invalid_argument("threshold: k must be at least 1");
    if (model == Model::rig) {
        if (!m && !alpha) throw std::invalid_argument("threshold: rig model needs m or alpha");
        if (resolved_m() < 1) throw std::invalid_argument("threshold: m must be at least 1");
    }
}

Feature ThresholdQuery::resolved_m() const {
    if (m) return *m;
    if (alpha) {
        const double value = std::round(std::pow(static_cast<double>(n), *alpha));
        if (!(value >= 1.0 && value < 4.0e9)) throw std::invalid_argument("threshold: n^alpha out of range");
        return static_cast<Feature>(value);
    }
    return 0;
}

double ThresholdQuery::resolved_alpha() const {
    if (alpha) return *alpha;
    if (m) return std::log(static_cast<double>(*m)) / std::log(static_cast<double>(n));
    return 0.0;
}

std::size_t formula_order(const ThresholdQuery& q) {
    if (q.formula_order) return *q.formula_order;
    switch (q.kind) {
        case PropertyKind::connectivity:
        case PropertyKind::perfect_matching: return 1;
        case PropertyKind::hamilton: return 2;
        case PropertyKind::k_connectivity:
        case PropertyKind::min_degree_k: return q.k;
    }
    return 1;
}

std::size_t necessary_min_degree(PropertyKind kind, std::size_t k) {
    switch (kind) {
        case PropertyKind::connectivity:
        case PropertyKind::perfect_matching: return 1;
        case PropertyKind::hamilton: return 2;
        case PropertyKind::k_connectivity:
        case PropertyKind::min_degree_k: return k;
    }
    return 1;
}

double threshold_p(const ThresholdQuery& q) {
    q.validate();
    const double n = static_cast<double>(q.n);
    const double order = static_cast<double>(formula_order(q));
    const double lnn = std::log(n);
    double numerator = lnn + q.omega;
    if (order > 1.0) {
        if (lnn <= 1.0 && q.n < 3) throw ThresholdOutOfRange("threshold: ln ln n undefined for n < 3");
        numerator += (order - 1.0) * std::log(lnn);
    }
    if (numerator < 0.0) {
        throw ThresholdOutOfRange("threshold: negative argument (omega too small for this n)");
    }
    double p = 0.0;
    if (q.model == Model::gnp) {
        p = numerator / n;
    } else {
        const double m = static_cast<double>(q.resolved_m());
        const bool above_one = q.alpha ? *q.alpha > 1.0 : m > n;
        p = above_one ? std::sqrt(numerator / (m * n)) : numerator / m;
    }
    if (!(p >= 0.0 && p <= 1.0)) throw ThresholdOutOfRange("threshold: derived probability outside [0,1]");
    return p;
}

ConfidenceInterval wilson_ci(std::size_t successes, std::size_t trials, double confidence) {
    if (trials == 0) throw std::invalid_argument("wilson_ci: trials must be positive");
    if (successes > trials) throw std::invalid_argument("wilson_ci: successes exceed trials");
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("wilson_ci: confidence in (0,1)");
    const boost::math::normal_distribution<double> normal;
    const double z = boost::math::quantile(normal, 1.0 - (1.0 - confidence) / 2.0);
    const double nt = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (phat + z2 / (2.0 * nt)) / denom;
    const double half = z / denom * std::sqrt(phat * (1.0 - phat) / nt + z2 / (4.0 * nt * nt));
    ConfidenceInterval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0) ci.lo = 0.0;
    if (successes == trials) ci.hi = 1.0;
    return ci;
}

std::vector<double> isotonic_regression(const std::vector<double>& values, const std::vector<double>& weights) {
    if (!weights.empty() && weights.size() != values.size()) {
        throw std::invalid_argument("isotonic_regression: weights size mismatch");
    }
    struct Block {
        double mean;
        double weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        blocks.push_back({values[i], w, 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
            Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            const double total = prev.weight + top.weight;
            prev.mean = total > 0.0 ? (prev.mean * prev.weight + top.mean * top.weight) / total
                                    : (prev.mean + top.mean) / 2.0;
            prev.weight = total;
            prev.count += top.count;
        }
    }
    std::vector<double> fitted;
    fitted.reserve(values.size());
    for (const Block& b : blocks) fitted.insert(fitted.end(), b.count, b.mean);
    return fitted;
}

std::optional<double> crossing_estimate(const std::vector<double>& omegas, const std::vector<double>& estimates,
                                        const std::vector<double>& weights) {
    if (omegas.size() != estimates.size()) throw std::invalid_argument("crossing_estimate: size mismatch");
    if (omegas.size() < 2) throw std::invalid_argument("crossing_estimate: need at least two points");
    const auto fit = isotonic_regression(estimates, weights);
    if (fit.front() > 0.5) return std::nullopt;
    for (std::size_t i = 0; i < fit.size(); ++i) {
        if (fit[i] < 0.5) continue;
        if (i == 0 || fit[i] == fit[i - 1]) return omegas[i];
        const double frac = (0.5 - fit[i - 1]) / (fit[i] - fit[i - 1]);
        return omegas[i - 1] + frac * (omegas[i] - omegas[i - 1]);
    }
    return std::nullopt;
}

std::optional<double> SweepPoint::estimate() const {
    if (resolved() == 0) return std::nullopt;
    return static_cast<double>(successes) / static_cast<double>(resolved());
}

std::optional<ConfidenceInterval> SweepPoint::ci() const {
    if (resolved() == 0) return std::nullopt;
    return wilson_ci(successes, resolved());
}

void SweepSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("grid: must not be empty");
    if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("grid: must be sorted ascending");
    if (properties.empty()) throw std::invalid_argument("properties: must not be empty");
    query(properties.front(), grid.front()).validate();
    for (PropertyKind kind : properties) {
        if (kind == PropertyKind::perfect_matching && n % 2 != 0) {
            throw std::invalid_argument("n: perfect matching sweeps need even n");
        }
        if (kind == PropertyKind::hamilton && n < 3) throw std::invalid_argument("n: Hamilton sweeps need n >= 3");
    }
}

ThresholdQuery SweepSpec::query(PropertyKind kind, double omega) const {
    ThresholdQuery q;
    q.model = model;
    q.n = n;
    q.alpha = alpha;
    q.m = m;
    q.k = k;
    q.omega = omega;
    q.kind = kind;
    q.formula_order = formula_order;
    return q;
}

namespace {

Verdict evaluate(PropertyKind kind, const Graph& g, std::size_t k, const HamiltonBudget& budget) {
    switch (kind) {
        case PropertyKind::connectivity: return is_connected(g) ? Verdict::yes : Verdict::no;
        case PropertyKind::k_connectivity: return is_k_connected(g, k) ? Verdict::yes : Verdict::no;
        case PropertyKind::perfect_matching: return has_perfect_matching(g) ? Verdict::yes : Verdict::no;
        case PropertyKind::hamilton: return hamilton_solve(g, budget).status;
        case PropertyKind::min_degree_k: return min_degree_at_least(g, k) ? Verdict::yes : Verdict::no;
    }
    return Verdict::unresolved;
}

/// Grid point i, group of properties sharing one derived p.
struct SampleGroup {
    std::size_t point = 0;
    double p = 0.0;
    std::vector<std::size_t> members;  // series indices
};

struct SweepLayout {
    SweepCurve curve;
    std::vector<SampleGroup> groups;
};

SweepLayout prepare(const SweepSpec& spec) {
    spec.validate();
    SweepLayout layout;
    layout.curve.spec = spec;
    for (PropertyKind kind : spec.properties) {
        SweepSeries s;
        s.property = kind;
        s.k = necessary_min_degree(kind, spec.k);
        SweepSeries c;
        c.property = PropertyKind::min_degree_k;
        c.k = s.k;
        for (double omega : spec.grid) {
            SweepPoint pt;
            pt.omega = omega;
            try {
                pt.p = threshold_p(spec.query(kind, omega));
            } catch (const ThresholdOutOfRange& e) {
                pt.skip_reason = e.what();
            }
            if (pt.p) {
                pt.samples = spec.samples;
                pt.outcomes.assign(spec.samples, Verdict::unresolved);
            }
            s.points.push_back(pt);
            c.points.push_back(std::move(pt));
        }
        layout.curve.series.push_back(std::move(s));
        layout.curve.companions.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        std::vector<SampleGroup> local;
        for (std::size_t s = 0; s < spec.properties.size(); ++s) {
            const auto& pt = layout.curve.series[s].points[i];
            if (!pt.p) continue;
            auto it = std::find_if(local.begin(), local.end(), [&](const SampleGroup& g) { return g.p == *pt.p; });
            if (it == local.end()) {
                local.push_back({i, *pt.p, {s}});
            } else {
                it->members.push_back(s);
            }
        }
        layout.groups.insert(layout.groups.end(), local.begin(), local.end());
    }
    return layout;
}

Seed sample_seed(const SweepSpec& spec, std::size_t group, std::size_t sample) {
    return Seed{spec.seed, (static_cast<std::uint64_t>(group) << 32) | static_cast<std::uint64_t>(sample)};
}

Graph draw_graph(const SweepSpec& spec, double p, Seed seed) {
    if (spec.model == Model::gnp) return gen_gnp(spec.n, p, seed);
    ThresholdQuery q = spec.query(spec.properties.front(), 0.0);
    return gen_rig(spec.n, q.resolved_m(), p, seed).graph;
}

// The per-sample kernel shared by the serial and parallel drivers; writes
// only to slots owned by (group, sample).
void run_sample(SweepLayout& layout, std::size_t group_index, std::size_t sample) {
    const SweepSpec& spec = layout.curve.spec;
    const SampleGroup& group = layout.groups[group_index];
    const Seed seed = sample_seed(spec, group_index, sample);
    const Graph g = draw_graph(spec, group.p, seed);
    for (std::size_t s : group.members) {
        auto& series = layout.curve.series[s];
        HamiltonBudget budget = spec.budget;
        budget.seed = seed.derive(s + 1).stream ^ spec.budget.seed;
        series.points[group.point].outcomes[sample] = evaluate(series.property, g, spec.k, budget);
        layout.curve.companions[s].points[group.point].outcomes[sample] =
            min_degree_at_least(g, series.k) ? Verdict::yes : Verdict::no;
    }
}

void tally(SweepCurve& curve) {
    auto count = [](SweepPoint& pt) {
        pt.successes = static_cast<std::size_t>(std::count(pt.outcomes.begin(), pt.outcomes.end(), Verdict::yes));
        pt.unresolved =
            static_cast<std::size_t>(std::count(pt.outcomes.begin(), pt.outcomes.end(), Verdict::unresolved));
    };
    for (auto& s : curve.series)
        for (auto& pt : s.points) count(pt);
    for (auto& s : curve.companions)
        for (auto& pt : s.points) count(pt);
}

}  // namespace

SweepCurve sweep_serial(const SweepSpec& spec) {
    SweepLayout layout = prepare(spec);
    for (std::size_t g = 0; g < layout.groups.size(); ++g) {
        for (std::size_t s = 0; s < spec.samples; ++s) run_sample(layout, g, s);
    }
    tally(layout.curve);
    return std::move(layout.curve);
}

SweepCurve sweep(const SweepSpec& spec, int threads) {
    SweepLayout layout = prepare(spec);
    const auto tasks = static_cast<std::int64_t>(layout.groups.size() * spec.samples);
    const auto samples = static_cast<std::int64_t>(spec.samples);
    std::exception_ptr error;
#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#else
    const int team = 1;
    (void)threads;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::int64_t t = 0; t < tasks; ++t) {
        try {
            run_sample(layout, static_cast<std::size_t>(t / samples), static_cast<std::size_t>(t % samples));
        } catch (...) {
#pragma omp critical(rigsim_sweep_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    tally(layout.curve);
    return std::move(layout.curve);
}

std::vector<DisagreementPoint> mindeg_phenomenon_report(const SweepSeries& property, const SweepSeries& mindeg) {
    if (property.points.size() != mindeg.points.size()) {
        throw std::invalid_argument("mindeg_phenomenon_report: grids differ in length");
    }
    std::vector<DisagreementPoint> report;
    for (std::size_t i = 0; i < property.points.size(); ++i) {
        const auto& a = property.points[i];
        const auto& b = mindeg.points[i];
        if (a.omega != b.omega) throw std::invalid_argument("mindeg_phenomenon_report: grids differ");
        if (a.outcomes.size() != b.outcomes.size()) {
            throw std::invalid_argument("mindeg_phenomenon_report: sample pairing differs");
        }
        DisagreementPoint d;
        d.omega = a.omega;
        for (std::size_t s = 0; s < a.outcomes.size(); ++s) {
            if (a.outcomes[s] == Verdict::unresolved || b.outcomes[s] == Verdict::unresolved) {
                ++d.unresolved;
                continue;
            }
            ++d.resolved;
            if (a.outcomes[s] != b.outcomes[s]) ++d.disagreements;
        }
        report.push_back(d);
    }
    return report;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "NA";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

namespace {

std::string series_label(const SweepSeries& s) {
    if (s.property == PropertyKind::min_degree_k || s.property == PropertyKind::k_connectivity) {
        return to_string(s.property) + ":" + std::to_string(s.k);
    }
    return to_string(s.property);
}

void write_rows(std::ostream& out, const SweepCurve& curve, const SweepSeries& s,
                const std::vector<DisagreementPoint>& agreement) {
    const SweepSpec& spec = curve.spec;
    const ThresholdQuery q = spec.query(s.property, 0.0);
    const std::string m = spec.model == Model::rig ? std::to_string(q.resolved_m()) : "NA";
    const std::string alpha = spec.model == Model::rig ? format_number(q.resolved_alpha()) : "NA";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const SweepPoint& pt = s.points[i];
        const auto est = pt.estimate();
        const auto ci = pt.ci();
        out << to_string(spec.model) << ',' << spec.n << ',' << m << ',' << alpha << ',' << s.k << ','
            << format_number(pt.omega) << ',' << (pt.p ? format_number(*pt.p) : "NA") << ',' << series_label(s)
            << ',' << pt.samples << ',' << pt.successes << ',' << pt.unresolved << ','
            << (est ? format_number(*est) : "NA") << ',' << (ci ? format_number(ci->lo) : "NA") << ','
            << (ci ? format_number(ci->hi) : "NA") << ','
            << (agreement[i].resolved ? format_number(1.0 - agreement[i].rate()) : "NA") << '\n';
    }
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
    out << "model,n,m,alpha,k,omega,p,property,samples,successes,unresolved,estimate,ci_lo,ci_hi,mindeg_agree_rate\n";
    for (std::size_t i = 0; i < curve.series.size(); ++i) {
        write_rows(out, curve, curve.series[i], mindeg_phenomenon_report(curve.series[i], curve.companions[i]));
    }
    // Companion rows, skipping exact duplicates (same order and same p per point).
    for (std::size_t i = 0; i < curve.companions.size(); ++i) {
        bool duplicate = false;
        for (std::size_t j = 0; j < i && !duplicate; ++j) {
            const auto& a = curve.companions[i];
            const auto& b = curve.companions[j];
            duplicate = a.k == b.k && std::equal(a.points.begin(), a.points.end(), b.points.begin(),
                                                 [](const SweepPoint& x, const SweepPoint& y) { return x.p == y.p; });
        }
        if (duplicate) continue;
        const auto& c = curve.companions[i];
        write_rows(out, curve, c, mindeg_phenomenon_report(c, c));
    }
}

void write_sweep_plot(std::ostream& out, const SweepCurve& curve) {
    auto block = [&](const SweepSeries& s, const std::string& prefix) {
        out << "# " << prefix << series_label(s) << "\n# omega estimate\n";
        for (const auto& pt : s.points) {
            const auto est = pt.estimate();
            if (est) out << format_number(pt.omega) << ' ' << format_number(*est) << '\n';
        }
        out << "\n\n";
    };
    for (const auto& s : curve.series) block(s, "");
    for (const auto& s : curve.companions) block(s, "paired ");
}

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) throw std::invalid_argument("quantile: no data");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Lemma7Report lemma7_mindeg_check(Vertex n, Feature m, double omega, std::size_t samples, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("lemma7: n must be at least 3");
    if (m >= n) throw std::invalid_argument("lemma7: requires alpha < 1 (m < n)");
    const double lnn = std::log(static_cast<double>(n));
    if (omega < std::log(lnn)) throw std::invalid_argument("lemma7: omega must be at least ln ln n");
    if (samples == 0) throw std::invalid_argument("lemma7: samples must be positive");

    ThresholdQuery q;
    q.model = Model::rig;
    q.n = n;
    q.m = m;
    q.k = 1;
    q.omega = omega;
    q.kind = PropertyKind::connectivity;
    Lemma7Report report;
    report.n = n;
    report.m = m;
    report.alpha = q.resolved_alpha();
    report.omega = omega;
    report.seed = seed;
    report.p = threshold_p(q);
    report.normalized.assign(samples, 0.0);
    const double scale = static_cast<double>(m) / (static_cast<double>(n) * lnn);

    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
        try {
            const auto sample = gen_rig(n, m, report.p, Seed{seed, static_cast<std::uint64_t>(i)});
            report.normalized[static_cast<std::size_t>(i)] = static_cast<double>(min_degree(sample.graph)) * scale;
        } catch (...) {
#pragma omp critical(rigsim_lemma7_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    report.q05 = quantile(report.normalized, 0.05);
    report.median = quantile(report.normalized, 0.5);
    report.q95 = quantile(report.normalized, 0.95);
    report.minimum = *std::min_element(report.normalized.begin(), report.normalized.end());
    report.flagged = report.q05 < 0.5;
    return report;
}

void write_lemma7_csv(std::ostream& out, const Lemma7Report& r) {
    out << "n,m,alpha,omega,p,samples,min,q05,median,q95,flagged\n";
    out << r.n << ',' << r.m << ',' << format_number(r.alpha) << ',' << format_number(r.omega) << ','
        << format_number(r.p) << ',' << r.normalized.size() << ',' << format_number(r.minimum) << ','
        << format_number(r.q05) << ',' << format_number(r.median) << ',' << format_number(r.q95) << ','
        << (r.flagged ? 1 : 0) << '\n';
}

}  // namespace rigsim
