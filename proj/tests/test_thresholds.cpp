#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rigsim/rng.hpp"
#include "rigsim/thresholds.hpp"

using namespace rigsim;

namespace {

// Min-max characterisation of the weighted isotonic fit:
// fit_i = max_{j <= i} min_{l >= i} mean(values[j..l]).
std::vector<double> isotonic_oracle(const std::vector<double>& v, const std::vector<double>& w) {
    const std::size_t n = v.size();
    std::vector<double> fit(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = -1e300;
        for (std::size_t j = 0; j <= i; ++j) {
            double worst = 1e300;
            for (std::size_t l = i; l < n; ++l) {
                double num = 0.0, den = 0.0;
                for (std::size_t t = j; t <= l; ++t) {
                    num += w[t] * v[t];
                    den += w[t];
                }
                worst = std::min(worst, num / den);
            }
            best = std::max(best, worst);
        }
        fit[i] = best;
    }
    return fit;
}

ThresholdQuery rig_query(Vertex n, double alpha, std::size_t k, double omega, PropertyKind kind) {
    ThresholdQuery q;
    q.model = Model::rig;
    q.n = n;
    q.alpha = alpha;
    q.k = k;
    q.omega = omega;
    q.kind = kind;
    return q;
}

SweepSpec small_spec() {
    SweepSpec spec;
    spec.model = Model::rig;
    spec.n = 60;
    spec.alpha = 1.5;
    spec.k = 2;
    spec.properties = {PropertyKind::connectivity, PropertyKind::k_connectivity, PropertyKind::perfect_matching,
                       PropertyKind::hamilton};
    spec.grid = {-3.0, -1.0, 0.0, 1.0, 3.0};
    spec.samples = 40;
    spec.seed = 2024;
    return spec;
}

std::string csv(const SweepCurve& c) {
    std::ostringstream out;
    write_sweep_csv(out, c);
    return out.str();
}

}  // namespace

TEST_CASE("threshold_p examples") {
    const auto a = rig_query(100, 2.0, 1, 0.0, PropertyKind::connectivity);
    CHECK(a.resolved_m() == 10000);
    CHECK(threshold_p(a) == doctest::Approx(std::sqrt(std::log(100.0) / 1e6)).epsilon(1e-12));
    CHECK(threshold_p(a) == doctest::Approx(2.1460e-3).epsilon(1e-4));

    ThresholdQuery g;
    g.model = Model::gnp;
    g.n = 1000;
    g.k = 2;
    g.kind = PropertyKind::k_connectivity;
    const double ln = std::log(1000.0);
    CHECK(threshold_p(g) == doctest::Approx((ln + std::log(ln)) / 1000.0).epsilon(1e-12));
    CHECK(threshold_p(g) == doctest::Approx(8.8404e-3).epsilon(1e-4));
}

TEST_CASE("formula orders per property") {
    auto q = rig_query(1000, 2.0, 3, 0.0, PropertyKind::connectivity);
    CHECK(formula_order(q) == 1);
    q.kind = PropertyKind::perfect_matching;
    CHECK(formula_order(q) == 1);
    q.kind = PropertyKind::hamilton;
    CHECK(formula_order(q) == 2);
    q.kind = PropertyKind::k_connectivity;
    CHECK(formula_order(q) == 3);
    q.kind = PropertyKind::min_degree_k;
    CHECK(formula_order(q) == 3);
    q.formula_order = 1;
    CHECK(formula_order(q) == 1);
    CHECK(necessary_min_degree(PropertyKind::hamilton, 1) == 2);
    CHECK(necessary_min_degree(PropertyKind::perfect_matching, 5) == 1);
    CHECK(necessary_min_degree(PropertyKind::k_connectivity, 3) == 3);
}

TEST_CASE("rig threshold satisfies the defining identity for m > n") {
    for (Vertex n : {50u, 1000u, 5000u})
        for (std::size_t k : {1u, 2u, 3u})
            for (double omega : {-2.0, 0.0, 3.5}) {
                const auto q = rig_query(n, 2.0, k, omega, PropertyKind::k_connectivity);
                const double p = threshold_p(q);
                const double ln = std::log(static_cast<double>(n));
                const double lhs = static_cast<double>(q.resolved_m()) * n * p * p;
                const double rhs = ln + (static_cast<double>(k) - 1.0) * std::log(ln) + omega;
                CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
            }
}

TEST_CASE("rig threshold for m <= n divides by m") {
    const auto q = rig_query(2000, 0.7, 1, 3.0, PropertyKind::connectivity);
    CHECK(threshold_p(q) == doctest::Approx((std::log(2000.0) + 3.0) / q.resolved_m()).epsilon(1e-12));
}

TEST_CASE("threshold_p is strictly increasing in omega") {
    for (const Model model : {Model::gnp, Model::rig}) {
        double prev = -1.0;
        for (double omega = -4.0; omega <= 6.0; omega += 0.5) {
            auto q = rig_query(500, 1.8, 2, omega, PropertyKind::hamilton);
            q.model = model;
            const double p = threshold_p(q);
            CHECK(p > prev);
            prev = p;
        }
    }
}

TEST_CASE("threshold_p out of range and invalid queries") {
    CHECK_THROWS_AS(threshold_p(rig_query(100, 2.0, 1, -10.0, PropertyKind::connectivity)), ThresholdOutOfRange);
    auto big = rig_query(10, 0.1, 1, 50.0, PropertyKind::connectivity);
    CHECK_THROWS_AS(threshold_p(big), ThresholdOutOfRange);
    CHECK_THROWS_AS(threshold_p(rig_query(1, 2.0, 1, 0.0, PropertyKind::connectivity)), std::invalid_argument);
    CHECK_THROWS_AS(threshold_p(rig_query(100, 2.0, 0, 0.0, PropertyKind::connectivity)), std::invalid_argument);
    ThresholdQuery no_m;
    no_m.n = 10;
    CHECK_THROWS_AS(threshold_p(no_m), std::invalid_argument);
    CHECK(parse_property("kconn") == PropertyKind::k_connectivity);
    CHECK(parse_property("matching") == PropertyKind::perfect_matching);
    CHECK_THROWS_AS((void)parse_property("planar"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_model("ws"), std::invalid_argument);
}

TEST_CASE("wilson_ci examples") {
    const auto ci = wilson_ci(50, 100);
    CHECK(ci.lo == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(ci.hi == doctest::Approx(0.5962).epsilon(1e-3));
    CHECK(wilson_ci(0, 17).lo == 0.0);
    CHECK(wilson_ci(17, 17).hi == 1.0);
    CHECK_THROWS_AS(wilson_ci(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(wilson_ci(5, 4), std::invalid_argument);
}

TEST_CASE("wilson_ci matches the closed form") {
    const double z = 1.959963984540054;
    for (std::size_t n : {1u, 10u, 300u})
        for (std::size_t s = 0; s <= n; s += std::max<std::size_t>(1, n / 7)) {
            const double ph = static_cast<double>(s) / n;
            const double den = 1.0 + z * z / n;
            const double mid = (ph + z * z / (2.0 * n)) / den;
            const double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4.0 * n * n)) / den;
            const auto ci = wilson_ci(s, n);
            CHECK(ci.lo == doctest::Approx(std::max(0.0, mid - half)).epsilon(1e-9));
            CHECK(ci.hi == doctest::Approx(std::min(1.0, mid + half)).epsilon(1e-9));
            CHECK(ci.lo >= 0.0);
            CHECK(ci.hi <= 1.0);
        }
}

TEST_CASE("isotonic regression agrees with the min-max formula") {
    CounterRng rng(Seed{31, 0});
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(9);
        std::vector<double> v(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = rng.uniform();
            w[i] = 0.5 + rng.uniform();
        }
        const auto fit = isotonic_regression(v, w);
        const auto expected = isotonic_oracle(v, w);
        for (std::size_t i = 0; i < n; ++i) CHECK(fit[i] == doctest::Approx(expected[i]).epsilon(1e-12));
    }
}

TEST_CASE("crossing_estimate examples") {
    CHECK_FALSE(crossing_estimate({-1, 0, 1}, {0, 0, 0}).has_value());
    CHECK(*crossing_estimate({-1, 1}, {0.25, 0.75}) == doctest::Approx(0.0));
    CHECK(*crossing_estimate({-1, 1}, {0.6, 0.4}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(crossing_estimate({0}, {0.5}), std::invalid_argument);
}

TEST_CASE("crossing_estimate is equivariant under grid translation") {
    CounterRng rng(Seed{32, 0});
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> omegas{-6, -4, -2, -1, 0, 1, 2, 4, 6};
        std::vector<double> est;
        for (double w : omegas) est.push_back(std::clamp(1.0 / (1.0 + std::exp(-w)) + 0.2 * (rng.uniform() - 0.5), 0.0, 1.0));
        const auto base = crossing_estimate(omegas, est);
        const double c = -3.0 + 6.0 * rng.uniform();
        for (double& w : omegas) w += c;
        const auto shifted = crossing_estimate(omegas, est);
        REQUIRE(base.has_value() == shifted.has_value());
        if (base) CHECK(*shifted == doctest::Approx(*base + c).epsilon(1e-9));
    }
}

TEST_CASE("mindeg_phenomenon_report examples") {
    SweepSeries a, b;
    SweepPoint pa, pb;
    pa.outcomes.assign(100, Verdict::yes);
    pb.outcomes.assign(100, Verdict::yes);
    a.points = {pa};
    b.points = {pb};
    CHECK(mindeg_phenomenon_report(a, b)[0].disagreements == 0);
    CHECK(mindeg_phenomenon_report(a, b)[0].rate() == 0.0);
    for (int i = 0; i < 3; ++i) a.points[0].outcomes[i] = Verdict::no;
    a.points[0].outcomes[50] = Verdict::unresolved;
    const auto r = mindeg_phenomenon_report(a, b)[0];
    CHECK(r.disagreements == 3);
    CHECK(r.unresolved == 1);
    CHECK(r.resolved == 99);
    a.points[0].outcomes[50] = Verdict::yes;
    CHECK(mindeg_phenomenon_report(a, b)[0].rate() == doctest::Approx(0.03));
    b.points[0].omega = 1.0;
    CHECK_THROWS_AS(mindeg_phenomenon_report(a, b), std::invalid_argument);
    b.points.push_back(pb);
    CHECK_THROWS_AS(mindeg_phenomenon_report(a, b), std::invalid_argument);
}

TEST_CASE("sweep with zero samples marks estimates undefined") {
    SweepSpec spec = small_spec();
    spec.samples = 0;
    const auto curve = sweep_serial(spec);
    for (const auto& s : curve.series)
        for (const auto& pt : s.points) {
            CHECK(pt.samples == 0);
            CHECK_FALSE(pt.estimate().has_value());
            CHECK_FALSE(pt.ci().has_value());
        }
    const std::string text = csv(curve);
    CHECK(text.find(",0,0,0,NA,NA,NA,NA\n") != std::string::npos);
}

TEST_CASE("sweep points outside [0,1] are skipped, not fatal") {
    SweepSpec spec = small_spec();
    spec.properties = {PropertyKind::connectivity};
    spec.grid = {-100.0, 0.0};
    spec.samples = 5;
    const auto curve = sweep_serial(spec);
    CHECK_FALSE(curve.series[0].points[0].p.has_value());
    CHECK_FALSE(curve.series[0].points[0].skip_reason.empty());
    CHECK(curve.series[0].points[1].p.has_value());
    CHECK(csv(curve).find("rig,60,465,1.5,1,-100,NA,connectivity,0,0,0,NA") != std::string::npos);
}

TEST_CASE("sweep validation") {
    SweepSpec spec = small_spec();
    spec.grid = {};
    CHECK_THROWS_AS(sweep_serial(spec), std::invalid_argument);
    spec = small_spec();
    spec.grid = {1.0, 0.0};
    CHECK_THROWS_AS(sweep_serial(spec), std::invalid_argument);
    spec = small_spec();
    spec.n = 61;
    CHECK_THROWS_AS(sweep_serial(spec), std::invalid_argument);
}

TEST_CASE("parallel sweep matches the serial reference byte for byte") {
    const SweepSpec spec = small_spec();
    const auto reference = csv(sweep_serial(spec));
    for (int threads : {1, 2, 3, 4}) {
        CAPTURE(threads);
        CHECK(csv(sweep(spec, threads)) == reference);
    }
    CHECK(csv(sweep(spec)) == reference);
    SweepSpec other = spec;
    other.seed = 2025;
    CHECK(csv(sweep_serial(other)) != reference);
}

TEST_CASE("sweep invariants and per-sample implications") {
    const SweepSpec spec = small_spec();
    const auto curve = sweep(spec, 2);
    REQUIRE(curve.series.size() == 4);
    REQUIRE(curve.companions.size() == 4);
    for (std::size_t s = 0; s < curve.series.size(); ++s) {
        const auto& series = curve.series[s];
        const auto& companion = curve.companions[s];
        CHECK(companion.k == series.k);
        for (std::size_t i = 0; i < series.points.size(); ++i) {
            const auto& pt = series.points[i];
            CHECK(pt.successes + pt.failures() + pt.unresolved == pt.samples);
            if (const auto ci = pt.ci()) {
                CHECK(ci->lo >= 0.0);
                CHECK(ci->hi <= 1.0);
            }
            for (std::size_t j = 0; j < pt.outcomes.size(); ++j) {
                if (pt.outcomes[j] == Verdict::yes) REQUIRE(companion.points[i].outcomes[j] == Verdict::yes);
            }
        }
    }
    // Properties with the same derived p are evaluated on the same graphs.
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        CHECK(curve.companions[0].points[i].outcomes == curve.companions[2].points[i].outcomes);
        CHECK(curve.companions[1].points[i].outcomes == curve.companions[3].points[i].outcomes);
        const auto& kc = curve.series[1].points[i].outcomes;
        const auto& ham = curve.series[3].points[i].outcomes;
        for (std::size_t j = 0; j < kc.size(); ++j)
            if (ham[j] == Verdict::yes) CHECK(kc[j] == Verdict::yes);
    }
    CHECK(curve.series[3].k == 2);
    CHECK(curve.series[1].k == 2);
}

TEST_CASE("sweep CSV layout") {
    SweepSpec spec = small_spec();
    spec.samples = 3;
    const std::string text = csv(sweep_serial(spec));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "model,n,m,alpha,k,omega,p,property,samples,successes,unresolved,estimate,ci_lo,ci_hi,"
                  "mindeg_agree_rate");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 14);
    }
    // 4 property series; companions collapse to min_degree_k:1 (connectivity,
    // matching) and min_degree_k:2 (k-connectivity, Hamilton share p at k = 2).
    CHECK(rows == 5 * (4 + 2));
    CHECK(text.find(",k_connectivity:2,") != std::string::npos);
    CHECK(text.find(",min_degree_k:1,") != std::string::npos);
    std::ostringstream plot;
    write_sweep_plot(plot, sweep_serial(spec));
    CHECK(plot.str().find("# connectivity\n# omega estimate\n") == 0);
}

TEST_CASE("lemma7 check reports finite quantiles and rejects bad input") {
    const auto r = lemma7_mindeg_check(400, 60, 3.0, 20, 5);
    CHECK(r.normalized.size() == 20);
    for (double x : r.normalized) {
        CHECK(std::isfinite(x));
        CHECK(x >= 0.0);
        CHECK(x <= 399.0 * 60 / (400 * std::log(400.0)) + 1e-12);
    }
    CHECK(r.minimum <= r.q05);
    CHECK(r.q05 <= r.median);
    CHECK(r.median <= r.q95);
    CHECK(r.flagged == (r.q05 < 0.5));
    std::ostringstream out;
    write_lemma7_csv(out, r);
    CHECK(out.str().rfind("n,m,alpha,omega,p,samples,min,q05,median,q95,flagged\n", 0) == 0);

    CHECK_THROWS_AS(lemma7_mindeg_check(100, 100, 3.0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(lemma7_mindeg_check(2000, 200, 1.0, 10, 1), std::invalid_argument);  // below ln ln n
    CHECK_THROWS(lemma7_mindeg_check(2000, 2, 3.0, 10, 1));                              // p1 >= 1
}

TEST_CASE("quantile uses linear interpolation") {
    CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
    CHECK(quantile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({1, 2, 3, 4, 5}, 0.05) == doctest::Approx(1.2));
    CHECK(quantile({7}, 0.9) == 7.0);
    CHECK(format_number(std::nan("")) == "NA");
    CHECK(format_number(0.1) == "0.1");
}
