// rigsim: command line front end for the random intersection graph toolkit.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rigsim/coupling.hpp"
#include "rigsim/experiment.hpp"
#include "rigsim/generators.hpp"
#include "rigsim/graph.hpp"
#include "rigsim/properties.hpp"
#include "rigsim/thresholds.hpp"

namespace {

using namespace rigsim;

constexpr int kExitInputError = 3;

struct Output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path, std::ios::binary | std::ios::trunc);
        if (!file) throw std::runtime_error("cannot open " + path + " for writing");
        stream = &file;
    }
    std::ostream& operator*() { return *stream; }
    [[nodiscard]] bool is_stdout() const { return stream == &std::cout; }
};

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

struct ModelArgs {
    std::optional<double> alpha;
    std::optional<std::uint32_t> m;

    void add(CLI::App* app) {
        auto* a = app->add_option("--alpha", alpha, "m = round(n^alpha)");
        auto* mm = app->add_option("-m,--features", m, "number of features");
        a->excludes(mm);
    }
};

struct BudgetArgs {
    HamiltonBudget budget;
    void add(CLI::App* app) {
        app->add_option("--ham-restarts", budget.restarts, "rotation-extension restarts")->capture_default_str();
        app->add_option("--ham-rotations", budget.rotations_per_vertex, "rotation steps per vertex per restart")
            ->capture_default_str();
        app->add_option("--ham-exact-max-n", budget.exact_max_n, "largest n for the exact fallback")
            ->capture_default_str();
        app->add_option("--ham-node-limit", budget.exact_node_limit, "exact search node limit (0 = none)")
            ->capture_default_str();
    }
};

// gen ---------------------------------------------------------------------

struct GenArgs {
    std::string model = "rig";
    std::uint32_t n = 0;
    ModelArgs features;
    double p = 0.0;
    std::uint32_t d = 0;
    std::string mspec;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    bool with_features = false;
    std::string out;
};

int run_gen(const GenArgs& a) {
    Output out(a.out);
    const Seed seed{a.seed, a.stream};
    auto resolve_m = [&]() {
        ThresholdQuery q;
        q.n = a.n;
        q.alpha = a.features.alpha;
        q.m = a.features.m;
        q.validate();
        return q.resolved_m();
    };
    if (a.model == "gnp") {
        write_edge_list(*out, gen_gnp(a.n, a.p, seed));
    } else if (a.model == "rig" || a.model == "uniform") {
        const Feature m = resolve_m();
        const RigSample s = a.model == "rig" ? gen_rig(a.n, m, a.p, seed) : gen_uniform_rig(a.n, m, a.d, seed);
        write_edge_list(*out, s.graph);
        if (a.with_features) write_features(*out, s.assignment);
    } else if (a.model == "gstar") {
        write_edge_list(*out, gen_gstar(a.n, MSpec::parse(a.mspec), seed).graph);
    } else {
        throw std::invalid_argument("unknown model '" + a.model + "' (gnp, rig, uniform, gstar)");
    }
    return 0;
}

// check -------------------------------------------------------------------

struct CheckArgs {
    std::string input = "-";
    std::string property;
    bool certificate = false;
    BudgetArgs budget;
};

int run_check(const CheckArgs& a) {
    EdgeListDocument doc;
    if (a.input == "-") {
        doc = read_edge_list(std::cin);
    } else {
        std::ifstream in(a.input);
        if (!in) throw std::invalid_argument("cannot open " + a.input);
        doc = read_edge_list(in);
    }
    const Graph& g = doc.graph;
    const std::string& prop = a.property;
    auto parse_k = [&](const std::string& prefix) -> std::size_t {
        const std::string digits = prop.substr(prefix.size());
        std::size_t used = 0;
        const unsigned long k = digits.empty() ? 0 : std::stoul(digits, &used);
        if (digits.empty() || used != digits.size() || k < 1) {
            throw std::invalid_argument("property " + prefix + "K needs an integer K >= 1");
        }
        return k;
    };

    Verdict verdict = Verdict::no;
    if (prop == "connected") {
        verdict = is_connected(g) ? Verdict::yes : Verdict::no;
    } else if (prop.rfind("kconn:", 0) == 0) {
        verdict = is_k_connected(g, parse_k("kconn:")) ? Verdict::yes : Verdict::no;
    } else if (prop.rfind("mindeg:", 0) == 0) {
        const std::size_t k = parse_k("mindeg:");
        verdict = min_degree_at_least(g, k) ? Verdict::yes : Verdict::no;
        if (a.certificate) std::cout << "min_degree " << min_degree(g) << '\n';
    } else if (prop == "matching") {
        const auto mate = maximum_matching(g);
        std::size_t matched = 0;
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            if (mate[v] != v) ++matched;
        verdict = matched == g.vertex_count() ? Verdict::yes : Verdict::no;
        if (a.certificate) {
            std::cout << "matching_size " << matched / 2 << '\n';
            for (Vertex v = 0; v < g.vertex_count(); ++v)
                if (mate[v] != v && v < mate[v]) std::cout << v << ' ' << mate[v] << '\n';
        }
    } else if (prop == "hamilton") {
        const HamiltonVerdict hv = hamilton_solve(g, a.budget.budget);
        verdict = hv.status;
        if (a.certificate) {
            if (hv.status == Verdict::yes) {
                std::cout << "cycle";
                for (Vertex v : hv.certificate) std::cout << ' ' << v;
                std::cout << '\n';
            } else if (hv.status == Verdict::no) {
                std::cout << "reason " << to_string(hv.reason);
                if (hv.reason == NoReason::min_degree_below_two || hv.reason == NoReason::cut_vertex ||
                    hv.reason == NoReason::forced_degree_conflict) {
                    std::cout << " vertex " << hv.witness;
                }
                std::cout << '\n';
            }
        }
    } else {
        throw std::invalid_argument("unknown property '" + prop + "' (connected, kconn:K, matching, hamilton, mindeg:K)");
    }
    std::cout << to_string(verdict) << '\n';
    switch (verdict) {
        case Verdict::yes: return 0;
        case Verdict::no: return 1;
        case Verdict::unresolved: return 2;
    }
    return 2;
}

// sweep -------------------------------------------------------------------

struct SweepArgs {
    std::string model = "rig";
    std::uint32_t n = 0;
    ModelArgs features;
    std::size_t k = 1;
    std::vector<std::string> properties{"connectivity"};
    std::vector<double> grid{-6, -4, -2, -1, 0, 1, 2, 4, 6};
    std::size_t samples = 300;
    std::uint64_t seed = 1;
    int threads = 0;
    std::optional<std::size_t> formula_order;
    BudgetArgs budget;
    std::string out;
    std::string plot;
    bool report = false;
};

int run_sweep(const SweepArgs& a) {
    SweepSpec spec;
    spec.model = parse_model(a.model);
    spec.n = a.n;
    spec.alpha = a.features.alpha;
    spec.m = a.features.m;
    spec.k = a.k;
    for (const auto& p : a.properties) spec.properties.push_back(parse_property(p));
    spec.grid = a.grid;
    spec.samples = a.samples;
    spec.seed = a.seed;
    spec.budget = a.budget.budget;
    spec.formula_order = a.formula_order;
    const SweepCurve curve = sweep(spec, a.threads);
    {
        Output out(a.out);
        write_sweep_csv(*out, curve);
    }
    if (!a.plot.empty()) {
        Output plot(a.plot);
        write_sweep_plot(*plot, curve);
    }
    if (a.report) {
        for (std::size_t i = 0; i < curve.series.size(); ++i) {
            const auto& s = curve.series[i];
            std::vector<double> omegas, estimates, weights;
            for (const auto& pt : s.points) {
                if (auto est = pt.estimate()) {
                    omegas.push_back(pt.omega);
                    estimates.push_back(*est);
                    weights.push_back(static_cast<double>(pt.resolved()));
                }
            }
            std::cerr << to_string(s.property) << ": crossing ";
            const auto cross = omegas.size() >= 2 ? crossing_estimate(omegas, estimates, weights) : std::nullopt;
            std::cerr << (cross ? format_number(*cross) : "none") << "; max disagreement with min degree >= " << s.k
                      << ": ";
            double worst = 0.0;
            for (const auto& d : mindeg_phenomenon_report(s, curve.companions[i])) worst = std::max(worst, d.rate());
            std::cerr << format_number(worst) << '\n';
        }
    }
    return 0;
}

// couple ------------------------------------------------------------------

struct CoupleArgs {
    std::uint32_t n = 0;
    ModelArgs features;
    std::optional<double> p;
    std::string property = "connectivity";
    std::size_t k = 1;
    double omega = 0.0;
    std::optional<double> omega_c;
    std::optional<std::string> regime;
    std::size_t samples = 200;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out;
};

int run_couple(const CoupleArgs& a) {
    set_threads(a.threads);
    CouplingParams params;
    params.n = a.n;
    ThresholdQuery q;
    q.model = Model::rig;
    q.n = a.n;
    q.alpha = a.features.alpha;
    q.m = a.features.m;
    q.k = a.k;
    q.omega = a.omega;
    q.kind = parse_property(a.property);
    q.validate();
    params.m = q.resolved_m();
    params.p = a.p ? *a.p : threshold_p(q);
    params.omega_c = a.omega_c;
    if (a.regime) params.regime = parse_regime(*a.regime);
    const CouplingRun run = run_coupling(params, a.samples, a.seed);
    Output out(a.out);
    write_coupling_csv(*out, run);
    write_coupling_summary(out.is_stdout() ? std::cerr : std::cout, run);
    return 0;
}

// tv / bound --------------------------------------------------------------

struct TvArgs {
    std::uint32_t n = 3;
    std::string a;
    std::string b;
};

int run_tv(const TvArgs& a) {
    const GraphLaw la = GraphLaw::parse(a.a);
    const GraphLaw lb = GraphLaw::parse(a.b);
    std::cout << "tv " << format_number(exact_tv_small(a.n, la, lb)) << '\n';
    return 0;
}

struct BoundArgs {
    std::optional<double> mean;
    std::optional<double> lambda;
    std::vector<double> t;
    unsigned order = 1;
    std::optional<std::uint64_t> tv_m;
    std::optional<double> tv_phat;
};

int run_bound(const BoundArgs& a) {
    if (!a.mean && !a.lambda && !a.tv_m) {
        throw std::invalid_argument("bound: give --mean, --lambda or --tv-m/--tv-phat");
    }
    if (a.mean) {
        for (double t : a.t)
            std::cout << "binomial mean=" << format_number(*a.mean) << " t=" << format_number(t)
                      << " bound=" << format_number(chernoff_bound(*a.mean, t)) << '\n';
    }
    if (a.lambda) {
        for (double t : a.t) {
            const auto b = chernoff_poisson_bound(*a.lambda, t, a.order);
            std::cout << "poisson lambda=" << format_number(*a.lambda) << " t=" << format_number(t)
                      << " leading=" << format_number(b.leading) << " (" << b.caveat << ")\n";
        }
    }
    if (a.tv_m) {
        if (!a.tv_phat) throw std::invalid_argument("bound: --tv-m needs --tv-phat");
        std::cout << "tv_bound m=" << *a.tv_m << " p_hat=" << format_number(*a.tv_phat)
                  << " bound=" << format_number(tv_bound(*a.tv_m, *a.tv_phat)) << '\n';
    }
    return 0;
}

// preset / run ------------------------------------------------------------

struct PresetArgs {
    std::string name;
    bool list = false;
};

int run_preset(const PresetArgs& a) {
    if (a.list || a.name.empty()) {
        for (const auto& n : preset_names()) std::cout << n << '\n';
        return 0;
    }
    std::cout << config_to_json(preset(a.name)).dump(2) << '\n';
    return 0;
}

struct RunArgs {
    std::string config;
    std::string preset;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<int> threads;
};

int run_run(const RunArgs& a) {
    if (a.config.empty() == a.preset.empty()) throw ConfigError("config", "give exactly one of CONFIG or --preset");
    ExperimentConfig config = a.preset.empty() ? load_config(a.config) : preset(a.preset);
    if (a.seed) config.seed = *a.seed;
    if (a.samples) config.samples = *a.samples;
    if (a.threads) config.threads = *a.threads;
    config.validate();
    const std::filesystem::path dir = a.out_dir.empty() ? resolve_output_dir(config) : std::filesystem::path(a.out_dir);
    const RunResult result = run_experiment(config, dir);
    for (const auto& p : result.outputs) std::cout << p.string() << '\n';
    std::cout << result.manifest.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rigsim: random intersection graphs, couplings and threshold sweeps"};
    app.set_version_flag("--version", std::string(rigsim::kVersion));
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "sample a graph and print it as an edge list");
    gen_cmd->add_option("--model", gen.model, "gnp | rig | uniform | gstar")->capture_default_str();
    gen_cmd->add_option("-n,--vertices", gen.n, "number of vertices")->required();
    gen.features.add(gen_cmd);
    gen_cmd->add_option("-p,--prob", gen.p, "edge (gnp) or incidence (rig) probability");
    gen_cmd->add_option("-d,--subset-size", gen.d, "feature set size (uniform)");
    gen_cmd->add_option("--draws", gen.mspec, "draw count law for gstar: const:T | bin:N:Q | po:L");
    gen_cmd->add_option("--seed", gen.seed, "root seed")->capture_default_str();
    gen_cmd->add_option("--stream", gen.stream, "substream index")->capture_default_str();
    gen_cmd->add_flag("--with-features", gen.with_features, "also print 'v: w1 w2 ...' lines");
    gen_cmd->add_option("-o,--output", gen.out, "output file (default stdout)");

    CheckArgs check;
    auto* check_cmd = app.add_subcommand("check", "test a property; exit 0 yes, 1 no, 2 unresolved");
    check_cmd->add_option("input", check.input, "edge-list file, '-' for stdin")->capture_default_str();
    check_cmd->add_option("--property", check.property, "connected | kconn:K | matching | hamilton | mindeg:K")
        ->required();
    check_cmd->add_flag("--certificate", check.certificate, "print a certificate or witness");
    check.budget.add(check_cmd);

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo threshold sweep over an omega grid");
    sweep_cmd->add_option("--model", sw.model, "gnp | rig")->capture_default_str();
    sweep_cmd->add_option("-n,--vertices", sw.n, "number of vertices")->required();
    sw.features.add(sweep_cmd);
    sweep_cmd->add_option("-k", sw.k, "connectivity / degree order")->capture_default_str();
    sweep_cmd->add_option("--property", sw.properties, "one or more properties")->delimiter(',');
    sweep_cmd->add_option("--grid", sw.grid, "comma-separated omega values, e.g. --grid=-2,0,2")->delimiter(',');
    sweep_cmd->add_option("--samples", sw.samples, "samples per grid point")->capture_default_str();
    sweep_cmd->add_option("--seed", sw.seed, "root seed")->capture_default_str();
    sweep_cmd->add_option("--threads", sw.threads, "worker threads (0 = all cores)");
    sweep_cmd->add_option("--formula-order", sw.formula_order, "override the ln ln n order of the formula");
    sw.budget.add(sweep_cmd);
    sweep_cmd->add_option("-o,--output", sw.out, "CSV file (default stdout)");
    sweep_cmd->add_option("--plot", sw.plot, "also write two-column plot data here");
    sweep_cmd->add_flag("--report", sw.report, "print crossing and min-degree disagreement to stderr");

    CoupleArgs cp;
    auto* couple_cmd = app.add_subcommand("couple", "sample the lower-graph coupling and report its failures");
    couple_cmd->add_option("-n,--vertices", cp.n, "number of vertices")->required();
    cp.features.add(couple_cmd);
    couple_cmd->add_option("-p,--prob", cp.p, "incidence probability (default: derived from the threshold)");
    couple_cmd->add_option("--property", cp.property, "property whose threshold gives p")->capture_default_str();
    couple_cmd->add_option("-k", cp.k, "order used when deriving p")->capture_default_str();
    couple_cmd->add_option("--omega", cp.omega, "offset used when deriving p")->capture_default_str();
    couple_cmd->add_option("--omega-c", cp.omega_c, "large-np slack (default (mnp)^(1/4))");
    couple_cmd->add_option("--regime", cp.regime, "force small_np or large_np");
    couple_cmd->add_option("--samples", cp.samples, "coupled samples")->capture_default_str();
    couple_cmd->add_option("--seed", cp.seed, "root seed")->capture_default_str();
    couple_cmd->add_option("--threads", cp.threads, "worker threads (0 = all cores)");
    couple_cmd->add_option("-o,--output", cp.out, "per-sample CSV (default stdout)");

    TvArgs tv;
    auto* tv_cmd = app.add_subcommand("tv", "exact total variation (sum convention) between two graph laws, n <= 5");
    tv_cmd->add_option("-n,--vertices", tv.n, "number of vertices")->capture_default_str();
    tv_cmd->add_option("a", tv.a, "law: gnp:P | const:T | bin:N:Q | po:L")->required();
    tv_cmd->add_option("b", tv.b, "law: gnp:P | const:T | bin:N:Q | po:L")->required();

    BoundArgs bd;
    auto* bound_cmd = app.add_subcommand("bound", "evaluate tail and distance bounds");
    bound_cmd->add_option("--mean", bd.mean, "binomial mean");
    bound_cmd->add_option("--lambda", bd.lambda, "Poisson mean");
    bound_cmd->add_option("-t", bd.t, "deviations (comma-separated)")->delimiter(',');
    bound_cmd->add_option("--order", bd.order, "i in the o(n^-i) remainder")->capture_default_str();
    bound_cmd->add_option("--tv-m", bd.tv_m, "trials for the Bin vs Po graph distance bound");
    bound_cmd->add_option("--tv-phat", bd.tv_phat, "success probability for the distance bound");

    PresetArgs pr;
    auto* preset_cmd = app.add_subcommand("preset", "print a named experiment config as JSON");
    preset_cmd->add_option("name", pr.name, "preset name");
    preset_cmd->add_flag("--list", pr.list, "list preset names");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "run an experiment from a config, manifest or preset");
    run_cmd->add_option("config", run.config, "JSON config or manifest");
    run_cmd->add_option("--preset", run.preset, "use a named preset instead of a file");
    run_cmd->add_option("--out-dir", run.out_dir, std::string("output directory (default $") + kOutputDirEnv + ")");
    run_cmd->add_option("--seed", run.seed, "override seed");
    run_cmd->add_option("--samples", run.samples, "override samples");
    run_cmd->add_option("--threads", run.threads, "override threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*check_cmd) return run_check(check);
        if (*sweep_cmd) return run_sweep(sw);
        if (*couple_cmd) return run_couple(cp);
        if (*tv_cmd) return run_tv(tv);
        if (*bound_cmd) return run_bound(bd);
        if (*preset_cmd) return run_preset(pr);
        if (*run_cmd) return run_run(run);
    } catch (const std::exception& e) {
        std::cerr << "rigsim: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
