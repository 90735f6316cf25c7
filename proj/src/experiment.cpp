#include "rigsim/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <unistd.h>

namespace rigsim {

using nlohmann::json;

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::sweep: return "sweep";
        case ExperimentKind::couple: return "couple";
        case ExperimentKind::lemma7: return "lemma7";
    }
    return "sweep";
}

namespace {

ExperimentKind parse_kind(const std::string& text) {
    if (text == "sweep") return ExperimentKind::sweep;
    if (text == "couple") return ExperimentKind::couple;
    if (text == "lemma7") return ExperimentKind::lemma7;
    throw ConfigError("kind", "unknown kind '" + text + "' (expected sweep, couple or lemma7)");
}

void reject_unknown(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) throw ConfigError(prefix + item.key(), "unknown key");
    }
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& prefix = "") {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(prefix + key, std::string("wrong type (") + e.what() + ")");
    }
}

std::size_t get_count(const json& obj, const std::string& key, const std::string& prefix = "") {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        throw ConfigError(prefix + key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

Feature ExperimentConfig::resolved_m(Vertex n_value) const {
    ThresholdQuery q;
    q.model = Model::rig;
    q.n = n_value;
    q.alpha = alpha;
    q.m = m;
    return q.resolved_m();
}

SweepSpec ExperimentConfig::sweep_spec(Vertex n_value) const {
    SweepSpec spec;
    spec.model = model;
    spec.n = n_value;
    spec.alpha = alpha;
    spec.m = m;
    spec.k = k;
    spec.properties = properties;
    spec.grid = grid;
    spec.samples = samples;
    spec.seed = seed;
    spec.budget = budget;
    spec.formula_order = formula_order;
    return spec;
}

void ExperimentConfig::validate() const {
    if (name.empty()) throw ConfigError("name", "must not be empty");
    if (name.find('/') != std::string::npos) throw ConfigError("name", "must not contain '/'");
    if (n.empty()) throw ConfigError("n", "must list at least one vertex count");
    for (Vertex v : n)
        if (v < 2) throw ConfigError("n", "every n must be at least 2");
    if (k < 1) throw ConfigError("k", "must be at least 1");
    if (alpha && m) throw ConfigError("alpha", "give either alpha or m, not both");
    if (alpha && !(*alpha > 0.0)) throw ConfigError("alpha", "must be positive");
    if (m && *m < 1) throw ConfigError("m", "must be at least 1");
    if (threads < 0) throw ConfigError("threads", "must be non-negative");
    const bool needs_m = model == Model::rig || kind != ExperimentKind::sweep;
    if (needs_m && !alpha && !m) throw ConfigError("alpha", "rig experiments need alpha or m");
    if (needs_m) {
        for (Vertex v : n) {
            try {
                (void)resolved_m(v);
            } catch (const std::invalid_argument& e) {
                throw ConfigError("alpha", e.what());
            }
        }
    }

    switch (kind) {
        case ExperimentKind::sweep: {
            if (grid.empty()) throw ConfigError("grid", "must not be empty");
            if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("grid", "must be sorted ascending");
            if (properties.empty()) throw ConfigError("properties", "must not be empty");
            for (Vertex v : n) {
                for (PropertyKind pk : properties) {
                    if (pk == PropertyKind::perfect_matching && v % 2 != 0) {
                        throw ConfigError("n", "perfect matching sweeps need even n");
                    }
                    if (pk == PropertyKind::hamilton && v < 3) throw ConfigError("n", "Hamilton sweeps need n >= 3");
                }
            }
            break;
        }
        case ExperimentKind::couple: {
            if (model != Model::rig) throw ConfigError("model", "couple experiments use the rig model");
            if (p && !(*p >= 0.0 && *p <= 1.0)) throw ConfigError("p", "must lie in [0,1]");
            for (Vertex v : n) {
                CouplingParams params;
                params.n = v;
                params.m = resolved_m(v);
                params.omega_c = omega_c;
                params.regime = regime;
                try {
                    ThresholdQuery q;
                    q.model = Model::rig;
                    q.n = v;
                    q.alpha = alpha;
                    q.m = m;
                    q.omega = omega;
                    params.p = p ? *p : threshold_p(q);
                    params.validate();
                } catch (const std::exception& e) {
                    throw ConfigError(p ? "p" : "omega", e.what());
                }
            }
            break;
        }
        case ExperimentKind::lemma7: {
            for (Vertex v : n) {
                if (resolved_m(v) >= v) throw ConfigError("alpha", "lemma7 requires m < n");
                if (v >= 3 && omega < std::log(std::log(static_cast<double>(v)))) {
                    throw ConfigError("omega", "must be at least ln ln n");
                }
            }
            if (samples == 0) throw ConfigError("samples", "must be positive");
            break;
        }
    }
}

ExperimentConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
    reject_unknown(doc, "", {"name", "kind", "model", "n", "alpha", "m", "k", "properties", "grid", "samples", "seed",
                             "hamilton", "formula_order", "output_dir", "threads", "exploratory", "note", "omega",
                             "p", "coupling"});
    ExperimentConfig c;
    if (doc.contains("name")) c.name = get_field<std::string>(doc, "name");
    if (doc.contains("kind")) c.kind = parse_kind(get_field<std::string>(doc, "kind"));
    if (doc.contains("model")) {
        try {
            c.model = parse_model(get_field<std::string>(doc, "model"));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model", e.what());
        }
    }
    if (doc.contains("n")) {
        const json& n = doc.at("n");
        if (n.is_number_integer()) {
            c.n.push_back(get_field<Vertex>(doc, "n"));
        } else {
            c.n = get_field<std::vector<Vertex>>(doc, "n");
        }
    }
    if (doc.contains("alpha")) c.alpha = get_field<double>(doc, "alpha");
    if (doc.contains("m")) c.m = static_cast<Feature>(get_count(doc, "m"));
    if (doc.contains("k")) c.k = get_count(doc, "k");
    if (doc.contains("properties")) {
        for (const auto& name : get_field<std::vector<std::string>>(doc, "properties")) {
            try {
                c.properties.push_back(parse_property(name));
            } catch (const std::invalid_argument& e) {
                throw ConfigError("properties", e.what());
            }
        }
    }
    if (doc.contains("grid")) c.grid = get_field<std::vector<double>>(doc, "grid");
    if (doc.contains("samples")) c.samples = get_count(doc, "samples");
    if (doc.contains("seed")) c.seed = get_field<std::uint64_t>(doc, "seed");
    if (doc.contains("hamilton")) {
        const json& h = doc.at("hamilton");
        if (!h.is_object()) throw ConfigError("hamilton", "expected an object");
        reject_unknown(h, "hamilton.", {"restarts", "rotations_per_vertex", "exact_max_n", "exact_node_limit", "seed"});
        if (h.contains("restarts")) c.budget.restarts = get_count(h, "restarts", "hamilton.");
        if (h.contains("rotations_per_vertex")) {
            c.budget.rotations_per_vertex = get_count(h, "rotations_per_vertex", "hamilton.");
        }
        if (h.contains("exact_max_n")) c.budget.exact_max_n = get_count(h, "exact_max_n", "hamilton.");
        if (h.contains("exact_node_limit")) c.budget.exact_node_limit = get_count(h, "exact_node_limit", "hamilton.");
        if (h.contains("seed")) c.budget.seed = get_field<std::uint64_t>(h, "seed", "hamilton.");
    }
    if (doc.contains("formula_order")) c.formula_order = get_count(doc, "formula_order");
    if (doc.contains("output_dir")) c.output_dir = get_field<std::string>(doc, "output_dir");
    if (doc.contains("threads")) c.threads = static_cast<int>(get_count(doc, "threads"));
    if (doc.contains("exploratory")) c.exploratory = get_field<bool>(doc, "exploratory");
    if (doc.contains("note")) c.note = get_field<std::string>(doc, "note");
    if (doc.contains("omega")) c.omega = get_field<double>(doc, "omega");
    if (doc.contains("p")) c.p = get_field<double>(doc, "p");
    if (doc.contains("coupling")) {
        const json& cp = doc.at("coupling");
        if (!cp.is_object()) throw ConfigError("coupling", "expected an object");
        reject_unknown(cp, "coupling.", {"omega_c", "regime"});
        if (cp.contains("omega_c")) c.omega_c = get_field<double>(cp, "omega_c", "coupling.");
        if (cp.contains("regime")) {
            try {
                c.regime = parse_regime(get_field<std::string>(cp, "regime", "coupling."));
            } catch (const ConfigError&) {
                throw;
            } catch (const std::invalid_argument& e) {
                throw ConfigError("coupling.regime", e.what());
            }
        }
    }
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json doc;
    doc["name"] = c.name;
    doc["kind"] = to_string(c.kind);
    doc["model"] = to_string(c.model);
    doc["n"] = c.n;
    if (c.alpha) doc["alpha"] = *c.alpha;
    if (c.m) doc["m"] = *c.m;
    doc["k"] = c.k;
    json props = json::array();
    for (PropertyKind pk : c.properties) props.push_back(to_string(pk));
    doc["properties"] = props;
    doc["grid"] = c.grid;
    doc["samples"] = c.samples;
    doc["seed"] = c.seed;
    doc["hamilton"] = {{"restarts", c.budget.restarts},
                       {"rotations_per_vertex", c.budget.rotations_per_vertex},
                       {"exact_max_n", c.budget.exact_max_n},
                       {"exact_node_limit", c.budget.exact_node_limit},
                       {"seed", c.budget.seed}};
    if (c.formula_order) doc["formula_order"] = *c.formula_order;
    if (c.output_dir) doc["output_dir"] = *c.output_dir;
    doc["threads"] = c.threads;
    doc["exploratory"] = c.exploratory;
    if (!c.note.empty()) doc["note"] = c.note;
    doc["omega"] = c.omega;
    if (c.p) doc["p"] = *c.p;
    json coupling = json::object();
    if (c.omega_c) coupling["omega_c"] = *c.omega_c;
    if (c.regime) coupling["regime"] = to_string(*c.regime);
    if (!coupling.empty()) doc["coupling"] = coupling;
    return doc;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    if (doc.is_object() && doc.contains("manifest_version")) {
        if (!doc.contains("config")) throw ConfigError("config", "manifest has no embedded config");
        return config_from_json(doc.at("config"));
    }
    return config_from_json(doc);
}

namespace {

const std::vector<double> kDefaultGrid{-6, -4, -2, -1, 0, 1, 2, 4, 6};

ExperimentConfig sweep_preset(std::string name, double alpha, std::vector<PropertyKind> props, std::size_t k) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.kind = ExperimentKind::sweep;
    c.model = Model::rig;
    c.n = {1000};
    c.alpha = alpha;
    c.k = k;
    c.properties = std::move(props);
    c.grid = kDefaultGrid;
    c.samples = 300;
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"theorem5", "theorem6", "theorem7", "theorem8", "lemma7", "coupling-case1", "coupling-case2",
            "conjecture"};
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    if (name == "theorem5") {
        c = sweep_preset(name, 2.0, {PropertyKind::connectivity}, 1);
    } else if (name == "theorem6") {
        c = sweep_preset(name, 2.0, {PropertyKind::perfect_matching}, 1);
    } else if (name == "theorem7") {
        c = sweep_preset(name, 2.0, {PropertyKind::k_connectivity, PropertyKind::hamilton}, 2);
    } else if (name == "theorem8") {
        c = sweep_preset(name, 2.0 / 3.0, {PropertyKind::k_connectivity, PropertyKind::hamilton}, 2);
        c.note = "alpha <= 1: the upper side holds at p_k (p_2 for Hamilton) while the lower side is stated at p_1; "
                 "this sweep uses p_k only";
    } else if (name == "lemma7") {
        c.name = name;
        c.kind = ExperimentKind::lemma7;
        c.n = {2000};
        c.m = 200;
        c.omega = 3.0;
        c.samples = 100;
    } else if (name == "coupling-case1") {
        c.name = name;
        c.kind = ExperimentKind::couple;
        c.n = {300};
        c.alpha = 2.0;
        c.omega = 0.0;
        c.samples = 200;
    } else if (name == "coupling-case2") {
        c.name = name;
        c.kind = ExperimentKind::couple;
        c.n = {1000};
        c.alpha = 2.0 / 3.0;
        c.omega = 0.0;
        c.samples = 200;
    } else if (name == "conjecture") {
        c = sweep_preset(name, 0.8, {PropertyKind::hamilton}, 1);
        c.formula_order = 1;
        c.exploratory = true;
        c.note = "exploratory: Hamilton sweep on the p_1 scale for alpha < 1; curves only";
    } else {
        std::string names;
        for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown preset '" + name + "'; available: " + names);
    }
    c.validate();
    return c;
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& config) {
    if (config.output_dir) return *config.output_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
    return "rigsim-out";
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(out_dir);
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
    RunResult result;
    auto emit = [&](const std::string& file, const std::string& content) {
        const auto path = out_dir / file;
        write_file_atomically(path, content);
        result.outputs.push_back(path);
    };

    switch (config.kind) {
        case ExperimentKind::sweep: {
            std::ostringstream csv, plot;
            bool header = true;
            for (Vertex n : config.n) {
                const SweepCurve curve = sweep(config.sweep_spec(n), config.threads);
                std::ostringstream part;
                write_sweep_csv(part, curve);
                std::string text = part.str();
                if (!header) text.erase(0, text.find('\n') + 1);
                header = false;
                csv << text;
                plot << "# n=" << n << '\n';
                write_sweep_plot(plot, curve);
            }
            emit(config.name + ".csv", csv.str());
            emit(config.name + ".dat", plot.str());
            break;
        }
        case ExperimentKind::couple: {
            std::ostringstream summary;
            for (Vertex n : config.n) {
                CouplingParams params;
                params.n = n;
                params.m = config.resolved_m(n);
                params.omega_c = config.omega_c;
                params.regime = config.regime;
                if (config.p) {
                    params.p = *config.p;
                } else {
                    ThresholdQuery q;
                    q.model = Model::rig;
                    q.n = n;
                    q.alpha = config.alpha;
                    q.m = config.m;
                    q.omega = config.omega;
                    params.p = threshold_p(q);
                }
                const CouplingRun run = run_coupling(params, config.samples, config.seed);
                std::ostringstream csv;
                write_coupling_csv(csv, run);
                const std::string suffix = config.n.size() > 1 ? "-n" + std::to_string(n) : "";
                emit(config.name + suffix + ".csv", csv.str());
                write_coupling_summary(summary, run);
            }
            emit(config.name + ".summary.txt", summary.str());
            break;
        }
        case ExperimentKind::lemma7: {
            std::ostringstream csv;
            bool header = true;
            for (Vertex n : config.n) {
                const auto report = lemma7_mindeg_check(n, config.resolved_m(n), config.omega, config.samples,
                                                        config.seed);
                std::ostringstream part;
                write_lemma7_csv(part, report);
                std::string text = part.str();
                if (!header) text.erase(0, text.find('\n') + 1);
                header = false;
                csv << text;
            }
            emit(config.name + ".csv", csv.str());
            break;
        }
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest;
    manifest["manifest_version"] = 1;
    manifest["tool"] = "rigsim";
    manifest["version"] = kVersion;
    manifest["config"] = config_to_json(config);
    manifest["seed"] = config.seed;
    manifest["wall_time_seconds"] = result.wall_seconds;
    json outputs = json::array();
    for (const auto& p : result.outputs) outputs.push_back(p.filename().string());
    manifest["outputs"] = outputs;
    if (config.exploratory) manifest["exploratory"] = true;
    result.manifest = out_dir / (config.name + ".manifest.json");
    write_file_atomically(result.manifest, manifest.dump(2) + "\n");
    return result;
}

}  // namespace rigsim
