#ifndef RIGSIM_EXPERIMENT_HPP
#define RIGSIM_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigsim/coupling.hpp"
#include "rigsim/properties.hpp"
#include "rigsim/thresholds.hpp"

namespace rigsim {

inline constexpr const char* kVersion = "0.1.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "RIGSIM_OUTPUT_DIR";

/// Invalid experiment configuration; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const { return field_; }

private:
    std::string field_;
};

enum class ExperimentKind { sweep, couple, lemma7 };

[[nodiscard]] std::string to_string(ExperimentKind k);

struct ExperimentConfig {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::sweep;
    Model model = Model::rig;
    std::vector<Vertex> n;
    std::optional<double> alpha;
    std::optional<Feature> m;
    std::size_t k = 1;
    std::vector<PropertyKind> properties;
    std::vector<double> grid;
    std::size_t samples = 300;
    std::uint64_t seed = 1;
    HamiltonBudget budget;
    std::optional<std::size_t> formula_order;
    std::optional<std::string> output_dir;
    int threads = 0;
    bool exploratory = false;
    std::string note;

    // couple / lemma7
    double omega = 0.0;
    std::optional<double> p;
    std::optional<double> omega_c;
    std::optional<Regime> regime;

    /// Throws ConfigError naming the field.
    void validate() const;
    [[nodiscard]] SweepSpec sweep_spec(Vertex n_value) const;
    [[nodiscard]] Feature resolved_m(Vertex n_value) const;
};

/// Strict parse: unknown keys and type mismatches are ConfigErrors.
ExperimentConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Reads a config file, or a run manifest (its embedded "config" is used).
ExperimentConfig load_config(const std::filesystem::path& path);

/// Throws std::invalid_argument listing the available names.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct RunResult {
    std::vector<std::filesystem::path> outputs;
    std::filesystem::path manifest;
    double wall_seconds = 0.0;
};

/// Runs the configured pipeline and writes CSV files plus
/// "<name>.manifest.json" into `out_dir` (created if missing).
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// config.output_dir, else $RIGSIM_OUTPUT_DIR, else "rigsim-out".
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace rigsim

#endif  // RIGSIM_EXPERIMENT_HPP
