#ifndef CAUSALWB_EXPERIMENT_HPP
#define CAUSALWB_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace causalwb {

enum class Discretization { None, Quartile, KMeans };
enum class Imputation { None, Mode, ParentConditional };
enum class Algorithm { HillClimb, Tabu, PcStable };

std::string to_string(Discretization d);
std::string to_string(Imputation i);
std::string to_string(Algorithm a);

/// One pipeline run. Paths are kept as written in the config (for the report
/// echo) and resolved against `base_dir` when opened.
struct ExperimentSpec {
    std::string name;
    std::string data;
    std::string schema;
    std::string reference;  // optional true graph; empty for none
    char delimiter = ',';
    Discretization discretization = Discretization::Quartile;
    int bins = 4;
    Imputation imputation = Imputation::None;
    Algorithm algorithm = Algorithm::HillClimb;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    std::filesystem::path base_dir;
};

/// Structured key-value config:
///
///   [defaults]
///   data = sample.csv
///   schema = sample.schema
///   reference = truth.graph
///
///   [hc-quartile]
///   algorithm = hc
///   discretization = quartile
///   params = max_parents=3
///
/// Every section other than [defaults] is a run, inheriting the defaults.
/// Throws Error(ConfigError) on unknown keys or invalid values.
std::vector<ExperimentSpec> parse_matrix_config(const std::string& text, const std::filesystem::path& base_dir = {});
std::vector<ExperimentSpec> read_matrix_config(const std::filesystem::path& path);

/// Throws Error(ConfigError) when a parameter is unknown to the algorithm or malformed.
void validate_params(Algorithm algorithm, const std::map<std::string, std::string>& params);
/// "a=1 b=2" or "a=1,b=2".
std::map<std::string, std::string> parse_params(const std::string& text);

struct RunOutcome {
    std::string name;
    bool ok = false;
    std::string stage;  // failing stage when !ok
    std::string error;
    nlohmann::ordered_json report;
    double seconds = 0.0;
};

/// load, discretize, impute, learn, cpdag, persist, score, evaluate, report.
/// Writes learnt.graph, cpdag.graph and report.json into `out_dir`, plus
/// timing.json holding the wall-clock time so the report itself stays
/// reproducible. Module errors are caught and returned with the stage name.
RunOutcome run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir);

/// Runs every spec into out_dir/<name>/ with up to `workers` concurrent runs
/// and writes out_dir/summary.tsv with one row per spec in config order.
std::vector<RunOutcome> run_matrix(const std::vector<ExperimentSpec>& specs, const std::filesystem::path& out_dir,
                                   int workers);

std::vector<std::string> summary_columns();
std::string format_summary(const std::vector<RunOutcome>& outcomes);

}  // namespace causalwb

#endif  // CAUSALWB_EXPERIMENT_HPP
