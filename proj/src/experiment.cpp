#include "causalwb/experiment.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "causalwb/dataset.hpp"
#include "causalwb/errors.hpp"
#include "causalwb/graph.hpp"
#include "causalwb/graph_io.hpp"
#include "causalwb/metrics.hpp"
#include "causalwb/pc_stable.hpp"
#include "causalwb/score.hpp"
#include "causalwb/search.hpp"
#include "causalwb/transform.hpp"

namespace causalwb {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string to_string(Discretization d) {
    switch (d) {
        case Discretization::None: return "none";
        case Discretization::Quartile: return "quartile";
        case Discretization::KMeans: return "kmeans";
    }
    return "?";
}

std::string to_string(Imputation i) {
    switch (i) {
        case Imputation::None: return "none";
        case Imputation::Mode: return "mode";
        case Imputation::ParentConditional: return "parent-conditional";
    }
    return "?";
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::HillClimb: return "hc";
        case Algorithm::Tabu: return "tabu";
        case Algorithm::PcStable: return "pc-stable";
    }
    return "?";
}

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        config_error("'" + key + "' expects a number, got '" + text + "'");
    }
    return value;
}

Discretization parse_discretization(const std::string& v) {
    if (v == "quartile") return Discretization::Quartile;
    if (v == "kmeans") return Discretization::KMeans;
    if (v == "none") return Discretization::None;
    config_error("unknown discretization '" + v + "'");
}

Imputation parse_imputation(const std::string& v) {
    if (v == "mode") return Imputation::Mode;
    if (v == "parent-conditional") return Imputation::ParentConditional;
    if (v == "none") return Imputation::None;
    config_error("unknown imputation '" + v + "'");
}

Algorithm parse_algorithm(const std::string& v) {
    if (v == "hc") return Algorithm::HillClimb;
    if (v == "tabu") return Algorithm::Tabu;
    if (v == "pc-stable") return Algorithm::PcStable;
    config_error("unknown algorithm '" + v + "'");
}

char parse_delimiter(const std::string& v) {
    if (v == "tab" || v == "\\t") return '\t';
    if (v == "comma") return ',';
    if (v == "semicolon") return ';';
    if (v.size() == 1) return v[0];
    config_error("delimiter must be a single character, 'tab', 'comma' or 'semicolon'");
}

void apply_key(ExperimentSpec& s, const std::string& key, const std::string& value) {
    if (key == "data") {
        s.data = value;
    } else if (key == "schema") {
        s.schema = value;
    } else if (key == "reference") {
        s.reference = value;
    } else if (key == "delimiter") {
        s.delimiter = parse_delimiter(value);
    } else if (key == "discretization") {
        s.discretization = parse_discretization(value);
    } else if (key == "bins") {
        s.bins = parse_number<int>(key, value);
        if (s.bins < 2) {
            config_error("'bins' must be at least 2");
        }
    } else if (key == "imputation") {
        s.imputation = parse_imputation(value);
    } else if (key == "algorithm") {
        s.algorithm = parse_algorithm(value);
    } else if (key == "params") {
        s.params = parse_params(value);
    } else if (key == "seed") {
        s.seed = parse_number<std::uint64_t>(key, value);
    } else {
        config_error("unknown key '" + key + "'");
    }
}

fs::path resolve(const ExperimentSpec& s, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() || s.base_dir.empty() ? path : s.base_dir / path;
}

std::size_t param_size(const std::map<std::string, std::string>& params, const std::string& key, std::size_t fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : parse_number<std::size_t>(key, it->second);
}

SearchConfig search_config(const ExperimentSpec& s) {
    SearchConfig cfg;
    cfg.max_iterations = param_size(s.params, "max_iterations", cfg.max_iterations);
    cfg.tabu_length = param_size(s.params, "tabu_length", cfg.tabu_length);
    cfg.max_no_improvement = param_size(s.params, "max_no_improvement", cfg.max_no_improvement);
    if (s.params.contains("max_parents")) {
        cfg.max_parents = param_size(s.params, "max_parents", 0);
    }
    cfg.seed = s.seed;
    return cfg;
}

PcConfig pc_config(const ExperimentSpec& s) {
    PcConfig cfg;
    if (auto it = s.params.find("alpha"); it != s.params.end()) {
        cfg.alpha = parse_number<double>("alpha", it->second);
    }
    if (auto it = s.params.find("max_conditioning"); it != s.params.end()) {
        cfg.max_conditioning = parse_number<int>("max_conditioning", it->second);
    }
    return cfg;
}

ordered_json spec_json(const ExperimentSpec& s) {
    ordered_json j;
    j["data"] = s.data;
    j["schema"] = s.schema;
    j["reference"] = s.reference.empty() ? ordered_json(nullptr) : ordered_json(s.reference);
    j["discretization"] = to_string(s.discretization);
    j["bins"] = s.bins;
    j["imputation"] = to_string(s.imputation);
    j["algorithm"] = to_string(s.algorithm);
    j["params"] = s.params;
    j["seed"] = s.seed;
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    }
}

CategoricalDataset prepare_data(const ExperimentSpec& spec, std::string& stage) {
    stage = "load";
    const auto schema = read_schema_file(resolve(spec, spec.schema));
    auto table = read_table_file(resolve(spec, spec.data), schema, spec.delimiter);

    // Missing cells pass through binning unchanged; imputation then works on states.
    stage = "discretize";
    if (spec.discretization != Discretization::None) {
        DiscretizationSpec ds;
        ds.method = spec.discretization == Discretization::KMeans ? DiscretizationMethod::KMeans
                                                                  : DiscretizationMethod::Quartile;
        ds.k = spec.bins;
        table = discretize_table(table, ds);
    }
    auto data = to_categorical(table);

    stage = "impute";
    if (spec.imputation == Imputation::Mode) {
        data = impute_missing(data, ImputeStrategy::Mode);
    } else if (spec.imputation == Imputation::ParentConditional) {
        if (spec.reference.empty()) {
            throw Error(ErrorCode::ConfigError, "parent-conditional imputation needs a reference graph");
        }
        const auto g = read_graph_file(resolve(spec, spec.reference));
        data = impute_missing(data, ImputeStrategy::ParentConditionalMode, &g);
    }
    return data;
}

MixedGraph class_graph(const MixedGraph& g) {
    if (g.only_directed() && is_acyclic(g)) {
        return dag_to_cpdag(Dag(g));
    }
    return g;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::map<std::string, std::string> parse_params(const std::string& text) {
    std::map<std::string, std::string> out;
    std::string normalized = text;
    for (auto& ch : normalized) {
        if (ch == ',' || ch == ';') {
            ch = ' ';
        }
    }
    std::istringstream in(normalized);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
            config_error("parameter '" + token + "' is not key=value");
        }
        if (!out.emplace(token.substr(0, eq), token.substr(eq + 1)).second) {
            config_error("parameter '" + token.substr(0, eq) + "' given twice");
        }
    }
    return out;
}

void validate_params(Algorithm algorithm, const std::map<std::string, std::string>& params) {
    std::set<std::string> allowed;
    switch (algorithm) {
        case Algorithm::HillClimb: allowed = {"max_iterations", "max_parents"}; break;
        case Algorithm::Tabu: allowed = {"max_iterations", "max_parents", "tabu_length", "max_no_improvement"}; break;
        case Algorithm::PcStable: allowed = {"alpha", "max_conditioning"}; break;
    }
    for (const auto& [key, value] : params) {
        if (!allowed.contains(key)) {
            config_error("parameter '" + key + "' does not apply to " + to_string(algorithm));
        }
        if (key == "alpha") {
            const auto a = parse_number<double>(key, value);
            if (!(a > 0.0 && a < 1.0)) {
                config_error("'alpha' must lie in (0, 1)");
            }
        } else if (key == "max_conditioning") {
            if (parse_number<int>(key, value) < 0) {
                config_error("'max_conditioning' must be non-negative");
            }
        } else if (key == "tabu_length" || key == "max_iterations") {
            if (parse_number<std::size_t>(key, value) == 0) {
                config_error("'" + key + "' must be positive");
            }
        } else {
            parse_number<std::size_t>(key, value);
        }
    }
}

std::vector<ExperimentSpec> parse_matrix_config(const std::string& text, const fs::path& base_dir) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        config_error("line " + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentSpec defaults;
    defaults.base_dir = base_dir;
    if (auto d = tree.get_child_optional("defaults")) {
        for (const auto& [key, node] : *d) {
            apply_key(defaults, key, node.data());
        }
    }
    std::vector<ExperimentSpec> specs;
    for (const auto& [section, node] : tree) {
        if (section == "defaults") {
            continue;
        }
        if (node.empty()) {
            config_error("'" + section + "' is not a section");
        }
        if (section.find_first_of("/\\") != std::string::npos || section == "." || section == "..") {
            config_error("run name '" + section + "' is not a valid directory name");
        }
        ExperimentSpec s = defaults;
        s.name = section;
        for (const auto& [key, value] : node) {
            apply_key(s, key, value.data());
        }
        if (s.data.empty() || s.schema.empty()) {
            config_error("run '" + section + "' needs 'data' and 'schema'");
        }
        validate_params(s.algorithm, s.params);
        specs.push_back(std::move(s));
    }
    if (specs.empty()) {
        config_error("config defines no runs");
    }
    return specs;
}

std::vector<ExperimentSpec> read_matrix_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        config_error("cannot open config '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_matrix_config(buf.str(), path.parent_path());
}

RunOutcome run_experiment(const ExperimentSpec& spec, const fs::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    RunOutcome outcome;
    outcome.name = spec.name;
    std::string stage = "setup";

    ordered_json report;
    report["schema_version"] = 1;
    report["run"] = spec.name;
    report["spec"] = spec_json(spec);
    try {
        fs::create_directories(out_dir);
        validate_params(spec.algorithm, spec.params);

        const auto data = prepare_data(spec, stage);

        stage = "learn";
        MixedGraph learnt;
        ordered_json learner;
        if (spec.algorithm == Algorithm::PcStable) {
            auto res = pc_stable(data, pc_config(spec));
            learner["tests_run"] = res.tests_run;
            learnt = std::move(res.pdag);
        } else {
            const auto cfg = search_config(spec);
            auto res = spec.algorithm == Algorithm::Tabu ? tabu_search(data, cfg) : hill_climb(data, cfg);
            learner["iterations"] = res.iterations;
            learnt = res.dag.graph();
        }

        stage = "cpdag";
        std::optional<Dag> extension;
        MixedGraph cpdag;
        if (learnt.only_directed()) {
            extension = Dag(learnt);
            cpdag = dag_to_cpdag(*extension);
        } else {
            cpdag = learnt;
            apply_orientation_rules(cpdag);
            try {
                extension = pdag_to_dag_extension(cpdag);
                cpdag = dag_to_cpdag(*extension);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NotExtendable) {
                    throw;
                }
            }
        }

        stage = "persist";
        write_graph_file(learnt, out_dir / "learnt.graph");
        write_graph_file(cpdag, out_dir / "cpdag.graph");

        stage = "score";
        ordered_json scores;
        ordered_json dims;
        // Degrees describe the DAG that is scored when one exists.
        const auto deg = degree_stats(extension ? extension->graph() : cpdag);
        dims["nodes"] = cpdag.size();
        dims["rows"] = data.rows();
        dims["edges"] = deg.edge_count;
        dims["subgraphs"] = disjoint_subgraph_count(cpdag);
        dims["max_in_degree"] = deg.max_in_degree;
        dims["max_out_degree"] = deg.max_out_degree;
        if (extension) {
            const auto aligned = align_columns(data, *extension);
            dims["free_params"] = free_parameters(*extension, aligned.arities());
            scores["log_likelihood"] = log_likelihood(*extension, aligned);
            scores["bic"] = bic(*extension, aligned);
        } else {
            dims["free_params"] = nullptr;
            scores["log_likelihood"] = nullptr;
            scores["bic"] = nullptr;
        }

        stage = "evaluate";
        ordered_json metrics = nullptr;
        if (!spec.reference.empty()) {
            const auto truth = class_graph(read_graph_file(resolve(spec, spec.reference)));
            const auto m = evaluate(truth, cpdag);
            metrics = ordered_json::object();
            metrics["reference_edges"] = m.confusion.edges;
            metrics["shd"] = m.shd;
            metrics["precision"] = m.precision;
            metrics["recall"] = m.recall;
            metrics["f1"] = m.f1;
            metrics["bsf"] = m.bsf ? ordered_json(*m.bsf) : ordered_json(nullptr);
            metrics["tp"] = m.confusion.tp;
            metrics["tn"] = m.confusion.tn;
            metrics["fp"] = m.confusion.fp;
            metrics["fn"] = m.confusion.fn;
        }

        stage = "report";
        report["status"] = "ok";
        report["artifacts"] = {{"learnt_graph", "learnt.graph"}, {"cpdag_graph", "cpdag.graph"}};
        report["learner"] = learner;
        report["dimensions"] = dims;
        report["scores"] = scores;
        report["metrics"] = metrics;
        write_text(out_dir / "report.json", report.dump(2) + "\n");
        outcome.ok = true;
    } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.stage = stage;
        outcome.error = e.what();
        report["status"] = "failed";
        report["stage"] = stage;
        report["error"] = e.what();
        try {
            write_text(out_dir / "report.json", report.dump(2) + "\n");
        } catch (const std::exception&) {
        }
    }
    outcome.report = std::move(report);
    outcome.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    try {
        ordered_json timing{{"run", spec.name}, {"wall_clock_seconds", outcome.seconds}};
        write_text(out_dir / "timing.json", timing.dump(2) + "\n");
    } catch (const std::exception&) {
    }
    return outcome;
}

std::vector<RunOutcome> run_matrix(const std::vector<ExperimentSpec>& specs, const fs::path& out_dir, int workers) {
    if (specs.empty()) {
        config_error("matrix needs at least one run");
    }
    fs::create_directories(out_dir);
    std::vector<RunOutcome> outcomes(specs.size());
    const auto count = static_cast<std::ptrdiff_t>(specs.size());
    const int threads = workers < 1 ? 1 : workers;
#pragma omp parallel for num_threads(threads) schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const auto& s = specs[static_cast<std::size_t>(i)];
        outcomes[static_cast<std::size_t>(i)] = run_experiment(s, out_dir / s.name);
    }
    write_text(out_dir / "summary.tsv", format_summary(outcomes));
    return outcomes;
}

std::vector<std::string> summary_columns() {
    return {"run", "status", "algorithm", "discretization", "imputation", "edges", "subgraphs", "free_params",
            "ll", "bic", "shd", "precision", "recall", "f1", "bsf", "stage", "error"};
}

std::string format_summary(const std::vector<RunOutcome>& outcomes) {
    std::string out;
    const auto cols = summary_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out += (i ? "\t" : "") + cols[i];
    }
    out += '\n';
    auto cell = [](const ordered_json& j) -> std::string {
        if (j.is_null()) return "";
        if (j.is_number_float()) return format_number(j.get<double>());
        if (j.is_number()) return j.dump();
        if (j.is_string()) {
            auto s = j.get<std::string>();
            for (auto& ch : s) {
                if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
            }
            return s;
        }
        return j.dump();
    };
    auto at = [](const ordered_json& j, const char* a, const char* b) -> ordered_json {
        if (j.contains(a) && j[a].is_object() && j[a].contains(b)) return j[a][b];
        return nullptr;
    };
    for (const auto& o : outcomes) {
        const auto& r = o.report;
        std::vector<std::string> row{
            o.name,
            o.ok ? "ok" : "failed",
            cell(at(r, "spec", "algorithm")),
            cell(at(r, "spec", "discretization")),
            cell(at(r, "spec", "imputation")),
            cell(at(r, "dimensions", "edges")),
            cell(at(r, "dimensions", "subgraphs")),
            cell(at(r, "dimensions", "free_params")),
            cell(at(r, "scores", "log_likelihood")),
            cell(at(r, "scores", "bic")),
            cell(at(r, "metrics", "shd")),
            cell(at(r, "metrics", "precision")),
            cell(at(r, "metrics", "recall")),
            cell(at(r, "metrics", "f1")),
            cell(at(r, "metrics", "bsf")),
            o.stage,
            cell(ordered_json(o.error)),
        };
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "\t" : "") + row[i];
        }
        out += '\n';
    }
    return out;
}

}  // namespace causalwb
