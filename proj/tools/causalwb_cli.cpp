#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "causalwb/averaging.hpp"
#include "causalwb/bn.hpp"
#include "causalwb/cross_validation.hpp"
#include "causalwb/dataset.hpp"
#include "causalwb/errors.hpp"
#include "causalwb/experiment.hpp"
#include "causalwb/graph.hpp"
#include "causalwb/graph_io.hpp"
#include "causalwb/inference.hpp"
#include "causalwb/metrics.hpp"
#include "causalwb/parallel.hpp"
#include "causalwb/transform.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace causalwb;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

char delimiter_of(const std::string& d) {
    if (d == "tab" || d == "\\t") return '\t';
    if (d.size() != 1) throw Error(ErrorCode::ConfigError, "delimiter must be one character or 'tab'");
    return d[0];
}

// Add `entry` under results.<command> of an existing (or new) JSON report.
void append_report(const std::string& path, const std::string& command, const ordered_json& entry) {
    if (path.empty()) return;
    ordered_json report = ordered_json::object();
    if (fs::exists(path)) {
        std::ifstream in(path);
        report = ordered_json::parse(in);
        if (!report.is_object()) throw Error(ErrorCode::IoError, "report '" + path + "' is not a JSON object");
    }
    report["results"][command].push_back(entry);
    std::ofstream out(path, std::ios::binary);
    out << report.dump(2) << "\n";
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
}

void emit(const std::string& report, const std::string& command, const ordered_json& entry) {
    std::cout << entry.dump(2) << "\n";
    append_report(report, command, entry);
}

Dag load_dag(const std::string& path) {
    auto g = read_graph_file(path);
    if (g.only_directed()) return Dag(std::move(g));
    return pdag_to_dag_extension(map_circle_marks(g));
}

NodeIndex node_of(const Dag& d, const std::string& name) {
    auto v = d.graph().find(name);
    if (!v) throw Error(ErrorCode::InvalidArgument, "no node named '" + name + "'");
    return *v;
}

int state_of(const DiscreteBn& bn, NodeIndex v, const std::string& s) {
    const auto& states = bn.states(v);
    auto it = std::find(states.begin(), states.end(), s);
    if (it != states.end()) return static_cast<int>(it - states.begin());
    throw Error(ErrorCode::InvalidArgument, "node '" + bn.labels()[static_cast<std::size_t>(v)] +
                                                "' has no state '" + s + "'");
}

ordered_json distribution(const DiscreteBn& bn, NodeIndex v, const std::vector<double>& p) {
    ordered_json j = ordered_json::object();
    for (std::size_t k = 0; k < p.size(); ++k) j[bn.states(v)[k]] = p[k];
    return j;
}

struct BnInputs {
    std::string graph, data, schema, delimiter = ",", report;
    double alpha = 1.0;
};

void add_bn_options(CLI::App* cmd, BnInputs& in) {
    cmd->add_option("--graph", in.graph, "DAG (a PDAG is replaced by one of its extensions)")->required();
    cmd->add_option("--data", in.data, "categorical data file")->required();
    cmd->add_option("--schema", in.schema, "schema file")->required();
    cmd->add_option("--delimiter", in.delimiter, "field delimiter");
    cmd->add_option("--alpha", in.alpha, "CPT smoothing");
    cmd->add_option("--report", in.report, "JSON report to append the result to");
}

DiscreteBn fit(const BnInputs& in, Dag& dag) {
    dag = load_dag(in.graph);
    const auto data = read_categorical(in.data, in.schema, delimiter_of(in.delimiter));
    return fit_cpts(dag, data, in.alpha);
}

// Random CPTs that put most mass on a state tracking the mean parent state.
DiscreteBn random_bn(const Dag& dag, std::size_t states, double strength, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::string>> names(dag.size(), default_state_labels(static_cast<int>(states)));
    std::vector<Cpt> cpts;
    for (NodeIndex v = 0; v < static_cast<NodeIndex>(dag.size()); ++v) {
        Cpt c;
        c.child = v;
        c.parents = dag.parents(v);
        c.arity = states;
        c.parent_arities.assign(c.parents.size(), states);
        std::size_t q = 1;
        for (std::size_t k = 0; k < c.parents.size(); ++k) q *= states;
        const bool flip = rng() % 2 == 1;
        for (std::size_t j = 0; j < q; ++j) {
            std::size_t sum = 0;
            for (std::size_t rest = j, k = 0; k < c.parents.size(); ++k, rest /= states) sum += rest % states;
            std::size_t peak = c.parents.empty() ? rng() % states
                                                 : (2 * sum + c.parents.size()) / (2 * c.parents.size());
            if (flip) peak = states - 1 - peak;
            for (std::size_t k = 0; k < states; ++k) {
                c.table.push_back(k == peak ? strength : (1.0 - strength) / static_cast<double>(states - 1));
            }
        }
        cpts.push_back(std::move(c));
    }
    return DiscreteBn(dag, std::move(names), std::move(cpts));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal structure learning workbench"};
    app.require_subcommand(1);
    int code = 0;

    // discretize
    std::string d_data, d_schema, d_out, d_out_schema, d_method = "quartile", d_delim = ",";
    int d_bins = 4;
    auto* discretize_cmd = app.add_subcommand("discretize", "Bin continuous columns");
    discretize_cmd->add_option("--data", d_data)->required();
    discretize_cmd->add_option("--schema", d_schema)->required();
    discretize_cmd->add_option("--method", d_method)->check(CLI::IsMember({"quartile", "kmeans"}));
    discretize_cmd->add_option("--bins", d_bins);
    discretize_cmd->add_option("--delimiter", d_delim);
    discretize_cmd->add_option("--out", d_out)->required();
    discretize_cmd->add_option("--out-schema", d_out_schema)->required();
    discretize_cmd->callback([&] {
        const char delim = delimiter_of(d_delim);
        const auto t = read_table_file(d_data, read_schema_file(d_schema), delim);
        DiscretizationSpec spec;
        spec.method = d_method == "kmeans" ? DiscretizationMethod::KMeans : DiscretizationMethod::Quartile;
        spec.k = d_bins;
        const auto out = discretize_table(t, spec);
        write_table_file(out, d_out, delim);
        write_schema_file(schema_of(out), d_out_schema);
    });

    // impute
    std::string i_data, i_schema, i_out, i_out_schema, i_graph, i_strategy = "mode", i_delim = ",";
    auto* impute_cmd = app.add_subcommand("impute", "Fill missing categorical cells");
    impute_cmd->add_option("--data", i_data)->required();
    impute_cmd->add_option("--schema", i_schema)->required();
    impute_cmd->add_option("--strategy", i_strategy)->check(CLI::IsMember({"mode", "parent-conditional"}));
    impute_cmd->add_option("--graph", i_graph, "graph supplying parents for parent-conditional");
    impute_cmd->add_option("--delimiter", i_delim);
    impute_cmd->add_option("--out", i_out)->required();
    impute_cmd->add_option("--out-schema", i_out_schema);
    impute_cmd->callback([&] {
        const char delim = delimiter_of(i_delim);
        const auto data = read_categorical(i_data, i_schema, delim);
        CategoricalDataset out;
        if (i_strategy == "mode") {
            out = impute_missing(data, ImputeStrategy::Mode);
        } else {
            if (i_graph.empty()) throw Error(ErrorCode::ConfigError, "--graph is required for parent-conditional");
            const auto g = read_graph_file(i_graph);
            out = impute_missing(data, ImputeStrategy::ParentConditionalMode, &g);
        }
        const auto t = to_table(out);
        write_table_file(t, i_out, delim);
        if (!i_out_schema.empty()) write_schema_file(schema_of(t), i_out_schema);
    });

    // learn
    ExperimentSpec l_spec;
    l_spec.name = "learn";
    l_spec.discretization = Discretization::None;
    std::string l_alg = "hc", l_disc = "none", l_imp = "none", l_params, l_out, l_delim = ",";
    auto* learn_cmd = app.add_subcommand("learn", "Run one learning pipeline into a directory");
    learn_cmd->add_option("--data", l_spec.data)->required();
    learn_cmd->add_option("--schema", l_spec.schema)->required();
    std::optional<std::size_t> l_max_parents;
    learn_cmd->add_option("--algorithm,--algo", l_alg)->check(CLI::IsMember({"hc", "tabu", "pc-stable"}));
    learn_cmd->add_option("--params", l_params, "key=value list, e.g. alpha=0.01,max_conditioning=2");
    learn_cmd->add_option("--max-parents", l_max_parents, "shorthand for params max_parents=N");
    learn_cmd->add_option("--discretization", l_disc)->check(CLI::IsMember({"none", "quartile", "kmeans"}));
    learn_cmd->add_option("--bins", l_spec.bins);
    learn_cmd->add_option("--imputation", l_imp)->check(CLI::IsMember({"none", "mode", "parent-conditional"}));
    learn_cmd->add_option("--reference", l_spec.reference, "true graph for metrics");
    learn_cmd->add_option("--seed", l_spec.seed);
    learn_cmd->add_option("--delimiter", l_delim);
    learn_cmd->add_option("--out", l_out, "output directory")->required();
    learn_cmd->callback([&] {
        l_spec.delimiter = delimiter_of(l_delim);
        l_spec.algorithm = l_alg == "tabu" ? Algorithm::Tabu : l_alg == "pc-stable" ? Algorithm::PcStable
                                                                                    : Algorithm::HillClimb;
        l_spec.discretization = l_disc == "quartile" ? Discretization::Quartile
                                : l_disc == "kmeans" ? Discretization::KMeans
                                                     : Discretization::None;
        l_spec.imputation = l_imp == "mode"                 ? Imputation::Mode
                            : l_imp == "parent-conditional" ? Imputation::ParentConditional
                                                            : Imputation::None;
        l_spec.params = parse_params(l_params);
        if (l_max_parents) l_spec.params["max_parents"] = std::to_string(*l_max_parents);
        validate_params(l_spec.algorithm, l_spec.params);
        const auto outcome = run_experiment(l_spec, l_out);
        if (!outcome.ok) {
            std::cerr << "error: stage " << outcome.stage << ": " << outcome.error << "\n";
            code = kExitFailed;
        }
    });

    // average
    std::vector<std::string> a_graphs;
    std::string a_dir, a_out, a_bidirected, a_order;
    std::size_t a_theta = 0;
    bool a_published = false;
    auto* average_cmd = app.add_subcommand("average", "Consensus graph over a set of learnt graphs");
    average_cmd->add_option("files", a_graphs, "graph files");
    average_cmd->add_option("--graphs", a_dir, "directory of .graph files");
    average_cmd->add_option("--theta", a_theta, "minimum edge count (default ceil(n/3))");
    average_cmd->add_flag("--paper-thetas", a_published, "use the published thresholds for known group sizes");
    average_cmd->add_option("--node-order", a_order, "comma-separated tie-break order");
    average_cmd->add_option("--out", a_out)->required();
    average_cmd->add_option("--bidirected", a_bidirected, "also write the bidirected-edge average here");
    average_cmd->callback([&] {
        std::vector<std::string> files = a_graphs;
        if (!a_dir.empty()) {
            std::vector<std::string> found;
            for (const auto& e : fs::directory_iterator(a_dir)) {
                if (e.is_regular_file() && e.path().extension() == ".graph") found.push_back(e.path().string());
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        }
        if (files.empty()) throw Error(ErrorCode::ConfigError, "no input graphs");
        std::vector<MixedGraph> graphs;
        for (const auto& f : files) graphs.push_back(read_graph_file(f));
        AverageConfig cfg;
        cfg.theta = a_theta ? a_theta : default_theta(graphs.size(), a_published);
        if (!a_order.empty()) {
            std::stringstream ss(a_order);
            for (std::string item; std::getline(ss, item, ',');) cfg.node_order.push_back(item);
        }
        const auto res = average_graphs(graphs, cfg);
        auto comments = res.annotations();
        comments.insert(comments.begin(), "theta: " + std::to_string(cfg.theta) + " of " +
                                              std::to_string(graphs.size()) + " graphs");
        write_graph_file(res.dag.graph(), a_out, comments);
        for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
        if (!a_bidirected.empty()) {
            const auto bi = average_bidirected(graphs, cfg);
            std::vector<std::string> notes;
            for (const auto& [pair, n] : bi.near_miss) {
                notes.push_back("near miss: " + bi.nodes[static_cast<std::size_t>(pair.first)] + " <-> " +
                                bi.nodes[static_cast<std::size_t>(pair.second)] + " : " + std::to_string(n));
            }
            write_graph_file(bi.graph(), a_bidirected, notes);
        }
    });

    // evaluate
    std::string e_truth, e_learnt, e_report;
    std::size_t e_states = 4;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare a learnt graph against a true graph");
    evaluate_cmd->add_option("--truth", e_truth)->required();
    evaluate_cmd->add_option("--learnt", e_learnt)->required();
    evaluate_cmd->add_option("--states", e_states, "states per node for the free-parameter count");
    evaluate_cmd->add_option("--report", e_report);
    evaluate_cmd->callback([&] {
        const auto m = evaluate(read_graph_file(e_truth), read_graph_file(e_learnt), e_states);
        ordered_json j;
        j["truth"] = e_truth;
        j["learnt"] = e_learnt;
        j["shd"] = m.shd;
        j["precision"] = m.precision;
        j["recall"] = m.recall;
        j["f1"] = m.f1;
        j["bsf"] = m.bsf ? ordered_json(*m.bsf) : ordered_json(nullptr);
        j["tp"] = m.confusion.tp;
        j["tn"] = m.confusion.tn;
        j["fp"] = m.confusion.fp;
        j["fn"] = m.confusion.fn;
        j["edges"] = m.edges;
        j["free_params"] = m.free_params ? ordered_json(*m.free_params) : ordered_json(nullptr);
        j["subgraphs"] = m.subgraphs;
        j["max_in_degree"] = m.max_in_degree;
        emit(e_report, "evaluate", j);
    });

    // infer
    BnInputs inf;
    std::string inf_target;
    std::vector<std::string> inf_evidence;
    auto* infer_cmd = app.add_subcommand("infer", "Posterior marginal of a node");
    add_bn_options(infer_cmd, inf);
    infer_cmd->add_option("--target", inf_target)->required();
    infer_cmd->add_option("--evidence", inf_evidence, "NODE=STATE, repeatable")->delimiter(',');
    infer_cmd->callback([&] {
        Dag dag;
        const auto bn = fit(inf, dag);
        Evidence ev;
        ordered_json ev_json = ordered_json::object();
        for (const auto& item : inf_evidence) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "evidence '" + item + "' is not NODE=STATE");
            const auto v = node_of(dag, item.substr(0, eq));
            ev[v] = state_of(bn, v, item.substr(eq + 1));
            ev_json[item.substr(0, eq)] = item.substr(eq + 1);
        }
        const auto t = node_of(dag, inf_target);
        ordered_json j;
        j["target"] = inf_target;
        j["evidence"] = ev_json;
        j["distribution"] = distribution(bn, t, marginal(bn, t, ev));
        emit(inf.report, "infer", j);
    });

    // intervene
    BnInputs itv;
    std::string itv_do, itv_target;
    auto* intervene_cmd = app.add_subcommand("intervene", "Effect of do(node) at its lowest vs highest state");
    add_bn_options(intervene_cmd, itv);
    intervene_cmd->add_option("--do", itv_do)->required();
    intervene_cmd->add_option("--target", itv_target)->required();
    intervene_cmd->callback([&] {
        Dag dag;
        const auto bn = fit(itv, dag);
        const auto x = node_of(dag, itv_do);
        const auto y = node_of(dag, itv_target);
        const auto eff = intervention_effect(bn, x, y);
        ordered_json j;
        j["do"] = itv_do;
        j["target"] = itv_target;
        j["low_state"] = bn.states(x).front();
        j["high_state"] = bn.states(x).back();
        j["distribution_low"] = distribution(bn, y, eff.dist_low);
        j["distribution_high"] = distribution(bn, y, eff.dist_high);
        j["effect"] = eff.effect;
        emit(itv.report, "intervene", j);
    });

    // sensitivity
    BnInputs sen;
    std::string sen_target;
    double sen_epsilon = 0.05;
    auto* sensitivity_cmd = app.add_subcommand("sensitivity", "Perturbation sensitivity of a target");
    add_bn_options(sensitivity_cmd, sen);
    sensitivity_cmd->add_option("--target", sen_target)->required();
    sensitivity_cmd->add_option("--epsilon", sen_epsilon);
    sensitivity_cmd->callback([&] {
        Dag dag;
        const auto bn = fit(sen, dag);
        const auto t = node_of(dag, sen_target);
        const auto s = sensitivity(bn, t, sen_epsilon);
        ordered_json scores = ordered_json::object();
        for (std::size_t v = 0; v < s.size(); ++v) scores[bn.labels()[v]] = s[v];
        ordered_json j;
        j["target"] = sen_target;
        j["epsilon"] = sen_epsilon;
        j["sensitivity"] = scores;
        emit(sen.report, "sensitivity", j);
    });

    // cv
    BnInputs cvi;
    CvConfig cv_cfg;
    auto* cv_cmd = app.add_subcommand("cv", "k-fold per-node prediction accuracy");
    add_bn_options(cv_cmd, cvi);
    cv_cmd->add_option("--k", cv_cfg.k);
    cv_cmd->add_option("--seed", cv_cfg.seed);
    cv_cmd->callback([&] {
        const auto dag = load_dag(cvi.graph);
        const auto data = read_categorical(cvi.data, cvi.schema, delimiter_of(cvi.delimiter));
        cv_cfg.alpha_smooth = cvi.alpha;
        const auto res = cross_validate(dag, data, cv_cfg);
        ordered_json acc = ordered_json::object();
        for (std::size_t v = 0; v < res.nodes.size(); ++v) acc[res.nodes[v]] = res.node_accuracy[v];
        ordered_json j;
        j["k"] = cv_cfg.k;
        j["seed"] = cv_cfg.seed;
        j["node_accuracy"] = acc;
        j["mean"] = res.mean;
        j["min"] = res.min;
        j["max"] = res.max;
        emit(cvi.report, "cv", j);
    });

    // matrix
    std::string m_config, m_out;
    int m_workers = 0;
    auto* matrix_cmd = app.add_subcommand("matrix", "Run every experiment in a config file");
    matrix_cmd->add_option("--config", m_config)->required();
    matrix_cmd->add_option("--out", m_out)->required();
    matrix_cmd->add_option("--workers", m_workers, "concurrent runs (default CAUSALWB_WORKERS or core count)");
    matrix_cmd->callback([&] {
        const auto specs = read_matrix_config(m_config);
        const auto outcomes = run_matrix(specs, m_out, m_workers > 0 ? m_workers : default_workers());
        for (const auto& o : outcomes) {
            if (!o.ok) {
                std::cerr << "run " << o.name << " failed at stage " << o.stage << ": " << o.error << "\n";
                code = kExitFailed;
            }
        }
        std::cout << format_summary(outcomes);
    });

    // sample
    std::string s_graph, s_out, s_out_schema;
    std::size_t s_rows = 500, s_states = 4;
    std::uint64_t s_seed = 1;
    double s_strength = 0.7, s_noise = 0.3, s_missing = 0.0;
    bool s_continuous = false;
    auto* sample_cmd = app.add_subcommand("sample", "Draw a synthetic dataset from a DAG with random CPTs");
    sample_cmd->add_option("--graph", s_graph)->required();
    sample_cmd->add_option("--rows", s_rows);
    sample_cmd->add_option("--states", s_states);
    sample_cmd->add_option("--strength", s_strength, "probability of the favoured state");
    sample_cmd->add_option("--seed", s_seed);
    sample_cmd->add_flag("--continuous", s_continuous, "emit state index plus Gaussian noise");
    sample_cmd->add_option("--noise", s_noise, "noise standard deviation for --continuous");
    sample_cmd->add_option("--missing", s_missing, "fraction of cells replaced by '?'");
    sample_cmd->add_option("--out", s_out)->required();
    sample_cmd->add_option("--out-schema", s_out_schema)->required();
    sample_cmd->callback([&] {
        const auto dag = load_dag(s_graph);
        const auto bn = random_bn(dag, s_states, s_strength, s_seed);
        const auto data = forward_sample(bn, s_rows, s_seed + 1);
        std::mt19937_64 rng(s_seed + 2);
        std::normal_distribution<double> noise(0.0, s_noise);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Table t;
        for (std::size_t c = 0; c < data.cols(); ++c) {
            const auto& col = data.column(c);
            if (s_continuous) {
                ContinuousColumn out{col.name, {}};
                for (auto v : col.values) {
                    const double x = std::round((v + noise(rng)) * 1e4) / 1e4;
                    out.values.push_back(unit(rng) < s_missing ? std::nullopt : std::optional<double>(x));
                }
                t.columns.emplace_back(std::move(out));
            } else {
                CategoricalColumn out = col;
                for (auto& v : out.values) {
                    if (unit(rng) < s_missing) v = kMissing;
                }
                t.columns.emplace_back(std::move(out));
            }
        }
        write_table_file(t, s_out);
        write_schema_file(schema_of(t), s_out_schema);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConfigError ? kExitUsage : kExitFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return code;
}
