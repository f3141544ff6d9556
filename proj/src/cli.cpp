#include "clucert/cli.hpp"

#include "clucert/certainty.hpp"
#include "clucert/dissimilarity.hpp"
#include "clucert/evaluation.hpp"
#include "clucert/fanny.hpp"
#include "clucert/iris.hpp"
#include "clucert/partition.hpp"
#include "csv_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace clucert::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

const char* policy_name(ExponentPolicy policy) {
    switch (policy) {
        case ExponentPolicy::fixed: return "fixed";
        case ExponentPolicy::tune_sd: return "tune_sd";
        case ExponentPolicy::tune_rsm: return "tune_rsm";
    }
    return "?";
}

ExponentPolicy policy_from_name(const std::string& name) {
    if (name == "fixed") return ExponentPolicy::fixed;
    if (name == "tune_sd") return ExponentPolicy::tune_sd;
    if (name == "tune_rsm") return ExponentPolicy::tune_rsm;
    throw_argument("unknown exponent policy '" + name + "'");
}

std::filesystem::path out_path(const RunConfig& config, const std::string& name) {
    return std::filesystem::path(config.out) / name;
}

void ensure_out_dir(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw_ingestion("cannot create output directory '" + config.out + "'");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw_ingestion("cannot write '" + path.string() + "'");
    out << text;
}

void write_manifest(const RunConfig& config) {
    write_text(out_path(config, "manifest.json"), config.to_json());
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig <-> JSON
// ---------------------------------------------------------------------------

std::string RunConfig::to_json() const {
    ordered_json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["input"] = input;
    j["matrix"] = matrix;
    j["scenario"] = scenario;
    j["table"] = table;
    j["column"] = column;
    j["dissimilarity"] = dissimilarity_name(dissimilarity);
    j["clustering"] = cluster_method_name(clustering);
    j["linkage"] = linkage_name(linkage);
    j["clusters"] = clusters;
    j["measure"] = measure_name(measure);
    j["exponent"] = exponent;
    j["policy"] = policy_name(policy);
    j["tune_target"] = tune_target;
    j["seed"] = seed;
    j["replicates"] = replicates;
    j["quantile"] = quantile;
    j["out"] = out;
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw_ingestion(std::string("cannot parse manifest JSON: ") + e.what());
    }
    RunConfig config;
    try {
        config.command = j.at("command").get<std::string>();
        config.input = j.value("input", std::string{});
        config.matrix = j.value("matrix", std::string{});
        config.scenario = j.value("scenario", std::string{});
        config.table = j.value("table", std::string{});
        config.column = j.value("column", std::string{});
        config.dissimilarity = dissimilarity_from_name(j.value("dissimilarity", "euclidean"));
        config.clustering = cluster_method_from_name(j.value("clustering", "hierarchical"));
        config.linkage = linkage_from_name(j.value("linkage", "ward"));
        config.clusters = j.value("clusters", 2);
        config.measure = measure_from_name(j.value("measure", "silhouette"));
        config.exponent = j.value("exponent", 1.0);
        config.policy = policy_from_name(j.value("policy", "fixed"));
        config.tune_target = j.value("tune_target", 0.0);
        config.seed = j.value("seed", std::uint64_t{1});
        config.replicates = j.value("replicates", 0);
        config.quantile = j.value("quantile", 0.05);
        config.out = j.value("out", std::string{"."});
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw_ingestion(std::string("manifest field error: ") + e.what());
    }
    return config;
}

// ---------------------------------------------------------------------------
// Histogram and quantile helpers
// ---------------------------------------------------------------------------

std::vector<int> fixed_histogram(const std::vector<Scalar>& values, int bins) {
    if (bins < 1) throw_argument("histogram needs at least one bin");
    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    for (Scalar x : values) {
        if (!(x >= 0.0 && x <= 1.0))
            throw_validation("histogram value " + detail::fmt_full(x) + " outside [0,1]");
        const int bin = std::min(bins - 1, static_cast<int>(x * bins));
        ++counts[static_cast<std::size_t>(bin)];
    }
    return counts;
}

Scalar sample_quantile(std::vector<Scalar> values, Scalar q) {
    if (values.empty()) throw_argument("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw_argument("quantile must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const Scalar h = q * static_cast<Scalar>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const Scalar w = h - static_cast<Scalar>(lo);
    return (1.0 - w) * values[lo] + w * values[hi];
}

// ---------------------------------------------------------------------------
// certainty
// ---------------------------------------------------------------------------

namespace {

struct PipelineData {
    std::optional<Dataset> dataset;  // absent for matrix-only input
    DissimilarityMatrix matrix;
};

PipelineData load_input(const RunConfig& config) {
    PipelineData data;
    if (!config.matrix.empty()) {
        data.matrix = load_matrix(config.matrix);
        return data;
    }
    if (config.input.empty()) throw_argument("either --input or --matrix is required");
    data.dataset = config.input == "iris" ? iris_dataset() : load_dataset(config.input);
    data.matrix = compute_dissimilarity(*data.dataset, config.dissimilarity);
    return data;
}

Partition cluster_input(const RunConfig& config, const PipelineData& data) {
    switch (config.clustering) {
        case ClusterMethod::pam:
            return pam(data.matrix, config.clusters, config.seed);
        case ClusterMethod::hierarchical:
            return hierarchical(data.matrix, config.clusters, config.linkage);
        case ClusterMethod::kmeans:
            if (!data.dataset) throw_argument("k-means needs feature data, not a matrix file");
            return kmeans(*data.dataset, config.clusters, config.seed);
    }
    throw_argument("unknown clustering method");
}

}  // namespace

void cmd_certainty(const RunConfig& config) {
    if (!(config.quantile > 0.0 && config.quantile < 0.5))
        throw_argument("ambiguity quantile must lie in (0, 0.5)");
    ensure_out_dir(config);

    const PipelineData data = load_input(config);
    const Partition z = cluster_input(config, data);
    const std::vector<int>& groups = data.dataset ? data.dataset->groups : std::vector<int>{};
    const std::optional<Index> hybrid = data.dataset ? data.dataset->hybrid : std::nullopt;
    const bool matched = !groups.empty() &&
                         *std::max_element(groups.begin(), groups.end()) == z.clusters;

    // raw material for the chosen measure, then the exponent policy
    Matrix raw;
    FannyResult fanny_fit;
    if (config.measure == MeasureKind::fanny) {
        if (config.policy != ExponentPolicy::fixed)
            throw_argument("the fanny exponent is a fit parameter and cannot be tuned");
        FannyOptions options;
        options.exponent = config.exponent;
        options.seed = config.seed;
        fanny_fit = fanny(data.matrix, config.clusters, options);
        raw = fanny_fit.memberships;
    } else {
        raw = config.measure == MeasureKind::silhouette_based
                  ? shifted_silhouette_matrix(data.matrix, z)
                  : average_dissimilarity_matrix(data.matrix, z);
    }

    ClusterMapping mapping;
    if (matched) mapping = match_clusters(z, groups, hybrid);

    Scalar exponent = config.exponent;
    TuneResult tuned;
    bool did_tune = false;
    if (config.policy == ExponentPolicy::tune_sd) {
        throw_argument("sd tuning targets the hybrid spread across replicates; use the "
                       "simulate command");
    } else if (config.policy == ExponentPolicy::tune_rsm) {
        if (!matched)
            throw_argument("tuning to a soft-misclassification target needs group labels "
                           "matching the cluster count");
        tuned = tune_exponent_rsm(raw, config.measure, groups, mapping, config.tune_target,
                                  hybrid);
        exponent = tuned.exponent;
        did_tune = true;
    }

    const CertaintyMatrix cm = certainty_at(raw, config.measure, exponent);
    const EvaluationReport evaluation = evaluate_certainty(cm, z, groups, hybrid);

    // ambiguity threshold on the assigned-cluster certainties
    std::vector<Scalar> assigned(static_cast<std::size_t>(cm.n()));
    for (Index i = 0; i < cm.n(); ++i)
        assigned[static_cast<std::size_t>(i)] = cm.p(i, z.label(i) - 1);
    const Scalar threshold = sample_quantile(assigned, config.quantile);
    std::vector<Index> ambiguous;
    for (Index i = 0; i < cm.n(); ++i)
        if (assigned[static_cast<std::size_t>(i)] < threshold) ambiguous.push_back(i);

    save_partition(z, out_path(config, "partition.csv"));
    save_certainty(cm, z, out_path(config, "certainty.csv"));

    {
        std::ostringstream amb;
        amb << "individual,assigned,certainty\n";
        for (Index i : ambiguous)
            amb << (i + 1) << ',' << z.label(i) << ','
                << detail::fmt_prob(assigned[static_cast<std::size_t>(i)]) << "\n";
        write_text(out_path(config, "ambiguous.csv"), amb.str());
    }

    ordered_json report;
    report["measure"] = measure_name(evaluation.measure);
    report["exponent"] = evaluation.exponent;
    if (did_tune) {
        report["tuned_to_r_sm"] = config.tune_target;
        report["tuning_attained"] = tuned.attained;
        if (!tuned.warning.empty()) report["tuning_warning"] = tuned.warning;
    }
    report["r_pd"] = evaluation.r_pd;
    if (evaluation.r_sm) {
        report["r_sm"] = *evaluation.r_sm;
        ordered_json mapping_json = ordered_json::object();
        for (std::size_t c = 0; c < evaluation.mapping.size(); ++c)
            mapping_json["cluster_" + std::to_string(c + 1)] = evaluation.mapping[c];
        report["mapping"] = mapping_json;
        ordered_json mis_json = ordered_json::array();
        for (Index i : evaluation.misclassified) mis_json.push_back(i + 1);
        report["misclassified"] = mis_json;
        const Eigen::MatrixXi table = contingency_table(z, groups, hybrid);
        ordered_json confusion = ordered_json::array();
        for (Index c = 0; c < table.rows(); ++c) {
            ordered_json row = ordered_json::array();
            for (Index g = 0; g < table.cols(); ++g) row.push_back(table(c, g));
            confusion.push_back(row);
        }
        report["confusion"] = confusion;
    } else if (!groups.empty()) {
        report["note"] = "group labels present but their count differs from the cluster "
                         "count; soft-misclassification skipped";
    }
    report["ambiguity_quantile"] = config.quantile;
    report["ambiguity_threshold"] = threshold;
    ordered_json amb_json = ordered_json::array();
    for (Index i : ambiguous) amb_json.push_back(i + 1);
    report["ambiguous"] = amb_json;
    write_text(out_path(config, "evaluation.json"), report.dump(2) + "\n");
    write_manifest(config);

    std::cout << "individuals: " << cm.n() << ", clusters: " << z.clusters << ", measure: "
              << measure_name(cm.kind) << ", exponent: " << exponent << "\n";
    std::cout << "R_pd = " << detail::fmt_prob(evaluation.r_pd);
    if (evaluation.r_sm) std::cout << ", R_sm = " << detail::fmt_prob(*evaluation.r_sm);
    std::cout << "\n";
    if (evaluation.r_sm) {
        const Eigen::MatrixXi table = contingency_table(z, groups, hybrid);
        std::cout << "confusion (rows clusters, columns groups):\n";
        for (Index c = 0; c < table.rows(); ++c) {
            std::cout << "  cluster " << (c + 1) << ":";
            for (Index g = 0; g < table.cols(); ++g) std::cout << ' ' << table(c, g);
            std::cout << "\n";
        }
    }
    std::cout << "ambiguity threshold (" << config.quantile << " quantile): "
              << detail::fmt_prob(threshold) << ", flagged: " << ambiguous.size() << "\n";
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

namespace {

Scenario resolve_scenario(const RunConfig& config) {
    Scenario scenario;
    if (!config.scenario.empty() && std::filesystem::exists(config.scenario)) {
        scenario = Scenario::load(config.scenario);
    } else if (!config.scenario.empty() && config.scenario.find('=') != std::string::npos) {
        // manifests embed the resolved scenario text directly
        std::istringstream in(config.scenario);
        scenario = Scenario::parse(in);
    } else {
        throw_ingestion("cannot open scenario file '" + config.scenario + "'");
    }
    if (config.replicates > 0) scenario.replicates = config.replicates;
    return scenario;
}

void write_records_csv(const std::filesystem::path& path,
                       const std::vector<ReplicateRecord>& records) {
    std::ostringstream out;
    out << "replicate,p_h1,r_sm,r_pd\n";
    for (const auto& record : records) {
        if (!record.ok) continue;
        out << record.replicate << ',' << detail::fmt_prob(record.p_h1) << ','
            << detail::fmt_prob(record.r_sm) << ',' << detail::fmt_prob(record.r_pd) << "\n";
    }
    write_text(path, out.str());
}

ordered_json summary_json(const Scenario& scenario, const ReplicationSummary& summary) {
    ordered_json j;
    j["design"] = design_name(scenario.design);
    j["dissimilarity"] = dissimilarity_name(scenario.dissimilarity);
    j["clustering"] = cluster_method_name(scenario.clustering);
    if (scenario.clustering == ClusterMethod::hierarchical)
        j["linkage"] = linkage_name(scenario.linkage);
    j["clusters"] = scenario.clusters;
    j["measure"] = measure_name(scenario.measure);
    j["replicates"] = summary.replicates;
    j["failures"] = summary.failures;
    j["seed"] = scenario.seed;
    j["exponent"] = summary.exponent;
    j["tuned"] = summary.tuned;
    if (!summary.tuning_warning.empty()) j["tuning_warning"] = summary.tuning_warning;
    j["mean_p_h1"] = summary.mean_ph1;
    j["sd_p_h1"] = summary.sd_ph1;
    j["r_sm"] = summary.r_sm_mean;
    j["r_pd"] = summary.r_pd_mean;
    return j;
}

}  // namespace

void cmd_simulate(const RunConfig& config) {
    ensure_out_dir(config);
    const Scenario scenario = resolve_scenario(config);
    const ReplicationResult result = run_replications(scenario, scenario.replicates,
                                                      scenario.seed);

    write_records_csv(out_path(config, "replicates.csv"), result.records);
    write_text(out_path(config, "summary.json"),
               summary_json(scenario, result.summary).dump(2) + "\n");

    RunConfig manifest = config;
    manifest.scenario = scenario.to_text();  // embed the resolved scenario
    manifest.replicates = scenario.replicates;
    write_manifest(manifest);

    std::cout << "replicates: " << result.summary.replicates
              << " (failures: " << result.summary.failures << ")\n";
    std::cout << "exponent: " << result.summary.exponent
              << (result.summary.tuned ? " (tuned)" : "") << "\n";
    std::cout << "mean P_h1 = " << detail::fmt_prob(result.summary.mean_ph1)
              << ", sd = " << detail::fmt_prob(result.summary.sd_ph1) << "\n";
    std::cout << "R_sm = " << detail::fmt_prob(result.summary.r_sm_mean)
              << ", R_pd = " << detail::fmt_prob(result.summary.r_pd_mean) << "\n";
    if (!result.summary.tuning_warning.empty())
        std::cout << "tuning warning: " << result.summary.tuning_warning << "\n";
}

// ---------------------------------------------------------------------------
// hist
// ---------------------------------------------------------------------------

void cmd_hist(const RunConfig& config) {
    if (config.input.empty()) throw_argument("--input CSV file is required");
    if (config.column.empty()) throw_argument("--column name is required");
    ensure_out_dir(config);

    std::ifstream in(config.input);
    if (!in) throw_ingestion("cannot open '" + config.input + "'");
    std::string line;
    if (!std::getline(in, line)) throw_ingestion("empty input '" + config.input + "'");
    const auto header = detail::split_csv(detail::trim(line));
    auto column_index = [&](const std::string& name) {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (detail::trim(header[c]) == name) return static_cast<long>(c);
        throw_ingestion("column '" + name + "' not found in '" + config.input + "'");
    };

    std::vector<Scalar> values;
    int line_no = 1;
    if (config.column == "assigned_certainty") {
        // certainty CSV: pick each row's entry for its assigned cluster
        const long assigned_col = column_index("assigned");
        while (std::getline(in, line)) {
            ++line_no;
            if (detail::trim(line).empty()) continue;
            const auto cells = detail::split_csv(line);
            const long assigned = detail::parse_int(cells[static_cast<std::size_t>(assigned_col)],
                                                    line_no);
            const long cluster_col = column_index("cluster_" + std::to_string(assigned));
            values.push_back(detail::parse_double(cells[static_cast<std::size_t>(cluster_col)],
                                                  line_no));
        }
    } else {
        const long col = column_index(config.column);
        while (std::getline(in, line)) {
            ++line_no;
            if (detail::trim(line).empty()) continue;
            const auto cells = detail::split_csv(line);
            if (static_cast<long>(cells.size()) <= col)
                throw_ingestion("line " + std::to_string(line_no) + ": too few columns");
            values.push_back(detail::parse_double(cells[static_cast<std::size_t>(col)], line_no));
        }
    }
    if (values.empty()) throw_ingestion("no values found for column '" + config.column + "'");

    const std::vector<int> counts = fixed_histogram(values);
    std::ostringstream out;
    out << "bin,low,high,count\n";
    const int bins = static_cast<int>(counts.size());
    for (int b = 0; b < bins; ++b) {
        out << (b + 1) << ',' << detail::fmt_prob(static_cast<Scalar>(b) / bins) << ','
            << detail::fmt_prob(static_cast<Scalar>(b + 1) / bins) << ','
            << counts[static_cast<std::size_t>(b)] << "\n";
    }
    write_text(out_path(config, "hist.csv"), out.str());
    write_manifest(config);
    std::cout << "binned " << values.size() << " values into " << bins << " bins\n";
}

// ---------------------------------------------------------------------------
// fanny
// ---------------------------------------------------------------------------

void cmd_fanny(const RunConfig& config) {
    ensure_out_dir(config);
    const PipelineData data = load_input(config);

    FannyOptions options;
    options.exponent = config.exponent;
    options.seed = config.seed;
    const FannyResult fit = fanny(data.matrix, config.clusters, options);
    const Partition z = fit.hard();

    save_certainty(fit.certainty(), z, out_path(config, "certainty.csv"));
    save_partition(z, out_path(config, "partition.csv"));
    ordered_json j;
    j["clusters"] = config.clusters;
    j["exponent"] = fit.exponent;
    j["objective"] = fit.objective;
    j["iterations"] = fit.iterations;
    j["converged"] = fit.converged;
    write_text(out_path(config, "fanny.json"), j.dump(2) + "\n");
    write_manifest(config);
    std::cout << "objective = " << fit.objective << " after " << fit.iterations
              << " iterations (converged: " << (fit.converged ? "yes" : "no") << ")\n";
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

namespace {

struct RefCheck {
    std::string metric;  // mean_p_h1 | sd_p_h1 | r_sm | r_pd | exponent
    Scalar reference = 0;
    Scalar tolerance = 0;
};

struct RefRun {
    std::string label;
    Scenario scenario;
    std::vector<RefCheck> checks;
    bool qualitative = false;  // reference pipeline not fully reproducible
};

Scenario base_scenario(DesignKind design, DissimilarityKind dissimilarity,
                       ClusterMethod clustering, MeasureKind measure) {
    Scenario s;
    s.design = design;
    s.dissimilarity = dissimilarity;
    s.clustering = clustering;
    s.clusters = (design == DesignKind::three_group_binary ||
                  design == DesignKind::three_group_continuous)
                     ? 3
                     : 2;
    s.measure = measure;
    return s;
}

// Reference simulation results (rates in percent) for the published study
// this tool re-implements. Binary rows are qualitative: the published
// Euclidean matrix was built on a 2-d correspondence-analysis projection,
// which is out of scope here, so raw-feature Euclidean stands in for it.
std::vector<RefRun> table_runs(const std::string& table) {
    std::vector<RefRun> runs;

    struct TunedRow {
        DissimilarityKind diss;
        ClusterMethod method;
        MeasureKind measure;
        Scalar sd_target;
        Scalar r_sm, r_pd, exponent;
    };

    auto add_tuned = [&](DesignKind design, const TunedRow& row, bool qualitative) {
        RefRun run;
        run.scenario = base_scenario(design, row.diss, row.method, row.measure);
        run.scenario.policy = ExponentPolicy::tune_sd;
        run.scenario.tune_target = row.sd_target;
        std::ostringstream label;
        label << dissimilarity_name(row.diss) << '/' << cluster_method_name(row.method) << '/'
              << measure_name(row.measure) << " sd=" << row.sd_target;
        run.label = label.str();
        run.checks = {{"r_sm", row.r_sm, 2.5},
                      {"r_pd", row.r_pd, 2.5},
                      {"exponent", row.exponent, 0.3}};
        run.qualitative = qualitative;
        runs.push_back(std::move(run));
    };

    struct FixedRow {
        DissimilarityKind diss;
        ClusterMethod method;
        MeasureKind measure;
        Scalar exponent;
        Scalar mean, sd, r_sm, r_pd;
    };

    auto add_fixed = [&](DesignKind design, const FixedRow& row, bool qualitative) {
        RefRun run;
        run.scenario = base_scenario(design, row.diss, row.method, row.measure);
        run.scenario.exponent = row.exponent;
        std::ostringstream label;
        label << dissimilarity_name(row.diss) << '/' << cluster_method_name(row.method) << '/'
              << measure_name(row.measure) << " exp=" << row.exponent;
        run.label = label.str();
        run.checks = {{"mean_p_h1", row.mean, 0.02},
                      {"sd_p_h1", row.sd, 0.02},
                      {"r_sm", row.r_sm, 2.5},
                      {"r_pd", row.r_pd, 2.5}};
        run.qualitative = qualitative;
        runs.push_back(std::move(run));
    };

    const auto euc = DissimilarityKind::euclidean;
    const auto smd = DissimilarityKind::smd;
    const auto pamm = ClusterMethod::pam;
    const auto hier = ClusterMethod::hierarchical;
    const auto km = ClusterMethod::kmeans;
    const auto sil = MeasureKind::silhouette_based;
    const auto dis = MeasureKind::dissimilarity_based;
    const auto fan = MeasureKind::fanny;

    if (table == "t1") {
        const DesignKind d = DesignKind::two_group_binary;
        for (const TunedRow& row : std::initializer_list<TunedRow>{
                 {euc, pamm, sil, 0.15, 14.85, 14.85, 0.9},
                 {euc, pamm, sil, 0.20, 7.78, 7.78, 1.3},
                 {euc, pamm, sil, 0.25, 3.47, 3.47, 1.8},
                 {euc, pamm, dis, 0.15, 11.38, 11.38, 1.5},
                 {euc, pamm, dis, 0.20, 5.22, 5.22, 2.2},
                 {euc, pamm, dis, 0.25, 2.26, 2.26, 3.0},
                 {smd, pamm, sil, 0.15, 12.11, 12.11, 2.2},
                 {smd, pamm, sil, 0.20, 6.25, 6.25, 3.1},
                 {smd, pamm, sil, 0.25, 2.65, 2.65, 4.3},
                 {smd, pamm, dis, 0.15, 10.66, 10.66, 3.9},
                 {smd, pamm, dis, 0.20, 5.13, 5.13, 5.6},
                 {smd, pamm, dis, 0.25, 2.11, 2.11, 7.8}})
            add_tuned(d, row, true);
    } else if (table == "t2") {
        const DesignKind d = DesignKind::three_group_binary;
        for (const TunedRow& row : std::initializer_list<TunedRow>{
                 {euc, pamm, sil, 0.15, 23.77, 23.75, 1.0},
                 {euc, pamm, sil, 0.20, 15.65, 15.65, 1.3},
                 {euc, pamm, sil, 0.25, 7.64, 7.64, 1.8},
                 {euc, pamm, dis, 0.15, 23.78, 23.77, 1.4},
                 {euc, pamm, dis, 0.20, 13.22, 13.19, 2.0},
                 {euc, pamm, dis, 0.25, 6.10, 6.07, 2.9},
                 {smd, pamm, sil, 0.15, 16.87, 16.98, 4.4},
                 {smd, pamm, sil, 0.20, 8.63, 8.79, 6.2},
                 {smd, pamm, sil, 0.25, 4.08, 4.29, 8.4},
                 {smd, pamm, dis, 0.15, 18.04, 18.14, 7.2},
                 {smd, pamm, dis, 0.20, 9.15, 9.29, 10.4},
                 {smd, pamm, dis, 0.25, 4.42, 4.61, 14.2}})
            add_tuned(d, row, true);
    } else if (table == "t3") {
        const DesignKind d = DesignKind::two_group_continuous;
        for (const TunedRow& row : std::initializer_list<TunedRow>{
                 {euc, hier, sil, 0.05, 28.83, 28.83, 0.7},
                 {euc, hier, sil, 0.10, 14.18, 14.86, 1.4},
                 {euc, hier, sil, 0.15, 5.66, 5.66, 2.2},
                 {euc, hier, dis, 0.05, 25.10, 25.14, 1.3},
                 {euc, hier, dis, 0.10, 10.25, 10.25, 2.5},
                 {euc, hier, dis, 0.15, 3.53, 3.53, 4.0},
                 {euc, km, sil, 0.05, 28.82, 28.82, 0.7},
                 {euc, km, sil, 0.10, 14.18, 15.08, 1.4},
                 {euc, km, sil, 0.15, 5.66, 5.66, 2.2},
                 {euc, km, dis, 0.05, 25.09, 25.12, 1.3},
                 {euc, km, dis, 0.10, 10.24, 10.28, 2.5},
                 {euc, km, dis, 0.15, 3.53, 3.55, 4.0}})
            add_tuned(d, row, false);
    } else if (table == "t4") {
        const DesignKind d = DesignKind::three_group_continuous;
        for (const TunedRow& row : std::initializer_list<TunedRow>{
                 {euc, hier, sil, 0.05, 32.94, 32.94, 1.3},
                 {euc, hier, sil, 0.10, 10.06, 10.06, 2.7},
                 {euc, hier, sil, 0.15, 2.85, 2.85, 4.0},
                 {euc, hier, dis, 0.05, 32.86, 32.86, 2.1},
                 {euc, hier, dis, 0.10, 9.86, 9.86, 4.3},
                 {euc, hier, dis, 0.15, 2.44, 2.44, 6.6},
                 {euc, km, sil, 0.05, 33.78, 33.67, 1.4},
                 {euc, km, sil, 0.10, 12.96, 12.71, 2.7},
                 {euc, km, sil, 0.15, 4.98, 4.60, 4.2},
                 {euc, km, dis, 0.05, 34.13, 34.03, 2.1},
                 {euc, km, dis, 0.10, 12.87, 12.66, 4.3},
                 {euc, km, dis, 0.15, 5.26, 4.94, 6.6}})
            add_tuned(d, row, false);
    } else if (table == "t5-binary") {
        for (const auto& [design, tag] :
             std::initializer_list<std::pair<DesignKind, int>>{
                 {DesignKind::two_group_binary, 2}, {DesignKind::three_group_binary, 3}}) {
            const bool two = tag == 2;
            for (const FixedRow& row : std::initializer_list<FixedRow>{
                     {euc, pamm, sil, 1.0, two ? 0.50 : 0.34, two ? 0.16 : 0.15,
                      two ? 12.66 : 23.77, two ? 12.66 : 23.75},
                     {smd, pamm, sil, 1.0, two ? 0.50 : 0.34, two ? 0.07 : 0.03,
                      two ? 28.24 : 31.83, two ? 28.24 : 31.99},
                     {euc, pamm, dis, 1.0, two ? 0.50 : 0.34, two ? 0.11 : 0.11,
                      two ? 19.81 : 34.21, two ? 19.81 : 34.19},
                     {smd, pamm, dis, 1.0, two ? 0.50 : 0.33, two ? 0.04 : 0.02,
                      two ? 35.87 : 58.93, two ? 35.87 : 58.94},
                     {euc, pamm, fan, 2.0, two ? 0.50 : 0.34, two ? 0.14 : 0.14,
                      two ? 11.60 : 22.06, two ? 11.60 : 22.04},
                     {smd, pamm, fan, 2.0, two ? 0.50 : 0.33, two ? 0.05 : 0.00,
                      two ? 32.21 : 66.67, two ? 32.21 : 66.67}})
                add_fixed(design, row, true);
        }
    } else if (table == "t5-continuous") {
        for (const auto& [design, tag] :
             std::initializer_list<std::pair<DesignKind, int>>{
                 {DesignKind::two_group_continuous, 2},
                 {DesignKind::three_group_continuous, 3}}) {
            const bool two = tag == 2;
            for (const FixedRow& row : std::initializer_list<FixedRow>{
                     {euc, hier, sil, 1.0, two ? 0.50 : 0.33, two ? 0.07 : 0.03,
                      two ? 21.60 : 40.43, two ? 21.60 : 40.43},
                     {euc, hier, dis, 1.0, two ? 0.50 : 0.33, two ? 0.04 : 0.04,
                      two ? 30.11 : 40.40, two ? 30.14 : 40.40},
                     {euc, km, sil, 1.0, two ? 0.50 : 0.33, two ? 0.07 : 0.03,
                      two ? 21.59 : 42.47, two ? 21.59 : 42.37},
                     {euc, km, dis, 1.0, two ? 0.50 : 0.33, two ? 0.04 : 0.04,
                      two ? 30.10 : 41.93, two ? 30.10 : 41.85},
                     {euc, hier, fan, 2.0, two ? 0.50 : 0.33, two ? 0.06 : 0.01,
                      two ? 45.18 : 65.04, two ? 45.18 : 65.04}})
                add_fixed(design, row, false);
        }
    } else {
        throw_argument("unknown table '" + table +
                       "' (expected t1, t2, t3, t4, t5-binary or t5-continuous)");
    }
    return runs;
}

Scalar metric_value(const ReplicationSummary& summary, const std::string& metric) {
    if (metric == "mean_p_h1") return summary.mean_ph1;
    if (metric == "sd_p_h1") return summary.sd_ph1;
    if (metric == "r_sm") return summary.r_sm_mean * 100.0;  // references are percents
    if (metric == "r_pd") return summary.r_pd_mean * 100.0;
    if (metric == "exponent") return summary.exponent;
    throw_argument("unknown metric '" + metric + "'");
}

}  // namespace

void cmd_reproduce(const RunConfig& config) {
    if (config.table.empty()) throw_argument("--table id is required");
    ensure_out_dir(config);
    const int replicates = config.replicates > 0 ? config.replicates : 1000;
    std::vector<RefRun> runs = table_runs(config.table);

    std::ostringstream csv;
    csv << "table,scenario,metric,reference,reproduced,abs_diff,tolerance,flag\n";
    std::cout << "table " << config.table << " (" << replicates << " replicates, seed "
              << config.seed << ")\n";
    if (replicates < 100)
        std::cout << "note: " << replicates
                  << " replicates give wide Monte-Carlo intervals; flags are indicative only\n";
    for (RefRun& run : runs) {
        run.scenario.replicates = replicates;
        run.scenario.seed = config.seed;
        const ReplicationResult result = run_replications(run.scenario);
        for (const RefCheck& check : run.checks) {
            const Scalar got = metric_value(result.summary, check.metric);
            const Scalar diff = std::abs(got - check.reference);
            const char* flag = run.qualitative ? "qual" : (diff <= check.tolerance ? "ok" : "dev");
            csv << config.table << ',' << run.label << ',' << check.metric << ','
                << check.reference << ',' << detail::fmt_prob(got) << ','
                << detail::fmt_prob(diff) << ',' << check.tolerance << ',' << flag << "\n";
            char line[160];
            std::snprintf(line, sizeof(line), "  %-42s %-9s ref %8.3f  got %8.3f  [%s]",
                          run.label.c_str(), check.metric.c_str(), check.reference, got, flag);
            std::cout << line << "\n";
        }
        if (!result.summary.tuning_warning.empty())
            std::cout << "    tuning warning: " << result.summary.tuning_warning << "\n";
    }
    write_text(out_path(config, "report.csv"), csv.str());
    write_manifest(config);
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

int exit_code(ErrorFamily family) {
    switch (family) {
        case ErrorFamily::ingestion: return 2;
        case ErrorFamily::validation: return 3;
        case ErrorFamily::argument: return 4;
        case ErrorFamily::solver: return 5;
        case ErrorFamily::tuning: return 6;
    }
    return 1;
}

int run(const RunConfig& config) {
    try {
        if (config.command == "certainty") cmd_certainty(config);
        else if (config.command == "reproduce") cmd_reproduce(config);
        else if (config.command == "hist") cmd_hist(config);
        else if (config.command == "simulate") cmd_simulate(config);
        else if (config.command == "fanny") cmd_fanny(config);
        else throw_argument("unknown command '" + config.command + "'");
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.family());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int rerun_manifest(const std::filesystem::path& manifest, const std::string& out) {
    std::ifstream in(manifest);
    if (!in) {
        std::cerr << "error: cannot open manifest '" << manifest.string() << "'\n";
        return exit_code(ErrorFamily::ingestion);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        RunConfig config = RunConfig::from_json_text(buffer.str());
        config.out = out;
        return run(config);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.family());
    }
}

}  // namespace clucert::cli
