#include "clucert/cli.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"cluster-membership certainty for hard partitions"};
    app.require_subcommand(1);

    using clucert::cli::RunConfig;
    RunConfig config;
    std::string measure = "sil";
    std::string dissimilarity = "euclidean";
    std::string clustering = "hier";
    std::string linkage = "ward";
    double tune_sd = -1, tune_rsm = -1;
    std::string manifest_path, rerun_out = ".";

    auto add_pipeline_flags = [&](CLI::App* cmd, bool with_cluster) {
        cmd->add_option("--dissimilarity", dissimilarity, "euclidean | smd | chord")
            ->check(CLI::IsMember({"euclidean", "smd", "chord"}));
        if (with_cluster) {
            cmd->add_option("--cluster", clustering, "pam | hier | kmeans")
                ->check(CLI::IsMember({"pam", "hier", "kmeans"}));
            cmd->add_option("--linkage", linkage, "average | complete | ward")
                ->check(CLI::IsMember({"average", "complete", "ward"}));
        }
        cmd->add_option("--clusters", config.clusters, "cluster count C");
        cmd->add_option("--seed", config.seed, "rng seed");
        cmd->add_option("--out", config.out, "output directory");
    };

    CLI::App* certainty = app.add_subcommand(
        "certainty", "cluster a dataset or matrix and emit certainty vectors");
    certainty->add_option("--input", config.input, "dataset CSV, or 'iris' for the bundled data");
    certainty->add_option("--matrix", config.matrix, "dissimilarity matrix CSV");
    add_pipeline_flags(certainty, true);
    certainty->add_option("--measure", measure, "sil | dis | fanny");
    certainty->add_option("--exponent", config.exponent, "fixed exponent l / v / r");
    certainty->add_option("--tune-rsm", tune_rsm, "tune exponent to this soft-misclassification rate");
    certainty->add_option("--tune-sd", tune_sd, "(simulation scenarios only)");
    certainty->add_option("--quantile", config.quantile, "ambiguity threshold quantile");

    CLI::App* reproduce = app.add_subcommand(
        "reproduce", "re-run a reference simulation table and compare");
    reproduce->add_option("--table", config.table, "t1 | t2 | t3 | t4 | t5-binary | t5-continuous")
        ->required();
    reproduce->add_option("--replicates", config.replicates, "replicates per scenario");
    reproduce->add_option("--seed", config.seed, "rng seed");
    reproduce->add_option("--out", config.out, "output directory");

    CLI::App* hist = app.add_subcommand("hist", "20-bin histogram of a [0,1] column");
    hist->add_option("--input", config.input, "CSV file")->required();
    hist->add_option("--column", config.column,
                     "column name (or assigned_certainty for certainty CSVs)")
        ->required();
    hist->add_option("--out", config.out, "output directory");

    CLI::App* simulate = app.add_subcommand("simulate", "run a replicated scenario file");
    simulate->add_option("--scenario", config.scenario, "scenario config file")->required();
    simulate->add_option("--replicates", config.replicates, "override scenario replicates");
    simulate->add_option("--out", config.out, "output directory");

    CLI::App* fanny = app.add_subcommand("fanny", "fuzzy memberships from a dissimilarity matrix");
    fanny->add_option("--input", config.input, "dataset CSV, or 'iris'");
    fanny->add_option("--matrix", config.matrix, "dissimilarity matrix CSV");
    add_pipeline_flags(fanny, false);
    fanny->add_option("--fuzziness", config.exponent, "membership exponent r > 1");

    CLI::App* rerun = app.add_subcommand("rerun", "re-execute a manifest");
    rerun->add_option("--manifest", manifest_path, "manifest.json from a previous run")->required();
    rerun->add_option("--out", rerun_out, "output directory");

    config.exponent = 1.0;
    config.replicates = 0;

    CLI11_PARSE(app, argc, argv);

    if (rerun->parsed()) return clucert::cli::rerun_manifest(manifest_path, rerun_out);

    try {
        config.measure = clucert::measure_from_name(measure);
        config.dissimilarity = clucert::dissimilarity_from_name(dissimilarity);
        config.clustering = clucert::cluster_method_from_name(clustering);
        config.linkage = clucert::linkage_from_name(linkage);
    } catch (const clucert::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return clucert::cli::exit_code(e.family());
    }
    if (tune_rsm >= 0) {
        config.policy = clucert::ExponentPolicy::tune_rsm;
        config.tune_target = tune_rsm;
    } else if (tune_sd >= 0) {
        config.policy = clucert::ExponentPolicy::tune_sd;
        config.tune_target = tune_sd;
    }
    if (fanny->parsed()) {
        config.measure = clucert::MeasureKind::fanny;
        if (!fanny->count("--fuzziness")) config.exponent = 2.0;
    }

    config.command = app.get_subcommands().front()->get_name();
    return clucert::cli::run(config);
}
