#pragma once

#include "clucert/simulate.hpp"
#include "clucert/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace clucert::cli {

/// Resolved invocation of one subcommand. A manifest file is this struct
/// serialized to JSON; re-running a manifest reproduces the outputs byte for
/// byte.
struct RunConfig {
    std::string command;  // certainty | reproduce | hist | simulate | fanny

    // inputs
    std::string input;        // dataset CSV path, or "iris" for the embedded data
    std::string matrix;       // dissimilarity CSV path (alternative to input)
    std::string scenario;     // scenario config path (simulate)
    std::string table;        // t1 | t2 | t3 | t4 | t5-binary | t5-continuous
    std::string column;       // hist: column name to bin

    // pipeline
    DissimilarityKind dissimilarity = DissimilarityKind::euclidean;
    ClusterMethod clustering = ClusterMethod::hierarchical;
    Linkage linkage = Linkage::ward;
    int clusters = 2;
    MeasureKind measure = MeasureKind::silhouette_based;
    Scalar exponent = 1.0;
    ExponentPolicy policy = ExponentPolicy::fixed;
    Scalar tune_target = 0;

    // execution
    std::uint64_t seed = 1;
    int replicates = 1000;
    Scalar quantile = 0.05;  // ambiguity threshold quantile, in (0, 0.5)
    std::string out = ".";   // output directory

    std::string to_json() const;
    static RunConfig from_json_text(const std::string& text);
};

/// Fixed 20-bin histogram counts over [0,1]; values outside are a validation
/// error.
std::vector<int> fixed_histogram(const std::vector<Scalar>& values, int bins = 20);

/// Sample quantile with linear interpolation between order statistics.
Scalar sample_quantile(std::vector<Scalar> values, Scalar q);

// Subcommand bodies; they throw clucert::Error on failure and write their
// output files plus manifest.json under config.out.
void cmd_certainty(const RunConfig& config);
void cmd_reproduce(const RunConfig& config);
void cmd_hist(const RunConfig& config);
void cmd_simulate(const RunConfig& config);
void cmd_fanny(const RunConfig& config);

/// Dispatches config.command, mapping errors to exit codes:
/// 0 success, 2 ingestion, 3 validation, 4 argument, 5 solver, 6 tuning,
/// 1 anything else.
int run(const RunConfig& config);

int exit_code(ErrorFamily family);

/// Loads a manifest written by a previous run and re-executes it with the
/// output directory replaced by `out`.
int rerun_manifest(const std::filesystem::path& manifest, const std::string& out);

}  // namespace clucert::cli
