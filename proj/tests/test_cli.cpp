#include "clucert/cli.hpp"

#include "clucert/dissimilarity.hpp"
#include "clucert/iris.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace clucert;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST_CASE("certainty command writes the full output set for the iris pipeline") {
    const fs::path dir = fresh_dir("clucert_cli_iris");
    cli::RunConfig config;
    config.command = "certainty";
    config.input = "iris";
    config.dissimilarity = DissimilarityKind::chord;
    config.clustering = ClusterMethod::hierarchical;
    config.linkage = Linkage::ward;
    config.clusters = 3;
    config.measure = MeasureKind::silhouette_based;
    config.policy = ExponentPolicy::tune_rsm;
    config.tune_target = 0.10;
    config.out = dir.string();
    CHECK(cli::run(config) == 0);
    for (const char* name :
         {"partition.csv", "certainty.csv", "evaluation.json", "ambiguous.csv", "manifest.json"})
        CHECK(fs::exists(dir / name));
    const std::string report = slurp(dir / "evaluation.json");
    CHECK(report.find("\"r_sm\"") != std::string::npos);
    CHECK(report.find("\"confusion\"") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("certainty command surfaces C = 1 as an argument exit code") {
    const fs::path dir = fresh_dir("clucert_cli_c1");
    cli::RunConfig config;
    config.command = "certainty";
    config.input = "iris";
    config.clusters = 1;
    config.out = dir.string();
    CHECK(cli::run(config) == cli::exit_code(ErrorFamily::argument));
    fs::remove_all(dir);
}

TEST_CASE("quantile outside (0, 0.5) is rejected") {
    cli::RunConfig config;
    config.command = "certainty";
    config.input = "iris";
    config.clusters = 3;
    config.quantile = 0.7;
    config.out = fresh_dir("clucert_cli_quantile").string();
    CHECK(cli::run(config) == cli::exit_code(ErrorFamily::argument));
    fs::remove_all(config.out);
}

TEST_CASE("matrix-only input drives pam but rejects kmeans") {
    const fs::path dir = fresh_dir("clucert_cli_matrix");
    const fs::path matrix_path = dir / "m.csv";
    save_matrix(chord(iris_dataset()), matrix_path);

    cli::RunConfig config;
    config.command = "certainty";
    config.matrix = matrix_path.string();
    config.clustering = ClusterMethod::pam;
    config.clusters = 3;
    config.out = (dir / "out").string();
    CHECK(cli::run(config) == 0);

    config.clustering = ClusterMethod::kmeans;
    CHECK(cli::run(config) == cli::exit_code(ErrorFamily::argument));
    fs::remove_all(dir);
}

TEST_CASE("histogram helper and hist command validate their input") {
    CHECK(cli::fixed_histogram({0.0, 0.049, 0.5, 0.999, 1.0}) ==
          std::vector<int>{2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 2});
    CHECK_THROWS_AS(cli::fixed_histogram({1.2}), Error);
    CHECK_THROWS_AS(cli::fixed_histogram({-0.1}), Error);

    const fs::path dir = fresh_dir("clucert_cli_hist");
    {
        std::ofstream out(dir / "dump.csv");
        out << "replicate,p_h1,r_sm,r_pd\n";
        out << "1,0.5,0.2,0.2\n2,0.5,0.3,0.3\n3,0.5,0.1,0.1\n";
    }
    cli::RunConfig config;
    config.command = "hist";
    config.input = (dir / "dump.csv").string();
    config.column = "p_h1";
    config.out = dir.string();
    CHECK(cli::run(config) == 0);
    const std::string hist = slurp(dir / "hist.csv");
    CHECK(hist.find("11,0.500000000,0.550000000,3") != std::string::npos);

    {
        std::ofstream out(dir / "bad.csv");
        out << "p_h1\n1.5\n";
    }
    config.input = (dir / "bad.csv").string();
    CHECK(cli::run(config) == cli::exit_code(ErrorFamily::validation));
    fs::remove_all(dir);
}

TEST_CASE("sample quantile interpolates like the usual convention") {
    // seven values 1..7: the 0.5 quantile is the median
    CHECK(cli::sample_quantile({1, 2, 3, 4, 5, 6, 7}, 0.5) == doctest::Approx(4.0));
    CHECK(cli::sample_quantile({1, 2, 3, 4}, 0.25) == doctest::Approx(1.75));
    CHECK(cli::sample_quantile({2.0}, 0.05) == doctest::Approx(2.0));
}

TEST_CASE("fanny command writes memberships and metadata") {
    const fs::path dir = fresh_dir("clucert_cli_fanny");
    cli::RunConfig config;
    config.command = "fanny";
    config.input = "iris";
    config.dissimilarity = DissimilarityKind::chord;
    config.clusters = 3;
    config.exponent = 2.0;
    config.measure = MeasureKind::fanny;
    config.out = dir.string();
    CHECK(cli::run(config) == 0);
    CHECK(fs::exists(dir / "certainty.csv"));
    const std::string meta = slurp(dir / "fanny.json");
    CHECK(meta.find("\"objective\"") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("simulate command and manifest rerun reproduce bytes") {
    const fs::path dir = fresh_dir("clucert_cli_simulate");
    const fs::path scenario_path = dir / "scenario.cfg";
    {
        std::ofstream out(scenario_path);
        out << "design = two_group_continuous\n"
               "dissimilarity = euclidean\n"
               "clustering = hierarchical\n"
               "measure = silhouette\n"
               "exponent = 1\n"
               "replicates = 30\n"
               "seed = 9\n";
    }
    cli::RunConfig config;
    config.command = "simulate";
    config.scenario = scenario_path.string();
    config.out = (dir / "a").string();
    CHECK(cli::run(config) == 0);
    CHECK(cli::rerun_manifest(dir / "a" / "manifest.json", (dir / "b").string()) == 0);
    CHECK(slurp(dir / "a" / "replicates.csv") == slurp(dir / "b" / "replicates.csv"));
    CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
    fs::remove_all(dir);
}

TEST_CASE("missing input file maps to the ingestion exit code") {
    cli::RunConfig config;
    config.command = "certainty";
    config.input = "/nonexistent/data.csv";
    config.clusters = 2;
    config.out = fresh_dir("clucert_cli_missing").string();
    CHECK(cli::run(config) == cli::exit_code(ErrorFamily::ingestion));
    fs::remove_all(config.out);
}

TEST_CASE("unknown reproduce table is an argument error") {
    cli::RunConfig config;
    config.command = "reproduce";
    config.table = "t99";
    config.out = fresh_dir("clucert_cli_t99").string();
    CHECK(cli::run(config) == cli::exit_code(ErrorFamily::argument));
    fs::remove_all(config.out);
}

TEST_CASE("run config JSON round-trips") {
    cli::RunConfig config;
    config.command = "certainty";
    config.input = "iris";
    config.dissimilarity = DissimilarityKind::chord;
    config.clustering = ClusterMethod::pam;
    config.clusters = 3;
    config.measure = MeasureKind::dissimilarity_based;
    config.exponent = 2.25;
    config.policy = ExponentPolicy::tune_rsm;
    config.tune_target = 0.1;
    config.seed = 42;
    config.quantile = 0.05;
    const auto restored = cli::RunConfig::from_json_text(config.to_json());
    CHECK(restored.command == config.command);
    CHECK(restored.input == config.input);
    CHECK(restored.dissimilarity == config.dissimilarity);
    CHECK(restored.clustering == config.clustering);
    CHECK(restored.clusters == config.clusters);
    CHECK(restored.measure == config.measure);
    CHECK(restored.exponent == config.exponent);
    CHECK(restored.policy == config.policy);
    CHECK(restored.tune_target == config.tune_target);
    CHECK(restored.seed == config.seed);
}
