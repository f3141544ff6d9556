#pragma once

#include "clucert/dissimilarity.hpp"
#include "clucert/evaluation.hpp"
#include "clucert/partition.hpp"
#include "clucert/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace clucert {

// ---------------------------------------------------------------------------
// Simulation designs
// ---------------------------------------------------------------------------

/// Binary feature model: Pr(X_ij = 1 | U_i) = logistic(t + beta * U_i^(b))
/// where feature block b uses latent component b. The intercept t calibrates
/// the marginal success probability to 1/2 over the (equally weighted)
/// non-hybrid group latents.
struct BinaryDesign {
    std::vector<Vector> group_latents;  // one latent vector per group
    Vector hybrid_latent;
    Scalar beta = 1.2;
    int per_group = 20;
    int features_per_latent = 10;
    Scalar intercept = 0;  // cached by solve_intercept

    int groups() const { return static_cast<int>(group_latents.size()); }
    int latent_dim() const { return static_cast<int>(hybrid_latent.size()); }
    Index n() const { return static_cast<Index>(per_group) * groups() + 1; }
    Index p() const { return static_cast<Index>(features_per_latent) * latent_dim(); }

    /// Groups at latents (3,0) and (0,3), hybrid (1.5,1.5); 20 per group,
    /// 10 features per block; intercept pre-solved.
    static BinaryDesign two_group();
    /// Groups at (3,0,0), (0,3,0), (0,0,3), hybrid (1,1,1); blocks of 8.
    static BinaryDesign three_group();
};

/// Continuous feature model: X_ij ~ Normal(W_i^(b), noise_sd^2) with feature
/// block b driven by latent component b.
struct ContinuousDesign {
    std::vector<Vector> group_latents;
    Vector hybrid_latent;
    int per_group = 20;
    int features_per_latent = 10;
    Scalar noise_sd = 1.0;

    int groups() const { return static_cast<int>(group_latents.size()); }
    int latent_dim() const { return static_cast<int>(hybrid_latent.size()); }
    Index n() const { return static_cast<Index>(per_group) * groups() + 1; }
    Index p() const { return static_cast<Index>(features_per_latent) * latent_dim(); }

    static ContinuousDesign two_group();   // (3,0)/(0,3), hybrid (1.5,1.5), 10+10 features
    static ContinuousDesign three_group(); // (3,0,0)/(0,3,0)/(0,0,3), hybrid (1,1,1), 3x8
};

/// Intercept t with mean_g logistic(t + beta * u_g^(b)) = 1/2 for every
/// feature block b, solved by bisection on [-50, 50]. The blocks of the
/// shipped designs share one multiset of latent values and hence one root;
/// blocks that disagree are rejected.
Scalar solve_intercept(const BinaryDesign& design);

/// Bernoulli draws under the binary design. Groups are labelled 1..G in
/// blocks of per_group individuals; the final individual is the hybrid and
/// carries placeholder group 1 (rate computations exclude it).
Dataset gen_binary(const BinaryDesign& design, std::uint64_t seed);

/// Gaussian draws under the continuous design; same layout as gen_binary.
Dataset gen_continuous(const ContinuousDesign& design, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Replicated experiments
// ---------------------------------------------------------------------------

enum class DesignKind {
    two_group_binary,
    three_group_binary,
    two_group_continuous,
    three_group_continuous,
};

const char* design_name(DesignKind kind);
DesignKind design_from_name(const std::string& name);

enum class ClusterMethod { pam, hierarchical, kmeans };

const char* cluster_method_name(ClusterMethod method);
ClusterMethod cluster_method_from_name(const std::string& name);

enum class ExponentPolicy { fixed, tune_sd, tune_rsm };

/// Declarative experiment description, loadable from a `key = value` text
/// file (lines starting with '#' are comments).
struct Scenario {
    DesignKind design = DesignKind::two_group_continuous;
    DissimilarityKind dissimilarity = DissimilarityKind::euclidean;
    ClusterMethod clustering = ClusterMethod::hierarchical;
    Linkage linkage = Linkage::ward;
    int clusters = 2;
    MeasureKind measure = MeasureKind::silhouette_based;
    ExponentPolicy policy = ExponentPolicy::fixed;
    Scalar exponent = 1.0;      // fixed l / v / fanny r
    Scalar tune_target = 0;     // sd(P_h1) or R_sm target when tuning
    int replicates = 1000;
    std::uint64_t seed = 1;
    int kmeans_restarts = 10;

    static Scenario parse(std::istream& in);
    static Scenario load(const std::filesystem::path& path);
    std::string to_text() const;
};

struct ReplicateRecord {
    int replicate = 0;
    Scalar p_h1 = 0;   // hybrid's certainty for the cluster matched to group 1
    Scalar r_sm = 0;
    Scalar r_pd = 0;
    bool ok = true;
    std::string error;
};

struct ReplicationSummary {
    Scalar mean_ph1 = 0;
    Scalar sd_ph1 = 0;     // sample standard deviation over replicates
    Scalar r_sm_mean = 0;
    Scalar r_pd_mean = 0;
    int replicates = 0;    // completed replicates
    int failures = 0;
    Scalar exponent = 1.0; // fixed or tuned value actually used
    bool tuned = false;
    std::string tuning_warning;
};

struct ReplicationResult {
    ReplicationSummary summary;
    std::vector<ReplicateRecord> records;
};

/// Per-replicate raw materials cached so that exponent sweeps re-normalize
/// rather than re-cluster: shifted silhouettes or average dissimilarities
/// (fanny memberships for the fanny measure), the certainty column of each
/// individual's true group and assigned cluster, and the hybrid's row/column.
struct ReplicateCache {
    Matrix raw;
    std::vector<int> group_column;     // 0-based column per individual
    std::vector<int> assigned_column;  // 0-based column per individual
    Index hybrid = -1;
    int group1_column = 0;
    bool ok = true;
    std::string error;
};

std::vector<ReplicateCache> build_replicate_caches(const Scenario& scenario,
                                                   int replicates, std::uint64_t seed);

/// Summary statistics of a cache set at a given exponent.
struct CacheStats {
    Scalar mean_ph1 = 0;
    Scalar sd_ph1 = 0;
    Scalar r_sm = 0;
    Scalar r_pd = 0;
};

CacheStats evaluate_caches(const std::vector<ReplicateCache>& caches, MeasureKind measure,
                           Scalar exponent);

/// Generate -> dissimilarity -> partition -> certainty -> rates, replicated
/// with counter-derived seeds (bit-for-bit reproducible, independent of
/// thread scheduling). Tuning policies fit one exponent on the pooled
/// replicate set and then report statistics at that exponent.
ReplicationResult run_replications(const Scenario& scenario, int replicates,
                                   std::uint64_t seed);

inline ReplicationResult run_replications(const Scenario& scenario) {
    return run_replications(scenario, scenario.replicates, scenario.seed);
}

/// Numerically stable deterministic reduction (pairwise summation).
Scalar pairwise_sum(const std::vector<Scalar>& values);

}  // namespace clucert
