#pragma once

#include "clucert/certainty.hpp"
#include "clucert/partition.hpp"
#include "clucert/types.hpp"

#include <functional>
#include <optional>

namespace clucert {

// ---------------------------------------------------------------------------
// Cluster-to-group matching
// ---------------------------------------------------------------------------

/// mapping[c-1] = group label assigned to cluster c (a bijection).
using ClusterMapping = std::vector<int>;

/// C x G contingency table of cluster labels (rows) against group labels
/// (columns); `exclude` drops one individual (the hybrid).
Eigen::MatrixXi contingency_table(const Partition& z, const std::vector<int>& groups,
                                  std::optional<Index> exclude = {});

/// Bijection cluster -> group maximizing total overlap on the contingency
/// table (optimal assignment). Requires C == G.
ClusterMapping match_clusters(const Partition& z, const std::vector<int>& groups,
                              std::optional<Index> exclude = {});

/// Column index (0-based) of the certainty matrix that the mapping assigns to
/// a given group label.
int column_of_group(const ClusterMapping& mapping, int group);

/// Individuals whose mapped cluster disagrees with their true group.
std::vector<Index> hard_misclassified(const Partition& z, const std::vector<int>& groups,
                                      const ClusterMapping& mapping,
                                      std::optional<Index> exclude = {});

// ---------------------------------------------------------------------------
// Rates
// ---------------------------------------------------------------------------

/// Mean over individuals of 1 - certainty of the true group's column.
/// The hybrid individual, when given, is excluded from the mean.
Scalar soft_misclassification(const CertaintyMatrix& p, const std::vector<int>& groups,
                              const ClusterMapping& mapping,
                              std::optional<Index> hybrid = {});

/// Mean over individuals of 1 - certainty of the assigned cluster; the
/// ground-truth-free analogue of the soft-misclassification rate.
Scalar partition_disagreement(const CertaintyMatrix& p, const Partition& z,
                              std::optional<Index> hybrid = {});

struct EvaluationReport {
    std::optional<Scalar> r_sm;        // present when groups are known
    Scalar r_pd = 0;
    ClusterMapping mapping;            // empty when groups are unknown
    std::vector<Index> misclassified;  // 0-based
    Scalar exponent = 1.0;
    MeasureKind measure = MeasureKind::silhouette_based;
};

/// Scores a certainty matrix against its partition and, when group labels are
/// present with G == C, against the truth (matching excludes the hybrid, as
/// do both rates).
EvaluationReport evaluate_certainty(const CertaintyMatrix& p, const Partition& z,
                                    const std::vector<int>& groups = {},
                                    std::optional<Index> hybrid = {});

// ---------------------------------------------------------------------------
// Exponent tuning
// ---------------------------------------------------------------------------

enum class TuneObjective { target_sd_of_hybrid, target_r_sm };
enum class TuneDirection { increasing, decreasing };

struct TuneResult {
    Scalar exponent = 1.0;
    Scalar achieved = 0;   // objective value at the returned exponent
    bool attained = false; // true when |achieved - target| <= tol
    std::string warning;   // nonempty when the target is outside the bracket
};

/// Bisection for objective(exponent) = target on [lo, hi], assuming the
/// declared monotone direction. If the endpoint evaluations contradict that
/// direction the bracket is violated and a tuning error is thrown; a target
/// outside the endpoint range returns the nearer endpoint with a warning.
TuneResult tune_exponent(const std::function<Scalar(Scalar)>& objective,
                         TuneDirection direction, Scalar target,
                         Scalar lo = 1e-3, Scalar hi = 64.0,
                         int iterations = 60, Scalar tol = 1e-3);

/// Single-dataset tuning of l or v so that the soft-misclassification rate
/// hits `target_rsm` (R_sm decreases as the exponent grows).
TuneResult tune_exponent_rsm(const Matrix& raw, MeasureKind kind,
                             const std::vector<int>& groups, const ClusterMapping& mapping,
                             Scalar target_rsm, std::optional<Index> hybrid = {});

}  // namespace clucert
