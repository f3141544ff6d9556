#include "clucert/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clucert {

namespace {

// Hungarian algorithm (potentials + shortest augmenting paths) on a square
// cost matrix, minimizing. Deterministic for tied optima.
std::vector<int> min_cost_assignment(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    std::vector<Scalar> u(static_cast<std::size_t>(n) + 1, 0), v(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<Scalar> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = p[static_cast<std::size_t>(j0)];
            int j1 = 0;
            Scalar delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const Scalar cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<std::size_t>(j)] > 0)
            row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

int group_count_of(const std::vector<int>& groups) {
    if (groups.empty()) throw_argument("group labels are required");
    return *std::max_element(groups.begin(), groups.end());
}

}  // namespace

Eigen::MatrixXi contingency_table(const Partition& z, const std::vector<int>& groups,
                                  std::optional<Index> exclude) {
    if (static_cast<Index>(groups.size()) != z.n())
        throw_argument("group labels must cover every individual");
    const int g = group_count_of(groups);
    Eigen::MatrixXi table = Eigen::MatrixXi::Zero(z.clusters, g);
    for (Index i = 0; i < z.n(); ++i) {
        if (exclude && *exclude == i) continue;
        table(z.label(i) - 1, groups[static_cast<std::size_t>(i)] - 1) += 1;
    }
    return table;
}

ClusterMapping match_clusters(const Partition& z, const std::vector<int>& groups,
                              std::optional<Index> exclude) {
    const int g = group_count_of(groups);
    if (g != z.clusters)
        throw_argument("cluster count " + std::to_string(z.clusters) +
                       " does not match group count " + std::to_string(g));
    const Eigen::MatrixXi table = contingency_table(z, groups, exclude);
    // maximize overlap == minimize (max - overlap)
    const Scalar top = static_cast<Scalar>(table.maxCoeff());
    Matrix cost(z.clusters, z.clusters);
    for (int c = 0; c < z.clusters; ++c)
        for (int k = 0; k < z.clusters; ++k) cost(c, k) = top - static_cast<Scalar>(table(c, k));
    const std::vector<int> assignment = min_cost_assignment(cost);
    ClusterMapping mapping(static_cast<std::size_t>(z.clusters));
    for (int c = 0; c < z.clusters; ++c)
        mapping[static_cast<std::size_t>(c)] = assignment[static_cast<std::size_t>(c)] + 1;
    return mapping;
}

int column_of_group(const ClusterMapping& mapping, int group) {
    for (std::size_t c = 0; c < mapping.size(); ++c)
        if (mapping[c] == group) return static_cast<int>(c);
    throw_argument("group " + std::to_string(group) + " not present in the cluster mapping");
}

std::vector<Index> hard_misclassified(const Partition& z, const std::vector<int>& groups,
                                      const ClusterMapping& mapping,
                                      std::optional<Index> exclude) {
    if (static_cast<Index>(groups.size()) != z.n())
        throw_argument("group labels must cover every individual");
    std::vector<Index> out;
    for (Index i = 0; i < z.n(); ++i) {
        if (exclude && *exclude == i) continue;
        if (mapping[static_cast<std::size_t>(z.label(i) - 1)] != groups[static_cast<std::size_t>(i)])
            out.push_back(i);
    }
    return out;
}

Scalar soft_misclassification(const CertaintyMatrix& p, const std::vector<int>& groups,
                              const ClusterMapping& mapping, std::optional<Index> hybrid) {
    if (groups.empty()) throw_argument("soft-misclassification rate needs group labels");
    if (static_cast<Index>(groups.size()) != p.n())
        throw_argument("group labels must cover every individual");
    if (static_cast<Index>(mapping.size()) != p.clusters())
        throw_argument("mapping size does not match cluster count");
    Scalar total = 0;
    Index counted = 0;
    for (Index i = 0; i < p.n(); ++i) {
        if (hybrid && *hybrid == i) continue;
        const int col = column_of_group(mapping, groups[static_cast<std::size_t>(i)]);
        total += 1.0 - p.p(i, col);
        ++counted;
    }
    if (counted == 0) throw_argument("no individuals left after hybrid exclusion");
    return total / static_cast<Scalar>(counted);
}

Scalar partition_disagreement(const CertaintyMatrix& p, const Partition& z,
                              std::optional<Index> hybrid) {
    if (p.n() != z.n()) throw_argument("certainty matrix and partition sizes differ");
    if (p.clusters() != z.clusters) throw_argument("certainty matrix and partition cluster counts differ");
    Scalar total = 0;
    Index counted = 0;
    for (Index i = 0; i < p.n(); ++i) {
        if (hybrid && *hybrid == i) continue;
        total += 1.0 - p.p(i, z.label(i) - 1);
        ++counted;
    }
    if (counted == 0) throw_argument("no individuals left after hybrid exclusion");
    return total / static_cast<Scalar>(counted);
}

EvaluationReport evaluate_certainty(const CertaintyMatrix& p, const Partition& z,
                                    const std::vector<int>& groups,
                                    std::optional<Index> hybrid) {
    EvaluationReport report;
    report.measure = p.kind;
    report.exponent = p.exponent;
    report.r_pd = partition_disagreement(p, z, hybrid);
    if (!groups.empty() &&
        *std::max_element(groups.begin(), groups.end()) == z.clusters) {
        report.mapping = match_clusters(z, groups, hybrid);
        report.r_sm = soft_misclassification(p, groups, report.mapping, hybrid);
        report.misclassified = hard_misclassified(z, groups, report.mapping, hybrid);
    }
    return report;
}

TuneResult tune_exponent(const std::function<Scalar(Scalar)>& objective,
                         TuneDirection direction, Scalar target, Scalar lo, Scalar hi,
                         int iterations, Scalar tol) {
    if (!(lo > 0) || !(hi > lo)) throw_argument("tuning bracket must satisfy 0 < lo < hi");
    const Scalar f_lo = objective(lo);
    const Scalar f_hi = objective(hi);
    const bool increasing = direction == TuneDirection::increasing;
    if (increasing ? f_hi < f_lo - 1e-12 : f_hi > f_lo + 1e-12)
        throw_tuning("objective is not monotone " +
                     std::string(increasing ? "increasing" : "decreasing") +
                     " over the bracket");

    const Scalar f_min = std::min(f_lo, f_hi);
    const Scalar f_max = std::max(f_lo, f_hi);
    if (target < f_min || target > f_max) {
        const bool near_lo = std::abs(f_lo - target) <= std::abs(f_hi - target);
        TuneResult result;
        result.exponent = near_lo ? lo : hi;
        result.achieved = near_lo ? f_lo : f_hi;
        result.attained = std::abs(result.achieved - target) <= tol;
        result.warning = "target outside the attainable range [" + std::to_string(f_min) + ", " +
                         std::to_string(f_max) + "]";
        return result;
    }

    Scalar a = lo, b = hi;
    for (int it = 0; it < iterations; ++it) {
        const Scalar mid = 0.5 * (a + b);
        const Scalar f_mid = objective(mid);
        const bool go_right = increasing ? f_mid < target : f_mid > target;
        (go_right ? a : b) = mid;
    }
    TuneResult result;
    result.exponent = 0.5 * (a + b);
    result.achieved = objective(result.exponent);
    result.attained = std::abs(result.achieved - target) <= tol;
    return result;
}

TuneResult tune_exponent_rsm(const Matrix& raw, MeasureKind kind, const std::vector<int>& groups,
                             const ClusterMapping& mapping, Scalar target_rsm,
                             std::optional<Index> hybrid) {
    if (kind == MeasureKind::fanny)
        throw_argument("the fanny exponent is a fit parameter; tuning applies to the "
                       "silhouette and dissimilarity measures");
    auto objective = [&](Scalar e) {
        return soft_misclassification(certainty_at(raw, kind, e), groups, mapping, hybrid);
    };
    return tune_exponent(objective, TuneDirection::decreasing, target_rsm);
}

}  // namespace clucert
