#pragma once

// Reference implementations used only by the tests. Everything here is
// written straight from the defining formulas with explicit loops and stays
// independent of the library's computation paths.

#include "clucert/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using clucert::Index;
using clucert::Matrix;
using clucert::Scalar;

// pairwise Euclidean distances by double loop
inline Matrix brute_euclidean(const Matrix& x) {
    const Index n = x.rows();
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            Scalar acc = 0;
            for (Index k = 0; k < x.cols(); ++k) {
                const Scalar diff = x(i, k) - x(j, k);
                acc += diff * diff;
            }
            d(i, j) = std::sqrt(acc);
        }
    return d;
}

// classic silhouette from the definition; labels are 1-based
inline Scalar naive_silhouette(const Matrix& d, const std::vector<int>& labels, int clusters,
                               Index i) {
    const int own = labels[static_cast<std::size_t>(i)];
    Scalar a_sum = 0;
    Index a_count = 0;
    for (Index j = 0; j < d.rows(); ++j) {
        if (j == i || labels[static_cast<std::size_t>(j)] != own) continue;
        a_sum += d(i, j);
        ++a_count;
    }
    if (a_count == 0) return 0.0;
    const Scalar a = a_sum / static_cast<Scalar>(a_count);

    Scalar b = std::numeric_limits<Scalar>::infinity();
    for (int k = 1; k <= clusters; ++k) {
        if (k == own) continue;
        Scalar sum = 0;
        Index count = 0;
        for (Index j = 0; j < d.rows(); ++j) {
            if (j == i || labels[static_cast<std::size_t>(j)] != k) continue;
            sum += d(i, j);
            ++count;
        }
        if (count > 0) b = std::min(b, sum / static_cast<Scalar>(count));
    }
    if (!std::isfinite(b)) return 0.0;
    const Scalar denom = std::max(a, b);
    return denom == 0.0 ? 0.0 : (b - a) / denom;
}

// counterfactual silhouette vector: physically rewrite the label of i
inline std::vector<Scalar> reassignment_silhouettes(const Matrix& d,
                                                    const std::vector<int>& labels,
                                                    int clusters, Index i) {
    std::vector<Scalar> out(static_cast<std::size_t>(clusters));
    for (int k = 1; k <= clusters; ++k) {
        std::vector<int> modified = labels;
        modified[static_cast<std::size_t>(i)] = k;
        out[static_cast<std::size_t>(k - 1)] = naive_silhouette(d, modified, clusters, i);
    }
    return out;
}

// silhouette-based certainty row, straight from the normalized-power formula
inline std::vector<Scalar> certainty_row_silhouette(const Matrix& d,
                                                    const std::vector<int>& labels,
                                                    int clusters, Index i, Scalar l) {
    const std::vector<Scalar> sil = reassignment_silhouettes(d, labels, clusters, i);
    std::vector<Scalar> row(static_cast<std::size_t>(clusters));
    Scalar total = 0;
    for (int k = 0; k < clusters; ++k) {
        row[static_cast<std::size_t>(k)] = std::pow(sil[static_cast<std::size_t>(k)] + 1.0, l);
        total += row[static_cast<std::size_t>(k)];
    }
    if (total == 0) {
        std::fill(row.begin(), row.end(), 1.0 / clusters);
        return row;
    }
    for (auto& value : row) value /= total;
    return row;
}

// dissimilarity-based certainty row from s = 1/h and normalized powers
inline std::vector<Scalar> certainty_row_dissimilarity(const Matrix& d,
                                                       const std::vector<int>& labels,
                                                       int clusters, Index i, Scalar v) {
    std::vector<Scalar> h(static_cast<std::size_t>(clusters), 0.0);
    for (int k = 1; k <= clusters; ++k) {
        Scalar sum = 0;
        Index count = 0;
        for (Index j = 0; j < d.rows(); ++j) {
            if (j == i || labels[static_cast<std::size_t>(j)] != k) continue;
            sum += d(i, j);
            ++count;
        }
        h[static_cast<std::size_t>(k - 1)] = sum / static_cast<Scalar>(count);
    }
    std::vector<Scalar> row(static_cast<std::size_t>(clusters), 0.0);
    const Index zeros = std::count(h.begin(), h.end(), 0.0);
    if (zeros > 0) {
        for (int k = 0; k < clusters; ++k)
            row[static_cast<std::size_t>(k)] =
                h[static_cast<std::size_t>(k)] == 0.0 ? 1.0 / static_cast<Scalar>(zeros) : 0.0;
        return row;
    }
    Scalar total = 0;
    for (int k = 0; k < clusters; ++k) {
        row[static_cast<std::size_t>(k)] = std::pow(1.0 / h[static_cast<std::size_t>(k)], v);
        total += row[static_cast<std::size_t>(k)];
    }
    for (auto& value : row) value /= total;
    return row;
}

// naive stored-everything agglomeration: cluster distances recomputed from
// the original matrix at every step (average or complete definition)
struct NaiveMerge {
    std::vector<Index> left;
    std::vector<Index> right;
    Scalar height = 0;
};

inline std::vector<Scalar> naive_linkage_heights(const Matrix& d, bool complete) {
    std::vector<std::vector<Index>> clusters;
    for (Index i = 0; i < d.rows(); ++i) clusters.push_back({i});
    std::vector<Scalar> heights;
    auto cluster_distance = [&](const std::vector<Index>& a, const std::vector<Index>& b) {
        Scalar acc = complete ? 0.0 : 0.0;
        if (complete) {
            for (Index i : a)
                for (Index j : b) acc = std::max(acc, d(i, j));
            return acc;
        }
        for (Index i : a)
            for (Index j : b) acc += d(i, j);
        return acc / (static_cast<Scalar>(a.size()) * static_cast<Scalar>(b.size()));
    };
    while (clusters.size() > 1) {
        std::size_t bi = 0, bj = 1;
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const Scalar dist = cluster_distance(clusters[i], clusters[j]);
                if (dist < best) {
                    best = dist;
                    bi = i;
                    bj = j;
                }
            }
        heights.push_back(best);
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(clusters[bi].begin(), clusters[bi].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
        // keep clusters ordered by smallest member for the lex tie break
        std::sort(clusters.begin(), clusters.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
    }
    return heights;
}

// exhaustive k-medoids: minimum assignment cost over all medoid subsets
inline Scalar pam_exhaustive_cost(const Matrix& d, int clusters) {
    const Index n = d.rows();
    std::vector<Index> medoids(static_cast<std::size_t>(clusters));
    std::vector<bool> select(static_cast<std::size_t>(n), false);
    std::fill(select.begin(), select.begin() + clusters, true);
    std::sort(select.begin(), select.end());  // prepare for next_permutation order
    Scalar best = std::numeric_limits<Scalar>::infinity();
    do {
        Scalar cost = 0;
        for (Index i = 0; i < n; ++i) {
            Scalar nearest = std::numeric_limits<Scalar>::infinity();
            for (Index m = 0; m < n; ++m)
                if (select[static_cast<std::size_t>(m)]) nearest = std::min(nearest, d(i, m));
            cost += nearest;
        }
        best = std::min(best, cost);
    } while (std::next_permutation(select.begin(), select.end()));
    return best;
}

// exhaustive k-means: minimum WSS over every labeling (centers = means)
inline Scalar kmeans_exhaustive_wss(const Matrix& x, int clusters) {
    const Index n = x.rows();
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    Scalar best = std::numeric_limits<Scalar>::infinity();
    const long total = static_cast<long>(std::pow(clusters, static_cast<double>(n)));
    for (long code = 0; code < total; ++code) {
        long rest = code;
        std::vector<Index> counts(static_cast<std::size_t>(clusters), 0);
        for (Index i = 0; i < n; ++i) {
            labels[static_cast<std::size_t>(i)] = static_cast<int>(rest % clusters);
            ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
            rest /= clusters;
        }
        if (std::any_of(counts.begin(), counts.end(), [](Index c) { return c == 0; })) continue;
        Matrix centers = Matrix::Zero(clusters, x.cols());
        for (Index i = 0; i < n; ++i) centers.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
        for (int c = 0; c < clusters; ++c)
            centers.row(c) /= static_cast<Scalar>(counts[static_cast<std::size_t>(c)]);
        Scalar wss = 0;
        for (Index i = 0; i < n; ++i)
            wss += (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
        best = std::min(best, wss);
    }
    return best;
}

// best total overlap over all cluster -> group bijections
inline int best_permutation_overlap(const Eigen::MatrixXi& table) {
    const int n = static_cast<int>(table.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    int best = -1;
    do {
        int overlap = 0;
        for (int c = 0; c < n; ++c) overlap += table(c, perm[static_cast<std::size_t>(c)]);
        best = std::max(best, overlap);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

inline Matrix random_dissimilarity(std::mt19937_64& rng, Index n) {
    std::uniform_real_distribution<Scalar> u(0.05, 2.0);
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = u(rng);
    return d;
}

// labels 1..clusters with every cluster nonempty
inline std::vector<int> random_partition_labels(std::mt19937_64& rng, Index n, int clusters) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int k = 0; k < clusters; ++k) labels[static_cast<std::size_t>(k)] = k + 1;
    std::uniform_int_distribution<int> u(1, clusters);
    for (Index i = clusters; i < n; ++i) labels[static_cast<std::size_t>(i)] = u(rng);
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
}

// labels with every cluster holding at least two members (needed whenever the
// dissimilarity-based measure must be defined for every individual)
inline std::vector<int> random_partition_min2(std::mt19937_64& rng, Index n, int clusters) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int k = 0; k < 2 * clusters; ++k) labels[static_cast<std::size_t>(k)] = k % clusters + 1;
    std::uniform_int_distribution<int> u(1, clusters);
    for (Index i = 2 * clusters; i < n; ++i) labels[static_cast<std::size_t>(i)] = u(rng);
    std::shuffle(labels.begin(), labels.end(), rng);
    return labels;
}

}  // namespace oracle
