#include "clucert/partition.hpp"

#include "clucert/rng.hpp"
#include "csv_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace clucert {

// ---------------------------------------------------------------------------
// PAM
// ---------------------------------------------------------------------------

namespace {

Scalar nearest_medoid_cost(const Matrix& d, const std::vector<Index>& medoids) {
    Scalar total = 0;
    for (Index i = 0; i < d.rows(); ++i) {
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (Index m : medoids) best = std::min(best, d(i, m));
        total += best;
    }
    return total;
}

Partition assign_to_medoids(const Matrix& d, std::vector<Index> medoids) {
    std::sort(medoids.begin(), medoids.end());
    const Index n = d.rows();
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) {
        int best_k = -1;
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (int k = 0; k < static_cast<int>(medoids.size()); ++k) {
            if (medoids[static_cast<std::size_t>(k)] == i) {  // a medoid anchors its own cluster
                best_k = k;
                break;
            }
            const Scalar dist = d(i, medoids[static_cast<std::size_t>(k)]);
            if (dist < best) {
                best = dist;
                best_k = k;
            }
        }
        labels[static_cast<std::size_t>(i)] = best_k + 1;
    }
    return Partition::from_labels(std::move(labels), static_cast<int>(medoids.size()));
}

}  // namespace

PamResult pam_full(const DissimilarityMatrix& m, int clusters, std::uint64_t) {
    const Index n = m.size();
    if (clusters < 1 || static_cast<Index>(clusters) > n)
        throw_argument("cluster count must lie in 1..N");
    const Matrix& d = m.values();

    // BUILD: start from the point with the smallest dissimilarity row sum,
    // then greedily add the point that most reduces the total cost.
    std::vector<Index> medoids;
    std::vector<bool> is_medoid(static_cast<std::size_t>(n), false);
    {
        Index first = 0;
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (Index i = 0; i < n; ++i) {
            const Scalar s = d.row(i).sum();
            if (s < best) {
                best = s;
                first = i;
            }
        }
        medoids.push_back(first);
        is_medoid[static_cast<std::size_t>(first)] = true;
    }
    std::vector<Scalar> nearest(static_cast<std::size_t>(n));
    auto refresh_nearest = [&] {
        for (Index i = 0; i < n; ++i) {
            Scalar best = std::numeric_limits<Scalar>::infinity();
            for (Index mi : medoids) best = std::min(best, d(i, mi));
            nearest[static_cast<std::size_t>(i)] = best;
        }
    };
    refresh_nearest();
    while (static_cast<int>(medoids.size()) < clusters) {
        Index pick = -1;
        Scalar best_gain = -1;
        for (Index h = 0; h < n; ++h) {
            if (is_medoid[static_cast<std::size_t>(h)]) continue;
            Scalar gain = 0;
            for (Index j = 0; j < n; ++j) {
                const Scalar delta = nearest[static_cast<std::size_t>(j)] - d(j, h);
                if (delta > 0) gain += delta;
            }
            if (gain > best_gain) {
                best_gain = gain;
                pick = h;
            }
        }
        medoids.push_back(pick);
        is_medoid[static_cast<std::size_t>(pick)] = true;
        refresh_nearest();
    }
    const Scalar build_cost = nearest_medoid_cost(d, medoids);

    // SWAP: steepest-descent exchange of a medoid with a non-medoid while the
    // total cost strictly decreases; ties keep the incumbent configuration.
    Scalar cost = build_cost;
    bool improved = true;
    while (improved) {
        improved = false;
        Scalar best_cost = cost;
        std::size_t best_slot = 0;
        Index best_h = -1;
        for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
            const Index original = medoids[slot];
            for (Index h = 0; h < n; ++h) {
                if (is_medoid[static_cast<std::size_t>(h)]) continue;
                medoids[slot] = h;
                const Scalar trial = nearest_medoid_cost(d, medoids);
                if (trial < best_cost) {
                    best_cost = trial;
                    best_slot = slot;
                    best_h = h;
                }
            }
            medoids[slot] = original;
        }
        if (best_h >= 0) {
            is_medoid[static_cast<std::size_t>(medoids[best_slot])] = false;
            is_medoid[static_cast<std::size_t>(best_h)] = true;
            medoids[best_slot] = best_h;
            cost = best_cost;
            improved = true;
        }
    }

    PamResult result;
    result.partition = assign_to_medoids(d, medoids);
    std::sort(medoids.begin(), medoids.end());
    result.medoids = std::move(medoids);
    result.cost = cost;
    result.build_cost = build_cost;
    return result;
}

Partition pam(const DissimilarityMatrix& m, int clusters, std::uint64_t seed) {
    return pam_full(m, clusters, seed).partition;
}

// ---------------------------------------------------------------------------
// Hierarchical
// ---------------------------------------------------------------------------

const char* linkage_name(Linkage linkage) {
    switch (linkage) {
        case Linkage::average: return "average";
        case Linkage::complete: return "complete";
        case Linkage::ward: return "ward";
    }
    return "?";
}

Linkage linkage_from_name(const std::string& name) {
    if (name == "average") return Linkage::average;
    if (name == "complete") return Linkage::complete;
    if (name == "ward") return Linkage::ward;
    throw_argument("unknown linkage '" + name + "'");
}

Dendrogram agglomerate(const DissimilarityMatrix& m, Linkage linkage) {
    const Index n = m.size();
    Matrix d = m.values();
    std::vector<bool> active(static_cast<std::size_t>(n), true);
    std::vector<Scalar> size(static_cast<std::size_t>(n), 1.0);
    std::vector<Index> node(static_cast<std::size_t>(n));
    std::iota(node.begin(), node.end(), Index{0});

    Dendrogram tree;
    tree.leaves = n;
    tree.merges.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));

    for (Index step = 0; step + 1 < n; ++step) {
        // clusters sit at the slot of their smallest member, so lexicographic
        // slot order is the smallest-pair-index tie break
        Index bi = -1, bj = -1;
        Scalar best = std::numeric_limits<Scalar>::infinity();
        for (Index i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)]) continue;
            for (Index j = i + 1; j < n; ++j) {
                if (!active[static_cast<std::size_t>(j)]) continue;
                if (d(i, j) < best) {
                    best = d(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        const Scalar ni = size[static_cast<std::size_t>(bi)];
        const Scalar nj = size[static_cast<std::size_t>(bj)];
        const Scalar dij = d(bi, bj);
        for (Index k = 0; k < n; ++k) {
            if (!active[static_cast<std::size_t>(k)] || k == bi || k == bj) continue;
            const Scalar dik = d(bi, k);
            const Scalar djk = d(bj, k);
            Scalar updated = 0;
            switch (linkage) {
                case Linkage::average:
                    updated = (ni * dik + nj * djk) / (ni + nj);
                    break;
                case Linkage::complete:
                    updated = std::max(dik, djk);
                    break;
                case Linkage::ward: {
                    const Scalar nk = size[static_cast<std::size_t>(k)];
                    updated = ((ni + nk) * dik + (nj + nk) * djk - nk * dij) / (ni + nj + nk);
                    break;
                }
            }
            d(bi, k) = d(k, bi) = updated;
        }
        tree.merges.push_back({node[static_cast<std::size_t>(bi)],
                               node[static_cast<std::size_t>(bj)], dij});
        node[static_cast<std::size_t>(bi)] = n + step;
        size[static_cast<std::size_t>(bi)] += nj;
        active[static_cast<std::size_t>(bj)] = false;
    }
    return tree;
}

Partition Dendrogram::cut(int clusters) const {
    const Index n = leaves;
    if (clusters < 1 || static_cast<Index>(clusters) > n)
        throw_argument("cluster count must lie in 1..N");

    // union-find over the first N - clusters merges
    std::vector<Index> parent(static_cast<std::size_t>(2 * n - 1));
    std::iota(parent.begin(), parent.end(), Index{0});
    auto find = [&](Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (Index t = 0; t < n - clusters; ++t) {
        const auto& merge = merges[static_cast<std::size_t>(t)];
        const Index target = n + t;
        parent[static_cast<std::size_t>(find(merge.left))] = target;
        parent[static_cast<std::size_t>(find(merge.right))] = target;
    }

    // label components 1..C in order of their smallest member index
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    std::vector<Index> roots;
    for (Index i = 0; i < n; ++i) {
        const Index root = find(i);
        auto it = std::find(roots.begin(), roots.end(), root);
        if (it == roots.end()) {
            roots.push_back(root);
            it = roots.end() - 1;
        }
        labels[static_cast<std::size_t>(i)] =
            static_cast<int>(std::distance(roots.begin(), it)) + 1;
    }
    return Partition::from_labels(std::move(labels), clusters);
}

Partition hierarchical(const DissimilarityMatrix& m, int clusters, Linkage linkage) {
    if (clusters < 1 || static_cast<Index>(clusters) > m.size())
        throw_argument("cluster count must lie in 1..N");
    return agglomerate(m, linkage).cut(clusters);
}

// ---------------------------------------------------------------------------
// k-means
// ---------------------------------------------------------------------------

namespace {

struct LloydRun {
    std::vector<int> labels;  // 0-based center index
    Matrix centers;
    Scalar wss = std::numeric_limits<Scalar>::infinity();
};

LloydRun lloyd_once(const Matrix& x, int clusters, std::mt19937_64& rng) {
    const Index n = x.rows();
    const Index p = x.cols();

    // k-means++ seeding
    Matrix centers(clusters, p);
    std::vector<Scalar> dist2(static_cast<std::size_t>(n),
                              std::numeric_limits<Scalar>::infinity());
    {
        std::uniform_int_distribution<Index> uniform(0, n - 1);
        centers.row(0) = x.row(uniform(rng));
        for (int c = 1; c < clusters; ++c) {
            Scalar total = 0;
            for (Index i = 0; i < n; ++i) {
                const Scalar d2 = (x.row(i) - centers.row(c - 1)).squaredNorm();
                auto& slot = dist2[static_cast<std::size_t>(i)];
                slot = std::min(slot, d2);
                total += slot;
            }
            Index pick = 0;
            if (total > 0) {
                std::uniform_real_distribution<Scalar> u(0.0, total);
                Scalar threshold = u(rng);
                Scalar acc = 0;
                for (Index i = 0; i < n; ++i) {
                    acc += dist2[static_cast<std::size_t>(i)];
                    if (acc >= threshold) {
                        pick = i;
                        break;
                    }
                }
            } else {
                std::uniform_int_distribution<Index> uniform2(0, n - 1);
                pick = uniform2(rng);
            }
            centers.row(c) = x.row(pick);
        }
    }

    LloydRun run;
    run.labels.assign(static_cast<std::size_t>(n), -1);
    run.centers = centers;
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (Index i = 0; i < n; ++i) {
            int best_c = 0;
            Scalar best = (x.row(i) - run.centers.row(0)).squaredNorm();
            for (int c = 1; c < clusters; ++c) {
                const Scalar d2 = (x.row(i) - run.centers.row(c)).squaredNorm();
                if (d2 < best) {
                    best = d2;
                    best_c = c;
                }
            }
            if (run.labels[static_cast<std::size_t>(i)] != best_c) {
                run.labels[static_cast<std::size_t>(i)] = best_c;
                changed = true;
            }
        }
        // recompute centers; repair empty clusters from the farthest point
        Matrix sums = Matrix::Zero(clusters, p);
        std::vector<Index> counts(static_cast<std::size_t>(clusters), 0);
        for (Index i = 0; i < n; ++i) {
            sums.row(run.labels[static_cast<std::size_t>(i)]) += x.row(i);
            ++counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < clusters; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                run.centers.row(c) =
                    sums.row(c) / static_cast<Scalar>(counts[static_cast<std::size_t>(c)]);
            } else {
                Index farthest = 0;
                Scalar best = -1;
                for (Index i = 0; i < n; ++i) {
                    const Scalar d2 =
                        (x.row(i) -
                         run.centers.row(run.labels[static_cast<std::size_t>(i)]))
                            .squaredNorm();
                    if (d2 > best) {
                        best = d2;
                        farthest = i;
                    }
                }
                run.centers.row(c) = x.row(farthest);
                changed = true;
            }
        }
        if (!changed) break;
    }
    run.wss = 0;
    for (Index i = 0; i < n; ++i)
        run.wss += (x.row(i) - run.centers.row(run.labels[static_cast<std::size_t>(i)]))
                       .squaredNorm();
    return run;
}

}  // namespace

KMeansResult kmeans_full(const Dataset& data, int clusters, std::uint64_t seed, int restarts) {
    if (data.kind != DataKind::continuous)
        throw_argument("k-means operates on continuous features");
    const Index n = data.n();
    if (clusters < 1 || static_cast<Index>(clusters) > n)
        throw_argument("cluster count must lie in 1..N");
    if (restarts < 1) throw_argument("restarts must be positive");

    LloydRun best;
    int best_restart = -1;
    for (int r = 0; r < restarts; ++r) {
        auto rng = make_rng(replicate_seed(seed, static_cast<std::uint64_t>(r)));
        LloydRun run = lloyd_once(data.features, clusters, rng);
        // comparison key (wss, restart index) keeps the reduction order-free
        if (best_restart < 0 || run.wss < best.wss) {
            best = std::move(run);
            best_restart = r;
        }
    }

    // renumber clusters by smallest member index
    std::vector<int> relabel(static_cast<std::size_t>(clusters), 0);
    int next = 0;
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const int c = best.labels[static_cast<std::size_t>(i)];
        if (relabel[static_cast<std::size_t>(c)] == 0) relabel[static_cast<std::size_t>(c)] = ++next;
        labels[static_cast<std::size_t>(i)] = relabel[static_cast<std::size_t>(c)];
    }
    Matrix centers(clusters, data.p());
    for (int c = 0; c < clusters; ++c)
        for (int k = 0; k < clusters; ++k)
            if (relabel[static_cast<std::size_t>(k)] == c + 1) centers.row(c) = best.centers.row(k);

    KMeansResult result;
    result.partition = Partition::from_labels(std::move(labels), clusters);
    result.centers = std::move(centers);
    result.wss = best.wss;
    return result;
}

Partition kmeans(const Dataset& data, int clusters, std::uint64_t seed, int restarts) {
    return kmeans_full(data, clusters, seed, restarts).partition;
}

// ---------------------------------------------------------------------------
// Silhouette
// ---------------------------------------------------------------------------

Scalar silhouette_width(const DissimilarityMatrix& m, const Partition& z, Index i) {
    if (z.clusters < 2) throw_argument("silhouette undefined for a single cluster");
    if (z.n() != m.size()) throw_argument("partition and matrix sizes differ");
    if (i < 0 || i >= m.size()) throw_argument("individual index out of range");

    std::vector<Scalar> sum(static_cast<std::size_t>(z.clusters), 0.0);
    std::vector<Index> count(static_cast<std::size_t>(z.clusters), 0);
    for (Index j = 0; j < m.size(); ++j) {
        if (j == i) continue;
        const std::size_t k = static_cast<std::size_t>(z.label(j) - 1);
        sum[k] += m(i, j);
        ++count[k];
    }
    const std::size_t own = static_cast<std::size_t>(z.label(i) - 1);
    if (count[own] == 0) return 0.0;  // singleton convention
    const Scalar a = sum[own] / static_cast<Scalar>(count[own]);
    Scalar b = std::numeric_limits<Scalar>::infinity();
    for (std::size_t k = 0; k < sum.size(); ++k) {
        if (k == own || count[k] == 0) continue;
        b = std::min(b, sum[k] / static_cast<Scalar>(count[k]));
    }
    if (!std::isfinite(b)) return 0.0;  // no other occupied cluster
    const Scalar denom = std::max(a, b);
    return denom == 0.0 ? 0.0 : (b - a) / denom;
}

// ---------------------------------------------------------------------------
// Partition IO
// ---------------------------------------------------------------------------

void save_partition(const Partition& z, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw_ingestion("cannot write partition file '" + path.string() + "'");
    for (Index i = 0; i < z.n(); ++i) out << (i + 1) << ',' << z.label(i) << "\n";
}

Partition load_partition(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw_ingestion("cannot open partition file '" + path.string() + "'");
    std::vector<int> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_csv(line);
        if (cells.size() != 2)
            throw_ingestion("line " + std::to_string(line_no) + ": expected 'index,label'");
        const long index = detail::parse_int(cells[0], line_no);
        if (index != static_cast<long>(labels.size()) + 1)
            throw_ingestion("line " + std::to_string(line_no) + ": indices must run 1..N in order");
        labels.push_back(static_cast<int>(detail::parse_int(cells[1], line_no)));
    }
    if (labels.empty()) throw_ingestion("partition file '" + path.string() + "' is empty");
    const int clusters = *std::max_element(labels.begin(), labels.end());
    return Partition::from_labels(std::move(labels), clusters);
}

}  // namespace clucert
