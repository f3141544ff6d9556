#include "clucert/certainty.hpp"

#include "csv_util.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace clucert {

namespace {

void require_match(const DissimilarityMatrix& m, const Partition& z) {
    if (z.n() != m.size()) throw_argument("partition and matrix sizes differ");
    if (z.clusters < 2) throw_argument("certainty vectors need at least two clusters");
}

// per-cluster dissimilarity sums and member counts seen from individual i
// (individual i itself excluded)
void cluster_sums(const DissimilarityMatrix& m, const Partition& z, Index i,
                  std::vector<Scalar>& sum, std::vector<Index>& count) {
    sum.assign(static_cast<std::size_t>(z.clusters), 0.0);
    count.assign(static_cast<std::size_t>(z.clusters), 0);
    for (Index j = 0; j < m.size(); ++j) {
        if (j == i) continue;
        const std::size_t k = static_cast<std::size_t>(z.label(j) - 1);
        sum[k] += m(i, j);
        ++count[k];
    }
}

// silhouette of i if it were assigned to cluster `target`, other labels fixed
Scalar counterfactual_sil(const std::vector<Scalar>& sum, const std::vector<Index>& count,
                          std::size_t target) {
    if (count[target] == 0) return 0.0;  // alone in the target cluster
    const Scalar a = sum[target] / static_cast<Scalar>(count[target]);
    Scalar b = std::numeric_limits<Scalar>::infinity();
    for (std::size_t k = 0; k < sum.size(); ++k) {
        if (k == target || count[k] == 0) continue;
        b = std::min(b, sum[k] / static_cast<Scalar>(count[k]));
    }
    if (!std::isfinite(b)) return 0.0;
    const Scalar denom = std::max(a, b);
    return denom == 0.0 ? 0.0 : (b - a) / denom;
}

}  // namespace

Vector silhouette_vector(const DissimilarityMatrix& m, const Partition& z, Index i) {
    require_match(m, z);
    if (i < 0 || i >= m.size()) throw_argument("individual index out of range");
    std::vector<Scalar> sum;
    std::vector<Index> count;
    cluster_sums(m, z, i, sum, count);
    Vector sil(z.clusters);
    for (int k = 0; k < z.clusters; ++k)
        sil(k) = counterfactual_sil(sum, count, static_cast<std::size_t>(k));
    return sil;
}

Matrix shifted_silhouette_matrix(const DissimilarityMatrix& m, const Partition& z) {
    require_match(m, z);
    Matrix shifted(m.size(), z.clusters);
    std::vector<Scalar> sum;
    std::vector<Index> count;
    for (Index i = 0; i < m.size(); ++i) {
        cluster_sums(m, z, i, sum, count);
        for (int k = 0; k < z.clusters; ++k)
            shifted(i, k) = counterfactual_sil(sum, count, static_cast<std::size_t>(k)) + 1.0;
    }
    return shifted;
}

Scalar avg_dissim(const DissimilarityMatrix& m, const Partition& z, Index i, int cluster) {
    if (z.n() != m.size()) throw_argument("partition and matrix sizes differ");
    if (i < 0 || i >= m.size()) throw_argument("individual index out of range");
    if (cluster < 1 || cluster > z.clusters) throw_argument("cluster label out of range");
    Scalar sum = 0;
    Index count = 0;
    for (Index j = 0; j < m.size(); ++j) {
        if (j == i || z.label(j) != cluster) continue;
        sum += m(i, j);
        ++count;
    }
    if (count == 0)
        throw_validation("cluster " + std::to_string(cluster) +
                         " has no member other than individual " + std::to_string(i + 1));
    return sum / static_cast<Scalar>(count);
}

Matrix average_dissimilarity_matrix(const DissimilarityMatrix& m, const Partition& z) {
    require_match(m, z);
    Matrix h(m.size(), z.clusters);
    std::vector<Scalar> sum;
    std::vector<Index> count;
    for (Index i = 0; i < m.size(); ++i) {
        cluster_sums(m, z, i, sum, count);
        for (int k = 0; k < z.clusters; ++k) {
            if (count[static_cast<std::size_t>(k)] == 0)
                throw_validation("cluster " + std::to_string(k + 1) +
                                 " has no member other than individual " + std::to_string(i + 1));
            h(i, k) = sum[static_cast<std::size_t>(k)] /
                      static_cast<Scalar>(count[static_cast<std::size_t>(k)]);
        }
    }
    return h;
}

CertaintyMatrix certainty_from_shifted(const Matrix& shifted, Scalar l) {
    if (!(l > 0)) throw_argument("exponent l must be positive");
    const Index n = shifted.rows();
    const Index c = shifted.cols();
    Matrix p(n, c);
    for (Index i = 0; i < n; ++i) {
        const Scalar top = shifted.row(i).maxCoeff();
        if (top == 0.0) {  // every counterfactual silhouette at -1
            p.row(i).setConstant(1.0 / static_cast<Scalar>(c));
            continue;
        }
        Scalar total = 0;
        for (Index k = 0; k < c; ++k) {
            // powers of the ratio to the row maximum stay in [0,1] for any l
            const Scalar w = std::pow(shifted(i, k) / top, l);
            p(i, k) = w;
            total += w;
        }
        p.row(i) /= total;
    }
    return CertaintyMatrix{std::move(p), MeasureKind::silhouette_based, l};
}

CertaintyMatrix certainty_from_avg_dissim(const Matrix& h, Scalar v) {
    if (!(v > 0)) throw_argument("exponent v must be positive");
    const Index n = h.rows();
    const Index c = h.cols();
    Matrix p(n, c);
    for (Index i = 0; i < n; ++i) {
        Index zeros = 0;
        Scalar hmin = std::numeric_limits<Scalar>::infinity();
        for (Index k = 0; k < c; ++k) {
            if (h(i, k) == 0.0) ++zeros;
            hmin = std::min(hmin, h(i, k));
        }
        if (zeros > 0) {  // infinite-similarity limit of s = 1/h
            for (Index k = 0; k < c; ++k)
                p(i, k) = h(i, k) == 0.0 ? 1.0 / static_cast<Scalar>(zeros) : 0.0;
            continue;
        }
        Scalar total = 0;
        for (Index k = 0; k < c; ++k) {
            const Scalar w = std::pow(hmin / h(i, k), v);  // == (s_ik / s_max)^v
            p(i, k) = w;
            total += w;
        }
        p.row(i) /= total;
    }
    return CertaintyMatrix{std::move(p), MeasureKind::dissimilarity_based, v};
}

CertaintyMatrix certainty_silhouette(const DissimilarityMatrix& m, const Partition& z, Scalar l) {
    if (!(l > 0)) throw_argument("exponent l must be positive");
    return certainty_from_shifted(shifted_silhouette_matrix(m, z), l);
}

CertaintyMatrix certainty_dissimilarity(const DissimilarityMatrix& m, const Partition& z,
                                        Scalar v) {
    if (!(v > 0)) throw_argument("exponent v must be positive");
    return certainty_from_avg_dissim(average_dissimilarity_matrix(m, z), v);
}

CertaintyMatrix certainty_at(const Matrix& raw, MeasureKind kind, Scalar exponent) {
    switch (kind) {
        case MeasureKind::silhouette_based: return certainty_from_shifted(raw, exponent);
        case MeasureKind::dissimilarity_based: return certainty_from_avg_dissim(raw, exponent);
        case MeasureKind::fanny: return CertaintyMatrix{raw, MeasureKind::fanny, exponent};
    }
    throw_argument("unknown measure kind");
}

void save_certainty(const CertaintyMatrix& cm, const Partition& z,
                    const std::filesystem::path& path) {
    if (cm.n() != z.n()) throw_argument("certainty matrix and partition sizes differ");
    std::ofstream out(path);
    if (!out) throw_ingestion("cannot write certainty file '" + path.string() + "'");
    out << "individual";
    for (Index k = 0; k < cm.clusters(); ++k) out << ",cluster_" << (k + 1);
    out << ",assigned,argmax\n";
    for (Index i = 0; i < cm.n(); ++i) {
        out << (i + 1);
        Index argmax = 0;
        for (Index k = 0; k < cm.clusters(); ++k) {
            out << ',' << detail::fmt_prob(cm.p(i, k));
            if (cm.p(i, k) > cm.p(i, argmax)) argmax = k;
        }
        out << ',' << z.label(i) << ',' << (argmax + 1) << "\n";
    }
}

}  // namespace clucert
