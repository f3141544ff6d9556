#include "clucert/types.hpp"

#include <algorithm>
#include <cmath>

namespace clucert {

int Dataset::group_count() const {
    if (groups.empty()) return 0;
    return *std::max_element(groups.begin(), groups.end());
}

void Dataset::validate() const {
    if (kind == DataKind::binary) {
        for (Index i = 0; i < features.rows(); ++i)
            for (Index j = 0; j < features.cols(); ++j) {
                const Scalar x = features(i, j);
                if (x != 0.0 && x != 1.0)
                    throw_validation("binary dataset has non 0/1 value at row " +
                                     std::to_string(i + 1) + ", column " + std::to_string(j + 1));
            }
    }
    if (!groups.empty()) {
        if (static_cast<Index>(groups.size()) != n())
            throw_validation("group labels must cover every individual");
        const int g = group_count();
        std::vector<bool> seen(static_cast<std::size_t>(g), false);
        for (int label : groups) {
            if (label < 1 || label > g) throw_validation("group labels must lie in 1..G");
            seen[static_cast<std::size_t>(label - 1)] = true;
        }
        if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
            throw_validation("group labels must form a contiguous set 1..G");
    }
    if (hybrid && (*hybrid < 0 || *hybrid >= n()))
        throw_validation("hybrid index out of range");
}

Partition Partition::from_labels(std::vector<int> labels, int clusters) {
    Partition z;
    z.labels = std::move(labels);
    z.clusters = clusters;
    z.validate();
    return z;
}

void Partition::validate() const {
    if (clusters < 1) throw_argument("partition needs at least one cluster");
    if (labels.empty()) throw_argument("partition needs at least one individual");
    std::vector<Index> count(static_cast<std::size_t>(clusters), 0);
    for (int label : labels) {
        if (label < 1 || label > clusters)
            throw_validation("cluster label " + std::to_string(label) + " outside 1.." +
                             std::to_string(clusters));
        ++count[static_cast<std::size_t>(label - 1)];
    }
    for (int k = 0; k < clusters; ++k)
        if (count[static_cast<std::size_t>(k)] == 0)
            throw_validation("cluster " + std::to_string(k + 1) + " is empty");
}

DissimilarityMatrix::DissimilarityMatrix(Matrix d) : d_(std::move(d)) {
    if (d_.rows() != d_.cols()) throw_validation("dissimilarity matrix must be square");
    for (Index i = 0; i < d_.rows(); ++i) {
        if (d_(i, i) != 0.0)
            throw_validation("nonzero diagonal at index " + std::to_string(i + 1));
        for (Index j = i + 1; j < d_.cols(); ++j) {
            if (d_(i, j) != d_(j, i))
                throw_validation("asymmetric entries at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
            if (!(d_(i, j) >= 0.0))
                throw_validation("negative dissimilarity at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
        }
    }
}

DissimilarityMatrix DissimilarityMatrix::from_near_symmetric(Matrix d, Scalar tol) {
    if (d.rows() != d.cols()) throw_validation("dissimilarity matrix must be square");
    for (Index i = 0; i < d.rows(); ++i) {
        if (std::abs(d(i, i)) > tol)
            throw_validation("nonzero diagonal at index " + std::to_string(i + 1));
        d(i, i) = 0.0;
        for (Index j = i + 1; j < d.cols(); ++j) {
            if (std::abs(d(i, j) - d(j, i)) > tol)
                throw_validation("asymmetry beyond tolerance at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
            const Scalar avg = 0.5 * (d(i, j) + d(j, i));
            if (!(avg >= 0.0))
                throw_validation("negative dissimilarity at (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
            d(i, j) = d(j, i) = avg;
        }
    }
    return DissimilarityMatrix(std::move(d));
}

DissimilarityMatrix DissimilarityMatrix::scaled(Scalar factor) const {
    if (!(factor > 0)) throw_argument("scale factor must be positive");
    return DissimilarityMatrix(Matrix(d_ * factor));
}

const char* measure_name(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::silhouette_based: return "silhouette";
        case MeasureKind::dissimilarity_based: return "dissimilarity";
        case MeasureKind::fanny: return "fanny";
    }
    return "?";
}

MeasureKind measure_from_name(const std::string& name) {
    if (name == "sil" || name == "silhouette") return MeasureKind::silhouette_based;
    if (name == "dis" || name == "dissimilarity") return MeasureKind::dissimilarity_based;
    if (name == "fanny") return MeasureKind::fanny;
    throw_argument("unknown measure '" + name + "'");
}

}  // namespace clucert
