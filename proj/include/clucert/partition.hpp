#pragma once

#include "clucert/types.hpp"

#include <cstdint>
#include <filesystem>

namespace clucert {

// ---------------------------------------------------------------------------
// PAM (k-medoids)
// ---------------------------------------------------------------------------

struct PamResult {
    Partition partition;
    std::vector<Index> medoids;  // sorted ascending; cluster k = points nearest medoids[k-1]
    Scalar cost = 0;             // total dissimilarity to nearest medoid
    Scalar build_cost = 0;       // cost after the BUILD phase, before SWAP
};

/// BUILD (greedy medoid selection) followed by SWAP (steepest-descent
/// medoid/non-medoid exchanges) to a local optimum. All ties resolve to the
/// smallest index, so the result is deterministic; the seed parameter is
/// accepted for interface uniformity only.
PamResult pam_full(const DissimilarityMatrix& m, int clusters, std::uint64_t seed = 0);
Partition pam(const DissimilarityMatrix& m, int clusters, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Agglomerative hierarchical clustering
// ---------------------------------------------------------------------------

enum class Linkage { average, complete, ward };

const char* linkage_name(Linkage linkage);
Linkage linkage_from_name(const std::string& name);

/// Full merge history. Leaves are 0..N-1; merge t creates node N+t.
struct Dendrogram {
    struct Merge {
        Index left = 0;
        Index right = 0;
        Scalar height = 0;
    };
    Index leaves = 0;
    std::vector<Merge> merges;  // N-1 entries

    /// Partition with the last (clusters-1) merges undone; labels assigned by
    /// smallest member index.
    Partition cut(int clusters) const;
};

/// Stored-matrix agglomeration with the Lance-Williams update for the chosen
/// linkage, applied to the dissimilarities as given (for ward this is the
/// classic recurrence on raw dissimilarities). Merge ties break on the
/// smallest pair index.
Dendrogram agglomerate(const DissimilarityMatrix& m, Linkage linkage);

Partition hierarchical(const DissimilarityMatrix& m, int clusters,
                       Linkage linkage = Linkage::ward);

// ---------------------------------------------------------------------------
// k-means (feature-space; continuous data only)
// ---------------------------------------------------------------------------

struct KMeansResult {
    Partition partition;
    Matrix centers;  // C x p
    Scalar wss = 0;  // within-cluster sum of squares
};

/// Lloyd iterations from k-means++ centers, best of `restarts` runs by WSS
/// (ties keep the earliest restart). Empty clusters are repaired by reseeding
/// to the point farthest from its center. Cluster labels are renumbered by
/// smallest member index.
KMeansResult kmeans_full(const Dataset& data, int clusters, std::uint64_t seed,
                         int restarts = 10);
Partition kmeans(const Dataset& data, int clusters, std::uint64_t seed, int restarts = 10);

// ---------------------------------------------------------------------------
// Silhouette
// ---------------------------------------------------------------------------

/// Classic silhouette width (b_i - a_i) / max(a_i, b_i) in [-1,1].
/// An individual alone in its cluster scores 0; so does the degenerate case
/// a_i = b_i = 0.
Scalar silhouette_width(const DissimilarityMatrix& m, const Partition& z, Index i);

// ---------------------------------------------------------------------------
// Partition text format: one "index,label" line per individual (1-based).
// ---------------------------------------------------------------------------

void save_partition(const Partition& z, const std::filesystem::path& path);
Partition load_partition(const std::filesystem::path& path);

}  // namespace clucert
