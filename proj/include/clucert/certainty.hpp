#pragma once

#include "clucert/partition.hpp"
#include "clucert/types.hpp"

#include <filesystem>

namespace clucert {

/// Silhouette widths of individual i under counterfactual re-assignment:
/// component k is the classic silhouette of i when z_i is set to k with all
/// other assignments held fixed. Component z_i equals silhouette_width.
Vector silhouette_vector(const DissimilarityMatrix& m, const Partition& z, Index i);

/// N x C matrix of shifted silhouettes sil_ik + 1 (each row is the shifted
/// counterfactual silhouette vector, entries in [0,2]).
Matrix shifted_silhouette_matrix(const DissimilarityMatrix& m, const Partition& z);

/// Average dissimilarity between individual i and the members of cluster k
/// other than i. Errors if cluster k has no such member.
Scalar avg_dissim(const DissimilarityMatrix& m, const Partition& z, Index i, int cluster);

/// N x C matrix of h_ik = avg_dissim(m, z, i, k).
Matrix average_dissimilarity_matrix(const DissimilarityMatrix& m, const Partition& z);

/// Row-normalized powers of a shifted silhouette matrix:
/// P_ik = (sil_ik + 1)^l / sum_j (sil_ij + 1)^l. An all-zero row (every
/// silhouette at -1) falls back to the uniform row 1/C.
CertaintyMatrix certainty_from_shifted(const Matrix& shifted, Scalar l);

/// Row-normalized powers of inverse average dissimilarities:
/// P_ik = s_ik^v / sum_j s_ij^v with s_ik = 1/h_ik. Zero h (duplicated
/// points) is the infinite-similarity limit: mass 1 split equally over the
/// zero-h clusters of the row.
CertaintyMatrix certainty_from_avg_dissim(const Matrix& h, Scalar v);

/// Silhouette-based measure (counterfactual silhouettes, exponent l > 0).
CertaintyMatrix certainty_silhouette(const DissimilarityMatrix& m, const Partition& z,
                                     Scalar l = 1.0);

/// Dissimilarity-based measure (inverse average dissimilarities, exponent v > 0).
CertaintyMatrix certainty_dissimilarity(const DissimilarityMatrix& m, const Partition& z,
                                        Scalar v = 1.0);

/// Re-normalizes a raw per-measure matrix (shifted silhouettes for the
/// silhouette measure, average dissimilarities for the dissimilarity measure)
/// at a new exponent; fanny memberships pass through unchanged.
CertaintyMatrix certainty_at(const Matrix& raw, MeasureKind kind, Scalar exponent);

/// CertaintyMatrix CSV with header
/// individual,cluster_1..cluster_C,assigned,argmax (1-based indices).
void save_certainty(const CertaintyMatrix& cm, const Partition& z,
                    const std::filesystem::path& path);

}  // namespace clucert
