#pragma once

#include "clucert/types.hpp"

#include <filesystem>

namespace clucert {

/// d_ij = ||x_i - x_j||_2 on the raw feature rows.
DissimilarityMatrix euclidean(const Dataset& data);

/// Simple matching distance for binary data: proportion of features on which
/// two individuals disagree, so entries lie in [0,1].
DissimilarityMatrix simple_matching(const Dataset& data);

/// Chord distance: Euclidean distance between the feature rows scaled to unit
/// length; invariant to per-row positive rescaling, entries in [0,2].
DissimilarityMatrix chord(const Dataset& data);

enum class DissimilarityKind { euclidean, smd, chord };

const char* dissimilarity_name(DissimilarityKind kind);
DissimilarityKind dissimilarity_from_name(const std::string& name);
DissimilarityMatrix compute_dissimilarity(const Dataset& data, DissimilarityKind kind);

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

/// Matrix CSV: first line "n=<N>", then N lines of N comma-separated values
/// written with 17 significant digits (so save/load round-trips exactly).
DissimilarityMatrix load_matrix(const std::filesystem::path& path);
void save_matrix(const DissimilarityMatrix& m, const std::filesystem::path& path);

/// Dataset CSV: header of feature names, optional trailing `group` integer
/// column and optional `hybrid` boolean column. Kind is inferred: a dataset
/// whose feature values are all 0/1 is binary.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& data, const std::filesystem::path& path);

}  // namespace clucert
