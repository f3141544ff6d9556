#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clucert {

inline constexpr const char* kVersion = "0.1.0";

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Error families map to distinct CLI exit codes (see cli.hpp).
enum class ErrorFamily {
    argument,    // bad parameter or dimension mismatch
    validation,  // data violates an invariant (asymmetry, negative entry, ...)
    ingestion,   // unreadable or malformed input file
    solver,      // numeric solver failed (bracket, non-convergence treated as data)
    tuning,      // exponent tuning bracket violated
};

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, const std::string& message)
        : std::runtime_error(message), family_(family) {}
    ErrorFamily family() const noexcept { return family_; }

private:
    ErrorFamily family_;
};

[[noreturn]] inline void throw_argument(const std::string& msg) { throw Error(ErrorFamily::argument, msg); }
[[noreturn]] inline void throw_validation(const std::string& msg) { throw Error(ErrorFamily::validation, msg); }
[[noreturn]] inline void throw_ingestion(const std::string& msg) { throw Error(ErrorFamily::ingestion, msg); }
[[noreturn]] inline void throw_solver(const std::string& msg) { throw Error(ErrorFamily::solver, msg); }
[[noreturn]] inline void throw_tuning(const std::string& msg) { throw Error(ErrorFamily::tuning, msg); }

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

enum class DataKind { binary, continuous };

/// Feature matrix with optional true group labels and an optional index of a
/// "hybrid" individual that sits between groups and is excluded from the
/// misclassification rates.
struct Dataset {
    Matrix features;             // N x p
    DataKind kind = DataKind::continuous;
    std::vector<int> groups;     // empty, or length N with labels 1..G
    std::optional<Index> hybrid; // 0-based row index

    Index n() const { return features.rows(); }
    Index p() const { return features.cols(); }
    bool has_groups() const { return !groups.empty(); }

    /// Number of distinct groups G; labels must be the contiguous set 1..G.
    int group_count() const;

    /// Checks binary coding and group-label contiguity; throws on violation.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

/// Hard cluster assignment: labels z_1..z_N in 1..C, every cluster nonempty.
struct Partition {
    std::vector<int> labels;  // 1..C
    int clusters = 0;

    Index n() const { return static_cast<Index>(labels.size()); }
    int label(Index i) const { return labels[static_cast<std::size_t>(i)]; }

    static Partition from_labels(std::vector<int> labels, int clusters);
    void validate() const;  // throws unless labels in 1..C, all clusters nonempty
};

// ---------------------------------------------------------------------------
// DissimilarityMatrix
// ---------------------------------------------------------------------------

/// Symmetric nonnegative pairwise dissimilarities with zero diagonal.
/// Symmetry is exact (bit-equal) by construction; the tolerant path used for
/// file ingestion symmetrizes by averaging first.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;

    /// Validating constructor: requires exact symmetry, zero diagonal,
    /// nonnegative entries.
    explicit DissimilarityMatrix(Matrix d);

    /// Tolerant construction: entries with |d_ij - d_ji| <= tol are averaged,
    /// larger asymmetry is a validation error. Diagonal must be within tol of
    /// zero and is set to exactly zero.
    static DissimilarityMatrix from_near_symmetric(Matrix d, Scalar tol = 1e-9);

    Index size() const { return d_.rows(); }
    Scalar operator()(Index i, Index j) const { return d_(i, j); }
    const Matrix& values() const { return d_; }

    /// Same dissimilarities multiplied by a positive constant.
    DissimilarityMatrix scaled(Scalar factor) const;

private:
    Matrix d_;
};

// ---------------------------------------------------------------------------
// CertaintyMatrix
// ---------------------------------------------------------------------------

enum class MeasureKind { silhouette_based, dissimilarity_based, fanny };

const char* measure_name(MeasureKind kind);
MeasureKind measure_from_name(const std::string& name);

/// Row-stochastic N x C matrix of cluster-membership certainties.
struct CertaintyMatrix {
    Matrix p;  // N x C, rows sum to 1
    MeasureKind kind = MeasureKind::silhouette_based;
    Scalar exponent = 1.0;

    Index n() const { return p.rows(); }
    Index clusters() const { return p.cols(); }
};

}  // namespace clucert
