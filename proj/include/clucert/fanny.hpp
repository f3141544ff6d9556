#pragma once

#include "clucert/partition.hpp"
#include "clucert/types.hpp"

#include <cstdint>

namespace clucert {

struct FannyOptions {
    Scalar exponent = 2.0;  // membership exponent r > 1
    std::uint64_t seed = 0;
    Scalar tol = 1e-9;      // relative objective change for convergence
    int max_iter = 500;
};

struct FannyResult {
    Matrix memberships;  // N x C, row-stochastic
    Scalar objective = 0;
    int iterations = 0;
    bool converged = false;
    Scalar exponent = 2.0;

    /// Closest hard partition: argmax membership per row (smallest index on
    /// ties). Throws if some cluster receives no individual.
    Partition hard() const;

    CertaintyMatrix certainty() const {
        return CertaintyMatrix{memberships, MeasureKind::fanny, exponent};
    }
};

/// The fuzzy objective sum_v [ sum_{i,j} u_iv^r u_jv^r d_ij / (2 sum_j u_jv^r) ].
Scalar fanny_objective(const Matrix& memberships, const DissimilarityMatrix& m, Scalar r);

/// Fuzzy clustering directly on a dissimilarity matrix. Memberships start
/// from seeded symmetric-Dirichlet rows and follow the stationarity update
/// u_iv proportional to t_iv^(-1/(r-1)), where t_iv is the partial-derivative
/// coefficient of the objective; each step is damped just enough that the
/// objective never increases. Stops when the relative objective change drops
/// below tol; hitting max_iter flags converged=false instead of throwing.
FannyResult fanny(const DissimilarityMatrix& m, int clusters, const FannyOptions& options = {});

}  // namespace clucert
