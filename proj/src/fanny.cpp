#include "clucert/fanny.hpp"

#include "clucert/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clucert {

Scalar fanny_objective(const Matrix& memberships, const DissimilarityMatrix& m, Scalar r) {
    const Index n = m.size();
    const Index c = memberships.cols();
    if (memberships.rows() != n) throw_argument("membership matrix and dissimilarity sizes differ");
    const Matrix ur = memberships.array().pow(r).matrix();  // u_iv^r
    Scalar objective = 0;
    for (Index v = 0; v < c; ++v) {
        const Scalar mass = ur.col(v).sum();
        if (mass <= 0) continue;  // dead cluster contributes nothing
        const Scalar pair_sum = ur.col(v).dot(m.values() * ur.col(v));
        objective += pair_sum / (2.0 * mass);
    }
    return objective;
}

FannyResult fanny(const DissimilarityMatrix& m, int clusters, const FannyOptions& options) {
    const Index n = m.size();
    if (clusters < 2) throw_argument("fanny needs at least two clusters");
    if (static_cast<Index>(clusters) > n) throw_argument("cluster count must lie in 1..N");
    if (!(options.exponent > 1.0)) throw_argument("membership exponent r must exceed 1");
    const Scalar r = options.exponent;

    // symmetric-Dirichlet start: normalized exponential draws per row
    auto rng = make_rng(options.seed);
    std::exponential_distribution<Scalar> expo(1.0);
    Matrix u(n, clusters);
    for (Index i = 0; i < n; ++i) {
        Scalar row_sum = 0;
        for (Index v = 0; v < clusters; ++v) {
            u(i, v) = expo(rng);
            row_sum += u(i, v);
        }
        u.row(i) /= row_sum;
    }

    FannyResult result;
    result.exponent = r;
    result.objective = fanny_objective(u, m, r);
    result.converged = false;

    const Scalar power = -1.0 / (r - 1.0);
    for (int iter = 0; iter < options.max_iter; ++iter) {
        const Matrix ur = u.array().pow(r).matrix();
        const Matrix a = m.values() * ur;  // a(i,v) = sum_j u_jv^r d_ij
        Matrix candidate(n, clusters);
        Vector mass(clusters), half_b(clusters);
        for (Index v = 0; v < clusters; ++v) {
            mass(v) = ur.col(v).sum();
            half_b(v) = mass(v) > 0 ? ur.col(v).dot(a.col(v)) / (2.0 * mass(v) * mass(v))
                                    : std::numeric_limits<Scalar>::infinity();
        }
        for (Index i = 0; i < n; ++i) {
            // t_iv is the coefficient of d objective / d u_iv up to the
            // positive factor r u_iv^(r-1); stationarity gives u proportional
            // to t^(-1/(r-1)) when every t is positive
            Vector t(clusters);
            Scalar t_min = std::numeric_limits<Scalar>::infinity();
            Index t_argmin = 0;
            for (Index v = 0; v < clusters; ++v) {
                t(v) = mass(v) > 0 ? a(i, v) / mass(v) - half_b(v)
                                   : std::numeric_limits<Scalar>::infinity();
                if (t(v) < t_min) {
                    t_min = t(v);
                    t_argmin = v;
                }
            }
            if (t_min <= 0) {
                // no interior stationary point; all mass to the best cluster
                candidate.row(i).setZero();
                candidate(i, t_argmin) = 1.0;
            } else {
                Scalar row_sum = 0;
                for (Index v = 0; v < clusters; ++v) {
                    const Scalar w = std::isfinite(t(v)) ? std::pow(t(v) / t_min, power) : 0.0;
                    candidate(i, v) = w;
                    row_sum += w;
                }
                candidate.row(i) /= row_sum;
            }
        }

        // step damping: halve toward the current memberships until the
        // objective does not increase, keeping the monotonicity invariant
        Scalar gamma = 1.0;
        Matrix next;
        Scalar next_objective = 0;
        bool downhill = false;
        for (int half = 0; half < 40; ++half) {
            next = (1.0 - gamma) * u + gamma * candidate;
            next_objective = fanny_objective(next, m, r);
            if (next_objective <= result.objective * (1.0 + 1e-15) + 1e-300) {
                downhill = true;
                break;
            }
            gamma *= 0.5;
        }
        if (!downhill) {  // no descent direction left: treat as converged
            result.iterations = iter;
            result.converged = true;
            break;
        }
        const Scalar drop = std::abs(result.objective - next_objective);
        const Scalar scale = std::max(std::abs(result.objective), Scalar(1e-300));
        u = std::move(next);
        result.objective = next_objective;
        result.iterations = iter + 1;
        if (drop / scale < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.memberships = std::move(u);
    return result;
}

Partition FannyResult::hard() const {
    const Index n = memberships.rows();
    const int c = static_cast<int>(memberships.cols());
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        Index argmax = 0;
        for (Index v = 1; v < memberships.cols(); ++v)
            if (memberships(i, v) > memberships(i, argmax)) argmax = v;
        labels[static_cast<std::size_t>(i)] = static_cast<int>(argmax) + 1;
    }
    return Partition::from_labels(std::move(labels), c);
}

}  // namespace clucert
