#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "pathlik/partition.hpp"
#include "pathlik/path.hpp"

namespace pathlik {

/// Fractional-Brownian-motion increment law on a homogeneous grid:
/// mean-zero Gaussian with the stationary-increment covariance indexed by
/// the Hurst parameter h in (0,1). Multi-dimensional drivers use
/// independent coordinates, each with this law.
struct FbmIncrementModel {
    double h;
    Partition partition;

    FbmIncrementModel(double hurst, Partition grid);
};

/// Dense covariance with its Cholesky factorization cached. Immutable
/// after construction; building one costs O(N^3), so reuse it across
/// evaluations at the same (h, spacing, N).
struct CovarianceFactor {
    Eigen::MatrixXd matrix;  // N x N symmetric positive definite
    Eigen::MatrixXd chol;    // lower triangular, chol * chol^T = matrix
    double log_det;
    double h;
    double spacing;

    int size() const { return static_cast<int>(matrix.rows()); }
};

/// Increment covariance (Sigma_h)_{ij} =
///   spacing^{2h}/2 (|j-i+1|^{2h} + |j-i-1|^{2h} - 2|j-i|^{2h}).
/// h = 1/2 yields exactly spacing * identity through the same formula.
/// Rejects h outside the open interval (0,1); retries a failed Cholesky
/// once with a diagonal jitter of 1e-12 * trace/N before giving up.
CovarianceFactor fbm_covariance(double h, double spacing, int n_increments);

CovarianceFactor fbm_covariance(const FbmIncrementModel& model);

/// Draw one N x m matrix of increments (independent columns) from the
/// factored law. Deterministic given the seed.
Eigen::MatrixXd sample_increments(const CovarianceFactor& factor,
                                  std::uint64_t seed, int dim = 1);

/// Same draw packaged on the model's grid.
IncrementSet sample(const FbmIncrementModel& model,
                    const CovarianceFactor& factor, std::uint64_t seed,
                    int dim = 1);

/// Gaussian log-density of one increment vector under the factored law.
/// The quadratic form goes through triangular solves, never an explicit
/// inverse.
double gaussian_log_density(const CovarianceFactor& factor,
                            const Eigen::VectorXd& x);

/// Sum of the coordinatewise log-densities of an N x m increment matrix
/// (independent coordinates).
double gaussian_log_density(const CovarianceFactor& factor,
                            const Eigen::MatrixXd& x);

}  // namespace pathlik
