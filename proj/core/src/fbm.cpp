#include "pathlik/fbm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

namespace pathlik {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

void check_hurst(double h) {
    if (!(h > 0.0) || !(h < 1.0)) {
        throw std::invalid_argument(
            "Hurst parameter must lie strictly inside (0,1); got " +
            std::to_string(h) + (h == 1.0 ? " (h=1 degenerates to a rank-1 covariance)" : ""));
    }
}

}  // namespace

FbmIncrementModel::FbmIncrementModel(double hurst, Partition grid)
    : h(hurst), partition(std::move(grid)) {
    check_hurst(h);
    if (!partition.is_homogeneous()) {
        throw std::invalid_argument("fBM increment model needs a homogeneous grid");
    }
}

CovarianceFactor fbm_covariance(double h, double spacing, int n_increments) {
    check_hurst(h);
    if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
    if (n_increments < 1) throw std::invalid_argument("need at least one increment");

    const int n = n_increments;
    const double scale = std::pow(spacing, 2.0 * h);

    // Toeplitz: entry depends only on the lag.
    Eigen::VectorXd rho(n);
    for (int k = 0; k < n; ++k) {
        const double lag = static_cast<double>(k);
        rho[k] = 0.5 * scale *
                 (std::pow(lag + 1.0, 2.0 * h) + std::pow(std::abs(lag - 1.0), 2.0 * h) -
                  2.0 * std::pow(lag, 2.0 * h));
    }
    Eigen::MatrixXd sigma(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            sigma(i, j) = rho[std::abs(i - j)];
        }
    }

    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        // One jitter retry for near-degenerate h -> 1 cases.
        const double jitter = 1e-12 * sigma.trace() / n;
        Eigen::MatrixXd bumped = sigma;
        bumped.diagonal().array() += jitter;
        llt.compute(bumped);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error(
                "fBM covariance is numerically indefinite (h=" + std::to_string(h) +
                ", N=" + std::to_string(n) + "), even after diagonal jitter");
        }
    }

    CovarianceFactor factor;
    factor.matrix = std::move(sigma);
    factor.chol = llt.matrixL();
    factor.log_det = 2.0 * factor.chol.diagonal().array().log().sum();
    factor.h = h;
    factor.spacing = spacing;
    return factor;
}

CovarianceFactor fbm_covariance(const FbmIncrementModel& model) {
    return fbm_covariance(model.h, model.partition.spacing(0),
                          model.partition.intervals());
}

Eigen::MatrixXd sample_increments(const CovarianceFactor& factor,
                                  std::uint64_t seed, int dim) {
    if (dim < 1) throw std::invalid_argument("driver dimension must be >= 1");
    const int n = factor.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(n, dim);
    for (int c = 0; c < dim; ++c) {
        for (int i = 0; i < n; ++i) z(i, c) = normal(rng);
    }
    return factor.chol.triangularView<Eigen::Lower>() * z;
}

IncrementSet sample(const FbmIncrementModel& model,
                    const CovarianceFactor& factor, std::uint64_t seed,
                    int dim) {
    if (factor.size() != model.partition.intervals()) {
        throw std::invalid_argument("covariance factor does not match the grid");
    }
    return IncrementSet(model.partition, sample_increments(factor, seed, dim));
}

double gaussian_log_density(const CovarianceFactor& factor,
                            const Eigen::VectorXd& x) {
    const int n = factor.size();
    if (x.size() != n) {
        throw std::invalid_argument("log-density: increment vector has length " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(n));
    }
    const Eigen::VectorXd w = factor.chol.triangularView<Eigen::Lower>().solve(x);
    return -0.5 * n * kLog2Pi - 0.5 * factor.log_det - 0.5 * w.squaredNorm();
}

double gaussian_log_density(const CovarianceFactor& factor,
                            const Eigen::MatrixXd& x) {
    double total = 0.0;
    for (int c = 0; c < x.cols(); ++c) {
        total += gaussian_log_density(factor, Eigen::VectorXd(x.col(c)));
    }
    return total;
}

}  // namespace pathlik
