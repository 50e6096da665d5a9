#pragma once

// Independent reference implementations used to freeze expected values.
// Everything here is deliberately brute-force and kept free of the
// library code paths it checks.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracles {

/// Exhaustive p-variation of the difference of two value tables:
/// maximize over every subset of grid points (2^K chains, K <= ~20).
inline double brute_force_p_variation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                      double p) {
    const int n = static_cast<int>(a.rows());
    const Eigen::MatrixXd diff = a - b;
    double best = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double sum = 0.0;
        int prev = -1;
        for (int j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            if (prev >= 0) {
                sum += std::pow((diff.row(j) - diff.row(prev)).norm(), p);
            }
            prev = j;
        }
        best = std::max(best, sum);
    }
    return std::pow(best, 1.0 / p);
}

/// Gaussian log-density through an explicit inverse and determinant;
/// only sane for small N.
inline double dense_gaussian_log_density(const Eigen::MatrixXd& cov,
                                         const Eigen::VectorXd& x) {
    const int n = static_cast<int>(cov.rows());
    const double quad = x.dot(cov.inverse() * x);
    return -0.5 * n * std::log(2.0 * M_PI) - 0.5 * std::log(cov.determinant()) - 0.5 * quad;
}

/// Central finite difference of a scalar function of one coordinate.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double step) {
    return (f(x + step) - f(x - step)) / (2.0 * step);
}

/// Central-difference Jacobian of a vector function.
inline Eigen::MatrixXd fd_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double step) {
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd jac(f0.size(), x.size());
    Eigen::VectorXd xp = x, xm = x;
    for (int j = 0; j < x.size(); ++j) {
        xp[j] += step;
        xm[j] -= step;
        jac.col(j) = (f(xp) - f(xm)) / (2.0 * step);
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return jac;
}

struct GaussHermite {
    Eigen::VectorXd nodes;    // abscissas for weight e^{-x^2}
    Eigen::VectorXd weights;
};

/// Golub-Welsch nodes/weights for the physicists' Hermite rule.
/// E[f(Z)] for Z ~ N(0,1) is sum_i weights_i f(sqrt(2) nodes_i) / sqrt(pi).
inline GaussHermite gauss_hermite(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double off = std::sqrt(i / 2.0);
        jacobi(i, i - 1) = off;
        jacobi(i - 1, i) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    GaussHermite out;
    out.nodes = eig.eigenvalues();
    out.weights.resize(n);
    const double mu0 = std::sqrt(M_PI);  // integral of e^{-x^2}
    for (int i = 0; i < n; ++i) {
        const double first = eig.eigenvectors()(0, i);
        out.weights[i] = mu0 * first * first;
    }
    return out;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols,
                                     double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
    }
    return m;
}

/// log(sum exp) with a max shift.
inline double log_sum_exp(const std::vector<double>& v) {
    double shift = v.front();
    for (double x : v) shift = std::max(shift, x);
    double sum = 0.0;
    for (double x : v) sum += std::exp(x - shift);
    return shift + std::log(sum);
}

}  // namespace oracles
