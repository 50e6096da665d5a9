#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "pathlik/fbm.hpp"
#include "pathlik/inverse_ito.hpp"
#include "pathlik/observations.hpp"
#include "pathlik/vector_field.hpp"

namespace pathlik {

/// Exact log-likelihood of the observations for the square case m = d:
/// increment log-density of the inverted driver plus the
/// change-of-variables log-Jacobian. Driver coordinates are independent,
/// each with the factored covariance.
double log_likelihood(const ObservationSet& obs, const Eigen::VectorXd& theta,
                      const ParametricVectorField& field,
                      const CovarianceFactor& noise,
                      const NewtonOptions& opts = {});

/// Draws raw increments for the free driver coordinates over the whole
/// grid: rows = intervals, cols = m - d. Must be deterministic in
/// (seed, sample_index).
using FreeCoordSampler =
    std::function<Eigen::MatrixXd(std::uint64_t seed, int sample_index)>;

/// Sampler for independent fBM coordinates under the factored law.
FreeCoordSampler make_fbm_free_sampler(const CovarianceFactor& noise, int n_free);

struct MarginalResult {
    double value;        // log of the Monte-Carlo marginal likelihood
    double std_error;    // delta-method standard error of `value`
    int samples_used;
    int samples_failed;
    bool degraded;       // more than half of the samples failed inversion
};

/// Marginalized log-likelihood for m > d: Monte-Carlo average over the
/// free coordinates' law of the constrained Case-I likelihood, combined
/// in log space with a max shift.
MarginalResult log_likelihood_marginal(const ObservationSet& obs,
                                       const Eigen::VectorXd& theta,
                                       const ParametricVectorField& field,
                                       const CovarianceFactor& noise,
                                       const FreeCoordSampler& sampler,
                                       int mc_samples, std::uint64_t seed,
                                       const NewtonOptions& opts = {});

/// Log-likelihood expansion in powers N^{-alpha_k}: strictly increasing
/// exponents and one component evaluator per exponent (data bound inside
/// the evaluators), plus the sample count N used for reconstruction.
struct ScaledLogLik {
    std::vector<double> exponents;
    std::vector<std::function<double(const Eigen::VectorXd&)>> components;
    double sample_count = 0.0;

    double reconstruct(const Eigen::VectorXd& theta) const;
};

/// Multi-level least-squares recovery of the expansion coefficients.
struct ScaleFit {
    std::vector<double> exponents;
    std::vector<int> levels;
    std::vector<double> sample_counts;        // N per level
    std::vector<Eigen::VectorXd> thetas;
    Eigen::MatrixXd components;               // thetas.size() x exponents.size()
    Eigen::MatrixXd residuals;                // thetas.size() x levels.size()
    double remainder_slope;                   // log-log decay of max residual vs N
};

/// Fit coefficients l^{(k)}(theta) in sum_k l^{(k)} N^{-alpha_k} from
/// full-likelihood evaluations across refinement levels. Needs at least
/// one more level than coefficients; throws when the design matrix is
/// rank deficient.
ScaleFit decompose_scales(
    const std::function<double(const ObservationSet&, const Eigen::VectorXd&)>& loglik,
    const std::map<int, ObservationSet>& obs_per_level,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<double>& exponents);

}  // namespace pathlik
