#pragma once

#include <utility>

#include <Eigen/Dense>

#include "pathlik/fbm.hpp"
#include "pathlik/likelihood.hpp"
#include "pathlik/observations.hpp"
#include "pathlik/path.hpp"

namespace pathlik {

/// Parameters of the scalar mean-reverting reference model on a
/// homogeneous grid of `n_intervals` steps of width `spacing`.
struct FouParams {
    double lambda;
    double sigma;
    double h;
    double spacing;
    int n_intervals;

    FouParams(double lambda_, double sigma_, double h_, double spacing_, int n_intervals_);

    double horizon() const { return spacing * n_intervals; }
    Partition grid() const { return Partition::homogeneous(spacing, n_intervals); }
};

/// x / (1 - e^{-x}) with a series branch below 1e-6 so the likelihood
/// stays smooth through lambda -> 0.
double expm1_ratio(double x);

/// Closed-form inverse of the interval map: raw driver increments from
/// observations, no iteration.
IncrementSet fou_invert(const ObservationSet& obs, const FouParams& params);

/// Forward interval map: observations from raw driver increments.
ObservationSet fou_forward(double y0, const IncrementSet& incs, const FouParams& params);

/// Increment-parametrized scalar sensitivity at time t in [0, spacing]:
/// sigma (1 - e^{-lambda t}) / (lambda * spacing).
double fou_sensitivity(const FouParams& params, double t);

/// Full log-likelihood (all constants included): Gaussian increment
/// density under the factored covariance plus
/// N log(lambda delta / (sigma (1 - e^{-lambda delta}))).
double fou_loglik(const ObservationSet& obs, const FouParams& params,
                  const CovarianceFactor& noise);

/// Order-0 and order-1 expansion components for the diffusion case
/// (h = 1/2 semantics). The expansion targets the likelihood with the
/// theta-independent lattice constant -(N/2) log(spacing) removed:
/// (N/T) l0 + l1 reproduces fou_loglik + (N/2) log(spacing) up to O(1/N).
std::pair<double, double> fou_scaled_components(const ObservationSet& obs, double lambda,
                                                double sigma);

/// The components packaged for the staged estimation pipeline,
/// exponents (-1, 0), theta = (lambda, sigma).
ScaledLogLik fou_component_loglik(const ObservationSet& obs);

struct FouMle {
    double sigma2_hat;  // (1/T) sum (dy)^2
    double lambda_hat;  // -sum y dy / sum y^2 delta
};

FouMle fou_mle(const ObservationSet& obs);

}  // namespace pathlik
