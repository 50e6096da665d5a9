#include "pathlik/fou.hpp"

#include <cmath>
#include <stdexcept>

namespace pathlik {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void check_obs(const ObservationSet& obs, const FouParams& params) {
    if (obs.dim() != 1) throw std::invalid_argument("reference model is scalar");
    if (obs.partition.intervals() != params.n_intervals ||
        !obs.partition.is_homogeneous() ||
        std::abs(obs.partition.spacing(0) - params.spacing) > 1e-12 * params.spacing) {
        throw std::invalid_argument("observation grid does not match the parameters");
    }
}

}  // namespace

FouParams::FouParams(double lambda_, double sigma_, double h_, double spacing_,
                     int n_intervals_)
    : lambda(lambda_), sigma(sigma_), h(h_), spacing(spacing_), n_intervals(n_intervals_) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    if (!(h > 0.0) || !(h < 1.0)) throw std::invalid_argument("h must lie in (0,1)");
    if (!(spacing > 0.0) || n_intervals < 1) {
        throw std::invalid_argument("need positive spacing and at least one interval");
    }
}

double expm1_ratio(double x) {
    if (std::abs(x) < 1e-6) {
        return 1.0 + x / 2.0 + x * x / 12.0;  // avoids 0/0 cancellation
    }
    return x / (-std::expm1(-x));
}

IncrementSet fou_invert(const ObservationSet& obs, const FouParams& params) {
    check_obs(obs, params);
    const double ld = params.lambda * params.spacing;
    const double decay = std::exp(-ld);
    const double gain = expm1_ratio(ld) / params.sigma;
    Eigen::MatrixXd raw(params.n_intervals, 1);
    for (int k = 0; k < params.n_intervals; ++k) {
        raw(k, 0) = gain * (obs.values(k + 1, 0) - obs.values(k, 0) * decay);
    }
    return IncrementSet(obs.partition, std::move(raw));
}

ObservationSet fou_forward(double y0, const IncrementSet& incs, const FouParams& params) {
    if (incs.dim() != 1 || incs.partition.intervals() != params.n_intervals) {
        throw std::invalid_argument("increment set does not match the parameters");
    }
    const double ld = params.lambda * params.spacing;
    const double decay = std::exp(-ld);
    const double gain = params.sigma / expm1_ratio(ld);
    Eigen::MatrixXd vals(params.n_intervals + 1, 1);
    vals(0, 0) = y0;
    for (int k = 0; k < params.n_intervals; ++k) {
        vals(k + 1, 0) = vals(k, 0) * decay + gain * incs.raw(k, 0);
    }
    return ObservationSet(incs.partition, std::move(vals));
}

double fou_sensitivity(const FouParams& params, double t) {
    if (t < 0.0 || t > params.spacing + 1e-15) {
        throw std::invalid_argument("sensitivity time must lie in [0, spacing]");
    }
    if (t == 0.0) return 0.0;
    // sigma (1 - e^{-lambda t}) / (lambda spacing) = sigma t / (spacing * ratio(lambda t))
    return params.sigma * t / (params.spacing * expm1_ratio(params.lambda * t));
}

double fou_loglik(const ObservationSet& obs, const FouParams& params,
                  const CovarianceFactor& noise) {
    check_obs(obs, params);
    if (noise.size() != params.n_intervals) {
        throw std::invalid_argument("noise factor does not match the parameters");
    }
    const IncrementSet inc = fou_invert(obs, params);
    const double jac =
        params.n_intervals * std::log(expm1_ratio(params.lambda * params.spacing) / params.sigma);
    return gaussian_log_density(noise, Eigen::VectorXd(inc.raw.col(0))) + jac;
}

std::pair<double, double> fou_scaled_components(const ObservationSet& obs, double lambda,
                                                double sigma) {
    if (obs.dim() != 1) throw std::invalid_argument("reference model is scalar");
    const int n = obs.partition.intervals();
    const double T = obs.partition.horizon();
    double sum_dy2 = 0.0, sum_y2dt = 0.0, sum_ydy = 0.0;
    for (int k = 0; k < n; ++k) {
        const double y = obs.values(k, 0);
        const double dy = obs.values(k + 1, 0) - y;
        sum_dy2 += dy * dy;
        sum_y2dt += y * y * obs.partition.spacing(k);
        sum_ydy += y * dy;
    }
    const double s2 = sigma * sigma;
    const double l0 = -0.5 * std::log(2.0 * M_PI * s2) - sum_dy2 / (2.0 * T * s2);
    const double l1 = 0.5 * lambda * T - lambda * sum_dy2 / (2.0 * s2) -
                      lambda * lambda * sum_y2dt / (2.0 * s2) - lambda * sum_ydy / s2;
    return {l0, l1};
}

ScaledLogLik fou_component_loglik(const ObservationSet& obs) {
    ScaledLogLik out;
    out.exponents = {-1.0, 0.0};
    out.sample_count = static_cast<double>(obs.partition.intervals());
    const double T = obs.partition.horizon();
    out.components.push_back([obs, T](const Eigen::VectorXd& th) {
        return fou_scaled_components(obs, th[0], th[1]).first / T;
    });
    out.components.push_back([obs](const Eigen::VectorXd& th) {
        return fou_scaled_components(obs, th[0], th[1]).second;
    });
    return out;
}

FouMle fou_mle(const ObservationSet& obs) {
    if (obs.dim() != 1) throw std::invalid_argument("reference model is scalar");
    const int n = obs.partition.intervals();
    const double T = obs.partition.horizon();
    double sum_dy2 = 0.0, sum_y2dt = 0.0, sum_ydy = 0.0;
    for (int k = 0; k < n; ++k) {
        const double y = obs.values(k, 0);
        const double dy = obs.values(k + 1, 0) - y;
        sum_dy2 += dy * dy;
        sum_y2dt += y * y * obs.partition.spacing(k);
        sum_ydy += y * dy;
    }
    if (!(sum_y2dt > 0.0)) {
        throw std::invalid_argument("mean-reversion estimate is degenerate: sum y^2 dt = 0");
    }
    return FouMle{sum_dy2 / T, -sum_ydy / sum_y2dt};
}

}  // namespace pathlik
