#include "pathlik/likelihood.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

namespace pathlik {

namespace {

void check_noise_grid(const ObservationSet& obs, const CovarianceFactor& noise) {
    if (noise.size() != obs.partition.intervals()) {
        throw std::invalid_argument("noise factor has " + std::to_string(noise.size()) +
                                    " increments, observations have " +
                                    std::to_string(obs.partition.intervals()) + " intervals");
    }
    const double delta = obs.partition.spacing(0);
    if (!obs.partition.is_homogeneous() ||
        std::abs(delta - noise.spacing) > 1e-12 * noise.spacing) {
        throw std::invalid_argument("noise factor spacing does not match the observation grid");
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 step; decorrelates per-sample streams.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double log_likelihood(const ObservationSet& obs, const Eigen::VectorXd& theta,
                      const ParametricVectorField& field,
                      const CovarianceFactor& noise, const NewtonOptions& opts) {
    if (field.m != field.d) {
        throw std::invalid_argument(
            "log_likelihood handles the square case m = d; use log_likelihood_marginal");
    }
    check_noise_grid(obs, noise);
    const InversionResult inv = invert_dataset(obs, theta, field, opts);
    return gaussian_log_density(noise, inv.increments.raw) + jacobian_log_det(inv);
}

FreeCoordSampler make_fbm_free_sampler(const CovarianceFactor& noise, int n_free) {
    if (n_free < 1) throw std::invalid_argument("need at least one free coordinate");
    return [noise, n_free](std::uint64_t seed, int sample_index) {
        return sample_increments(noise, mix_seed(seed, static_cast<std::uint64_t>(sample_index)),
                                 n_free);
    };
}

MarginalResult log_likelihood_marginal(const ObservationSet& obs,
                                       const Eigen::VectorXd& theta,
                                       const ParametricVectorField& field,
                                       const CovarianceFactor& noise,
                                       const FreeCoordSampler& sampler,
                                       int mc_samples, std::uint64_t seed,
                                       const NewtonOptions& opts) {
    if (field.m <= field.d) {
        throw std::invalid_argument("log_likelihood_marginal applies to m > d");
    }
    if (mc_samples < 1) throw std::invalid_argument("mc_samples must be positive");
    check_noise_grid(obs, noise);

    const int n_free = field.m - field.d;
    const int n = obs.partition.intervals();

    std::vector<double> logw;
    logw.reserve(static_cast<std::size_t>(mc_samples));
    int failed = 0;

    for (int s = 0; s < mc_samples; ++s) {
        const Eigen::MatrixXd free_raw = sampler(seed, s);
        if (free_raw.rows() != n || free_raw.cols() != n_free) {
            throw std::invalid_argument("free-coordinate sampler returned a wrong shape");
        }
        try {
            Eigen::MatrixXd solved(n, field.d);
            double log_jac = 0.0;
            for (int i = 0; i < n; ++i) {
                const double delta = obs.partition.spacing(i);
                const Eigen::VectorXd fixed = free_raw.row(i).transpose() / delta;
                const IncrementSolve sol = solve_increment_constrained(
                    obs.state(i), obs.state(i + 1), delta, theta, field, fixed, opts);
                solved.row(i) = sol.raw_increment.head(field.d).transpose();
                const double det = std::abs(sol.sensitivity.determinant()) /
                                   std::pow(delta, field.d);
                if (!(det > 0.0)) {
                    throw SingularJacobian("zero sub-Jacobian determinant", det);
                }
                log_jac -= std::log(det);
            }
            logw.push_back(gaussian_log_density(noise, solved) + log_jac);
        } catch (const SolveError&) {
            ++failed;
        }
    }

    if (logw.empty()) {
        throw std::runtime_error(
            "log_likelihood_marginal: every Monte-Carlo sample failed inversion");
    }

    const std::size_t used = logw.size();
    double shift = logw.front();
    for (double w : logw) shift = std::max(shift, w);
    double sum = 0.0, sumsq = 0.0;
    for (double w : logw) {
        const double r = std::exp(w - shift);
        sum += r;
        sumsq += r * r;
    }
    const double mean = sum / static_cast<double>(used);
    double stderr_val = 0.0;
    if (used > 1) {
        const double var =
            (sumsq - sum * sum / static_cast<double>(used)) / static_cast<double>(used - 1);
        stderr_val = std::sqrt(std::max(var, 0.0) / static_cast<double>(used)) / mean;
    }

    MarginalResult out;
    out.value = shift + std::log(mean);
    out.std_error = stderr_val;
    out.samples_used = static_cast<int>(used);
    out.samples_failed = failed;
    out.degraded = failed * 2 > mc_samples;
    return out;
}

double ScaledLogLik::reconstruct(const Eigen::VectorXd& theta) const {
    double total = 0.0;
    for (std::size_t k = 0; k < components.size(); ++k) {
        total += components[k](theta) * std::pow(sample_count, -exponents[k]);
    }
    return total;
}

ScaleFit decompose_scales(
    const std::function<double(const ObservationSet&, const Eigen::VectorXd&)>& loglik,
    const std::map<int, ObservationSet>& obs_per_level,
    const std::vector<Eigen::VectorXd>& thetas,
    const std::vector<double>& exponents) {
    const int n_coef = static_cast<int>(exponents.size());
    const int n_levels = static_cast<int>(obs_per_level.size());
    if (n_coef < 1) throw std::invalid_argument("need at least one exponent");
    for (int k = 1; k < n_coef; ++k) {
        if (!(exponents[static_cast<std::size_t>(k)] > exponents[static_cast<std::size_t>(k - 1)])) {
            throw std::invalid_argument("exponents must be strictly increasing");
        }
    }
    if (n_levels < n_coef + 1) {
        throw std::invalid_argument("need at least " + std::to_string(n_coef + 1) +
                                    " refinement levels to fit " + std::to_string(n_coef) +
                                    " coefficients");
    }
    if (thetas.empty()) throw std::invalid_argument("need at least one theta");

    ScaleFit fit;
    fit.exponents = exponents;
    fit.thetas = thetas;
    fit.levels.reserve(static_cast<std::size_t>(n_levels));
    fit.sample_counts.reserve(static_cast<std::size_t>(n_levels));

    Eigen::MatrixXd design(n_levels, n_coef);
    {
        int row = 0;
        for (const auto& [level, obs] : obs_per_level) {
            const double n_samples = static_cast<double>(obs.partition.intervals());
            fit.levels.push_back(level);
            fit.sample_counts.push_back(n_samples);
            for (int k = 0; k < n_coef; ++k) {
                design(row, k) = std::pow(n_samples, -exponents[static_cast<std::size_t>(k)]);
            }
            ++row;
        }
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-12);
    if (qr.rank() < n_coef) {
        throw std::invalid_argument(
            "scale-fit design matrix is rank deficient; supply more (or more distinct) levels");
    }

    const int n_theta = static_cast<int>(thetas.size());
    fit.components.resize(n_theta, n_coef);
    fit.residuals.resize(n_theta, n_levels);

    Eigen::VectorXd evals(n_levels);
    for (int t = 0; t < n_theta; ++t) {
        int row = 0;
        for (const auto& [level, obs] : obs_per_level) {
            evals[row++] = loglik(obs, thetas[static_cast<std::size_t>(t)]);
        }
        const Eigen::VectorXd coef = qr.solve(evals);
        fit.components.row(t) = coef.transpose();
        fit.residuals.row(t) = (evals - design * coef).transpose();
    }

    // Empirical remainder check: decay rate of the worst residual vs N.
    const double scale = fit.residuals.cwiseAbs().maxCoeff();
    std::vector<double> log_n, log_r;
    for (int row = 0; row < n_levels; ++row) {
        const double r = fit.residuals.col(row).cwiseAbs().maxCoeff();
        if (r > 1e-13 * std::max(scale, 1.0)) {
            log_n.push_back(std::log(fit.sample_counts[static_cast<std::size_t>(row)]));
            log_r.push_back(std::log(r));
        }
    }
    if (log_n.size() >= 2) {
        const double n_pts = static_cast<double>(log_n.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            sx += log_n[i];
            sy += log_r[i];
            sxx += log_n[i] * log_n[i];
            sxy += log_n[i] * log_r[i];
        }
        fit.remainder_slope = (n_pts * sxy - sx * sy) / (n_pts * sxx - sx * sx);
    } else {
        fit.remainder_slope = 0.0;  // residuals at solver precision: nothing to fit
    }
    return fit;
}

}  // namespace pathlik
