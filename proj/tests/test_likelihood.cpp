#include <doctest.h>

#include <cmath>
#include <random>

#include "pathlik/fou.hpp"
#include "pathlik/likelihood.hpp"
#include "pathlik/vector_field.hpp"
#include "support/oracles.hpp"

using namespace pathlik;

namespace {

ObservationSet simulate_fou(const FouParams& params, const CovarianceFactor& noise,
                            std::uint64_t seed) {
    const FbmIncrementModel model(params.h, params.grid());
    return fou_forward(0.0, sample(model, noise, seed), params);
}

/// Case-I likelihood of the ou_mix field at frozen channel-2 increments:
/// the integrand of the marginal.
double constrained_loglik(const ObservationSet& obs, const Eigen::Vector3d& theta,
                          const ParametricVectorField& field, const CovarianceFactor& noise,
                          const Eigen::VectorXd& free_raw) {
    const int n = obs.partition.intervals();
    Eigen::VectorXd solved(n);
    double log_jac = 0.0;
    for (int i = 0; i < n; ++i) {
        const double delta = obs.partition.spacing(i);
        const auto sol = solve_increment_constrained(
            obs.state(i), obs.state(i + 1), delta, theta, field,
            Eigen::VectorXd::Constant(1, free_raw[i] / delta), {});
        solved[i] = sol.raw_increment(0);
        log_jac -= std::log(std::abs(sol.sensitivity.determinant()) / delta);
    }
    return gaussian_log_density(noise, solved) + log_jac;
}

}  // namespace

TEST_CASE("generic likelihood equals the scalar closed form") {
    for (double h : {0.3, 0.5, 0.7}) {
        const FouParams params(1.1, 0.9, h, 0.125, 16);
        const auto noise = fbm_covariance(h, params.spacing, params.n_intervals);
        const auto obs = simulate_fou(params, noise, 77);
        const auto field = make_fou_field();
        for (double lambda : {0.6, 1.4}) {
            for (double sigma : {0.7, 1.2}) {
                const FouParams eval(lambda, sigma, h, params.spacing, params.n_intervals);
                const double generic =
                    log_likelihood(obs, Eigen::Vector2d(lambda, sigma), field, noise, {});
                const double closed = fou_loglik(obs, eval, noise);
                CHECK(generic == doctest::Approx(closed).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("pure integrator likelihood is a scaled Gaussian density") {
    const int n = 8;
    const double delta = 0.125;
    const double sigma = 1.7;
    const auto noise = fbm_covariance(0.5, delta, n);
    const Partition grid = Partition::homogeneous(delta, n);
    std::mt19937_64 rng(83);
    Eigen::MatrixXd vals(n + 1, 1);
    vals(0, 0) = 0.0;
    for (int k = 0; k < n; ++k) vals(k + 1, 0) = vals(k, 0) + 0.3 * oracles::random_vector(rng, 1)(0);
    const ObservationSet obs(grid, vals);

    const double value = log_likelihood(obs, Eigen::VectorXd::Constant(1, sigma),
                                        make_pure_integrator(1), noise, {});

    double expected = -n * std::log(sigma);
    for (int k = 0; k < n; ++k) {
        const double z = (vals(k + 1, 0) - vals(k, 0)) / sigma;
        expected += -0.5 * std::log(2.0 * M_PI * delta) - 0.5 * z * z / delta;
    }
    CHECK(value == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("standard normal point value") {
    const auto noise = fbm_covariance(0.5, 1.0, 1);
    const ObservationSet obs(Partition({0.0, 1.0}), Eigen::MatrixXd::Zero(2, 1));
    const double value =
        log_likelihood(obs, Eigen::VectorXd::Ones(1), make_pure_integrator(1), noise, {});
    CHECK(value == doctest::Approx(-0.9189385332046727).epsilon(1e-12));
}

TEST_CASE("likelihood rejects mismatched noise grids") {
    const auto noise = fbm_covariance(0.5, 0.25, 4);
    const ObservationSet obs(Partition({0.0, 1.0}), Eigen::MatrixXd::Zero(2, 1));
    CHECK_THROWS_AS(log_likelihood(obs, Eigen::VectorXd::Ones(1), make_pure_integrator(1),
                                   noise, {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(log_likelihood(obs, Eigen::Vector3d(1.0, 1.0, 0.5), make_ou_mix_field(),
                                   fbm_covariance(0.5, 1.0, 1), {}),
                    std::invalid_argument);
}

TEST_CASE("marginal likelihood with a dead second channel equals Case I") {
    const auto field = make_ou_mix_field();
    const Eigen::Vector3d theta(1.0, 0.9, 0.0);  // channel 2 decoupled
    const FouParams params(theta[0], theta[1], 0.5, 0.25, 4);
    const auto noise = fbm_covariance(0.5, 0.25, 4);
    const auto obs = simulate_fou(params, noise, 11);

    const auto sampler = make_fbm_free_sampler(noise, 1);
    const auto marginal =
        log_likelihood_marginal(obs, theta, field, noise, sampler, 64, 5, {});

    const double case1 =
        log_likelihood(obs, Eigen::Vector2d(theta[0], theta[1]), make_fou_field(), noise, {});
    CHECK(std::abs(marginal.value - case1) <=
          std::max(3.0 * marginal.std_error, 1e-9));
    CHECK(marginal.samples_failed == 0);
    CHECK_FALSE(marginal.degraded);
}

TEST_CASE("marginal likelihood matches a Gauss-Hermite oracle on a coupled field") {
    const auto field = make_ou_mix_field();
    const Eigen::Vector3d theta(1.2, 0.8, 0.6);
    const int n = 2;
    const double delta = 0.5;
    const auto noise = fbm_covariance(0.5, delta, n);
    const Partition grid = Partition::homogeneous(delta, n);

    // Observations from a joint two-channel draw.
    const Eigen::MatrixXd both = sample_increments(noise, 29, 2);
    const PiecewiseLinearPath driver(grid, [&] {
        Eigen::MatrixXd v(n + 1, 2);
        v.row(0).setZero();
        for (int i = 0; i < n; ++i) v.row(i + 1) = v.row(i) + both.row(i);
        return v;
    }());
    const auto obs = respond(Eigen::VectorXd::Zero(1), driver, theta, field, 32);

    // 32^2-point tensor quadrature over the free increments V = chol * z.
    const auto gh = oracles::gauss_hermite(32);
    std::vector<double> log_terms;
    const double log_pi = std::log(M_PI);
    for (int i = 0; i < 32; ++i) {
        for (int j = 0; j < 32; ++j) {
            Eigen::VectorXd z(2);
            z << std::sqrt(2.0) * gh.nodes[i], std::sqrt(2.0) * gh.nodes[j];
            const Eigen::VectorXd v = noise.chol.triangularView<Eigen::Lower>() * z;
            const double ll = constrained_loglik(obs, theta, field, noise, v);
            log_terms.push_back(std::log(gh.weights[i]) + std::log(gh.weights[j]) - log_pi +
                                ll);
        }
    }
    const double oracle = oracles::log_sum_exp(log_terms);

    const auto sampler = make_fbm_free_sampler(noise, 1);
    const auto marginal =
        log_likelihood_marginal(obs, theta, field, noise, sampler, 4000, 17, {});
    CHECK(std::abs(marginal.value - oracle) <= 3.0 * marginal.std_error);
}

TEST_CASE("Monte-Carlo error shrinks like the square root of the sample count") {
    const auto field = make_ou_mix_field();
    const Eigen::Vector3d theta(1.0, 0.9, 0.5);
    const int n = 2;
    const double delta = 0.5;
    const auto noise = fbm_covariance(0.5, delta, n);
    const FouParams params(1.0, 0.9, 0.5, delta, n);
    const auto obs = simulate_fou(params, noise, 3);
    const auto sampler = make_fbm_free_sampler(noise, 1);

    double ratio_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto small = log_likelihood_marginal(obs, theta, field, noise, sampler, 400,
                                                   100 + seed, {});
        const auto big = log_likelihood_marginal(obs, theta, field, noise, sampler, 800,
                                                 200 + seed, {});
        ratio_sum += small.std_error / big.std_error;
    }
    const double mean_ratio = ratio_sum / 10.0;
    CHECK(mean_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.20));
}

TEST_CASE("marginal likelihood fails loudly when every sample fails") {
    auto field = make_ou_mix_field();
    const Eigen::Vector3d theta(1.0, 0.0, 0.6);  // singular first channel
    const int n = 2;
    const auto noise = fbm_covariance(0.5, 0.5, n);
    const ObservationSet obs(Partition::homogeneous(0.5, n), Eigen::MatrixXd::Ones(3, 1));
    const auto sampler = make_fbm_free_sampler(noise, 1);
    CHECK_THROWS_AS(
        log_likelihood_marginal(obs, theta, field, noise, sampler, 8, 1, {}),
        std::runtime_error);
}

TEST_CASE("scale decomposition recovers an exact linear model") {
    std::map<int, ObservationSet> obs_per_level;
    for (int n = 4; n <= 8; ++n) {
        const Partition grid = dyadic_grid(n, 1.0);
        obs_per_level.emplace(n, ObservationSet(grid, Eigen::MatrixXd::Zero(grid.size(), 1)));
    }
    const double c0 = 2.5, c1 = -1.25;
    auto evaluator = [&](const ObservationSet& obs, const Eigen::VectorXd& th) {
        const double n_samples = obs.partition.intervals();
        return th[0] * (c0 * n_samples + c1);
    };
    const std::vector<Eigen::VectorXd> thetas{Eigen::VectorXd::Ones(1),
                                              Eigen::VectorXd::Constant(1, 2.0)};
    const auto fit = decompose_scales(evaluator, obs_per_level, thetas, {-1.0, 0.0});
    CHECK(fit.components(0, 0) == doctest::Approx(c0).epsilon(1e-10));
    CHECK(fit.components(0, 1) == doctest::Approx(c1).epsilon(1e-10));
    CHECK(fit.components(1, 0) == doctest::Approx(2.0 * c0).epsilon(1e-10));
    CHECK(fit.components(1, 1) == doctest::Approx(2.0 * c1).epsilon(1e-10));
}

TEST_CASE("a planted 1/N term shows up as a residual decay slope near -1") {
    std::map<int, ObservationSet> obs_per_level;
    for (int n = 4; n <= 12; ++n) {
        const Partition grid = dyadic_grid(n, 1.0);
        obs_per_level.emplace(n, ObservationSet(grid, Eigen::MatrixXd::Zero(grid.size(), 1)));
    }
    auto evaluator = [&](const ObservationSet& obs, const Eigen::VectorXd&) {
        const double n_samples = obs.partition.intervals();
        return 3.0 * n_samples - 2.0 + 0.8 / n_samples;
    };
    const std::vector<Eigen::VectorXd> thetas{Eigen::VectorXd::Ones(1)};
    const auto fit = decompose_scales(evaluator, obs_per_level, thetas, {-1.0, 0.0});
    CHECK(fit.remainder_slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("scale decomposition validates its inputs") {
    std::map<int, ObservationSet> two_levels;
    for (int n = 4; n <= 5; ++n) {
        const Partition grid = dyadic_grid(n, 1.0);
        two_levels.emplace(n, ObservationSet(grid, Eigen::MatrixXd::Zero(grid.size(), 1)));
    }
    auto evaluator = [](const ObservationSet&, const Eigen::VectorXd&) { return 0.0; };
    const std::vector<Eigen::VectorXd> thetas{Eigen::VectorXd::Ones(1)};
    CHECK_THROWS_AS(decompose_scales(evaluator, two_levels, thetas, {-1.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(decompose_scales(evaluator, two_levels, thetas, {0.0}),
                    std::invalid_argument);  // still too few levels
    std::map<int, ObservationSet> enough = two_levels;
    for (int n = 6; n <= 7; ++n) {
        const Partition grid = dyadic_grid(n, 1.0);
        enough.emplace(n, ObservationSet(grid, Eigen::MatrixXd::Zero(grid.size(), 1)));
    }
    CHECK_THROWS_AS(decompose_scales(evaluator, enough, thetas, {0.0, -1.0}),
                    std::invalid_argument);  // exponents must increase
}

TEST_CASE("scale decomposition tracks the analytic components of the reference model") {
    // One fine simulated path, restricted to each level. The acceptance
    // suite runs the full-scale version of this check; this one guards the
    // machinery at a smaller size.
    const int n_fine = 10;
    const FouParams fine_params(1.0, 1.0, 0.5, std::ldexp(1.0, -n_fine), 1 << n_fine);
    const auto fine_noise = fbm_covariance(0.5, fine_params.spacing, fine_params.n_intervals);
    const auto fine_obs = simulate_fou(fine_params, fine_noise, 2024);
    const PiecewiseLinearPath fine_path(fine_obs.partition, fine_obs.values);

    std::map<int, ObservationSet> obs_per_level;
    std::map<int, CovarianceFactor> noise_per_level;
    for (int n = 5; n <= 9; ++n) {
        const Partition grid = dyadic_grid(n, 1.0);
        const auto restricted = restrict(fine_path, grid);
        obs_per_level.emplace(n, ObservationSet(grid, restricted.values));
        noise_per_level.emplace(n, fbm_covariance(0.5, grid.spacing(0), grid.intervals()));
    }

    const auto field = make_fou_field();
    // Evaluator: full likelihood with the theta-independent lattice
    // constant (N/2) log(spacing) added back, so the level dependence is
    // spanned by {N, 1}.
    auto evaluator = [&](const ObservationSet& obs, const Eigen::VectorXd& th) {
        const int level = obs.partition.level().value();
        const double n_samples = obs.partition.intervals();
        const double value =
            log_likelihood(obs, th, field, noise_per_level.at(level), {});
        return value + 0.5 * n_samples * std::log(obs.partition.spacing(0));
    };

    std::vector<Eigen::VectorXd> thetas;
    for (double lambda : {0.7, 1.0, 1.3}) {
        for (double sigma : {0.9, 1.0, 1.1}) {
            thetas.push_back(Eigen::Vector2d(lambda, sigma));
        }
    }
    const auto fit = decompose_scales(evaluator, obs_per_level, thetas, {-1.0, 0.0});

    const auto& finest = obs_per_level.at(9);
    const double T = finest.partition.horizon();
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        const auto [l0, l1] = fou_scaled_components(finest, thetas[t][0], thetas[t][1]);
        CHECK(fit.components(static_cast<int>(t), 0) ==
              doctest::Approx(l0 / T).epsilon(0.05));
        CHECK(fit.components(static_cast<int>(t), 1) == doctest::Approx(l1).epsilon(0.05));
    }
}
