#include "pathlik/inverse_ito.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>

namespace pathlik {

namespace {

Eigen::VectorXd initial_slope(const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                              double delta, const Eigen::VectorXd& theta,
                              const ParametricVectorField& field) {
    const Eigen::VectorXd rhs = (y1 - y0) / delta - field.a(y0, theta);
    const Eigen::MatrixXd b0 = field.b(y0, theta);
    if (field.m == field.d) {
        return b0.partialPivLu().solve(rhs);
    }
    return b0.completeOrthogonalDecomposition().solve(rhs);
}

double det_threshold(const Eigen::MatrixXd& z) {
    const double scale = std::pow(z.norm(), static_cast<double>(z.rows()));
    return 1e-14 * std::max(scale, std::numeric_limits<double>::min());
}

/// Shared Newton loop. `active` selects the solved slope coordinates; the
/// rest of `c` stays frozen.
IncrementSolve newton_solve(const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                            double delta, const Eigen::VectorXd& theta,
                            const ParametricVectorField& field, Eigen::VectorXd c,
                            int active, const NewtonOptions& opts,
                            const char* label) {
    const double tol = opts.tol_rel * (1.0 + y1.norm());

    FlowResult fr = flow(y0, c, theta, delta, field, opts.steps_per_interval);
    Eigen::VectorXd g = fr.state - y1;
    double res = g.norm();

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (res <= tol) {
            IncrementSolve out;
            out.slope = c;
            out.raw_increment = c * delta;
            out.sensitivity = fr.sensitivity.leftCols(active);
            out.iterations = iter;
            out.residual = res;
            return out;
        }

        const Eigen::MatrixXd z = fr.sensitivity.leftCols(active);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(z);
        const double det = lu.determinant();
        if (std::abs(det) < det_threshold(z)) {
            throw SingularJacobian(
                std::string(label) +
                    ": singular sensitivity (|det|=" + std::to_string(std::abs(det)) +
                    "); the dispersion may lose rank or the target state may be unreachable",
                det);
        }
        const Eigen::VectorXd dc = -lu.solve(g);

        // Backtracking on the residual norm; plain Newton resumes as soon
        // as full steps decrease it. A trial step that blows up the flow
        // counts as a failed trial.
        double step = 1.0;
        bool improved = false;
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            Eigen::VectorXd c_try = c;
            c_try.head(active) += step * dc;
            try {
                FlowResult fr_try =
                    flow(y0, c_try, theta, delta, field, opts.steps_per_interval);
                const double res_try = (fr_try.state - y1).norm();
                if (res_try < res) {
                    c = std::move(c_try);
                    fr = std::move(fr_try);
                    g = fr.state - y1;
                    res = res_try;
                    improved = true;
                    break;
                }
            } catch (const std::runtime_error&) {
            }
            step *= 0.5;
        }
        if (!improved) {
            throw NewtonFailure(std::string(label) + ": line search stalled at residual " +
                                    std::to_string(res),
                                res, iter);
        }
    }

    if (res <= tol) {
        IncrementSolve out;
        out.slope = c;
        out.raw_increment = c * delta;
        out.sensitivity = fr.sensitivity.leftCols(active);
        out.iterations = opts.max_iter;
        out.residual = res;
        return out;
    }
    throw NewtonFailure(std::string(label) + ": no convergence after " +
                            std::to_string(opts.max_iter) +
                            " iterations (residual " + std::to_string(res) + ")",
                        res, opts.max_iter);
}

}  // namespace

IncrementSolve solve_increment(const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                               double delta, const Eigen::VectorXd& theta,
                               const ParametricVectorField& field,
                               const NewtonOptions& opts) {
    if (field.m != field.d) {
        throw std::invalid_argument(
            field.m < field.d
                ? "solve_increment: fewer driver channels than states is not supported"
                : "solve_increment: use solve_increment_constrained for m > d");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("interval width must be positive");
    Eigen::VectorXd c0;
    if (opts.initial_slope) {
        if (opts.initial_slope->size() != field.m) {
            throw std::invalid_argument("initial_slope has the wrong dimension");
        }
        c0 = *opts.initial_slope;
    } else {
        c0 = initial_slope(y0, y1, delta, theta, field);
    }
    return newton_solve(y0, y1, delta, theta, field, c0, field.d, opts, "solve_increment");
}

IncrementSolve solve_increment_constrained(const Eigen::VectorXd& y0,
                                           const Eigen::VectorXd& y1, double delta,
                                           const Eigen::VectorXd& theta,
                                           const ParametricVectorField& field,
                                           const Eigen::VectorXd& fixed_slopes,
                                           const NewtonOptions& opts) {
    if (field.m <= field.d) {
        throw std::invalid_argument(
            "solve_increment_constrained applies to m > d; use solve_increment");
    }
    if (fixed_slopes.size() != field.m - field.d) {
        throw std::invalid_argument("expected " + std::to_string(field.m - field.d) +
                                    " fixed slope coordinates");
    }
    if (!(delta > 0.0)) throw std::invalid_argument("interval width must be positive");

    const Eigen::MatrixXd b0 = field.b(y0, theta);
    const Eigen::VectorXd rhs = (y1 - y0) / delta - field.a(y0, theta) -
                                b0.rightCols(field.m - field.d) * fixed_slopes;
    Eigen::VectorXd c(field.m);
    c.head(field.d) = b0.leftCols(field.d).partialPivLu().solve(rhs);
    c.tail(field.m - field.d) = fixed_slopes;

    try {
        return newton_solve(y0, y1, delta, theta, field, c, field.d, opts,
                            "solve_increment_constrained");
    } catch (const SingularJacobian& e) {
        throw SingularJacobian(std::string(e.what()) +
                                   "; a different free/fixed coordinate split may be solvable",
                               e.determinant);
    }
}

InversionResult invert_dataset(const ObservationSet& obs, const Eigen::VectorXd& theta,
                               const ParametricVectorField& field,
                               const NewtonOptions& opts) {
    if (obs.dim() != field.d) {
        throw std::invalid_argument("invert_dataset: observation dimension mismatch");
    }
    const int n = obs.partition.intervals();
    Eigen::MatrixXd raw(n, field.m);
    std::vector<double> dets(static_cast<std::size_t>(n));
    std::vector<int> iters(static_cast<std::size_t>(n));
    std::vector<double> residuals(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        const double delta = obs.partition.spacing(i);
        try {
            IncrementSolve s =
                solve_increment(obs.state(i), obs.state(i + 1), delta, theta, field, opts);
            raw.row(i) = s.raw_increment.transpose();
            // Determinant in the raw-increment parametrization: the slope
            // sensitivity picks up 1/delta per coordinate.
            dets[static_cast<std::size_t>(i)] =
                std::abs(s.sensitivity.determinant()) / std::pow(delta, field.d);
            iters[static_cast<std::size_t>(i)] = s.iterations;
            residuals[static_cast<std::size_t>(i)] = s.residual;
        } catch (const InversionError&) {
            throw;
        } catch (const std::runtime_error& e) {
            throw InversionError("interval " + std::to_string(i) + ": " + e.what(), i);
        }
    }

    return InversionResult{IncrementSet(obs.partition, std::move(raw)), std::move(dets),
                           std::move(iters), std::move(residuals)};
}

double jacobian_log_det(const InversionResult& result) {
    double total = 0.0;
    for (std::size_t i = 0; i < result.sensitivity_dets.size(); ++i) {
        const double det = result.sensitivity_dets[i];
        if (!(det > 0.0)) {
            throw std::invalid_argument("jacobian_log_det: nonpositive determinant at interval " +
                                        std::to_string(i));
        }
        total -= std::log(det);
    }
    return total;
}

}  // namespace pathlik
