#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pathlik/flow.hpp"
#include "pathlik/observations.hpp"
#include "pathlik/path.hpp"
#include "pathlik/vector_field.hpp"

namespace pathlik {

struct NewtonOptions {
    double tol_rel = 1e-10;  // residual tolerance, scaled by 1 + ||y1||
    int max_iter = 50;
    int max_backtracks = 20;
    int steps_per_interval = 16;
    /// Overrides the default b(y0)^+ ((y1-y0)/delta - a(y0)) starting slope.
    std::optional<Eigen::VectorXd> initial_slope;
};

/// Base for interval-solver failures.
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NewtonFailure : SolveError {
    NewtonFailure(const std::string& msg, double last_residual, int iters)
        : SolveError(msg), residual(last_residual), iterations(iters) {}
    double residual;
    int iterations;
};

struct SingularJacobian : SolveError {
    SingularJacobian(const std::string& msg, double det) : SolveError(msg), determinant(det) {}
    double determinant;
};

/// Failure of a whole-dataset inversion, tagged with the interval at
/// which it occurred.
struct InversionError : std::runtime_error {
    InversionError(const std::string& msg, int failing_interval)
        : std::runtime_error(msg), interval(failing_interval) {}
    int interval;
};

struct IncrementSolve {
    Eigen::VectorXd slope;          // solved slope c*, R^m
    Eigen::VectorXd raw_increment;  // c* scaled by the interval width
    Eigen::MatrixXd sensitivity;    // slope-parametrized, at c*
    int iterations;
    double residual;
};

/// Solve the square (m = d) interval system: find the slope c with
/// flow(y0, c, delta) = y1, by Newton iteration with the sensitivity
/// matrix as Jacobian and a backtracking line search. The initial guess
/// b(y0)^+ ((y1-y0)/delta - a(y0)) is exact for constant-coefficient
/// fields.
IncrementSolve solve_increment(const Eigen::VectorXd& y0, const Eigen::VectorXd& y1,
                               double delta, const Eigen::VectorXd& theta,
                               const ParametricVectorField& field,
                               const NewtonOptions& opts = {});

/// Underdetermined case m > d: Newton in the first d slope coordinates
/// with coordinates d+1..m frozen at `fixed_slopes`. Returns the full
/// m-vector; `sensitivity` is the d x d sub-block in the solved
/// coordinates.
IncrementSolve solve_increment_constrained(const Eigen::VectorXd& y0,
                                           const Eigen::VectorXd& y1, double delta,
                                           const Eigen::VectorXd& theta,
                                           const ParametricVectorField& field,
                                           const Eigen::VectorXd& fixed_slopes,
                                           const NewtonOptions& opts = {});

/// Per-interval inversion of a whole observation set.
/// sensitivity_dets holds |det| of the increment-parametrized sensitivity
/// (slope sensitivity scaled by 1/delta per coordinate), which is the
/// diagonal-block Jacobian of the observation -> increment change of
/// variables.
struct InversionResult {
    IncrementSet increments;
    std::vector<double> sensitivity_dets;
    std::vector<int> newton_iters;
    std::vector<double> residuals;
};

InversionResult invert_dataset(const ObservationSet& obs, const Eigen::VectorXd& theta,
                               const ParametricVectorField& field,
                               const NewtonOptions& opts = {});

/// log |D(observations -> increments)| = -sum_i log sensitivity_dets[i];
/// the change-of-variables correction added to the increment log-density.
double jacobian_log_det(const InversionResult& result);

}  // namespace pathlik
