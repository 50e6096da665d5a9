#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pathlik/observations.hpp"
#include "pathlik/path.hpp"
#include "pathlik/vector_field.hpp"

namespace pathlik {

/// Terminal state of the constant-slope interval flow together with its
/// derivative in the slope (the sensitivity matrix, zero at t = 0).
struct FlowResult {
    Eigen::VectorXd state;        // R^d
    Eigen::MatrixXd sensitivity;  // d x m, d(state)/d(slope)
    std::vector<Eigen::VectorXd> dense_states;  // filled only on request
};

/// Integrate dy/dt = a(y;theta) + b(y;theta) c from y0 over [0, t] with a
/// fixed-step 4th-order Runge-Kutta scheme, jointly with the variational
/// equation for the slope sensitivity. `c` is the normalised slope of the
/// driver on the interval (raw increment / interval width).
FlowResult flow(const Eigen::VectorXd& y0, const Eigen::VectorXd& c,
                const Eigen::VectorXd& theta, double t,
                const ParametricVectorField& field, int steps,
                bool keep_dense = false);

/// Response values on the driver's grid: iterate the interval flow,
/// feeding each interval its normalised slope. The grid values determine
/// the whole response path.
ObservationSet respond(const Eigen::VectorXd& y0,
                       const PiecewiseLinearPath& driver,
                       const Eigen::VectorXd& theta,
                       const ParametricVectorField& field,
                       int steps_per_interval);

}  // namespace pathlik
