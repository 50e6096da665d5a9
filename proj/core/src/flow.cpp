#include "pathlik/flow.hpp"

#include <stdexcept>
#include <string>

namespace pathlik {

namespace {

struct Derivative {
    Eigen::VectorXd dy;
    Eigen::MatrixXd dz;
};

Derivative rhs(const Eigen::VectorXd& y, const Eigen::MatrixXd& z,
               const Eigen::VectorXd& c, const Eigen::VectorXd& theta,
               const ParametricVectorField& field) {
    const Eigen::MatrixXd b = field.b(y, theta);
    Derivative out;
    out.dy = field.a(y, theta) + b * c;

    // A(y) = grad(a + b c): A_{ij} = d_j a_i + sum_beta c_beta d_j b_{i,beta}
    Eigen::MatrixXd A = field.grad_a(y, theta);
    const auto gb = field.grad_b(y, theta);
    for (int beta = 0; beta < field.m; ++beta) {
        A.noalias() += c[beta] * gb[static_cast<std::size_t>(beta)];
    }
    out.dz = A * z + b;
    return out;
}

}  // namespace

FlowResult flow(const Eigen::VectorXd& y0, const Eigen::VectorXd& c,
                const Eigen::VectorXd& theta, double t,
                const ParametricVectorField& field, int steps,
                bool keep_dense) {
    if (!(t > 0.0)) throw std::invalid_argument("flow horizon must be positive");
    if (steps < 1) throw std::invalid_argument("flow needs at least one substep");
    if (y0.size() != field.d) throw std::invalid_argument("flow: state dimension mismatch");
    if (c.size() != field.m) throw std::invalid_argument("flow: slope dimension mismatch");
    if (!field.grad_a || !field.grad_b) {
        throw std::invalid_argument(
            "flow: field gradients missing; wrap the field with with_fd_gradients");
    }

    const double h = t / steps;
    Eigen::VectorXd y = y0;
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(field.d, field.m);

    FlowResult result;
    if (keep_dense) {
        result.dense_states.reserve(static_cast<std::size_t>(steps) + 1);
        result.dense_states.push_back(y);
    }

    for (int s = 0; s < steps; ++s) {
        const Derivative k1 = rhs(y, z, c, theta, field);
        const Derivative k2 = rhs(y + 0.5 * h * k1.dy, z + 0.5 * h * k1.dz, c, theta, field);
        const Derivative k3 = rhs(y + 0.5 * h * k2.dy, z + 0.5 * h * k2.dz, c, theta, field);
        const Derivative k4 = rhs(y + h * k3.dy, z + h * k3.dz, c, theta, field);

        y += (h / 6.0) * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
        z += (h / 6.0) * (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz);

        if (!y.allFinite() || !z.allFinite()) {
            throw std::runtime_error("flow: non-finite state at substep " +
                                     std::to_string(s + 1) + " of " + std::to_string(steps));
        }
        if (keep_dense) result.dense_states.push_back(y);
    }

    result.state = std::move(y);
    result.sensitivity = std::move(z);
    return result;
}

ObservationSet respond(const Eigen::VectorXd& y0,
                       const PiecewiseLinearPath& driver,
                       const Eigen::VectorXd& theta,
                       const ParametricVectorField& field,
                       int steps_per_interval) {
    if (driver.dim() != field.m) {
        throw std::invalid_argument("respond: driver dimension does not match the field");
    }
    const IncrementSet incs = increments(driver);
    Eigen::MatrixXd values(driver.partition.size(), field.d);
    Eigen::VectorXd y = y0;
    values.row(0) = y.transpose();
    for (int i = 0; i < driver.partition.intervals(); ++i) {
        const double dt = driver.partition.spacing(i);
        y = flow(y, incs.slope(i), theta, dt, field, steps_per_interval).state;
        values.row(i + 1) = y.transpose();
    }
    return ObservationSet(driver.partition, std::move(values));
}

}  // namespace pathlik
