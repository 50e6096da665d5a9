#pragma once

#include <Eigen/Dense>

#include "pathlik/partition.hpp"

namespace pathlik {

/// Discrete observations of a response path on a grid; the first row is
/// the known initial condition at time 0.
struct ObservationSet {
    Partition partition;
    Eigen::MatrixXd values;  // one row per grid time, one column per state coordinate

    ObservationSet(Partition part, Eigen::MatrixXd vals)
        : partition(std::move(part)), values(std::move(vals)) {
        if (values.rows() != partition.size()) {
            throw std::invalid_argument("observations need one row per grid time");
        }
    }

    int dim() const { return static_cast<int>(values.cols()); }
    Eigen::VectorXd state(int k) const { return values.row(k).transpose(); }
};

}  // namespace pathlik
