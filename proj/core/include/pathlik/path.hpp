#pragma once

#include <Eigen/Dense>

#include "pathlik/partition.hpp"

namespace pathlik {

/// Values of an R^m path on a grid; the path itself is the linear
/// interpolant through them.
struct PiecewiseLinearPath {
    Partition partition;
    Eigen::MatrixXd values;  // one row per grid time, one column per coordinate

    PiecewiseLinearPath(Partition part, Eigen::MatrixXd vals);

    int dim() const { return static_cast<int>(values.cols()); }

    /// Linear interpolation at t in [0, T].
    Eigen::VectorXd value_at(double t) const;
};

/// Raw increments x_{t_{i+1}} - x_{t_i} per interval. The slope on
/// interval i is raw.row(i) / spacing(i); the conversion is exact and
/// invertible given the partition.
struct IncrementSet {
    Partition partition;
    Eigen::MatrixXd raw;  // intervals x m

    IncrementSet(Partition part, Eigen::MatrixXd increments);

    int dim() const { return static_cast<int>(raw.cols()); }
    Eigen::VectorXd slope(int interval) const {
        return raw.row(interval).transpose() / partition.spacing(interval);
    }
};

IncrementSet increments(const PiecewiseLinearPath& path);

/// Rebuild the path from raw increments and a starting point.
PiecewiseLinearPath cumulative_path(const IncrementSet& incs,
                                    const Eigen::VectorXd& start);

/// Sample the path on a coarser grid whose times are a subset of the
/// path's grid. The interpolant through the result is the coarse
/// piecewise-linear projection of the finer path.
PiecewiseLinearPath restrict(const PiecewiseLinearPath& path,
                             const Partition& coarser);

/// Evaluate the interpolant on another grid spanning the same [0, T].
/// Unlike restrict, target times need not lie on the source grid.
PiecewiseLinearPath resample(const PiecewiseLinearPath& path,
                             const Partition& target);

/// Exact level-1 p-variation distance between two piecewise-linear paths
/// on the same grid: sup over subsets E of grid points of
/// (sum ||(a-b)_{tau_i, tau_{i+1}}||^p)^(1/p), computed by dynamic
/// programming over grid points. Symmetric, zero iff the paths agree on
/// the grid. Paths on different grids must be resampled to a common
/// refinement first.
double p_variation_distance(const PiecewiseLinearPath& a,
                            const PiecewiseLinearPath& b, double p);

}  // namespace pathlik
