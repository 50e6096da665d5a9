#include "pathlik/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pathlik {

PiecewiseLinearPath::PiecewiseLinearPath(Partition part, Eigen::MatrixXd vals)
    : partition(std::move(part)), values(std::move(vals)) {
    if (values.rows() != partition.size()) {
        throw std::invalid_argument("path needs one value row per grid time");
    }
    if (values.cols() < 1) {
        throw std::invalid_argument("path dimension must be at least 1");
    }
}

Eigen::VectorXd PiecewiseLinearPath::value_at(double t) const {
    const auto& times = partition.times();
    if (t < times.front() || t > times.back()) {
        throw std::invalid_argument("evaluation time outside [0, T]");
    }
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) {
        return values.row(values.rows() - 1).transpose();
    }
    const int i = static_cast<int>(it - times.begin()) - 1;
    const double w = (t - times[static_cast<std::size_t>(i)]) / partition.spacing(i);
    return ((1.0 - w) * values.row(i) + w * values.row(i + 1)).transpose();
}

IncrementSet::IncrementSet(Partition part, Eigen::MatrixXd incs)
    : partition(std::move(part)), raw(std::move(incs)) {
    if (raw.rows() != partition.intervals()) {
        throw std::invalid_argument("increment set needs one row per interval");
    }
}

IncrementSet increments(const PiecewiseLinearPath& path) {
    const int n = path.partition.intervals();
    Eigen::MatrixXd raw(n, path.dim());
    for (int i = 0; i < n; ++i) {
        raw.row(i) = path.values.row(i + 1) - path.values.row(i);
    }
    return IncrementSet(path.partition, std::move(raw));
}

PiecewiseLinearPath cumulative_path(const IncrementSet& incs,
                                    const Eigen::VectorXd& start) {
    if (start.size() != incs.raw.cols()) {
        throw std::invalid_argument("starting point dimension mismatch");
    }
    Eigen::MatrixXd vals(incs.partition.size(), incs.raw.cols());
    vals.row(0) = start.transpose();
    for (int i = 0; i < incs.partition.intervals(); ++i) {
        vals.row(i + 1) = vals.row(i) + incs.raw.row(i);
    }
    return PiecewiseLinearPath(incs.partition, std::move(vals));
}

PiecewiseLinearPath restrict(const PiecewiseLinearPath& path,
                             const Partition& coarser) {
    if (!path.partition.contains(coarser)) {
        throw std::invalid_argument("restrict: grids are not nested");
    }
    const auto& fine = path.partition.times();
    Eigen::MatrixXd vals(coarser.size(), path.dim());
    std::size_t j = 0;
    for (int k = 0; k < coarser.size(); ++k) {
        const double t = coarser.time(k);
        while (fine[j] != t) ++j;
        vals.row(k) = path.values.row(static_cast<int>(j));
    }
    return PiecewiseLinearPath(coarser, std::move(vals));
}

PiecewiseLinearPath resample(const PiecewiseLinearPath& path,
                             const Partition& target) {
    if (target.horizon() > path.partition.horizon()) {
        throw std::invalid_argument("resample: target grid extends past the path horizon");
    }
    Eigen::MatrixXd vals(target.size(), path.dim());
    for (int k = 0; k < target.size(); ++k) {
        vals.row(k) = path.value_at(target.time(k)).transpose();
    }
    return PiecewiseLinearPath(target, std::move(vals));
}

double p_variation_distance(const PiecewiseLinearPath& a,
                            const PiecewiseLinearPath& b, double p) {
    if (p < 1.0) {
        throw std::invalid_argument("p-variation requires p >= 1");
    }
    if (!(a.partition == b.partition)) {
        throw std::invalid_argument(
            "p-variation needs both paths on the same grid; resample to a common refinement first");
    }
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("p-variation: path dimensions differ");
    }

    const Eigen::MatrixXd diff = a.values - b.values;
    const int n = static_cast<int>(diff.rows());

    // best[j]: largest sum of ||diff jumps||^p over chains of grid points
    // ending at j. A chain may start anywhere, so best starts at 0.
    std::vector<double> best(static_cast<std::size_t>(n), 0.0);
    double top = 0.0;
    for (int j = 1; j < n; ++j) {
        double current = 0.0;
        for (int i = 0; i < j; ++i) {
            const double jump = (diff.row(j) - diff.row(i)).norm();
            const double cand = best[static_cast<std::size_t>(i)] + std::pow(jump, p);
            if (cand > current) current = cand;
        }
        best[static_cast<std::size_t>(j)] = current;
        if (current > top) top = current;
    }
    return std::pow(top, 1.0 / p);
}

}  // namespace pathlik
