#include "pathlik/partition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pathlik {

Partition::Partition(std::vector<double> times, std::optional<int> level)
    : times_(std::move(times)), level_(level) {
    if (times_.size() < 2) {
        throw std::invalid_argument("Partition needs at least two times");
    }
    if (times_.front() != 0.0) {
        throw std::invalid_argument("Partition must start at 0");
    }
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1])) {
            throw std::invalid_argument(
                "Partition times must be strictly increasing (violated at index " +
                std::to_string(k) + ")");
        }
    }
}

Partition Partition::homogeneous(double spacing, int intervals,
                                 std::optional<int> level) {
    if (spacing <= 0.0 || intervals < 1) {
        throw std::invalid_argument("homogeneous grid needs spacing > 0 and intervals >= 1");
    }
    std::vector<double> times(static_cast<std::size_t>(intervals) + 1);
    for (int k = 0; k <= intervals; ++k) {
        times[static_cast<std::size_t>(k)] = spacing * k;
    }
    return Partition(std::move(times), level);
}

double Partition::mesh() const {
    double widest = 0.0;
    for (int k = 0; k < intervals(); ++k) {
        widest = std::max(widest, spacing(k));
    }
    return widest;
}

bool Partition::is_homogeneous() const {
    const double h0 = spacing(0);
    for (int k = 1; k < intervals(); ++k) {
        if (std::abs(spacing(k) - h0) > 1e-12 * h0) return false;
    }
    return true;
}

bool Partition::contains(const Partition& coarser) const {
    std::size_t j = 0;
    for (double t : coarser.times_) {
        while (j < times_.size() && times_[j] < t) ++j;
        if (j == times_.size() || times_[j] != t) return false;
    }
    return true;
}

Partition dyadic_grid(int n, double T) {
    if (n < 0) throw std::invalid_argument("dyadic level must be nonnegative");
    if (!(T > 0.0)) throw std::invalid_argument("horizon T must be positive");
    const double n_intervals = std::ldexp(T, n);  // T * 2^n
    const double rounded = std::round(n_intervals);
    if (rounded < 1.0 || std::abs(n_intervals - rounded) > 1e-9) {
        throw std::invalid_argument(
            "dyadic grid requires T*2^n to be a positive integer; got T=" +
            std::to_string(T) + ", n=" + std::to_string(n));
    }
    const int N = static_cast<int>(rounded);
    const double delta = std::ldexp(1.0, -n);
    return Partition::homogeneous(delta, N, n);
}

}  // namespace pathlik
