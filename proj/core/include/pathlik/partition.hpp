#pragma once

#include <optional>
#include <vector>

namespace pathlik {

/// Ordered grid of times on [0, T], starting at 0 and strictly increasing.
/// Grids are constructed, not measured, so times are compared exactly
/// throughout the library.
class Partition {
public:
    explicit Partition(std::vector<double> times,
                       std::optional<int> level = std::nullopt);

    /// Equally spaced grid with `intervals` steps of width `spacing`,
    /// starting at 0.
    static Partition homogeneous(double spacing, int intervals,
                                 std::optional<int> level = std::nullopt);

    const std::vector<double>& times() const { return times_; }
    double time(int k) const { return times_[static_cast<std::size_t>(k)]; }
    int size() const { return static_cast<int>(times_.size()); }
    int intervals() const { return size() - 1; }
    double horizon() const { return times_.back(); }
    double spacing(int k) const { return time(k + 1) - time(k); }

    /// Largest interval width.
    double mesh() const;
    /// True when all interval widths agree to within floating-point noise.
    bool is_homogeneous() const;
    std::optional<int> level() const { return level_; }

    bool operator==(const Partition& other) const {
        return times_ == other.times_;
    }

    /// True when every time of `coarser` occurs in this grid (exactly).
    bool contains(const Partition& coarser) const;

private:
    std::vector<double> times_;
    std::optional<int> level_;
};

/// Dyadic grid D(n) = {k 2^-n : k = 0..N} with N = 2^n T intervals.
/// Rejects (n, T) combinations for which N is not a positive integer.
Partition dyadic_grid(int n, double T);

}  // namespace pathlik
