#include "pathlik/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pathlik {

namespace {

constexpr double kGradientThreshold = 1e-8;
constexpr double kRefineTol = 1e-6;

using Component = std::function<double(const Eigen::VectorXd&)>;

double golden_max(const Component& f, Eigen::VectorXd& theta, int coord, double lo,
                  double hi, double tol) {
    constexpr double invphi = 0.6180339887498948482;
    double a = lo, b = hi;
    while (b - a > tol) {
        const double c1 = b - invphi * (b - a);
        const double c2 = a + invphi * (b - a);
        theta[coord] = c1;
        const double f1 = f(theta);
        theta[coord] = c2;
        const double f2 = f(theta);
        if (f1 < f2) {
            a = c1;
        } else {
            b = c2;
        }
    }
    return 0.5 * (a + b);
}

struct StageTrace {
    std::vector<int> order;        // -1 while unassigned
    std::vector<double> estimate;  // grid midpoint until estimated
    std::vector<bool> boundary;
};

/// One coordinate refinement: grid scan along `coord`, then golden
/// section inside the bracketing cell.
void refine_coordinate(const Component& f, const ParameterSpace& space,
                       Eigen::VectorXd& theta, int coord, StageTrace& trace) {
    const auto& values = space.grid[static_cast<std::size_t>(coord)];
    const int n = static_cast<int>(values.size());
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        theta[coord] = values[static_cast<std::size_t>(j)];
        const double v = f(theta);
        if (v > best_val) {
            best_val = v;
            best = j;
        }
    }
    if (best == 0 || best == n - 1) {
        trace.boundary[static_cast<std::size_t>(coord)] = true;
    }
    const double lo = values[static_cast<std::size_t>(std::max(0, best - 1))];
    const double hi = values[static_cast<std::size_t>(std::min(n - 1, best + 1))];
    double est;
    if (hi > lo) {
        est = golden_max(f, theta, coord, lo, hi, kRefineTol * (hi - lo));
    } else {
        est = values[static_cast<std::size_t>(best)];
    }
    theta[coord] = est;
    trace.estimate[static_cast<std::size_t>(coord)] = est;
}

StageTrace run_stages(const ScaledLogLik& components, const ParameterSpace& space,
                      const std::map<std::string, int>* declared) {
    space.validate();
    const int n_coords = static_cast<int>(space.names.size());
    const int n_stages = static_cast<int>(components.components.size());
    if (components.exponents.size() != components.components.size()) {
        throw std::invalid_argument("one exponent per component required");
    }

    StageTrace trace;
    trace.order.assign(static_cast<std::size_t>(n_coords), -1);
    trace.boundary.assign(static_cast<std::size_t>(n_coords), false);
    trace.estimate.resize(static_cast<std::size_t>(n_coords));
    for (int i = 0; i < n_coords; ++i) {
        const auto& values = space.grid[static_cast<std::size_t>(i)];
        trace.estimate[static_cast<std::size_t>(i)] = values[(values.size() - 1) / 2];
    }

    for (int k = 0; k < n_stages; ++k) {
        const Component& f = components.components[static_cast<std::size_t>(k)];
        Eigen::VectorXd theta(n_coords);
        for (int i = 0; i < n_coords; ++i) theta[i] = trace.estimate[static_cast<std::size_t>(i)];

        std::vector<int> stage_coords;
        if (declared) {
            for (int i = 0; i < n_coords; ++i) {
                if (declared->at(space.names[static_cast<std::size_t>(i)]) == k) {
                    stage_coords.push_back(i);
                }
            }
        } else {
            // Probe each unassigned coordinate along its own axis.
            double pool_min = std::numeric_limits<double>::infinity();
            double pool_max = -pool_min;
            std::vector<double> sensitivity(static_cast<std::size_t>(n_coords), 0.0);
            for (int i = 0; i < n_coords; ++i) {
                if (trace.order[static_cast<std::size_t>(i)] >= 0) continue;
                const auto& values = space.grid[static_cast<std::size_t>(i)];
                Eigen::VectorXd probe = theta;
                double prev = 0.0;
                for (std::size_t j = 0; j < values.size(); ++j) {
                    probe[i] = values[j];
                    const double v = f(probe);
                    pool_min = std::min(pool_min, v);
                    pool_max = std::max(pool_max, v);
                    if (j > 0) {
                        const double slope = std::abs(v - prev) / (values[j] - values[j - 1]);
                        sensitivity[static_cast<std::size_t>(i)] =
                            std::max(sensitivity[static_cast<std::size_t>(i)], slope);
                    }
                    prev = v;
                }
            }
            const double scale = pool_max - pool_min;
            for (int i = 0; i < n_coords; ++i) {
                if (trace.order[static_cast<std::size_t>(i)] >= 0) continue;
                if (scale > 0.0 && sensitivity[static_cast<std::size_t>(i)] > kGradientThreshold * scale) {
                    stage_coords.push_back(i);
                }
            }
        }
        if (stage_coords.empty()) continue;

        for (int i : stage_coords) trace.order[static_cast<std::size_t>(i)] = k;

        // Joint grid argmax over this stage's coordinates, then a few
        // coordinate sweeps of golden refinement.
        {
            std::vector<std::size_t> idx(stage_coords.size(), 0);
            double best_val = -std::numeric_limits<double>::infinity();
            std::vector<std::size_t> best_idx = idx;
            bool done = false;
            while (!done) {
                for (std::size_t s = 0; s < stage_coords.size(); ++s) {
                    theta[stage_coords[s]] =
                        space.grid[static_cast<std::size_t>(stage_coords[s])][idx[s]];
                }
                const double v = f(theta);
                if (v > best_val) {
                    best_val = v;
                    best_idx = idx;
                }
                std::size_t pos = 0;
                while (pos < idx.size()) {
                    if (++idx[pos] <
                        space.grid[static_cast<std::size_t>(stage_coords[pos])].size()) {
                        break;
                    }
                    idx[pos] = 0;
                    ++pos;
                }
                done = pos == idx.size();
            }
            for (std::size_t s = 0; s < stage_coords.size(); ++s) {
                const double v =
                    space.grid[static_cast<std::size_t>(stage_coords[s])][best_idx[s]];
                theta[stage_coords[s]] = v;
                trace.estimate[static_cast<std::size_t>(stage_coords[s])] = v;
            }
        }
        const int sweeps = stage_coords.size() > 1 ? 3 : 1;
        for (int sweep = 0; sweep < sweeps; ++sweep) {
            for (int i : stage_coords) {
                refine_coordinate(f, space, theta, i, trace);
            }
        }
    }
    return trace;
}

std::string unassigned_message(const ParameterSpace& space, const StageTrace& trace) {
    std::string names;
    for (std::size_t i = 0; i < trace.order.size(); ++i) {
        if (trace.order[i] < 0) {
            if (!names.empty()) names += ", ";
            names += space.names[i];
        }
    }
    return "coordinate(s) " + names +
           " are sensitive to no likelihood component (infinite order, not estimable)";
}

}  // namespace

void ParameterSpace::validate() const {
    if (names.empty() || names.size() != grid.size()) {
        throw std::invalid_argument("parameter space needs one value list per coordinate");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i].empty()) {
            throw std::invalid_argument("coordinate " + names[i] + " has an empty grid");
        }
        for (std::size_t j = 1; j < grid[i].size(); ++j) {
            if (!(grid[i][j] > grid[i][j - 1])) {
                throw std::invalid_argument("grid for " + names[i] + " must be ascending");
            }
        }
    }
    for (const auto& [name, order] : order_assignment) {
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            throw std::invalid_argument("order assigned to unknown coordinate " + name);
        }
        if (order < 0) throw std::invalid_argument("orders must be nonnegative");
    }
}

int ParameterSpace::total_points() const {
    int total = 1;
    for (const auto& values : grid) total *= static_cast<int>(values.size());
    return total;
}

Eigen::VectorXd ParameterSpace::theta_at(int flat_index) const {
    Eigen::VectorXd theta(names.size());
    int rem = flat_index;
    for (int i = static_cast<int>(grid.size()) - 1; i >= 0; --i) {
        const int size = static_cast<int>(grid[static_cast<std::size_t>(i)].size());
        theta[i] = grid[static_cast<std::size_t>(i)][static_cast<std::size_t>(rem % size)];
        rem /= size;
    }
    return theta;
}

std::map<std::string, int> detect_orders(const ScaledLogLik& components,
                                         const ParameterSpace& space) {
    const StageTrace trace = run_stages(components, space, nullptr);
    std::map<std::string, int> orders;
    for (std::size_t i = 0; i < space.names.size(); ++i) {
        if (trace.order[i] < 0) {
            throw std::runtime_error(unassigned_message(space, trace));
        }
        orders[space.names[i]] = trace.order[i];
    }
    return orders;
}

MleResult hierarchical_mle(const ScaledLogLik& components, const ParameterSpace& space) {
    space.validate();
    const bool declared = space.order_assignment.size() == space.names.size();
    const StageTrace trace =
        run_stages(components, space, declared ? &space.order_assignment : nullptr);

    MleResult out;
    out.theta_hat.resize(space.names.size());
    for (std::size_t i = 0; i < space.names.size(); ++i) {
        if (trace.order[i] < 0) {
            throw std::runtime_error(unassigned_message(space, trace));
        }
        out.estimates.push_back(CoordinateEstimate{space.names[i], trace.order[i],
                                                   trace.estimate[i], trace.boundary[i]});
        out.theta_hat[static_cast<int>(i)] = trace.estimate[i];
    }
    return out;
}

StagedPosterior staged_posterior(const ScaledLogLik& components,
                                 const ParameterSpace& space,
                                 const Eigen::VectorXd& prior) {
    space.validate();
    const int total = space.total_points();
    if (prior.size() != total) {
        throw std::invalid_argument("prior length does not match the grid");
    }
    if ((prior.array() <= 0.0).any()) {
        throw std::invalid_argument("prior must be positive on the whole grid");
    }
    if (std::abs(prior.sum() - 1.0) > 1e-6) {
        throw std::invalid_argument("prior must be normalized on the grid");
    }

    StagedPosterior out;
    Eigen::VectorXd u = prior / prior.sum();
    out.stage_densities.push_back(u);

    for (std::size_t k = 0; k < components.components.size(); ++k) {
        const double power = std::pow(components.sample_count, -components.exponents[k]);
        Eigen::VectorXd logw(total);
        for (int j = 0; j < total; ++j) {
            logw[j] = components.components[k](space.theta_at(j)) * power;
        }
        const double shift = logw.maxCoeff();
        Eigen::VectorXd next = u.array() * (logw.array() - shift).exp();
        const double mass = next.sum();
        if (!(mass > 0.0)) {
            throw std::runtime_error(
                "posterior stage " + std::to_string(k) +
                " underflowed to zero mass; restate the prior in log space or shrink the grid");
        }
        u = next / mass;
        out.stage_densities.push_back(u);
    }
    return out;
}

}  // namespace pathlik
