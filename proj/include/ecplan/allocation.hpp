#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecplan/matrix.hpp"

namespace ecplan {

// A repartition key is a T x N matrix assigning local generation to members.
// Feasible keys satisfy 0 <= G <= L elementwise and, in every period, a row
// sum of min(g_t, sum_n L_tn).
using RepartitionKey = Matrix;

constexpr double kKeyTolerance = 1e-9; // absolute, kWh

enum class KeyViolationKind { lower_bound, upper_bound, row_sum };

struct KeyViolation {
    std::size_t period = 0;                    // 0-based
    std::size_t member = 0;                    // 0-based; unused for row_sum
    KeyViolationKind kind = KeyViolationKind::row_sum;
    double amount = 0.0;                       // magnitude of the violation, kWh

    std::string describe() const {
        switch (kind) {
            case KeyViolationKind::lower_bound:
                return "negative allocation at (" + std::to_string(period + 1) + "," +
                       std::to_string(member + 1) + ")";
            case KeyViolationKind::upper_bound:
                return "allocation above load at (" + std::to_string(period + 1) + "," +
                       std::to_string(member + 1) + ")";
            case KeyViolationKind::row_sum:
                return "allocated sum in period " + std::to_string(period + 1) +
                       " off by " + std::to_string(amount) + " kWh";
        }
        return "?";
    }
};

struct KeyCheck {
    bool feasible = true;
    std::vector<KeyViolation> violations;
};

inline void require_key_shapes(const Matrix& key, const std::vector<double>& generation,
                               const Matrix& load, const char* what) {
    require_same_shape(key, load, what);
    if (generation.size() != load.rows())
        throw std::invalid_argument(std::string(what) + ": generation length disagrees with load rows");
}

/// Membership test for the feasibility set of keys: elementwise bounds
/// 0 <= G <= L and per-period allocated sum min(g_t, sum L_t), both within
/// an absolute tolerance in kWh.
inline KeyCheck is_feasible_key(const Matrix& key, const std::vector<double>& generation,
                                const Matrix& load, double tol = kKeyTolerance) {
    require_key_shapes(key, generation, load, "is_feasible_key");
    KeyCheck check;
    for (std::size_t t = 0; t < load.rows(); ++t) {
        double row = 0.0;
        for (std::size_t n = 0; n < load.cols(); ++n) {
            const double g = key(t, n);
            row += g;
            if (g < -tol)
                check.violations.push_back({t, n, KeyViolationKind::lower_bound, -g});
            if (g > load(t, n) + tol)
                check.violations.push_back({t, n, KeyViolationKind::upper_bound, g - load(t, n)});
        }
        const double target = std::min(generation[t], load.row_sum(t));
        if (std::abs(row - target) > tol)
            check.violations.push_back({t, 0, KeyViolationKind::row_sum, row - target});
    }
    check.feasible = check.violations.empty();
    return check;
}

/// The French default rule: local generation allocated in proportion to each
/// member's load. Zero-aggregate-load periods allocate nothing (the surplus
/// is exported and handled in billing).
inline RepartitionKey default_pro_rata_key(const std::vector<double>& generation, const Matrix& load) {
    if (generation.size() != load.rows())
        throw std::invalid_argument("default_pro_rata_key: generation length disagrees with load rows");
    RepartitionKey key(load.rows(), load.cols());
    for (std::size_t t = 0; t < load.rows(); ++t) {
        const double row_load = load.row_sum(t);
        if (row_load <= 0.0) continue;
        if (generation[t] >= row_load) {
            for (std::size_t n = 0; n < load.cols(); ++n) key(t, n) = load(t, n);
            continue;
        }
        const double scale = std::max(generation[t], 0.0) / row_load;
        for (std::size_t n = 0; n < load.cols(); ++n) key(t, n) = scale * load(t, n);
    }
    return key;
}

/// Custom rule: members are served in a fixed priority order, each taking as
/// much of the remaining generation as their load admits.
inline RepartitionKey priority_key(const std::vector<double>& generation, const Matrix& load,
                                   const std::vector<std::size_t>& order) {
    if (generation.size() != load.rows())
        throw std::invalid_argument("priority_key: generation length disagrees with load rows");
    const std::size_t N = load.cols();
    if (order.size() != N)
        throw std::invalid_argument("priority_key: order is not a permutation of the members");
    std::vector<bool> seen(N, false);
    for (std::size_t n : order) {
        if (n >= N || seen[n])
            throw std::invalid_argument("priority_key: order is not a permutation of the members");
        seen[n] = true;
    }

    RepartitionKey key(load.rows(), N);
    for (std::size_t t = 0; t < load.rows(); ++t) {
        double remaining = std::max(0.0, std::min(generation[t], load.row_sum(t)));
        for (std::size_t n : order) {
            const double take = std::min(remaining, load(t, n));
            key(t, n) = take;
            remaining -= take;
            if (remaining <= 0.0) break;
        }
    }
    return key;
}

/// Custom rule: allocation proportional to fixed member weights, water-filling
/// the excess whenever a member's load caps its share. Members with zero
/// weight only receive energy when every positive-weight member is saturated,
/// pro-rata to their remaining headroom (the row-sum equality demands it).
inline RepartitionKey fixed_ratio_key(const std::vector<double>& generation, const Matrix& load,
                                      const std::vector<double>& weights) {
    if (generation.size() != load.rows())
        throw std::invalid_argument("fixed_ratio_key: generation length disagrees with load rows");
    const std::size_t N = load.cols();
    if (weights.size() != N)
        throw std::invalid_argument("fixed_ratio_key: weight count disagrees with members");
    double weight_sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("fixed_ratio_key: negative weight");
        weight_sum += w;
    }
    if (weight_sum <= 0.0) throw std::invalid_argument("fixed_ratio_key: all weights are zero");

    RepartitionKey key(load.rows(), N);
    std::vector<std::size_t> active;
    for (std::size_t t = 0; t < load.rows(); ++t) {
        double remaining = std::max(0.0, std::min(generation[t], load.row_sum(t)));
        if (remaining <= 0.0) continue;

        active.clear();
        for (std::size_t n = 0; n < N; ++n)
            if (weights[n] > 0.0) active.push_back(n);

        // Proportional passes: clamp saturated members, re-spread the excess.
        // Each pass either finishes or removes a member, so it ends in <= N passes.
        while (remaining > 1e-15 && !active.empty()) {
            double wsum = 0.0;
            for (std::size_t n : active) wsum += weights[n];
            bool clamped = false;
            std::vector<std::size_t> next_active;
            const double pool = remaining;
            for (std::size_t n : active) {
                const double share = pool * weights[n] / wsum;
                const double headroom = load(t, n) - key(t, n);
                if (share >= headroom) {
                    key(t, n) = load(t, n);
                    remaining -= headroom;
                    clamped = true;
                } else {
                    next_active.push_back(n);
                }
            }
            if (!clamped) {
                for (std::size_t n : next_active) {
                    key(t, n) += pool * weights[n] / wsum;
                }
                remaining = 0.0;
                break;
            }
            active.swap(next_active);
        }

        // Positive-weight members saturated: spread what is left over the
        // zero-weight members by remaining headroom.
        if (remaining > 1e-15) {
            double headroom_sum = 0.0;
            for (std::size_t n = 0; n < N; ++n) headroom_sum += load(t, n) - key(t, n);
            if (headroom_sum > 0.0) {
                const double pool = remaining;
                for (std::size_t n = 0; n < N; ++n)
                    key(t, n) += pool * (load(t, n) - key(t, n)) / headroom_sum;
            }
        }
    }
    return key;
}

namespace detail {

// Euclidean projection of y onto {x | 0 <= x <= cap, sum x = target}.
// The solution is x_i = clamp(y_i - lambda, 0, cap_i) with lambda chosen so
// the sum matches; the sum is a nonincreasing piecewise-linear function of
// lambda, so lambda sits between two breakpoints found by scanning.
inline void project_row_capped_simplex(const double* y, const double* cap, double target,
                                       std::size_t n, double* out) {
    if (n == 0) return;
    double cap_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) cap_sum += cap[i];
    target = std::clamp(target, 0.0, cap_sum);

    std::vector<double> breaks;
    breaks.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        breaks.push_back(y[i]);          // below: x_i leaves zero
        breaks.push_back(y[i] - cap[i]); // below: x_i saturates at cap_i
    }
    std::sort(breaks.begin(), breaks.end());

    auto sum_at = [&](double lambda) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::clamp(y[i] - lambda, 0.0, cap[i]);
        return s;
    };

    // Find the segment [breaks[k], breaks[k+1]] bracketing the target sum.
    double lo = breaks.front(), hi = breaks.back();
    double lambda;
    if (sum_at(lo) <= target) {
        lambda = lo;
    } else if (sum_at(hi) >= target) {
        lambda = hi;
    } else {
        std::size_t klo = 0, khi = breaks.size() - 1;
        while (khi - klo > 1) {
            const std::size_t mid = (klo + khi) / 2;
            if (sum_at(breaks[mid]) >= target)
                klo = mid;
            else
                khi = mid;
        }
        // Linear interpolation on the active segment.
        lambda = breaks[klo];
        double free_count = 0.0, free_sum = 0.0, fixed = 0.0;
        const double probe = 0.5 * (breaks[klo] + breaks[khi]);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = y[i] - probe;
            if (v <= 0.0)
                ;
            else if (v >= cap[i])
                fixed += cap[i];
            else {
                free_count += 1.0;
                free_sum += y[i];
            }
        }
        if (free_count > 0.0)
            lambda = (free_sum + fixed - target) / free_count;
    }

    for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(y[i] - lambda, 0.0, cap[i]);

    // One corrective spread over the strictly interior coordinates to absorb
    // roundoff in the row sum.
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += out[i];
    double gap = target - sum;
    if (std::abs(gap) > 0.0) {
        std::size_t interior = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (out[i] > 0.0 && out[i] < cap[i]) ++interior;
        if (interior > 0) {
            const double bump = gap / static_cast<double>(interior);
            for (std::size_t i = 0; i < n; ++i)
                if (out[i] > 0.0 && out[i] < cap[i]) out[i] = std::clamp(out[i] + bump, 0.0, cap[i]);
        }
    }
}

}  // namespace detail

/// Row-wise Euclidean projection of a proposed key onto the feasibility set:
/// each period's allocation becomes the nearest point of
/// {x | 0 <= x <= L_t, sum x = min(g_t, sum L_t)}. A key that is already
/// feasible is returned unchanged, making the projection idempotent.
inline RepartitionKey project_key(const Matrix& proposed, const std::vector<double>& generation,
                                  const Matrix& load) {
    require_key_shapes(proposed, generation, load, "project_key");
    if (is_feasible_key(proposed, generation, load).feasible) return proposed;

    RepartitionKey key(load.rows(), load.cols());
    std::vector<double> y(load.cols()), cap(load.cols()), out(load.cols());
    for (std::size_t t = 0; t < load.rows(); ++t) {
        for (std::size_t n = 0; n < load.cols(); ++n) {
            y[n] = proposed(t, n);
            cap[n] = load(t, n);
        }
        const double target = std::min(generation[t], load.row_sum(t));
        detail::project_row_capped_simplex(y.data(), cap.data(), target, load.cols(), out.data());
        for (std::size_t n = 0; n < load.cols(); ++n) key(t, n) = out[n];
    }
    return key;
}

/// Residual energy each member still buys from their supplier: R = L - G,
/// clamped at zero. The key must be feasible with respect to the load.
inline Matrix residual_load(const Matrix& load, const RepartitionKey& key,
                            double tol = kKeyTolerance) {
    require_same_shape(load, key, "residual_load");
    for (std::size_t t = 0; t < load.rows(); ++t)
        for (std::size_t n = 0; n < load.cols(); ++n) {
            const double r = load(t, n) - key(t, n);
            if (r < -tol || key(t, n) < -tol)
                throw std::invalid_argument("residual_load: infeasible repartition key at (" +
                                            std::to_string(t + 1) + "," + std::to_string(n + 1) + ")");
        }
    Matrix residual(load.rows(), load.cols());
    for (std::size_t t = 0; t < load.rows(); ++t)
        for (std::size_t n = 0; n < load.cols(); ++n)
            residual(t, n) = std::max(0.0, load(t, n) - key(t, n));
    return residual;
}

/// Surplus exported to the grid per period: x_t = max(0, g_t - sum L_t).
inline std::vector<double> export_series(const std::vector<double>& generation, const Matrix& load) {
    if (generation.size() != load.rows())
        throw std::invalid_argument("export_series: generation length disagrees with load rows");
    std::vector<double> x(generation.size());
    for (std::size_t t = 0; t < generation.size(); ++t)
        x[t] = std::max(0.0, generation[t] - load.row_sum(t));
    return x;
}

}  // namespace ecplan
