#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecplan::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// min objective' x  subject to  constraints * x = rhs,  lower <= x <= upper.
// Upper bounds may be +inf; every variable needs at least one finite bound.
struct Problem {
    std::vector<double> objective;
    std::vector<std::vector<double>> constraints; // dense rows, each of length num_vars()
    std::vector<double> rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t num_vars() const noexcept { return objective.size(); }
    std::size_t num_rows() const noexcept { return rhs.size(); }
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

struct Solution {
    SolveStatus status = SolveStatus::iteration_limit;
    double objective = 0.0;
    std::vector<double> x;
    std::size_t iterations = 0;
};

// Two-phase primal simplex for bounded variables on a dense tableau.
// Nonbasic variables rest on a bound; entering steps are limited both by the
// entering variable's own range (a bound flip) and by the basic variables'
// bounds (a pivot). Pricing is Dantzig's rule until the objective stalls,
// after which it permanently switches to Bland's rule, which cannot cycle.
class SimplexSolver {
public:
    explicit SimplexSolver(const Problem& p, double tol = 1e-9) : prob_(p), tol_(tol) {
        m_ = p.num_rows();
        n_ = p.num_vars();
        for (const auto& row : p.constraints)
            if (row.size() != n_)
                throw std::invalid_argument("simplex: constraint row length disagrees with objective");
        if (p.lower.size() != n_ || p.upper.size() != n_)
            throw std::invalid_argument("simplex: bound vectors must match variable count");
        for (std::size_t j = 0; j < n_; ++j) {
            if (p.lower[j] > p.upper[j] + tol_)
                throw std::invalid_argument("simplex: empty variable range at index " + std::to_string(j));
            if (!std::isfinite(p.lower[j]) && !std::isfinite(p.upper[j]))
                throw std::invalid_argument("simplex: free variables are not supported");
        }
    }

    Solution solve() {
        init();
        Solution sol;

        // Phase 1: drive the artificial variables to zero.
        phase_ = 1;
        const Status s1 = iterate(phase1_cost_);
        if (s1 == Status::iteration_limit) return finish(SolveStatus::iteration_limit);
        double infeas = 0.0;
        for (std::size_t k = 0; k < m_; ++k) infeas += x_[n_ + k];
        if (infeas > 1e-7) return finish(SolveStatus::infeasible);
        drop_artificials();

        // Phase 2: optimize the real objective.
        phase_ = 2;
        const Status s2 = iterate(phase2_cost_);
        if (s2 == Status::iteration_limit) return finish(SolveStatus::iteration_limit);
        if (s2 == Status::unbounded) return finish(SolveStatus::unbounded);
        refresh_basic_values();
        return finish(SolveStatus::optimal);
    }

private:
    enum class VarState : unsigned char { at_lower, at_upper, basic };
    enum class Status { optimal, unbounded, iteration_limit };

    const Problem& prob_;
    double tol_;
    std::size_t m_ = 0, n_ = 0, total_ = 0;
    std::size_t iterations_ = 0;
    int phase_ = 1;
    bool bland_ = false;
    std::size_t stall_ = 0;
    double last_objective_ = kInfinity;

    std::vector<double> tableau_;   // m x (total_ + 1), last column is Binv*rhs
    std::vector<double> x_;         // current value of every variable
    std::vector<double> lower_, upper_;
    std::vector<double> phase1_cost_, phase2_cost_;
    std::vector<std::size_t> basis_;
    std::vector<VarState> state_;

    double& tab(std::size_t i, std::size_t j) noexcept { return tableau_[i * (total_ + 1) + j]; }
    double tab(std::size_t i, std::size_t j) const noexcept { return tableau_[i * (total_ + 1) + j]; }

    void init() {
        total_ = n_ + m_;
        lower_.assign(total_, 0.0);
        upper_.assign(total_, kInfinity);
        std::copy(prob_.lower.begin(), prob_.lower.end(), lower_.begin());
        std::copy(prob_.upper.begin(), prob_.upper.end(), upper_.begin());

        phase1_cost_.assign(total_, 0.0);
        phase2_cost_.assign(total_, 0.0);
        std::copy(prob_.objective.begin(), prob_.objective.end(), phase2_cost_.begin());
        for (std::size_t k = 0; k < m_; ++k) phase1_cost_[n_ + k] = 1.0;

        state_.assign(total_, VarState::at_lower);
        x_.assign(total_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            if (std::isfinite(lower_[j])) {
                state_[j] = VarState::at_lower;
                x_[j] = lower_[j];
            } else {
                state_[j] = VarState::at_upper;
                x_[j] = upper_[j];
            }
        }

        // Artificial basis: one artificial per row, sign-flipped so it starts
        // at a nonnegative value equal to the row residual.
        std::vector<double> residual(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            double r = prob_.rhs[i];
            for (std::size_t j = 0; j < n_; ++j) r -= prob_.constraints[i][j] * x_[j];
            residual[i] = r;
        }
        tableau_.assign(m_ * (total_ + 1), 0.0);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = residual[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) tab(i, j) = sign * prob_.constraints[i][j];
            tab(i, n_ + i) = 1.0;
            tab(i, total_) = sign * prob_.rhs[i];
            basis_[i] = n_ + i;
            state_[n_ + i] = VarState::basic;
            x_[n_ + i] = std::abs(residual[i]);
        }

        bland_ = false;
        stall_ = 0;
        last_objective_ = kInfinity;
        iterations_ = 0;
    }

    double objective_value(const std::vector<double>& cost) const {
        double v = 0.0;
        for (std::size_t j = 0; j < total_; ++j) v += cost[j] * x_[j];
        return v;
    }

    // Reduced cost of column j under the given cost vector.
    double reduced_cost(const std::vector<double>& cost, std::size_t j) const {
        double d = cost[j];
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb != 0.0) d -= cb * tab(i, j);
        }
        return d;
    }

    Status iterate(const std::vector<double>& cost) {
        const std::size_t max_iterations = 4000 + 40 * (m_ + total_) * (m_ + 1);
        double cost_scale = 1.0;
        for (std::size_t j = 0; j < total_; ++j) cost_scale = std::max(cost_scale, std::abs(cost[j]));
        const double dual_tol = tol_ * cost_scale;

        while (true) {
            if (++iterations_ > max_iterations) return Status::iteration_limit;

            // Pricing.
            std::size_t entering = total_;
            double best_violation = dual_tol;
            int entering_dir = 0;
            for (std::size_t j = 0; j < total_; ++j) {
                if (state_[j] == VarState::basic) continue;
                if (j >= n_ && phase_ == 2) continue; // artificials never re-enter
                const double d = reduced_cost(cost, j);
                double violation = 0.0;
                int dir = 0;
                if (state_[j] == VarState::at_lower && d < -dual_tol && upper_[j] > lower_[j]) {
                    violation = -d;
                    dir = +1;
                } else if (state_[j] == VarState::at_upper && d > dual_tol && upper_[j] > lower_[j]) {
                    violation = d;
                    dir = -1;
                }
                if (dir == 0) continue;
                if (bland_) {
                    entering = j;
                    entering_dir = dir;
                    break;
                }
                if (violation > best_violation) {
                    best_violation = violation;
                    entering = j;
                    entering_dir = dir;
                }
            }
            if (entering == total_) return Status::optimal;

            // Ratio test against the entering range and every basic bound.
            const double sigma = static_cast<double>(entering_dir);
            double theta = upper_[entering] - lower_[entering]; // own-range limit (may be inf)
            std::size_t leaving_row = m_;                       // m_ = bound flip
            const double piv_tol = 1e-11;
            for (std::size_t i = 0; i < m_; ++i) {
                const double delta = -sigma * tab(i, entering); // change of basic i per unit step
                const std::size_t bj = basis_[i];
                double limit = kInfinity;
                if (delta > piv_tol) {
                    if (std::isfinite(upper_[bj])) limit = std::max(0.0, (upper_[bj] - x_[bj]) / delta);
                } else if (delta < -piv_tol) {
                    if (std::isfinite(lower_[bj])) limit = std::max(0.0, (lower_[bj] - x_[bj]) / delta);
                }
                if (limit < theta - 1e-12) {
                    theta = limit;
                    leaving_row = i;
                } else if (leaving_row != m_ && limit <= theta + 1e-12) {
                    // Tie: Bland picks the smallest variable index, otherwise
                    // prefer the largest pivot magnitude for stability.
                    if (bland_) {
                        if (basis_[i] < basis_[leaving_row]) leaving_row = i;
                    } else if (std::abs(tab(i, entering)) > std::abs(tab(leaving_row, entering))) {
                        leaving_row = i;
                    }
                }
            }
            if (!std::isfinite(theta)) return Status::unbounded;

            apply_step(entering, sigma, theta, leaving_row);

            // Objective stall detection drives the switch to Bland's rule.
            const double obj = objective_value(cost);
            if (obj < last_objective_ - 1e-12 * (1.0 + std::abs(last_objective_))) {
                stall_ = 0;
            } else if (++stall_ > 64) {
                bland_ = true;
            }
            last_objective_ = obj;
        }
    }

    void apply_step(std::size_t entering, double sigma, double theta, std::size_t leaving_row) {
        // Move every basic variable along the direction, then either flip the
        // entering bound or pivot it into the basis.
        for (std::size_t i = 0; i < m_; ++i) {
            const double delta = -sigma * tab(i, entering);
            if (delta != 0.0) x_[basis_[i]] += delta * theta;
        }
        if (leaving_row == m_) {
            state_[entering] = state_[entering] == VarState::at_lower ? VarState::at_upper
                                                                      : VarState::at_lower;
            x_[entering] = state_[entering] == VarState::at_lower ? lower_[entering] : upper_[entering];
            return;
        }

        const std::size_t leaving = basis_[leaving_row];
        const double delta_leaving = -sigma * tab(leaving_row, entering);
        state_[leaving] = delta_leaving > 0.0 ? VarState::at_upper : VarState::at_lower;
        x_[leaving] = state_[leaving] == VarState::at_upper ? upper_[leaving] : lower_[leaving];

        x_[entering] += sigma * theta;
        basis_[leaving_row] = entering;
        state_[entering] = VarState::basic;

        pivot(leaving_row, entering);
    }

    void pivot(std::size_t r, std::size_t col) {
        const std::size_t width = total_ + 1;
        double* prow = &tableau_[r * width];
        const double inv = 1.0 / prow[col];
        for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
        prow[col] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* row = &tableau_[i * width];
            const double f = row[col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) row[j] -= f * prow[j];
            row[col] = 0.0;
        }
    }

    // After phase 1, pivot leftover artificials out of the basis where a
    // structural column allows it; a row with no usable column is linearly
    // dependent and keeps its zero artificial pinned.
    void drop_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t col = total_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (state_[j] == VarState::basic) continue;
                if (std::abs(tab(i, j)) > 1e-8) {
                    col = j;
                    break;
                }
            }
            if (col == total_) {
                upper_[basis_[i]] = 0.0; // redundant row: pin the artificial
                continue;
            }
            const std::size_t artificial = basis_[i];
            basis_[i] = col;
            state_[col] = VarState::basic;
            state_[artificial] = VarState::at_lower;
            x_[artificial] = 0.0;
            upper_[artificial] = 0.0;
            // Degenerate algebraic pivot: the entering variable keeps its
            // current bound value, so no primal values move.
            pivot(i, col);
        }
        for (std::size_t k = 0; k < m_; ++k)
            if (state_[n_ + k] != VarState::basic) upper_[n_ + k] = 0.0;
    }

    // Recompute basic values from the transformed rhs column to shed the
    // additive drift of incremental updates.
    void refresh_basic_values() {
        for (std::size_t i = 0; i < m_; ++i) {
            double v = tab(i, total_);
            for (std::size_t j = 0; j < total_; ++j) {
                if (state_[j] == VarState::basic || x_[j] == 0.0) continue;
                v -= tab(i, j) * x_[j];
            }
            x_[basis_[i]] = v;
        }
    }

    Solution finish(SolveStatus status) {
        Solution sol;
        sol.status = status;
        sol.iterations = iterations_;
        sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
        sol.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) sol.objective += prob_.objective[j] * sol.x[j];
        return sol;
    }
};

inline Solution solve(const Problem& problem, double tol = 1e-9) {
    return SimplexSolver(problem, tol).solve();
}

}  // namespace ecplan::lp
