#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ecplan/simplex.hpp"
#include "support/oracles.hpp"

using namespace ecplan;
using Catch::Matchers::WithinAbs;

namespace {

// max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, 0 <= x,y  => x=4, y=0, obj 12.
lp::Problem small_inequality_problem() {
    lp::Problem p;
    p.objective = {-3.0, -2.0, 0.0, 0.0}; // minimize the negation; slacks s1, s2
    p.constraints = {{1.0, 1.0, 1.0, 0.0}, {1.0, 3.0, 0.0, 1.0}};
    p.rhs = {4.0, 6.0};
    p.lower = {0.0, 0.0, 0.0, 0.0};
    p.upper = {lp::kInfinity, lp::kInfinity, lp::kInfinity, lp::kInfinity};
    return p;
}

}  // namespace

TEST_CASE("solves a classic two-constraint program") {
    auto sol = lp::solve(small_inequality_problem());
    REQUIRE(sol.status == lp::SolveStatus::optimal);
    REQUIRE_THAT(sol.objective, WithinAbs(-12.0, 1e-9));
    REQUIRE_THAT(sol.x[0], WithinAbs(4.0, 1e-9));
    REQUIRE_THAT(sol.x[1], WithinAbs(0.0, 1e-9));
}

TEST_CASE("honors finite upper bounds via bound flips") {
    // min -x - y s.t. x + y = 1.5, 0 <= x <= 1, 0 <= y <= 1.
    lp::Problem p;
    p.objective = {-1.0, -1.0};
    p.constraints = {{1.0, 1.0}};
    p.rhs = {1.5};
    p.lower = {0.0, 0.0};
    p.upper = {1.0, 1.0};
    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::SolveStatus::optimal);
    REQUIRE_THAT(sol.objective, WithinAbs(-1.5, 1e-9));
}

TEST_CASE("reports infeasible systems") {
    lp::Problem p;
    p.objective = {0.0, 0.0};
    p.constraints = {{1.0, 1.0}, {1.0, 1.0}};
    p.rhs = {1.0, 2.0};
    p.lower = {0.0, 0.0};
    p.upper = {lp::kInfinity, lp::kInfinity};
    REQUIRE(lp::solve(p).status == lp::SolveStatus::infeasible);

    // Bounds alone can make the row unsatisfiable.
    lp::Problem q;
    q.objective = {1.0};
    q.constraints = {{1.0}};
    q.rhs = {5.0};
    q.lower = {0.0};
    q.upper = {1.0};
    REQUIRE(lp::solve(q).status == lp::SolveStatus::infeasible);
}

TEST_CASE("reports unbounded programs") {
    // min -x s.t. x - y = 0, x,y >= 0: both can grow forever.
    lp::Problem p;
    p.objective = {-1.0, 0.0};
    p.constraints = {{1.0, -1.0}};
    p.rhs = {0.0};
    p.lower = {0.0, 0.0};
    p.upper = {lp::kInfinity, lp::kInfinity};
    REQUIRE(lp::solve(p).status == lp::SolveStatus::unbounded);
}

TEST_CASE("handles a degenerate vertex") {
    // Three constraints meeting at the optimum corner (0, 1).
    lp::Problem p;
    p.objective = {-0.0, -1.0, 0.0, 0.0, 0.0};
    p.constraints = {{1.0, 1.0, 1.0, 0.0, 0.0},
                     {-1.0, 1.0, 0.0, 1.0, 0.0},
                     {0.0, 1.0, 0.0, 0.0, 1.0}};
    p.rhs = {1.0, 1.0, 1.0};
    p.lower = {0.0, 0.0, 0.0, 0.0, 0.0};
    p.upper = {lp::kInfinity, lp::kInfinity, lp::kInfinity, lp::kInfinity, lp::kInfinity};
    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::SolveStatus::optimal);
    REQUIRE_THAT(sol.objective, WithinAbs(-1.0, 1e-9));
}

TEST_CASE("solves a redundant-row system") {
    // Second row is twice the first; the solver must pin the dependent row.
    lp::Problem p;
    p.objective = {1.0, 1.0};
    p.constraints = {{1.0, 1.0}, {2.0, 2.0}};
    p.rhs = {1.0, 2.0};
    p.lower = {0.0, 0.0};
    p.upper = {lp::kInfinity, lp::kInfinity};
    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::SolveStatus::optimal);
    REQUIRE_THAT(sol.objective, WithinAbs(1.0, 1e-9));
}

TEST_CASE("fixed variables stay fixed") {
    lp::Problem p;
    p.objective = {1.0, -2.0};
    p.constraints = {{1.0, 1.0}};
    p.rhs = {3.0};
    p.lower = {2.0, 0.0};
    p.upper = {2.0, lp::kInfinity};
    auto sol = lp::solve(p);
    REQUIRE(sol.status == lp::SolveStatus::optimal);
    REQUIRE_THAT(sol.x[0], WithinAbs(2.0, 1e-12));
    REQUIRE_THAT(sol.x[1], WithinAbs(1.0, 1e-9));
}

TEST_CASE("matches the enumeration oracle on random bounded programs") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<std::size_t> ndist(2, 6), mdist(1, 3);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0), bound(0.5, 4.0);
    std::bernoulli_distribution has_upper(0.7);

    int solved = 0;
    for (int round = 0; round < 300; ++round) {
        lp::Problem p;
        const std::size_t n = ndist(rng), m = mdist(rng);
        p.objective.resize(n);
        p.lower.assign(n, 0.0);
        p.upper.assign(n, lp::kInfinity);
        for (std::size_t j = 0; j < n; ++j) {
            p.objective[j] = coeff(rng);
            if (has_upper(rng)) p.upper[j] = bound(rng);
        }
        // Random rows; rhs chosen near an interior point so many instances
        // are feasible, the rest must be flagged infeasible consistently.
        p.constraints.assign(m, std::vector<double>(n));
        p.rhs.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            double mid = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                p.constraints[i][j] = coeff(rng);
                const double hi = std::isfinite(p.upper[j]) ? p.upper[j] : 2.0;
                mid += p.constraints[i][j] * 0.5 * hi;
            }
            p.rhs[i] = mid + 0.2 * coeff(rng);
        }

        // Keep objectives bounded: skip instances where a favorable direction
        // has no finite upper bound (the oracle cannot certify those).
        bool maybe_unbounded = false;
        for (std::size_t j = 0; j < n; ++j)
            if (p.objective[j] < 0.0 && !std::isfinite(p.upper[j])) maybe_unbounded = true;
        if (maybe_unbounded) continue;

        const auto oracle = testing::lp_enumeration_oracle(p);
        const auto sol = lp::solve(p);
        INFO("round " << round);
        if (!oracle.has_value()) {
            // No basic feasible point: the solver must not claim optimality
            // with a better objective than the (empty) oracle set.
            REQUIRE(sol.status != lp::SolveStatus::optimal);
            continue;
        }
        REQUIRE(sol.status == lp::SolveStatus::optimal);
        REQUIRE_THAT(sol.objective, WithinAbs(*oracle, 1e-6));

        // Primal feasibility of the reported point.
        for (std::size_t j = 0; j < n; ++j) {
            REQUIRE(sol.x[j] >= p.lower[j] - 1e-7);
            REQUIRE(sol.x[j] <= p.upper[j] + 1e-7);
        }
        for (std::size_t i = 0; i < m; ++i) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < n; ++j) lhs += p.constraints[i][j] * sol.x[j];
            REQUIRE_THAT(lhs, WithinAbs(p.rhs[i], 1e-6));
        }
        ++solved;
    }
    REQUIRE(solved > 100); // the generator must actually exercise the solver
}
