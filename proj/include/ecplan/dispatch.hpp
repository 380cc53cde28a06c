#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecplan/core.hpp"
#include "ecplan/simplex.hpp"
#include "ecplan/tariffs.hpp"

namespace ecplan {

// Operational storage problem for one horizon: choose charge/discharge per
// period so the community's billing cost of covering the aggregate load is
// minimal. Generation left after dispatch is what the repartition key shares.
struct DispatchProblem {
    std::vector<double> pv_production;  // p_t, kWh per period
    std::vector<double> aggregate_load; // sum_n L_tn, kWh per period
    StorageSpec storage;
    TariffSchedule schedule;
    double step_hours = 0.5;
    bool allow_grid_charging = false;

    std::size_t periods() const noexcept { return pv_production.size(); }
};

struct DispatchResult {
    std::vector<double> charge;            // c_t, kWh drawn into storage (PV plus grid share)
    std::vector<double> discharge;         // d_t, kWh delivered out of storage
    std::vector<double> soc;               // s_t, kWh at the end of period t
    std::vector<double> shared_generation; // g_t = p_t - c_pv,t + d_t
    std::vector<double> export_kwh;        // x_t = max(0, g_t - sum L_t)
    std::vector<double> grid_charge;       // grid-sourced part of charge (zero unless enabled)
    double objective_cost = 0.0;           // €
};

namespace detail {

struct DispatchCosts {
    std::vector<double> allo; // supplier + allo network + allo taxes, c€/kWh
    std::vector<double> auto_local; // internal + auto network + auto taxes, c€/kWh
};

inline DispatchCosts per_period_costs(const DispatchProblem& p) {
    DispatchCosts costs;
    const std::size_t T = p.periods();
    costs.allo.resize(T);
    costs.auto_local.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        costs.allo[t] = p.schedule.allo_cost(t);
        costs.auto_local[t] = p.schedule.auto_cost(t);
    }
    return costs;
}

// The billing objective nets allocated local energy against grid energy with
// split variables; that split is exact only while exporting never pays more
// than the allo-auto margin. Grid charging additionally must not admit a
// buy-store-export money pump.
inline void check_dispatch_well_posed(const DispatchProblem& p) {
    for (const TariffBand& band : p.schedule.bands) {
        const double allo = band.supplier_energy + band.allo_network + band.allo_taxes;
        const double auto_c = p.schedule.internal_energy_price + band.auto_network + band.auto_taxes;
        if (p.schedule.export_price > allo - auto_c + 1e-12)
            throw std::runtime_error("unbounded dispatch: export price exceeds the allo-auto margin of band '" +
                                     band.name + "'");
        if (p.allow_grid_charging) {
            const double roundtrip = p.storage.charge_efficiency * p.storage.discharge_efficiency;
            if (p.schedule.export_price * roundtrip > allo + 1e-12)
                throw std::runtime_error("unbounded dispatch: grid charging admits arbitrage against band '" +
                                         band.name + "'");
        }
    }
}

}  // namespace detail

/// Solves the storage dispatch LP exactly. The objective is the community's
/// operation cost: residual grid energy at full allo cost, allocated local
/// energy at auto cost, exports credited at the export price. Among
/// cost-equal optima the dispatch with the least total storage throughput is
/// returned, which also rules out simultaneous charge and discharge.
inline DispatchResult solve_dispatch(const DispatchProblem& problem) {
    const std::size_t T = problem.periods();
    if (problem.aggregate_load.size() != T)
        throw std::invalid_argument("solve_dispatch: load series length disagrees with PV series");
    const StorageSpec& st = problem.storage;
    if (st.capacity_kwh < 0.0 || st.power_kw < 0.0)
        throw std::invalid_argument("infeasible storage parameters: negative capacity or power");
    if (st.initial_soc_kwh < 0.0 || st.initial_soc_kwh > st.capacity_kwh + 1e-12)
        throw std::invalid_argument("infeasible storage parameters: initial state of charge outside [0, capacity]");
    if (!(st.charge_efficiency > 0.0) || st.charge_efficiency > 1.0 ||
        !(st.discharge_efficiency > 0.0) || st.discharge_efficiency > 1.0)
        throw std::invalid_argument("infeasible storage parameters: efficiencies outside (0,1]");
    for (std::size_t t = 0; t < T; ++t)
        if (problem.pv_production[t] < 0.0 || problem.aggregate_load[t] < 0.0)
            throw std::invalid_argument("solve_dispatch: negative PV or load entry");
    detail::check_dispatch_well_posed(problem);

    const detail::DispatchCosts costs = detail::per_period_costs(problem);
    const bool grid = problem.allow_grid_charging;
    const double power_kwh = st.power_kw * problem.step_hours;
    const double eta_c = st.charge_efficiency;
    const double eta_d = st.discharge_efficiency;

    // Variable layout: charge, discharge, soc, allocated, export
    // (+ grid charge and power-coupling slack when grid charging is on).
    const std::size_t idx_c = 0, idx_d = T, idx_s = 2 * T, idx_a = 3 * T, idx_x = 4 * T;
    const std::size_t idx_gc = 5 * T, idx_slack = grid ? 6 * T : 0;
    const std::size_t nvars = grid ? 7 * T : 5 * T;

    lp::Problem base;
    base.objective.assign(nvars, 0.0);
    base.lower.assign(nvars, 0.0);
    base.upper.assign(nvars, lp::kInfinity);
    for (std::size_t t = 0; t < T; ++t) {
        base.upper[idx_c + t] = std::min(problem.pv_production[t], power_kwh);
        base.upper[idx_d + t] = power_kwh;
        base.upper[idx_s + t] = st.capacity_kwh;
        base.upper[idx_a + t] = problem.aggregate_load[t];
        base.objective[idx_a + t] = (costs.auto_local[t] - costs.allo[t]) / 100.0;
        base.objective[idx_x + t] = -problem.schedule.export_price / 100.0;
        if (grid) {
            base.upper[idx_gc + t] = power_kwh;
            base.objective[idx_gc + t] = costs.allo[t] / 100.0;
        }
    }

    // State-of-charge chain and generation split per period.
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> row(nvars, 0.0);
        row[idx_s + t] = 1.0;
        if (t > 0) row[idx_s + t - 1] = -1.0;
        row[idx_c + t] = -eta_c;
        if (grid) row[idx_gc + t] = -eta_c;
        row[idx_d + t] = 1.0 / eta_d;
        base.constraints.push_back(std::move(row));
        base.rhs.push_back(t == 0 ? st.initial_soc_kwh : 0.0);
    }
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<double> row(nvars, 0.0);
        row[idx_a + t] = 1.0;
        row[idx_x + t] = 1.0;
        row[idx_c + t] = 1.0;
        row[idx_d + t] = -1.0;
        base.constraints.push_back(std::move(row));
        base.rhs.push_back(problem.pv_production[t]);
    }
    if (grid) {
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<double> row(nvars, 0.0);
            row[idx_c + t] = 1.0;
            row[idx_gc + t] = 1.0;
            row[idx_slack + t] = 1.0;
            base.constraints.push_back(std::move(row));
            base.rhs.push_back(power_kwh);
        }
    }

    lp::Solution first = lp::solve(base);
    if (first.status == lp::SolveStatus::unbounded)
        throw std::runtime_error("unbounded dispatch");
    if (first.status != lp::SolveStatus::optimal)
        throw std::runtime_error("solve_dispatch: LP solver failed in the cost phase");

    // Lexicographic tie-break: among cost-equal dispatches minimize total
    // storage throughput. The first-phase optimum becomes a constraint row.
    lp::Problem tie = base;
    {
        std::vector<double> row = base.objective;
        row.push_back(1.0); // slack for the <= cut
        for (auto& r : tie.constraints) r.push_back(0.0);
        tie.constraints.push_back(std::move(row));
        const double slack_budget = 1e-11 * (1.0 + std::abs(first.objective));
        tie.rhs.push_back(first.objective + slack_budget);
        tie.objective.assign(nvars, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            tie.objective[idx_c + t] = 1.0;
            tie.objective[idx_d + t] = 1.0;
            if (grid) tie.objective[idx_gc + t] = 1.0;
        }
        tie.objective.push_back(0.0);
        tie.lower.push_back(0.0);
        tie.upper.push_back(lp::kInfinity);
    }
    lp::Solution second = lp::solve(tie);
    if (second.status != lp::SolveStatus::optimal)
        throw std::runtime_error("solve_dispatch: LP solver failed in the tie-break phase");
    const std::vector<double>& x = second.x;

    DispatchResult result;
    result.charge.resize(T);
    result.discharge.resize(T);
    result.soc.resize(T);
    result.shared_generation.resize(T);
    result.export_kwh.resize(T);
    result.grid_charge.assign(T, 0.0);

    for (std::size_t t = 0; t < T; ++t) {
        double c = std::max(0.0, x[idx_c + t]);
        double d = std::max(0.0, x[idx_d + t]);
        double gc = grid ? std::max(0.0, x[idx_gc + t]) : 0.0;
        // Net out numerical charge/discharge overlap; the substitution keeps
        // the state of charge exact and never raises the cost.
        if (c > 0.0 && d > 0.0) {
            const double overlap = std::min(c, d / (eta_c * eta_d));
            c -= overlap;
            d -= overlap * eta_c * eta_d;
        }
        if (gc > 0.0 && d > 0.0) {
            const double overlap = std::min(gc, d / (eta_c * eta_d));
            gc -= overlap;
            d -= overlap * eta_c * eta_d;
        }
        if (c < 1e-12) c = 0.0;
        if (d < 1e-12) d = 0.0;
        if (gc < 1e-12) gc = 0.0;
        result.charge[t] = c + gc;
        result.grid_charge[t] = gc;
        result.discharge[t] = d;
    }

    // Exact state-of-charge recursion and the forced allocation split.
    double soc = st.initial_soc_kwh;
    double cost = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const double pv_charge = result.charge[t] - result.grid_charge[t];
        soc += eta_c * result.charge[t] - result.discharge[t] / eta_d;
        soc = std::clamp(soc, 0.0, st.capacity_kwh);
        result.soc[t] = soc;
        const double g = std::max(0.0, problem.pv_production[t] - pv_charge + result.discharge[t]);
        result.shared_generation[t] = g;
        const double load = problem.aggregate_load[t];
        const double allocated = std::min(g, load);
        result.export_kwh[t] = std::max(0.0, g - load);
        cost += (costs.allo[t] * (load - allocated) + costs.auto_local[t] * allocated -
                 problem.schedule.export_price * result.export_kwh[t] +
                 costs.allo[t] * result.grid_charge[t]) /
                100.0;
    }
    result.objective_cost = cost;
    return result;
}

struct DispatchCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Re-checks every invariant of a dispatch result against its problem:
/// bounds, the state-of-charge recursion, the generation split, the absence
/// of simultaneous charge/discharge, and the reported objective.
inline DispatchCheck verify_dispatch(const DispatchResult& result, const DispatchProblem& problem,
                                     double tol = 1e-6) {
    DispatchCheck check;
    auto fail = [&](std::string msg) {
        check.ok = false;
        check.violations.push_back(std::move(msg));
    };

    const std::size_t T = problem.periods();
    const StorageSpec& st = problem.storage;
    const double power_kwh = st.power_kw * problem.step_hours;
    for (const auto* series : {&result.charge, &result.discharge, &result.soc,
                               &result.shared_generation, &result.export_kwh, &result.grid_charge})
        if (series->size() != T) {
            fail("series length disagrees with problem horizon");
            return check;
        }

    const detail::DispatchCosts costs = detail::per_period_costs(problem);
    double soc_prev = st.initial_soc_kwh;
    double cost = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const std::string at = " in period " + std::to_string(t + 1);
        const double c = result.charge[t];
        const double d = result.discharge[t];
        const double gc = result.grid_charge[t];
        const double pv_charge = c - gc;
        if (c < -tol || d < -tol || gc < -tol) fail("negative charge or discharge" + at);
        if (c > power_kwh + tol || d > power_kwh + tol) fail("power limit exceeded" + at);
        if (pv_charge > problem.pv_production[t] + tol)
            fail("charge exceeds PV production" + at);
        if (!problem.allow_grid_charging && gc > tol) fail("grid charging is disabled" + at);
        if (std::abs(c * d) > tol) fail("simultaneous charge and discharge" + at);

        const double soc_expected = soc_prev + st.charge_efficiency * c - d / st.discharge_efficiency;
        if (std::abs(result.soc[t] - soc_expected) > tol)
            fail("state of charge breaks the storage balance" + at);
        if (result.soc[t] < -tol || result.soc[t] > st.capacity_kwh + tol)
            fail("state of charge outside [0, capacity]" + at);
        soc_prev = result.soc[t];

        const double g_expected = problem.pv_production[t] - pv_charge + d;
        if (result.shared_generation[t] < -tol) fail("negative shared generation" + at);
        if (std::abs(result.shared_generation[t] - g_expected) > tol)
            fail("shared generation breaks the energy balance" + at);
        const double surplus = std::max(0.0, result.shared_generation[t] - problem.aggregate_load[t]);
        if (std::abs(result.export_kwh[t] - surplus) > tol) fail("export is not the load surplus" + at);

        const double load = problem.aggregate_load[t];
        const double allocated = std::min(result.shared_generation[t], load);
        cost += (costs.allo[t] * (load - allocated) + costs.auto_local[t] * allocated -
                 problem.schedule.export_price * result.export_kwh[t] + costs.allo[t] * gc) /
                100.0;
    }
    if (std::abs(cost - result.objective_cost) > tol)
        fail("reported objective differs from the recomputed cost");
    return check;
}

}  // namespace ecplan
