#pragma once

#include <cmath>
#include <cstddef>
#include <future>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecplan/dispatch.hpp"
#include "ecplan/tariffs.hpp"

namespace ecplan {

struct PvOption {
    double peak_kw = 0.0;
    double capex_eur = 0.0;
};

struct StorageOption {
    double capacity_kwh = 0.0;
    double power_kw = 0.0;
    double capex_eur = 0.0;
};

// One representative day: a normalized PV shape (per kW peak) and the
// aggregate community load, both in kWh per period, plus the number of days
// per year the pattern stands for.
struct RepresentativeDay {
    std::vector<double> pv_normalized;
    std::vector<double> aggregate_load;
    double weight_days = 0.0;
};

struct SizingCatalog {
    std::vector<PvOption> pv_options;
    std::vector<StorageOption> storage_options;
    double discount_rate = 0.0; // fraction per year
    int lifetime_years = 25;
    std::vector<RepresentativeDay> days;

    std::vector<std::string> validate() const {
        std::vector<std::string> problems;
        if (pv_options.empty()) problems.push_back("PV catalog is empty");
        if (storage_options.empty()) problems.push_back("storage catalog is empty");
        if (discount_rate < 0.0) problems.push_back("negative discount rate");
        if (lifetime_years < 1) problems.push_back("lifetime must be at least one year");
        if (days.empty()) problems.push_back("no representative days");
        double weight_sum = 0.0;
        for (const auto& day : days) weight_sum += day.weight_days;
        if (!days.empty() && std::abs(weight_sum - 365.0) > 1.0)
            problems.push_back("representative-day weights sum to " + std::to_string(weight_sum) +
                               ", expected 365 +- 1");
        return problems;
    }
};

struct SizingCandidate {
    std::size_t pv_index = 0;
    std::size_t storage_index = 0;
    bool baseline = false; // business-as-usual row, never selectable
    double annualized_capex = 0.0;
    double annual_operation_cost = 0.0;
    double total = 0.0;
};

struct SizingResult {
    PvOption pv;
    StorageOption storage;
    std::size_t pv_index = 0;
    std::size_t storage_index = 0;
    double annualized_capex = 0.0;
    double annual_operation_cost = 0.0;
    double total = 0.0;
    std::vector<SizingCandidate> table; // catalog candidates, then the baseline row
};

/// Annuity factor turning capital expenditure into an equivalent annual cost:
/// r(1+r)^y / ((1+r)^y - 1), with the straight-line limit 1/y at r = 0.
inline double capital_recovery_factor(double rate, int years) {
    if (years < 1) throw std::invalid_argument("capital_recovery_factor: lifetime below one year");
    if (rate < 0.0) throw std::invalid_argument("capital_recovery_factor: negative rate");
    if (rate == 0.0) return 1.0 / static_cast<double>(years);
    const double growth = std::pow(1.0 + rate, years);
    return rate * growth / (growth - 1.0);
}

namespace detail {

// Annual operation cost of one candidate: weighted dispatch cost over the
// representative days. Each day starts with an empty store.
inline double candidate_operation_cost(const SizingCatalog& catalog, const PvOption& pv,
                                       const StorageOption& storage, const TariffSchedule& schedule,
                                       double step_hours, double charge_eff, double discharge_eff,
                                       bool allow_grid_charging) {
    double annual = 0.0;
    for (const RepresentativeDay& day : catalog.days) {
        DispatchProblem problem;
        problem.pv_production.resize(day.pv_normalized.size());
        for (std::size_t t = 0; t < day.pv_normalized.size(); ++t)
            problem.pv_production[t] = pv.peak_kw * day.pv_normalized[t];
        problem.aggregate_load = day.aggregate_load;
        problem.storage.capacity_kwh = storage.capacity_kwh;
        problem.storage.power_kw = storage.power_kw;
        problem.storage.charge_efficiency = charge_eff;
        problem.storage.discharge_efficiency = discharge_eff;
        problem.storage.initial_soc_kwh = 0.0;
        problem.schedule = schedule;
        problem.step_hours = step_hours;
        problem.allow_grid_charging = allow_grid_charging;
        annual += day.weight_days * solve_dispatch(problem).objective_cost;
    }
    return annual;
}

// Strict candidate ordering for the argmin: total cost, then capex, then PV
// peak, then storage capacity, then catalog position.
inline bool candidate_better(const SizingCandidate& a, const PvOption& pva, const StorageOption& sta,
                             const SizingCandidate& b, const PvOption& pvb, const StorageOption& stb) {
    if (a.total != b.total) return a.total < b.total;
    const double capex_a = pva.capex_eur + sta.capex_eur;
    const double capex_b = pvb.capex_eur + stb.capex_eur;
    if (capex_a != capex_b) return capex_a < capex_b;
    if (pva.peak_kw != pvb.peak_kw) return pva.peak_kw < pvb.peak_kw;
    if (sta.capacity_kwh != stb.capacity_kwh) return sta.capacity_kwh < stb.capacity_kwh;
    if (a.pv_index != b.pv_index) return a.pv_index < b.pv_index;
    return a.storage_index < b.storage_index;
}

}  // namespace detail

/// Evaluates every PV/storage pair of the catalog against the representative
/// days and returns the pair with the least annualized capex plus operation
/// cost. A business-as-usual row (no PV, no storage) is appended to the table
/// for the impact indicators. Candidate evaluation may run in parallel; the
/// result is reduced by candidate index and does not depend on scheduling.
inline SizingResult optimize_sizing(const SizingCatalog& catalog, const TariffSchedule& schedule,
                                    double step_hours, double charge_eff = 1.0,
                                    double discharge_eff = 1.0, bool allow_grid_charging = false,
                                    bool parallel = false) {
    {
        const auto problems = catalog.validate();
        if (!problems.empty())
            throw std::invalid_argument("optimize_sizing: " + problems.front());
    }
    const double crf = capital_recovery_factor(catalog.discount_rate, catalog.lifetime_years);
    const std::size_t n_pv = catalog.pv_options.size();
    const std::size_t n_st = catalog.storage_options.size();
    const std::size_t n_candidates = n_pv * n_st;

    std::vector<SizingCandidate> table(n_candidates);
    auto evaluate = [&](std::size_t k) {
        const std::size_t pi = k / n_st;
        const std::size_t si = k % n_st;
        const PvOption& pv = catalog.pv_options[pi];
        const StorageOption& st = catalog.storage_options[si];
        SizingCandidate row;
        row.pv_index = pi;
        row.storage_index = si;
        row.annualized_capex = (pv.capex_eur + st.capex_eur) * crf;
        try {
            row.annual_operation_cost = detail::candidate_operation_cost(
                catalog, pv, st, schedule, step_hours, charge_eff, discharge_eff, allow_grid_charging);
        } catch (const std::exception& e) {
            throw std::runtime_error("optimize_sizing: candidate pv=" + std::to_string(pv.peak_kw) +
                                     " kW, storage=" + std::to_string(st.capacity_kwh) +
                                     " kWh failed: " + e.what());
        }
        row.total = row.annualized_capex + row.annual_operation_cost;
        table[k] = row;
    };

    if (parallel && n_candidates > 1) {
        std::vector<std::future<void>> jobs;
        jobs.reserve(n_candidates);
        for (std::size_t k = 0; k < n_candidates; ++k)
            jobs.push_back(std::async(std::launch::async, evaluate, k));
        for (auto& job : jobs) job.get();
    } else {
        for (std::size_t k = 0; k < n_candidates; ++k) evaluate(k);
    }

    std::size_t best = 0;
    for (std::size_t k = 1; k < n_candidates; ++k) {
        const SizingCandidate& a = table[k];
        const SizingCandidate& b = table[best];
        if (detail::candidate_better(a, catalog.pv_options[a.pv_index],
                                     catalog.storage_options[a.storage_index], b,
                                     catalog.pv_options[b.pv_index],
                                     catalog.storage_options[b.storage_index]))
            best = k;
    }

    SizingResult result;
    result.pv_index = table[best].pv_index;
    result.storage_index = table[best].storage_index;
    result.pv = catalog.pv_options[result.pv_index];
    result.storage = catalog.storage_options[result.storage_index];
    result.annualized_capex = table[best].annualized_capex;
    result.annual_operation_cost = table[best].annual_operation_cost;
    result.total = table[best].total;
    result.table = std::move(table);

    // Business-as-usual baseline for downstream impact deltas.
    SizingCandidate bau;
    bau.baseline = true;
    bau.pv_index = n_pv;
    bau.storage_index = n_st;
    bau.annual_operation_cost = detail::candidate_operation_cost(
        catalog, PvOption{0.0, 0.0}, StorageOption{0.0, 0.0, 0.0}, schedule, step_hours, charge_eff,
        discharge_eff, allow_grid_charging);
    bau.total = bau.annual_operation_cost;
    result.table.push_back(bau);
    return result;
}

}  // namespace ecplan
