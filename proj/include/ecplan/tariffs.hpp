#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ecplan/matrix.hpp"

namespace ecplan {

/// Consumption sources a tariff schedule discriminates between. Locally
/// produced energy allocated through the repartition key ("autoproduit")
/// carries a lower network fee than energy drawn from the grid
/// ("alloproduit"); exported surplus is remunerated at a flat price.
enum class EnergySource { local_auto, grid_allo, supplier, export_out };

// One time-of-use band. Prices are in c€/kWh; `periods` holds 0-based
// period indices. The bands of a schedule must partition 0..T-1.
struct TariffBand {
    std::string name;
    std::vector<std::size_t> periods;
    double auto_network = 0.0;    // network fee, locally produced consumption
    double allo_network = 0.0;    // network fee, grid consumption
    double supplier_energy = 0.0; // supplier energy price for residual load
    double auto_taxes = 0.0;      // taxes and levies per source
    double allo_taxes = 0.0;
};

struct TariffSchedule {
    std::vector<TariffBand> bands;
    double export_price = 0.0;          // c€/kWh paid for exported surplus
    double internal_energy_price = 0.0; // c€/kWh members pay the community for allocated energy

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    // Index of the band covering `period`, or npos.
    std::size_t band_of(std::size_t period) const noexcept {
        for (std::size_t b = 0; b < bands.size(); ++b)
            for (std::size_t p : bands[b].periods)
                if (p == period) return b;
        return npos;
    }

    const TariffBand& band_for(std::size_t period) const {
        std::size_t b = band_of(period);
        if (b == npos)
            throw std::out_of_range("tariff schedule: period " + std::to_string(period + 1) +
                                    " not covered by any band");
        return bands[b];
    }

    // Violations of the schedule's structural invariants against a grid of
    // `period_count` periods: the bands must partition the periods and all
    // prices must be nonnegative.
    std::vector<std::string> validate(std::size_t period_count) const {
        std::vector<std::string> problems;
        std::vector<int> cover(period_count, 0);
        for (const auto& band : bands) {
            for (std::size_t p : band.periods) {
                if (p >= period_count)
                    problems.push_back("band '" + band.name + "' references period " +
                                       std::to_string(p + 1) + " outside grid");
                else
                    ++cover[p];
            }
            for (double price : {band.auto_network, band.allo_network, band.supplier_energy,
                                 band.auto_taxes, band.allo_taxes})
                if (price < 0.0) {
                    problems.push_back("band '" + band.name + "' has a negative price");
                    break;
                }
        }
        for (std::size_t p = 0; p < period_count; ++p) {
            if (cover[p] == 0)
                problems.push_back("period " + std::to_string(p + 1) + " not covered by any band");
            else if (cover[p] > 1)
                problems.push_back("period " + std::to_string(p + 1) + " covered by multiple bands");
        }
        if (export_price < 0.0) problems.push_back("negative export price");
        if (internal_energy_price < 0.0) problems.push_back("negative internal energy price");
        return problems;
    }

    // Full per-kWh cost of residual (grid) energy in period t, c€/kWh.
    double allo_cost(std::size_t period) const {
        const TariffBand& b = band_for(period);
        return b.supplier_energy + b.allo_network + b.allo_taxes;
    }

    // Full per-kWh cost of allocated local energy in period t, c€/kWh.
    double auto_cost(std::size_t period) const {
        const TariffBand& b = band_for(period);
        return internal_energy_price + b.auto_network + b.auto_taxes;
    }
};

/// Band price for one period and source, c€/kWh.
inline double price_of(std::size_t period, EnergySource source, const TariffSchedule& schedule) {
    switch (source) {
        case EnergySource::export_out:
            // still reject out-of-grid periods
            (void)schedule.band_for(period);
            return schedule.export_price;
        case EnergySource::local_auto:
            return schedule.band_for(period).auto_network;
        case EnergySource::grid_allo:
            return schedule.band_for(period).allo_network;
        case EnergySource::supplier:
            return schedule.band_for(period).supplier_energy;
    }
    throw std::invalid_argument("price_of: unknown source");
}

// One member's bill over the horizon. All figures in € at full precision;
// rounding to cents happens at the report boundary only.
struct MemberBill {
    std::string member_id;
    double residual_energy_cost = 0.0; // R * supplier price
    double residual_network_cost = 0.0; // R * allo network fee
    double shared_network_cost = 0.0;   // G * auto network fee
    double shared_energy_cost = 0.0;    // G * internal price
    double taxes = 0.0;                 // source-discriminated taxes and levies
    double total = 0.0;
};

struct BillingResult {
    std::vector<MemberBill> members;
    double export_revenue = 0.0; // community-level revenue for exported surplus, €
};

/// Computes per-member bills from load L, repartition key G, residual R = L - G
/// and the community export series. Member cost per period is
/// R*(supplier + allo_network + allo_taxes) + G*(internal + auto_network + auto_taxes),
/// converted from c€ to €.
inline BillingResult compute_bills(const Matrix& load, const Matrix& key, const Matrix& residual,
                                   const std::vector<double>& export_kwh,
                                   const TariffSchedule& schedule,
                                   const std::vector<std::string>& member_ids = {}) {
    require_same_shape(load, key, "compute_bills");
    require_same_shape(load, residual, "compute_bills");
    const std::size_t T = load.rows(), N = load.cols();
    if (export_kwh.size() != T)
        throw std::invalid_argument("compute_bills: export series length disagrees with load");
    if (!member_ids.empty() && member_ids.size() != N)
        throw std::invalid_argument("compute_bills: member id count disagrees with load");

    BillingResult result;
    result.members.resize(N);
    for (std::size_t n = 0; n < N; ++n)
        result.members[n].member_id = member_ids.empty() ? "m" + std::to_string(n + 1) : member_ids[n];

    for (std::size_t t = 0; t < T; ++t) {
        const TariffBand& band = schedule.band_for(t);
        for (std::size_t n = 0; n < N; ++n) {
            MemberBill& bill = result.members[n];
            const double r = residual(t, n);
            const double g = key(t, n);
            bill.residual_energy_cost += r * band.supplier_energy / 100.0;
            bill.residual_network_cost += r * band.allo_network / 100.0;
            bill.shared_network_cost += g * band.auto_network / 100.0;
            bill.shared_energy_cost += g * schedule.internal_energy_price / 100.0;
            bill.taxes += (r * band.allo_taxes + g * band.auto_taxes) / 100.0;
        }
        result.export_revenue += export_kwh[t] * schedule.export_price / 100.0;
    }
    for (MemberBill& bill : result.members)
        bill.total = bill.residual_energy_cost + bill.residual_network_cost +
                     bill.shared_network_cost + bill.shared_energy_cost + bill.taxes;
    return result;
}

}  // namespace ecplan
