#pragma once

// Shared scenario builders for the test suites.

#include <random>
#include <string>
#include <vector>

#include "ecplan/core.hpp"
#include "ecplan/matrix.hpp"
#include "ecplan/tariffs.hpp"

namespace ecplan::testing {

inline TariffSchedule flat_schedule(std::size_t periods, double auto_net = 2.5, double allo_net = 5.0,
                                    double supplier = 10.0, double export_price = 0.0,
                                    double internal = 0.0, double auto_taxes = 0.0,
                                    double allo_taxes = 0.0) {
    TariffBand band;
    band.name = "flat";
    band.periods.resize(periods);
    for (std::size_t t = 0; t < periods; ++t) band.periods[t] = t;
    band.auto_network = auto_net;
    band.allo_network = allo_net;
    band.supplier_energy = supplier;
    band.auto_taxes = auto_taxes;
    band.allo_taxes = allo_taxes;
    TariffSchedule schedule;
    schedule.bands.push_back(std::move(band));
    schedule.export_price = export_price;
    schedule.internal_energy_price = internal;
    return schedule;
}

// Two bands: off-peak periods [0, split) and peak periods [split, T).
inline TariffSchedule two_band_schedule(std::size_t periods, std::size_t split) {
    TariffBand offpeak, peak;
    offpeak.name = "offpeak";
    peak.name = "peak";
    for (std::size_t t = 0; t < periods; ++t)
        (t < split ? offpeak : peak).periods.push_back(t);
    offpeak.auto_network = 1.5;
    offpeak.allo_network = 3.0;
    offpeak.supplier_energy = 8.0;
    peak.auto_network = 2.9;
    peak.allo_network = 5.1;
    peak.supplier_energy = 14.0;
    TariffSchedule schedule;
    schedule.bands.push_back(std::move(offpeak));
    schedule.bands.push_back(std::move(peak));
    return schedule;
}

inline CommunityScenario valid_scenario(std::size_t periods = 48, std::size_t member_count = 15) {
    CommunityScenario s;
    s.grid.period_count = periods;
    s.grid.step_hours = 0.5;
    s.members.resize(member_count);
    for (std::size_t n = 0; n < member_count; ++n) {
        s.members[n].id = "m" + std::to_string(n + 1);
        s.members[n].category = MemberCategory::natural_person;
        s.members[n].voting_share = 1.0 / static_cast<double>(member_count);
        s.members[n].vulnerable = n == 0;
    }
    s.load = Matrix(periods, member_count);
    for (std::size_t t = 0; t < periods; ++t)
        for (std::size_t n = 0; n < member_count; ++n)
            s.load(t, n) = 0.2 + 0.05 * static_cast<double>((t + n) % 7);
    s.pv.peak_kw = 20.0;
    s.pv.normalized_profile.assign(periods, 0.0);
    for (std::size_t t = 0; t < periods; ++t) {
        const double x = (static_cast<double>(t) + 0.5) / static_cast<double>(periods);
        const double bell = x < 0.25 || x > 0.75 ? 0.0 : 1.0 - 16.0 * (x - 0.5) * (x - 0.5);
        s.pv.normalized_profile[t] = 0.45 * bell;
    }
    s.storage.capacity_kwh = 30.0;
    s.storage.power_kw = 10.0;
    s.storage.charge_efficiency = 0.95;
    s.storage.discharge_efficiency = 0.95;
    s.storage.initial_soc_kwh = 0.0;
    s.tariffs = flat_schedule(periods);
    return s;
}

// Random nonnegative generation/load instances for the feasibility suites.
struct RandomInstance {
    std::vector<double> generation;
    Matrix load;
};

inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t max_periods = 100,
                                      std::size_t max_members = 20, double max_entry = 50.0) {
    std::uniform_int_distribution<std::size_t> tdist(1, max_periods), ndist(1, max_members);
    std::uniform_real_distribution<double> vdist(0.0, max_entry);
    std::bernoulli_distribution zero_row(0.05);
    RandomInstance inst;
    const std::size_t T = tdist(rng), N = ndist(rng);
    inst.load = Matrix(T, N);
    inst.generation.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        const bool zero = zero_row(rng);
        for (std::size_t n = 0; n < N; ++n) inst.load(t, n) = zero ? 0.0 : vdist(rng);
        inst.generation[t] = vdist(rng) * static_cast<double>(N) * 0.5;
    }
    return inst;
}

}  // namespace ecplan::testing
