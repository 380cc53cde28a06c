#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ecplan/matrix.hpp"
#include "ecplan/tariffs.hpp"

namespace ecplan {

struct TimeGrid {
    std::size_t period_count = 0; // T
    double step_hours = 0.5;      // Δt, 30 minutes by default
};

enum class MemberCategory {
    natural_person,
    sme,
    medium_large_enterprise,
    local_authority,
    energy_company,
};

inline std::optional<MemberCategory> parse_member_category(const std::string& s) {
    if (s == "natural-person") return MemberCategory::natural_person;
    if (s == "SME") return MemberCategory::sme;
    if (s == "medium-large-enterprise") return MemberCategory::medium_large_enterprise;
    if (s == "local-authority") return MemberCategory::local_authority;
    if (s == "energy-company") return MemberCategory::energy_company;
    return std::nullopt;
}

inline std::string to_string(MemberCategory c) {
    switch (c) {
        case MemberCategory::natural_person: return "natural-person";
        case MemberCategory::sme: return "SME";
        case MemberCategory::medium_large_enterprise: return "medium-large-enterprise";
        case MemberCategory::local_authority: return "local-authority";
        case MemberCategory::energy_company: return "energy-company";
    }
    return "?";
}

struct GeoPoint {
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
};

struct Member {
    std::string id;
    MemberCategory category = MemberCategory::natural_person;
    double voting_share = 0.0;                 // fraction of votes, all members sum to 1
    std::optional<GeoPoint> location;
    std::optional<std::string> admin_region;
    std::optional<std::string> transformer_id; // feeder node the member is connected under
    bool vulnerable = false;
};

struct StorageSpec {
    double capacity_kwh = 0.0;        // E
    double power_kw = 0.0;            // P, symmetric charge/discharge limit
    double charge_efficiency = 1.0;   // η_c in (0,1]
    double discharge_efficiency = 1.0;// η_d in (0,1]
    double initial_soc_kwh = 0.0;     // s0
};

struct PvSpec {
    double peak_kw = 0.0;
    std::vector<double> normalized_profile; // kWh produced per kW peak per period, in [0,1]
};

enum class CommunityType { REC, CEC };
enum class ProximityMethod { network, distance, admin };

inline std::optional<CommunityType> parse_community_type(const std::string& s) {
    if (s == "REC") return CommunityType::REC;
    if (s == "CEC") return CommunityType::CEC;
    return std::nullopt;
}

inline std::optional<ProximityMethod> parse_proximity_method(const std::string& s) {
    if (s == "network") return ProximityMethod::network;
    if (s == "distance") return ProximityMethod::distance;
    if (s == "admin") return ProximityMethod::admin;
    return std::nullopt;
}

struct ComplianceSettings {
    CommunityType community_type = CommunityType::REC;
    ProximityMethod proximity_method = ProximityMethod::network;
    double radius_km = 0.0;
    double control_threshold = 0.5;  // voting share above which a member "controls"
    double autonomy_threshold = 0.5; // share above which the REC autonomy warning fires
    std::vector<std::string> transformer_allowlist; // optional regulator-imposed perimeter
};

struct CommunityScenario {
    TimeGrid grid;
    std::vector<Member> members;
    Matrix load;        // T x N, kWh per period per member
    PvSpec pv;
    StorageSpec storage;
    TariffSchedule tariffs;
    ComplianceSettings compliance;
    bool allow_grid_charging = false;
};

// PV production per period, kWh: peak power scaled by the normalized profile.
inline std::vector<double> pv_production(const PvSpec& pv) {
    std::vector<double> p(pv.normalized_profile.size());
    for (std::size_t t = 0; t < p.size(); ++t) p[t] = pv.peak_kw * pv.normalized_profile[t];
    return p;
}

struct Violation {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const noexcept { return violations.empty(); }
    bool has(const std::string& code) const {
        for (const auto& v : violations)
            if (v.code == code) return true;
        return false;
    }
};

namespace detail {
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}
}  // namespace detail

/// Checks every structural invariant of a scenario and reports all problems
/// found; nothing is thrown. A scenario with an empty report is safe to feed
/// to every downstream operation (allocation, dispatch, billing, sizing).
inline ValidationReport validate_scenario(const CommunityScenario& s) {
    ValidationReport report;
    auto add = [&](std::string code, std::string message) {
        report.violations.push_back({std::move(code), std::move(message)});
    };

    const std::size_t T = s.grid.period_count;
    const std::size_t N = s.members.size();

    if (T < 1) add("grid.periods", "time grid must have at least one period");
    if (!(s.grid.step_hours > 0.0)) add("grid.step", "period length must be positive");

    // members
    std::set<std::string> seen_ids;
    double share_sum = 0.0;
    for (const Member& m : s.members) {
        if (!seen_ids.insert(m.id).second)
            add("member.id.duplicate", "duplicate member id '" + m.id + "'");
        if (m.voting_share < 0.0 || m.voting_share > 1.0)
            add("member.share.range", "voting share of '" + m.id + "' outside [0,1]");
        share_sum += m.voting_share;
    }
    if (N > 0 && std::abs(share_sum - 1.0) > 1e-9)
        add("member.share.sum",
            "voting shares sum " + detail::fmt_double(share_sum) + " != 1");

    // load matrix
    if (s.load.rows() != T)
        add("load.rows", "load matrix has " + std::to_string(s.load.rows()) +
                             " rows, grid has " + std::to_string(T) + " periods");
    if (s.load.cols() != N)
        add("load.cols", "load matrix has " + std::to_string(s.load.cols()) +
                             " columns for " + std::to_string(N) + " members");
    for (std::size_t t = 0; t < s.load.rows(); ++t)
        for (std::size_t n = 0; n < s.load.cols(); ++n)
            if (s.load(t, n) < 0.0)
                add("load.negative", "negative load at (" + std::to_string(t + 1) + "," +
                                         std::to_string(n + 1) + ")");

    // PV
    if (s.pv.peak_kw < 0.0) add("pv.peak", "PV peak power must be nonnegative");
    if (!s.pv.normalized_profile.empty() && s.pv.normalized_profile.size() != T)
        add("pv.profile.length", "PV profile length " + std::to_string(s.pv.normalized_profile.size()) +
                                     " does not match grid period count " + std::to_string(T));
    for (std::size_t t = 0; t < s.pv.normalized_profile.size(); ++t)
        if (s.pv.normalized_profile[t] < 0.0 || s.pv.normalized_profile[t] > 1.0)
            add("pv.profile.range",
                "PV profile entry at period " + std::to_string(t + 1) + " outside [0,1]");

    // storage
    const StorageSpec& st = s.storage;
    if (st.capacity_kwh < 0.0) add("storage.capacity", "storage capacity must be nonnegative");
    if (st.power_kw < 0.0) add("storage.power", "storage power must be nonnegative");
    if (!(st.charge_efficiency > 0.0) || st.charge_efficiency > 1.0)
        add("storage.efficiency", "charge efficiency outside (0,1]");
    if (!(st.discharge_efficiency > 0.0) || st.discharge_efficiency > 1.0)
        add("storage.efficiency", "discharge efficiency outside (0,1]");
    if (st.initial_soc_kwh < 0.0 || st.initial_soc_kwh > st.capacity_kwh)
        add("storage.initial_soc", "initial state of charge outside [0, capacity]");

    // tariffs
    for (const std::string& p : s.tariffs.validate(T)) add("tariff.structure", p);

    // Dispatch well-posedness. The dispatch objective nets allocated local
    // energy against residual grid energy; its linearization is exact only
    // when exporting never pays better than substituting grid consumption.
    if (report.violations.empty()) {
        for (const TariffBand& band : s.tariffs.bands) {
            const double allo = band.supplier_energy + band.allo_network + band.allo_taxes;
            const double auto_c = s.tariffs.internal_energy_price + band.auto_network + band.auto_taxes;
            if (s.tariffs.export_price > allo - auto_c + 1e-12)
                add("tariff.dispatch.nonconvex",
                    "export price " + detail::fmt_double(s.tariffs.export_price) +
                        " exceeds the allo-auto margin in band '" + band.name +
                        "'; dispatch would be unbounded");
            if (s.allow_grid_charging) {
                const double roundtrip = st.charge_efficiency * st.discharge_efficiency;
                if (s.tariffs.export_price * roundtrip > allo + 1e-12)
                    add("tariff.dispatch.grid_arbitrage",
                        "grid charging with export price " + detail::fmt_double(s.tariffs.export_price) +
                            " allows unbounded arbitrage against band '" + band.name + "'");
            }
        }
    }

    return report;
}

/// Resamples an energy series (kWh per period) between uniform grids whose
/// steps differ by an integer factor. Coarsening sums energy inside each
/// target period, refining splits it equally; total energy is conserved.
inline std::vector<double> resample_profile(const std::vector<double>& series,
                                            double source_step_hours, double target_step_hours) {
    if (!(source_step_hours > 0.0) || !(target_step_hours > 0.0))
        throw std::invalid_argument("resample_profile: steps must be positive");

    auto integer_ratio = [](double num, double den) -> long long {
        const double ratio = num / den;
        const double rounded = std::round(ratio);
        if (rounded >= 1.0 && std::abs(ratio - rounded) <= 1e-9 * rounded)
            return static_cast<long long>(rounded);
        return 0;
    };

    if (long long f = integer_ratio(target_step_hours, source_step_hours); f != 0) {
        if (f == 1) return series;
        // downsample: sum f consecutive source periods
        const std::size_t factor = static_cast<std::size_t>(f);
        if (series.size() % factor != 0)
            throw std::invalid_argument("resample_profile: series length " +
                                        std::to_string(series.size()) +
                                        " not divisible by ratio " + std::to_string(factor));
        std::vector<double> out(series.size() / factor, 0.0);
        for (std::size_t i = 0; i < series.size(); ++i) out[i / factor] += series[i];
        return out;
    }
    if (long long f = integer_ratio(source_step_hours, target_step_hours); f != 0) {
        // upsample: split each source period equally
        const std::size_t factor = static_cast<std::size_t>(f);
        std::vector<double> out;
        out.reserve(series.size() * factor);
        for (double v : series)
            for (std::size_t k = 0; k < factor; ++k) out.push_back(v / static_cast<double>(factor));
        return out;
    }
    throw std::invalid_argument("resample_profile: non-integer resample ratio");
}

}  // namespace ecplan
