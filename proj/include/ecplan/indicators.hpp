#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ecplan/matrix.hpp"
#include "ecplan/tariffs.hpp"

namespace ecplan {

// Community-vs-business-as-usual impact figures. BAU is the counterfactual
// without community assets: every kWh of load bought from the supplier over
// the grid. Deltas are EC minus BAU.
struct ImpactReport {
    double total_cost_ec = 0.0;   // €, net of export revenue
    double total_cost_bau = 0.0;  // €
    double renewable_share = 0.0; // fraction of load covered by allocated local energy
    double dso_revenue_ec = 0.0;
    double dso_revenue_bau = 0.0;
    double dso_delta = 0.0;
    double supplier_revenue_ec = 0.0;
    double supplier_revenue_bau = 0.0;
    double supplier_delta = 0.0;
    double emissions_tco2_ec = 0.0;
    double emissions_tco2_bau = 0.0;
    double emissions_value_eur = 0.0; // monetized avoided emissions
    double social_savings_eur = 0.0;  // savings accruing to vulnerable-flagged members
    double weighted_score = 0.0;
};

struct ScoreWeights {
    double economic = 0.0;
    double environmental = 0.0;
    double social = 0.0;
};

/// Share of community load covered by allocated local energy: sum G / sum L.
inline double renewable_share(const Matrix& load, const Matrix& key) {
    require_same_shape(load, key, "renewable_share");
    const double total_load = load.total();
    if (total_load <= 0.0) return 0.0;
    return key.total() / total_load;
}

/// Revenue impact of the community on the DSO and the traditional supplier,
/// in €. Every allocated kWh moves its network fee from the allo to the auto
/// rate (dso_delta) and is a lost supplier sale (supplier_delta).
inline std::pair<double, double> stakeholder_deltas(const Matrix& load, const Matrix& key,
                                                    const Matrix& residual,
                                                    const TariffSchedule& schedule) {
    require_same_shape(load, key, "stakeholder_deltas");
    require_same_shape(load, residual, "stakeholder_deltas");
    double dso_delta = 0.0;
    double supplier_delta = 0.0;
    for (std::size_t t = 0; t < load.rows(); ++t) {
        const TariffBand& band = schedule.band_for(t);
        double allocated = 0.0;
        for (std::size_t n = 0; n < load.cols(); ++n) allocated += key(t, n);
        dso_delta += allocated * (band.auto_network - band.allo_network) / 100.0;
        supplier_delta -= allocated * band.supplier_energy / 100.0;
    }
    return {dso_delta, supplier_delta};
}

/// Monetized value of the emissions avoided by allocated local energy, €,
/// with local generation counted as emission free.
inline double emissions_value(const Matrix& key, double grid_emission_factor_kg_per_kwh,
                              double social_cost_of_carbon_eur_per_tco2) {
    if (grid_emission_factor_kg_per_kwh < 0.0 || social_cost_of_carbon_eur_per_tco2 < 0.0)
        throw std::invalid_argument("emissions_value: factors must be nonnegative");
    return key.total() * grid_emission_factor_kg_per_kwh / 1000.0 * social_cost_of_carbon_eur_per_tco2;
}

/// Weighted community benefit: economic savings, monetized emissions, and the
/// savings of vulnerable members, combined linearly. Higher is better.
inline double community_score(const ImpactReport& report, const ScoreWeights& weights) {
    if (weights.economic < 0.0 || weights.environmental < 0.0 || weights.social < 0.0)
        throw std::invalid_argument("community_score: weights must be nonnegative");
    return weights.economic * (report.total_cost_bau - report.total_cost_ec) +
           weights.environmental * report.emissions_value_eur +
           weights.social * report.social_savings_eur;
}

/// Assembles the full impact report from the billing views of the community
/// case and the business-as-usual counterfactual.
inline ImpactReport build_impact_report(const Matrix& load, const Matrix& key, const Matrix& residual,
                                        const BillingResult& bills_ec, const BillingResult& bills_bau,
                                        const TariffSchedule& schedule,
                                        const std::vector<bool>& vulnerable,
                                        double grid_emission_factor_kg_per_kwh,
                                        double social_cost_of_carbon_eur_per_tco2,
                                        const ScoreWeights& weights) {
    if (bills_ec.members.size() != bills_bau.members.size())
        throw std::invalid_argument("build_impact_report: billing member counts disagree");
    if (!vulnerable.empty() && vulnerable.size() != bills_ec.members.size())
        throw std::invalid_argument("build_impact_report: vulnerable flag count disagrees");

    ImpactReport report;
    for (std::size_t n = 0; n < bills_ec.members.size(); ++n) {
        const MemberBill& ec = bills_ec.members[n];
        const MemberBill& bau = bills_bau.members[n];
        report.total_cost_ec += ec.total;
        report.total_cost_bau += bau.total;
        report.dso_revenue_ec += ec.residual_network_cost + ec.shared_network_cost;
        report.dso_revenue_bau += bau.residual_network_cost + bau.shared_network_cost;
        report.supplier_revenue_ec += ec.residual_energy_cost;
        report.supplier_revenue_bau += bau.residual_energy_cost;
        if (!vulnerable.empty() && vulnerable[n]) report.social_savings_eur += bau.total - ec.total;
    }
    report.total_cost_ec -= bills_ec.export_revenue;
    report.total_cost_bau -= bills_bau.export_revenue;
    report.dso_delta = report.dso_revenue_ec - report.dso_revenue_bau;
    report.supplier_delta = report.supplier_revenue_ec - report.supplier_revenue_bau;

    report.renewable_share = renewable_share(load, key);
    const double factor = grid_emission_factor_kg_per_kwh;
    report.emissions_tco2_ec = residual.total() * factor / 1000.0;
    report.emissions_tco2_bau = load.total() * factor / 1000.0;
    report.emissions_value_eur =
        emissions_value(key, factor, social_cost_of_carbon_eur_per_tco2);
    report.weighted_score = community_score(report, weights);
    return report;
}

}  // namespace ecplan
