#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecplan {

// Collective-investment pool in the Generation kWh style: members lend small
// interest-free amounts towards a plant and receive generation shares
// proportional to their loan, repaid over the project's operational life.
struct Contribution {
    std::string participant_id;
    double loan_eur = 0.0;
};

struct InvestmentPool {
    std::vector<Contribution> contributions;
    double project_peak_kw = 0.0;
    double project_capex_eur = 0.0;
    int repayment_years = 25;
    double min_contribution_eur = 100.0;

    std::vector<std::string> validate() const {
        std::vector<std::string> problems;
        if (contributions.empty()) problems.push_back("pool has no participants");
        double total = 0.0;
        for (const Contribution& c : contributions) {
            if (c.loan_eur < min_contribution_eur)
                problems.push_back("loan of '" + c.participant_id + "' below the minimum contribution");
            total += c.loan_eur;
        }
        if (total > project_capex_eur + 1e-6)
            problems.push_back("loans exceed the project investment");
        if (repayment_years < 1) problems.push_back("repayment horizon below one year");
        return problems;
    }
};

/// Generation share of each participant: loan over total loans.
inline std::vector<double> generation_shares(const InvestmentPool& pool) {
    if (pool.contributions.empty())
        throw std::invalid_argument("generation_shares: empty pool");
    double total = 0.0;
    for (const Contribution& c : pool.contributions) total += c.loan_eur;
    if (total <= 0.0) throw std::invalid_argument("generation_shares: total loans must be positive");
    std::vector<double> shares(pool.contributions.size());
    for (std::size_t i = 0; i < shares.size(); ++i)
        shares[i] = pool.contributions[i].loan_eur / total;
    return shares;
}

struct Installment {
    int year = 0; // 1-based; repayments run over years 1..repayment_years
    double amount_eur = 0.0;
};

/// Zero-interest repayment plan per participant: equal annual installments of
/// loan/years rounded to the cent, with the final installment adjusted so the
/// schedule sums to the loan exactly.
inline std::vector<std::vector<Installment>> repayment_schedule(const InvestmentPool& pool) {
    if (pool.repayment_years < 1)
        throw std::invalid_argument("repayment_schedule: horizon below one year");
    std::vector<std::vector<Installment>> schedules;
    schedules.reserve(pool.contributions.size());
    for (const Contribution& c : pool.contributions) {
        const std::int64_t loan_cents = std::llround(c.loan_eur * 100.0);
        const int years = pool.repayment_years;
        const std::int64_t base_cents =
            std::llround(static_cast<double>(loan_cents) / static_cast<double>(years));
        const std::int64_t final_cents = loan_cents - base_cents * (years - 1);
        if (final_cents < 0)
            throw std::invalid_argument("repayment_schedule: loan of '" + c.participant_id +
                                        "' too small for the horizon");
        std::vector<Installment> plan(static_cast<std::size_t>(years));
        for (int y = 1; y <= years; ++y) {
            const std::int64_t cents = y == years ? final_cents : base_cents;
            plan[static_cast<std::size_t>(y - 1)] = {y, static_cast<double>(cents) / 100.0};
        }
        schedules.push_back(std::move(plan));
    }
    return schedules;
}

/// Splits the project generation series among participants by their shares.
inline std::vector<std::vector<double>> allocate_project_energy(
    const InvestmentPool& pool, const std::vector<double>& project_generation_kwh) {
    const std::vector<double> shares = generation_shares(pool);
    std::vector<std::vector<double>> allocation(shares.size());
    for (std::size_t i = 0; i < shares.size(); ++i) {
        allocation[i].resize(project_generation_kwh.size());
        for (std::size_t t = 0; t < project_generation_kwh.size(); ++t)
            allocation[i][t] = shares[i] * project_generation_kwh[t];
    }
    return allocation;
}

}  // namespace ecplan
