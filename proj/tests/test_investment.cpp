#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ecplan/investment.hpp"

using namespace ecplan;
using Catch::Matchers::WithinAbs;

namespace {

InvestmentPool pool_of(std::initializer_list<double> loans, int years = 25) {
    InvestmentPool pool;
    int i = 0;
    for (double loan : loans) pool.contributions.push_back({"p" + std::to_string(++i), loan});
    pool.repayment_years = years;
    pool.project_peak_kw = 2100.0;
    pool.project_capex_eur = 2'000'000.0;
    return pool;
}

}  // namespace

TEST_CASE("shares are proportional to the loans") {
    const auto shares = generation_shares(pool_of({100.0, 300.0}));
    REQUIRE_THAT(shares[0], WithinAbs(0.25, 1e-12));
    REQUIRE_THAT(shares[1], WithinAbs(0.75, 1e-12));
}

TEST_CASE("a single participant owns the whole project") {
    REQUIRE(generation_shares(pool_of({5000.0})) == std::vector<double>{1.0});
}

TEST_CASE("equal loans give equal shares") {
    const auto shares = generation_shares(pool_of({250.0, 250.0, 250.0, 250.0}));
    for (double s : shares) REQUIRE_THAT(s, WithinAbs(0.25, 1e-12));
    double sum = 0.0;
    for (double s : shares) sum += s;
    REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
}

TEST_CASE("doubling every loan leaves the shares unchanged") {
    const auto base = generation_shares(pool_of({120.0, 480.0, 400.0}));
    const auto doubled = generation_shares(pool_of({240.0, 960.0, 800.0}));
    for (std::size_t i = 0; i < base.size(); ++i)
        REQUIRE_THAT(doubled[i], WithinAbs(base[i], 1e-12));
}

TEST_CASE("an empty pool is an error") {
    REQUIRE_THROWS_AS(generation_shares(InvestmentPool{}), std::invalid_argument);
}

TEST_CASE("a 2 million euro project repays 80000 per year for 25 years") {
    const auto plans = repayment_schedule(pool_of({2'000'000.0}));
    REQUIRE(plans.size() == 1);
    REQUIRE(plans[0].size() == 25);
    for (const auto& installment : plans[0]) REQUIRE(installment.amount_eur == 80'000.0);
    REQUIRE(plans[0].front().year == 1);
    REQUIRE(plans[0].back().year == 25);
}

TEST_CASE("a minimal 100 euro loan repays 4 euro per year") {
    const auto plans = repayment_schedule(pool_of({100.0}));
    for (const auto& installment : plans[0]) REQUIRE(installment.amount_eur == 4.0);
}

TEST_CASE("indivisible loans push the remainder into the final installment") {
    const auto plans = repayment_schedule(pool_of({1000.0}, 3));
    REQUIRE(plans[0][0].amount_eur == 333.33);
    REQUIRE(plans[0][1].amount_eur == 333.33);
    REQUIRE(plans[0][2].amount_eur == 333.34);
}

TEST_CASE("every randomized schedule sums to the loan exactly in cents") {
    std::mt19937_64 rng(2025);
    std::uniform_real_distribution<double> loan(100.0, 50'000.0);
    std::uniform_int_distribution<int> years(1, 40);
    for (int round = 0; round < 300; ++round) {
        const double amount = std::round(loan(rng) * 100.0) / 100.0;
        const auto plans = repayment_schedule(pool_of({amount}, years(rng)));
        long long cents = 0;
        for (const auto& installment : plans[0])
            cents += std::llround(installment.amount_eur * 100.0);
        REQUIRE(cents == std::llround(amount * 100.0));
    }
}

TEST_CASE("project energy splits by share and partitions exactly") {
    const auto pool = pool_of({100.0, 300.0});
    const auto split = allocate_project_energy(pool, {10.0, 20.0});
    REQUIRE_THAT(split[0][0], WithinAbs(2.5, 1e-12));
    REQUIRE_THAT(split[0][1], WithinAbs(5.0, 1e-12));
    REQUIRE_THAT(split[1][0], WithinAbs(7.5, 1e-12));
    REQUIRE_THAT(split[1][1], WithinAbs(15.0, 1e-12));
    for (std::size_t t = 0; t < 2; ++t) {
        double sum = 0.0;
        for (const auto& member : split) sum += member[t];
        REQUIRE_THAT(sum, WithinAbs(t == 0 ? 10.0 : 20.0, 1e-9));
    }
}

TEST_CASE("zero generation allocates zero to everyone") {
    const auto split = allocate_project_energy(pool_of({100.0, 300.0}), {0.0, 0.0, 0.0});
    for (const auto& member : split)
        for (double v : member) REQUIRE(v == 0.0);
}

TEST_CASE("a single participant receives the whole series") {
    const std::vector<double> series{1.5, 2.5, 0.0};
    const auto split = allocate_project_energy(pool_of({400.0}), series);
    REQUIRE(split.size() == 1);
    REQUIRE(split[0] == series);
}

TEST_CASE("pool validation enforces the minimum contribution and the capex cap") {
    auto pool = pool_of({50.0, 300.0});
    REQUIRE_FALSE(pool.validate().empty());
    pool = pool_of({1'500'000.0, 1'000'000.0});
    REQUIRE_FALSE(pool.validate().empty()); // loans exceed the 2 M€ project
    pool = pool_of({100.0, 300.0});
    REQUIRE(pool.validate().empty());
}
