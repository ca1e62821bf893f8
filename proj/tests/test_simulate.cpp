#include "doctest.h"

#include "lobhawkes/diagnostics.hpp"
#include "lobhawkes/simulate.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace lobhawkes;
namespace oracle = lobhawkes::testing;

TEST_CASE("simulate is deterministic in the seed") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.5}, 0.3, 1.0);
    SimConfig cfg;
    cfg.horizon = 200.0;
    cfg.seed = 7;
    const SimResult a = simulate(model, cfg);
    const SimResult b = simulate(model, cfg);
    REQUIRE(a.stream.size() == b.stream.size());
    for (std::size_t k = 0; k < a.stream.size(); ++k) {
        CHECK(a.stream.events[k].time == b.stream.events[k].time);
        CHECK(a.stream.events[k].side == b.stream.events[k].side);
    }
    cfg.seed = 8;
    const SimResult c = simulate(model, cfg);
    CHECK(a.stream.size() != c.stream.size()); // overwhelmingly likely
}

TEST_CASE("simulated streams satisfy all stream invariants") {
    const HawkesModel models[] = {oracle::exponential_model({0.5, 0.5}, 0.3, 1.0),
                                  oracle::power_law_model({0.5, 0.5}, 0.015, 1.5, 0.01)};
    for (const HawkesModel& model : models) {
        SimConfig cfg;
        cfg.horizon = 100.0;
        cfg.seed = 3;
        const SimResult result = simulate(model, cfg);
        CHECK(!result.truncated);
        CHECK_NOTHROW(validate_stream(result.stream));
        CHECK(result.stream.horizon == 100.0);
        double prev = 0.0;
        for (const Event& e : result.stream.events) {
            CHECK(e.time > 0.0);
            CHECK(e.time <= 100.0);
            CHECK(e.time > prev); // strictly increasing across sides too
            prev = e.time;
        }
    }
}

TEST_CASE("Poisson counts match the law over seeds") {
    const HawkesModel model = oracle::exponential_model({2.0, 2.0}, 0.0, 1.0);
    SimConfig cfg;
    cfg.horizon = 100.0;
    const int n_seeds = 100;
    double total = 0.0;
    for (int s = 0; s < n_seeds; ++s) {
        cfg.seed = static_cast<std::uint64_t>(s);
        total += static_cast<double>(simulate(model, cfg).stream.size());
    }
    const double mean = total / n_seeds;
    const double expected = 400.0;                         // (mu1+mu2)*T
    const double se = std::sqrt(expected / n_seeds);       // Poisson variance = mean
    CHECK(std::abs(mean - expected) < 4.0 * se);
}

TEST_CASE("exponential-model mean rate approaches expected_rates") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.5}, 0.3, 1.0);
    const auto rates = expected_rates(model);
    CHECK(rates[0] == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(rates[1] == doctest::Approx(1.25).epsilon(1e-12));

    SimConfig cfg;
    cfg.horizon = 2000.0;
    double buys = 0.0, sells = 0.0;
    const int n_seeds = 20;
    for (int s = 0; s < n_seeds; ++s) {
        cfg.seed = 100 + static_cast<std::uint64_t>(s);
        const SimResult result = simulate(model, cfg);
        buys += static_cast<double>(result.stream.count(Side::Buy));
        sells += static_cast<double>(result.stream.count(Side::Sell));
    }
    CHECK(std::abs(buys / (n_seeds * cfg.horizon) - 1.25) < 0.05 * 1.25);
    CHECK(std::abs(sells / (n_seeds * cfg.horizon) - 1.25) < 0.05 * 1.25);
}

TEST_CASE("expected_rates edge cases") {
    const HawkesModel poisson = oracle::exponential_model({0.7, 1.3}, 0.0, 1.0);
    const auto rates = expected_rates(poisson);
    CHECK(rates[0] == 0.7);
    CHECK(rates[1] == 1.3);
    CHECK_THROWS_AS((void)expected_rates(oracle::exponential_model({0.5, 0.5}, 1.2, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("non-stationary models are rejected unless overridden") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.5}, 1.2, 1.0);
    SimConfig cfg;
    cfg.horizon = 10.0;
    CHECK_THROWS_AS((void)simulate(model, cfg), std::invalid_argument);
    cfg.allow_nonstationary = true;
    cfg.max_events = 2000;
    const SimResult result = simulate(model, cfg);
    REQUIRE(!result.stream.empty());
    CHECK((result.truncated || result.stream.events.back().time <= 10.0));
}

TEST_CASE("max_events truncation is reported") {
    const HawkesModel model = oracle::exponential_model({2.0, 2.0}, 0.0, 1.0);
    SimConfig cfg;
    cfg.horizon = 1000.0;
    cfg.max_events = 50;
    const SimResult result = simulate(model, cfg);
    CHECK(result.truncated);
    CHECK(result.stream.size() == 50);
    // The requested window is kept; generation just stops early.
    CHECK(result.stream.horizon == 1000.0);
    CHECK_NOTHROW(validate_stream(result.stream));
}

TEST_CASE("simulate validates its config") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.5}, 0.0, 1.0);
    SimConfig cfg;
    cfg.horizon = 0.0;
    CHECK_THROWS_AS((void)simulate(model, cfg), std::invalid_argument);
    cfg.horizon = 10.0;
    cfg.max_events = 0;
    CHECK_THROWS_AS((void)simulate(model, cfg), std::invalid_argument);
}

TEST_CASE("simulated inter-arrivals look exponential for the Poisson case") {
    // Total process is Poisson(mu1+mu2); merged inter-arrival gaps are
    // exponential with that rate, so the scaled gaps pass a KS test in
    // nearly all seeds.
    const HawkesModel model = oracle::exponential_model({1.0, 1.0}, 0.0, 1.0);
    SimConfig cfg;
    cfg.horizon = 500.0;
    int passes = 0;
    const int n_seeds = 30;
    for (int s = 0; s < n_seeds; ++s) {
        cfg.seed = 1000 + static_cast<std::uint64_t>(s);
        const SimResult result = simulate(model, cfg);
        std::vector<double> gaps;
        double prev = 0.0;
        for (const Event& e : result.stream.events) {
            gaps.push_back(2.0 * (e.time - prev));
            prev = e.time;
        }
        const double stat = ks_statistic(gaps);
        if (stat < ks_critical_1pct(gaps.size())) ++passes;
    }
    CHECK(passes >= 27);
}
