#include "doctest.h"

#include "lobhawkes/diagnostics.hpp"
#include "lobhawkes/simulate.hpp"
#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace lobhawkes;
namespace oracle = lobhawkes::testing;

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(std::string name) : path(std::move(name)) {}
    ~TempPath() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

} // namespace

TEST_CASE("ks_statistic on hand-checkable samples") {
    SUBCASE("single sample ln 2") {
        // F(ln 2) = 0.5; empirical CDF jumps from 0 to 1 there, so D = 0.5.
        CHECK(ks_statistic({std::log(2.0)}) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("exact exponential quantiles give a small statistic") {
        std::vector<double> samples;
        const std::size_t n = 99;
        for (std::size_t k = 1; k <= n; ++k)
            samples.push_back(-std::log(1.0 - static_cast<double>(k) / (n + 1)));
        CHECK(ks_statistic(samples) < 0.02);
    }
    SUBCASE("constant samples are far from exponential") {
        const std::vector<double> ones(1000, 1.0);
        CHECK(ks_statistic(ones) >= 0.63);
    }
    SUBCASE("order does not matter") {
        CHECK(ks_statistic({3.0, 0.1, 1.0}) == ks_statistic({0.1, 1.0, 3.0}));
    }
    SUBCASE("invalid samples throw") {
        CHECK_THROWS_AS((void)ks_statistic({}), std::invalid_argument);
        CHECK_THROWS_AS((void)ks_statistic({1.0, -0.5}), std::invalid_argument);
        CHECK_THROWS_AS((void)ks_statistic({1.0, 0.0}), std::invalid_argument);
    }
}

TEST_CASE("ks_critical_1pct is 1.628/sqrt(n)") {
    CHECK(ks_critical_1pct(100) == doctest::Approx(0.1628).epsilon(1e-12));
    CHECK(ks_critical_1pct(4) == doctest::Approx(0.814).epsilon(1e-12));
    CHECK_THROWS_AS((void)ks_critical_1pct(0), std::invalid_argument);
}

TEST_CASE("residuals of a Poisson stream are the scaled gaps") {
    // mu_1 = 2: Lambda_1(t) = 2t, so Buy events at 1, 2, 3.5 rescale to
    // 2, 4, 7 and the residuals are the successive differences {2, 3}.
    HawkesModel model = oracle::exponential_model({2.0, 1.0}, 0.0, 1.0);
    EventStream stream;
    stream.horizon = 4.0;
    stream.events = {{1.0, Side::Buy, {}, {}},
                     {2.0, Side::Buy, {}, {}},
                     {3.5, Side::Buy, {}, {}}};
    const ResidualReport report = residuals(model, stream, Side::Buy);
    CHECK(report.component == Side::Buy);
    REQUIRE(report.residuals.size() == 2); // count is n_i - 1
    CHECK(report.residuals[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report.residuals[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(report.ks_critical_1pct == doctest::Approx(1.628 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(report.pass == (report.ks_statistic < report.ks_critical_1pct));
}

TEST_CASE("residuals require at least two events of the component") {
    const HawkesModel model = oracle::exponential_model({1.0, 1.0}, 0.0, 1.0);
    EventStream stream;
    stream.horizon = 4.0;
    stream.events = {{1.0, Side::Buy, {}, {}}, {2.0, Side::Buy, {}, {}}};
    CHECK_THROWS_AS((void)residuals(model, stream, Side::Sell), std::invalid_argument);
    CHECK_NOTHROW((void)residuals(model, stream, Side::Buy));
}

TEST_CASE("exponential residuals agree with the direct compensator") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.7}, 0.3, 1.5);
    SimConfig cfg;
    cfg.horizon = 50.0;
    cfg.seed = 13;
    const EventStream stream = simulate(model, cfg).stream;
    REQUIRE(stream.count(Side::Buy) >= 2);

    const ResidualReport report = residuals(model, stream, Side::Buy);
    std::vector<double> taus;
    for (const Event& e : stream.events) {
        if (e.side == Side::Buy) taus.push_back(compensator_at(model, stream, 0, e.time));
    }
    REQUIRE(report.residuals.size() == taus.size() - 1);
    for (std::size_t k = 0; k + 1 < taus.size(); ++k) {
        CHECK(report.residuals[k] == doctest::Approx(taus[k + 1] - taus[k]).epsilon(1e-9));
    }
}

TEST_CASE("residuals under the true model pass the KS test") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.5}, 0.3, 1.0);
    SimConfig cfg;
    cfg.horizon = 500.0;
    cfg.seed = 77;
    const EventStream stream = simulate(model, cfg).stream;
    const ResidualReport buy = residuals(model, stream, Side::Buy);
    const ResidualReport sell = residuals(model, stream, Side::Sell);
    CHECK(buy.pass);
    CHECK(sell.pass);
}

TEST_CASE("a grossly wrong model fails the KS test") {
    const HawkesModel truth = oracle::exponential_model({0.5, 0.5}, 0.3, 1.0);
    SimConfig cfg;
    cfg.horizon = 500.0;
    cfg.seed = 78;
    const EventStream stream = simulate(truth, cfg).stream;
    const HawkesModel wrong = oracle::exponential_model({5.0, 5.0}, 0.0, 1.0);
    CHECK(!residuals(wrong, stream, Side::Buy).pass);
}

TEST_CASE("compare_kernels reports consistent deltas and winner") {
    const HawkesModel truth = oracle::exponential_model({0.5, 0.5}, 0.4, 2.0);
    SimConfig sim_cfg;
    sim_cfg.horizon = 150.0;
    sim_cfg.seed = 31;
    const EventStream stream = simulate(truth, sim_cfg).stream;

    FitConfig cfg_exp;
    cfg_exp.restarts = 1;
    FitConfig cfg_pl;
    cfg_pl.kind = KernelKind::PowerLaw;
    cfg_pl.restarts = 1;

    const ComparisonReport report = compare_kernels(stream, cfg_exp, cfg_pl);
    CHECK(report.delta_aic ==
          doctest::Approx(report.pl_fit.aic - report.exp_fit.aic).epsilon(1e-12));
    CHECK(report.delta_log_likelihood ==
          doctest::Approx(report.exp_fit.neg_log_likelihood - report.pl_fit.neg_log_likelihood)
              .epsilon(1e-12));
    CHECK(report.winner ==
          (report.pl_fit.aic < report.exp_fit.aic ? KernelKind::PowerLaw
                                                  : KernelKind::Exponential));
    CHECK(report.exp_residuals.size() == 2);
    CHECK(report.pl_residuals.size() == 2);
    CHECK(report.exp_residuals[0].component == Side::Buy);
    CHECK(report.exp_residuals[1].component == Side::Sell);

    // Deterministic: a second run reproduces the numbers bit for bit.
    const ComparisonReport again = compare_kernels(stream, cfg_exp, cfg_pl);
    CHECK(again.exp_fit.neg_log_likelihood == report.exp_fit.neg_log_likelihood);
    CHECK(again.pl_fit.neg_log_likelihood == report.pl_fit.neg_log_likelihood);
    CHECK(again.winner == report.winner);
}

TEST_CASE("compare_kernels rejects mismatched configs") {
    EventStream stream;
    stream.horizon = 10.0;
    stream.events = {{1.0, Side::Buy, {}, {}}, {2.0, Side::Sell, {}, {}}};
    FitConfig cfg_exp;
    FitConfig cfg_pl;
    cfg_pl.kind = KernelKind::PowerLaw;
    CHECK_THROWS_AS((void)compare_kernels(stream, cfg_pl, cfg_pl), std::invalid_argument);
    CHECK_THROWS_AS((void)compare_kernels(stream, cfg_exp, cfg_exp), std::invalid_argument);
}

TEST_CASE("export_intensity writes a grid CSV that matches intensity_at") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.8}, 0.3, 2.0);
    SimConfig cfg;
    cfg.horizon = 5.0;
    cfg.seed = 3;
    const EventStream stream = simulate(model, cfg).stream;

    TempPath csv("diag_intensity.csv");
    export_intensity(model, stream, 0.75, csv.path);

    const std::vector<IntensitySample> path = intensity_path(model, stream, 0.75);

    std::ifstream in(csv.path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "time,lambda_buy,lambda_sell");
    std::string line;
    std::size_t rows = 0;
    bool saw_horizon = false;
    while (std::getline(in, line)) {
        REQUIRE(rows < path.size());
        double t = 0.0, buy = 0.0, sell = 0.0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &buy, &sell) == 3);
        CHECK(t == doctest::Approx(path[rows].time).epsilon(1e-9));
        CHECK(buy == doctest::Approx(path[rows].lambda_buy).epsilon(1e-6));
        CHECK(sell == doctest::Approx(path[rows].lambda_sell).epsilon(1e-6));
        if (t == 5.0) saw_horizon = true;
        ++rows;
    }
    CHECK(rows == path.size());
    CHECK(rows >= 8); // grid 0, 0.75, ..., plus event jumps and the horizon
    CHECK(saw_horizon);
}

TEST_CASE("export_intensity on an empty stream is the flat baseline") {
    const HawkesModel model = oracle::exponential_model({0.4, 0.9}, 0.3, 2.0);
    EventStream stream;
    stream.horizon = 2.0;
    TempPath csv("diag_flat.csv");
    export_intensity(model, stream, 1.0, csv.path);
    const std::string text = slurp(csv.path);
    CHECK(count_occurrences(text, "0.400000000") == 3);
    CHECK(count_occurrences(text, "0.900000000") == 3);
}

TEST_CASE("export_intensity SVG contains exactly the two series") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.8}, 0.3, 2.0);
    SimConfig cfg;
    cfg.horizon = 5.0;
    cfg.seed = 3;
    const EventStream stream = simulate(model, cfg).stream;

    TempPath csv("diag_svg.csv");
    TempPath svg("diag_svg.svg");
    export_intensity(model, stream, 0.5, csv.path, svg.path);
    const std::string text = slurp(svg.path);
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("</svg>") != std::string::npos);
    CHECK(count_occurrences(text, "<polyline") == 2);
    CHECK(text.find("intensity (events/s)") != std::string::npos);
    CHECK(text.find("time (s)") != std::string::npos);
}

TEST_CASE("export_intensity validates the grid step") {
    const HawkesModel model = oracle::exponential_model({0.5, 0.8}, 0.3, 2.0);
    EventStream stream;
    stream.horizon = 2.0;
    CHECK_THROWS_AS(export_intensity(model, stream, 0.0, "diag_bad.csv"), std::invalid_argument);
}
