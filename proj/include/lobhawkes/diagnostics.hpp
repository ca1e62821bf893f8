#pragma once

#include "lobhawkes/estimate.hpp"
#include "lobhawkes/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lobhawkes {

struct ResidualReport {
    Side component{Side::Buy};
    std::vector<double> residuals; // successive differences of rescaled times, all > 0
    double ks_statistic{0.0};
    double ks_critical_1pct{0.0};
    bool pass{false};
};

struct ComparisonReport {
    FitResult exp_fit{};
    FitResult pl_fit{};
    // Deltas are (power-law - exponential); winner has the lower AIC.
    double delta_log_likelihood{0.0};
    double delta_aic{0.0};
    KernelKind winner{KernelKind::Exponential};
    // One report per component when that component has >= 2 events.
    std::vector<ResidualReport> exp_residuals;
    std::vector<ResidualReport> pl_residuals;
};

// Sup-norm distance between the empirical CDF of samples and 1 - e^{-x}.
[[nodiscard]] double ks_statistic(std::vector<double> samples);

// Asymptotic 1%-level critical value 1.628/sqrt(n).
[[nodiscard]] double ks_critical_1pct(std::size_t n);

// Time-rescaling test: tau_k = Lambda_i(t_k) at type-i events; the
// successive differences are i.i.d. unit-exponential under the true
// model. Requires >= 2 events of the component.
[[nodiscard]] ResidualReport residuals(const HawkesModel& model, const EventStream& stream,
                                       Side component);

// Fits both kernel families and declares the AIC winner.
[[nodiscard]] ComparisonReport compare_kernels(const EventStream& stream,
                                               const FitConfig& cfg_exp, const FitConfig& cfg_pl);

// Writes `time,lambda_buy,lambda_sell` CSV from intensity_path, plus an
// optional self-contained SVG line chart of the two series.
void export_intensity(const HawkesModel& model, const EventStream& stream, double grid_step,
                      const std::string& csv_path,
                      const std::optional<std::string>& svg_path = std::nullopt);

} // namespace lobhawkes
