#pragma once

#include "lobhawkes/diagnostics.hpp"
#include "lobhawkes/strategy.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace lobhawkes {

// Shape/key problems in structured inputs; value problems surface as
// std::invalid_argument from the domain validators.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Model schema: {"kind": "exponential"|"power_law", "mu": [m1,m2],
// "alpha": [[..],[..]], "beta": [[..],[..]], "epsilon": [[..],[..]]
// (power_law only)}. Round-trips losslessly.
[[nodiscard]] nlohmann::json model_to_json(const HawkesModel& model);
[[nodiscard]] HawkesModel model_from_json(const nlohmann::json& j);

// Accepts either a bare model object or a FitResult object with an
// embedded "model" key, so fit output feeds simulate/intensity/backtest.
[[nodiscard]] HawkesModel model_from_any_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json fit_result_to_json(const FitResult& result);
[[nodiscard]] nlohmann::json residual_report_to_json(const ResidualReport& report);
[[nodiscard]] nlohmann::json comparison_report_to_json(const ComparisonReport& report);
[[nodiscard]] nlohmann::json backtest_report_to_json(const BacktestReport& report);

// Strict: unknown keys are rejected; absent keys keep their defaults.
[[nodiscard]] StrategyConfig strategy_config_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json strategy_config_to_json(const StrategyConfig& cfg);

[[nodiscard]] nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

} // namespace lobhawkes
