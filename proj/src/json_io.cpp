#include "lobhawkes/json_io.hpp"

#include <fstream>
#include <set>

namespace lobhawkes {

namespace {

using nlohmann::json;

[[nodiscard]] std::string kind_name(KernelKind kind) {
    return kind == KernelKind::Exponential ? "exponential" : "power_law";
}

[[nodiscard]] KernelKind kind_from_name(const std::string& name) {
    if (name == "exponential") return KernelKind::Exponential;
    if (name == "power_law") return KernelKind::PowerLaw;
    throw SchemaError("unknown kernel kind: " + name);
}

[[nodiscard]] std::string side_name(Side side) { return side == Side::Buy ? "buy" : "sell"; }

void require_keys(const json& j, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const std::string& what) {
    if (!j.is_object()) throw SchemaError(what + " must be a JSON object");
    for (const std::string& key : required)
        if (!j.contains(key)) throw SchemaError(what + " is missing key \"" + key + "\"");
    for (const auto& item : j.items())
        if (!required.contains(item.key()) && !optional.contains(item.key()))
            throw SchemaError(what + " has unknown key \"" + item.key() + "\"");
}

[[nodiscard]] double number_at(const json& j, const std::string& what) {
    if (!j.is_number()) throw SchemaError(what + " must be a number");
    return j.get<double>();
}

[[nodiscard]] std::array<std::array<double, 2>, 2> matrix_from(const json& j,
                                                               const std::string& what) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(what + " must be a 2x2 array");
    std::array<std::array<double, 2>, 2> out{};
    for (int i = 0; i < 2; ++i) {
        if (!j[i].is_array() || j[i].size() != 2) throw SchemaError(what + " must be a 2x2 array");
        for (int k = 0; k < 2; ++k) out[i][k] = number_at(j[i][k], what + " entry");
    }
    return out;
}

[[nodiscard]] json matrix_to(const std::array<std::array<double, 2>, 2>& m) {
    return json::array({json::array({m[0][0], m[0][1]}), json::array({m[1][0], m[1][1]})});
}

} // namespace

json model_to_json(const HawkesModel& model) {
    json j;
    j["kind"] = kind_name(model.kind());
    j["mu"] = json::array({model.mu[0], model.mu[1]});
    std::array<std::array<double, 2>, 2> alpha{}, beta{}, epsilon{};
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            alpha[i][k] = model.kernels[i][k].alpha;
            beta[i][k] = model.kernels[i][k].beta;
            epsilon[i][k] = model.kernels[i][k].epsilon;
        }
    }
    j["alpha"] = matrix_to(alpha);
    j["beta"] = matrix_to(beta);
    if (model.kind() == KernelKind::PowerLaw) j["epsilon"] = matrix_to(epsilon);
    return j;
}

HawkesModel model_from_json(const json& j) {
    require_keys(j, {"kind", "mu", "alpha", "beta"}, {"epsilon"}, "model");
    if (!j["kind"].is_string()) throw SchemaError("model \"kind\" must be a string");
    const KernelKind kind = kind_from_name(j["kind"].get<std::string>());
    if (kind == KernelKind::Exponential && j.contains("epsilon"))
        throw SchemaError("model has unknown key \"epsilon\" (exponential kernel)");
    if (kind == KernelKind::PowerLaw && !j.contains("epsilon"))
        throw SchemaError("model is missing key \"epsilon\"");
    if (!j["mu"].is_array() || j["mu"].size() != 2)
        throw SchemaError("model \"mu\" must be an array of 2 numbers");

    HawkesModel model;
    model.mu = {number_at(j["mu"][0], "mu entry"), number_at(j["mu"][1], "mu entry")};
    const auto alpha = matrix_from(j["alpha"], "alpha");
    const auto beta = matrix_from(j["beta"], "beta");
    std::array<std::array<double, 2>, 2> epsilon{};
    if (kind == KernelKind::PowerLaw) epsilon = matrix_from(j["epsilon"], "epsilon");
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            model.kernels[i][k].kind = kind;
            model.kernels[i][k].alpha = alpha[i][k];
            model.kernels[i][k].beta = beta[i][k];
            if (kind == KernelKind::PowerLaw) model.kernels[i][k].epsilon = epsilon[i][k];
        }
    }
    validate_model(model);
    return model;
}

HawkesModel model_from_any_json(const json& j) {
    if (j.is_object() && j.contains("model")) return model_from_json(j["model"]);
    return model_from_json(j);
}

json fit_result_to_json(const FitResult& result) {
    json j;
    j["model"] = model_to_json(result.model);
    j["neg_log_likelihood"] = result.neg_log_likelihood;
    j["log_likelihood"] = -result.neg_log_likelihood;
    j["aic"] = result.aic;
    j["converged"] = result.converged;
    j["iterations"] = result.iterations;
    j["gradient_norm"] = result.gradient_norm;
    j["start_point"] = result.start_point_used;
    j["warnings"] = result.warnings;
    return j;
}

json residual_report_to_json(const ResidualReport& report) {
    json j;
    j["component"] = side_name(report.component);
    j["residuals"] = report.residuals;
    j["ks_statistic"] = report.ks_statistic;
    j["ks_critical_1pct"] = report.ks_critical_1pct;
    j["pass"] = report.pass;
    return j;
}

json comparison_report_to_json(const ComparisonReport& report) {
    json j;
    j["exp_fit"] = fit_result_to_json(report.exp_fit);
    j["pl_fit"] = fit_result_to_json(report.pl_fit);
    j["delta_log_likelihood"] = report.delta_log_likelihood;
    j["delta_aic"] = report.delta_aic;
    j["winner"] = kind_name(report.winner);
    j["exp_residuals"] = json::array();
    for (const ResidualReport& r : report.exp_residuals)
        j["exp_residuals"].push_back(residual_report_to_json(r));
    j["pl_residuals"] = json::array();
    for (const ResidualReport& r : report.pl_residuals)
        j["pl_residuals"].push_back(residual_report_to_json(r));
    return j;
}

json backtest_report_to_json(const BacktestReport& report) {
    json j;
    j["trades"] = json::array();
    for (const Trade& trade : report.trades) {
        j["trades"].push_back({{"time", trade.time},
                               {"side", side_name(trade.side)},
                               {"price", trade.price},
                               {"size", trade.size}});
    }
    j["pnl_series"] = json::array();
    for (const PnlPoint& point : report.pnl_series)
        j["pnl_series"].push_back({{"time", point.time}, {"pnl", point.value}});
    j["total_pnl"] = report.total_pnl;
    j["max_drawdown"] = report.max_drawdown;
    j["n_clusters_detected"] = report.n_clusters_detected;
    j["n_stop_loss_hits"] = report.n_stop_loss_hits;
    return j;
}

StrategyConfig strategy_config_from_json(const json& j) {
    require_keys(j, {},
                 {"threshold_multiplier", "offset_ticks", "tick_size", "base_order_size",
                  "size_intensity_scaling", "stop_loss_ticks", "cancel_decay_fraction",
                  "max_inventory", "fee_per_trade"},
                 "strategy config");
    StrategyConfig cfg;
    const auto number = [&](const char* key, double& field) {
        if (j.contains(key)) field = number_at(j[key], std::string("strategy config \"") + key + "\"");
    };
    const auto integer = [&](const char* key, int& field) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_integer())
            throw SchemaError(std::string("strategy config \"") + key + "\" must be an integer");
        field = j[key].get<int>();
    };
    number("threshold_multiplier", cfg.threshold_multiplier);
    integer("offset_ticks", cfg.offset_ticks);
    number("tick_size", cfg.tick_size);
    number("base_order_size", cfg.base_order_size);
    if (j.contains("size_intensity_scaling")) {
        if (!j["size_intensity_scaling"].is_boolean())
            throw SchemaError("strategy config \"size_intensity_scaling\" must be a boolean");
        cfg.size_intensity_scaling = j["size_intensity_scaling"].get<bool>();
    }
    integer("stop_loss_ticks", cfg.stop_loss_ticks);
    number("cancel_decay_fraction", cfg.cancel_decay_fraction);
    number("max_inventory", cfg.max_inventory);
    number("fee_per_trade", cfg.fee_per_trade);
    validate_config(cfg);
    return cfg;
}

json strategy_config_to_json(const StrategyConfig& cfg) {
    json j;
    j["threshold_multiplier"] = cfg.threshold_multiplier;
    j["offset_ticks"] = cfg.offset_ticks;
    j["tick_size"] = cfg.tick_size;
    j["base_order_size"] = cfg.base_order_size;
    j["size_intensity_scaling"] = cfg.size_intensity_scaling;
    j["stop_loss_ticks"] = cfg.stop_loss_ticks;
    j["cancel_decay_fraction"] = cfg.cancel_decay_fraction;
    j["max_inventory"] = cfg.max_inventory;
    j["fee_per_trade"] = cfg.fee_per_trade;
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace lobhawkes
