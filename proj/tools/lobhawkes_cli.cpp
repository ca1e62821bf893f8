#include "lobhawkes/diagnostics.hpp"
#include "lobhawkes/estimate.hpp"
#include "lobhawkes/json_io.hpp"
#include "lobhawkes/simulate.hpp"
#include "lobhawkes/strategy.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace lobhawkes;

[[nodiscard]] KernelKind kernel_from_flag(const std::string& name) {
    return name == "power_law" ? KernelKind::PowerLaw : KernelKind::Exponential;
}

struct FitArgs {
    std::string data, kernel, out;
    std::size_t restarts{5};
    std::uint64_t seed{42};
    bool lenient{false};
};

void run_fit(const FitArgs& args) {
    EventStream stream = parse_csv(args.data, {.strict = !args.lenient});
    FitConfig cfg;
    cfg.kind = kernel_from_flag(args.kernel);
    cfg.restarts = args.restarts;
    cfg.seed = args.seed;
    const FitResult result = fit(stream, cfg);
    write_json_file(fit_result_to_json(result), args.out);
    std::cerr << "fit: " << stream.size() << " events, kernel=" << args.kernel
              << ", nll=" << result.neg_log_likelihood << ", aic=" << result.aic
              << ", converged=" << (result.converged ? "yes" : "no") << '\n';
    for (const std::string& warning : result.warnings) std::cerr << "warning: " << warning << '\n';
}

struct SimulateArgs {
    std::string model, out;
    double horizon{0.0};
    std::uint64_t seed{42};
    std::size_t max_events{1'000'000};
    bool allow_nonstationary{false};
};

void run_simulate(const SimulateArgs& args) {
    const HawkesModel model = model_from_any_json(read_json_file(args.model));
    SimConfig cfg;
    cfg.horizon = args.horizon;
    cfg.seed = args.seed;
    cfg.max_events = args.max_events;
    cfg.allow_nonstationary = args.allow_nonstationary;
    const SimResult result = simulate(model, cfg);
    write_csv(result.stream, args.out, args.seed);
    std::cerr << "simulate: " << result.stream.size() << " events over horizon " << args.horizon
              << (result.truncated ? " (truncated at max events)" : "") << '\n';
}

struct IntensityArgs {
    std::string model, data, out;
    double step{0.0};
    std::optional<std::string> svg;
    bool lenient{false};
};

void run_intensity(const IntensityArgs& args) {
    const HawkesModel model = model_from_any_json(read_json_file(args.model));
    EventStream stream = parse_csv(args.data, {.strict = !args.lenient});
    export_intensity(model, stream, args.step, args.out, args.svg);
    std::cerr << "intensity: wrote " << args.out;
    if (args.svg) std::cerr << " and " << *args.svg;
    std::cerr << '\n';
}

struct CompareArgs {
    std::string data, out;
    std::size_t restarts{5};
    std::uint64_t seed{42};
    bool lenient{false};
};

void run_compare(const CompareArgs& args) {
    EventStream stream = parse_csv(args.data, {.strict = !args.lenient});
    FitConfig cfg_exp, cfg_pl;
    cfg_exp.kind = KernelKind::Exponential;
    cfg_pl.kind = KernelKind::PowerLaw;
    cfg_exp.restarts = cfg_pl.restarts = args.restarts;
    cfg_exp.seed = cfg_pl.seed = args.seed;
    const ComparisonReport report = compare_kernels(stream, cfg_exp, cfg_pl);
    write_json_file(comparison_report_to_json(report), args.out);
    std::cerr << "compare: winner="
              << (report.winner == KernelKind::PowerLaw ? "power_law" : "exponential")
              << ", delta_aic=" << report.delta_aic << '\n';
}

struct BacktestArgs {
    std::string model, data, config, out;
    bool lenient{false};
};

void run_backtest_cmd(const BacktestArgs& args) {
    const HawkesModel model = model_from_any_json(read_json_file(args.model));
    EventStream stream = parse_csv(args.data, {.strict = !args.lenient});
    const StrategyConfig cfg = strategy_config_from_json(read_json_file(args.config));
    const BacktestReport report = run_backtest(model, stream, cfg);
    write_json_file(backtest_report_to_json(report), args.out);
    std::cerr << "backtest: " << report.trades.size() << " trades, "
              << report.n_clusters_detected << " clusters, total_pnl=" << report.total_pnl
              << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bivariate Hawkes process toolkit for limit-order-book event streams"};
    app.require_subcommand(1);

    FitArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a Hawkes model to an event CSV");
    fit_cmd->add_option("--data", fit_args.data, "input event CSV")->required();
    fit_cmd->add_option("--kernel", fit_args.kernel, "kernel family")
        ->required()
        ->check(CLI::IsMember({"exponential", "power_law"}));
    fit_cmd->add_option("--out", fit_args.out, "output fit JSON")->required();
    fit_cmd->add_option("--restarts", fit_args.restarts, "number of optimizer starts");
    fit_cmd->add_option("--seed", fit_args.seed, "seed for restart jitter");
    fit_cmd->add_flag("--lenient", fit_args.lenient, "sort rows and perturb same-side ties");

    SimulateArgs sim_args;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "simulate a model by thinning");
    sim_cmd->add_option("--model", sim_args.model, "model or fit JSON")->required();
    sim_cmd->add_option("--horizon", sim_args.horizon, "window length in seconds")->required();
    sim_cmd->add_option("--seed", sim_args.seed, "random seed");
    sim_cmd->add_option("--out", sim_args.out, "output event CSV")->required();
    sim_cmd->add_option("--max-events", sim_args.max_events, "truncation guard");
    sim_cmd->add_flag("--allow-nonstationary", sim_args.allow_nonstationary,
                      "simulate even if the branching matrix is explosive");

    IntensityArgs intensity_args;
    CLI::App* intensity_cmd =
        app.add_subcommand("intensity", "export the intensity path over a data stream");
    intensity_cmd->add_option("--model", intensity_args.model, "model or fit JSON")->required();
    intensity_cmd->add_option("--data", intensity_args.data, "input event CSV")->required();
    intensity_cmd->add_option("--step", intensity_args.step, "grid step in seconds")->required();
    intensity_cmd->add_option("--out", intensity_args.out, "output intensity CSV")->required();
    std::string svg_path;
    CLI::Option* svg_opt = intensity_cmd->add_option("--svg", svg_path, "optional SVG chart");
    intensity_cmd->add_flag("--lenient", intensity_args.lenient,
                            "sort rows and perturb same-side ties");

    CompareArgs compare_args;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "fit both kernels and compare by AIC");
    compare_cmd->add_option("--data", compare_args.data, "input event CSV")->required();
    compare_cmd->add_option("--out", compare_args.out, "output comparison JSON")->required();
    compare_cmd->add_option("--restarts", compare_args.restarts, "optimizer starts per fit");
    compare_cmd->add_option("--seed", compare_args.seed, "seed for restart jitter");
    compare_cmd->add_flag("--lenient", compare_args.lenient,
                          "sort rows and perturb same-side ties");

    BacktestArgs backtest_args;
    CLI::App* backtest_cmd =
        app.add_subcommand("backtest", "run the cluster liquidity-provision backtest");
    backtest_cmd->add_option("--model", backtest_args.model, "model or fit JSON")->required();
    backtest_cmd->add_option("--data", backtest_args.data, "input event CSV with prices")
        ->required();
    backtest_cmd->add_option("--config", backtest_args.config, "strategy config JSON")->required();
    backtest_cmd->add_option("--out", backtest_args.out, "output report JSON")->required();
    backtest_cmd->add_flag("--lenient", backtest_args.lenient,
                           "sort rows and perturb same-side ties");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // help/version print and exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*fit_cmd) {
            run_fit(fit_args);
        } else if (*sim_cmd) {
            run_simulate(sim_args);
        } else if (*intensity_cmd) {
            if (svg_opt->count() > 0) intensity_args.svg = svg_path;
            run_intensity(intensity_args);
        } else if (*compare_cmd) {
            run_compare(compare_args);
        } else if (*backtest_cmd) {
            run_backtest_cmd(backtest_args);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
