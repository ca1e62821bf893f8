#pragma once

#include "lobhawkes/model.hpp"

#include <string>
#include <vector>

namespace lobhawkes {

struct StrategyConfig {
    double threshold_multiplier{3.0}; // k: cluster opens at lambda >= k*mu
    int offset_ticks{1};              // limit price distance from last trade
    double tick_size{0.01};
    double base_order_size{1.0};
    bool size_intensity_scaling{false}; // scale size by lambda_open/(k*mu)
    int stop_loss_ticks{10};
    double cancel_decay_fraction{0.2}; // c: close at mu + c*(peak - mu)
    double max_inventory{10.0};
    double fee_per_trade{0.0};
};

void validate_config(const StrategyConfig& cfg);

struct ClusterEvent {
    Side side{Side::Buy};
    double start{0.0};
    double end{0.0};
    double peak_intensity{0.0};
};

struct Trade {
    double time{0.0};
    Side side{Side::Buy}; // side we executed
    double price{0.0};
    double size{0.0};
};

struct PnlPoint {
    double time{0.0};
    double value{0.0}; // mark-to-market at this time
};

struct Position {
    double cash{0.0};
    double inventory{0.0};
    double avg_entry_price{0.0}; // basis of the open inventory
};

struct BacktestReport {
    std::vector<Trade> trades;
    std::vector<PnlPoint> pnl_series;
    double total_pnl{0.0};
    double max_drawdown{0.0};
    std::size_t n_clusters_detected{0};
    std::size_t n_stop_loss_hits{0};
};

[[nodiscard]] double mark_to_market(const Position& position, double last_price);

// A side-i cluster opens at the first event time with
// lambda_i(t) >= k*mu_i (inclusive evaluation) and closes once
// lambda_i(t) < mu_i + c*(peak - mu_i). Open clusters close at the
// horizon. Evaluation is causal: only events at or before t count.
[[nodiscard]] std::vector<ClusterEvent> detect_clusters(const HawkesModel& model,
                                                        const EventStream& stream,
                                                        const StrategyConfig& cfg);

// Event-driven liquidity-provision backtest: a Buy cluster posts a sell
// limit offset_ticks above the last price (a Sell cluster mirrors it),
// fills occur when a later event's price touches the limit, orders
// cancel at cluster close, and a stop-loss flattens the position when
// the price moves stop_loss_ticks against the entry basis.
[[nodiscard]] BacktestReport run_backtest(const HawkesModel& model, const EventStream& stream,
                                          const StrategyConfig& cfg);

void write_trades_csv(const std::vector<Trade>& trades, const std::string& path);

} // namespace lobhawkes
