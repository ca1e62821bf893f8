#include "lobhawkes/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lobhawkes {

namespace {

// Shared open/close state machine so detect_clusters and run_backtest
// make identical decisions. A cluster that closes at t cannot reopen at
// the same t (no zero-length clusters).
struct ClusterTracker {
    double mu{0.0};
    double open_threshold{0.0};
    double close_fraction{0.0};
    bool open{false};
    double start{0.0};
    double peak{0.0};

    enum class Transition { None, Opened, Closed };

    Transition update(double t, double lambda, bool may_open) {
        if (open) {
            peak = std::max(peak, lambda);
            if (lambda < mu + close_fraction * (peak - mu)) {
                open = false;
                return Transition::Closed;
            }
            return Transition::None;
        }
        if (may_open && lambda >= open_threshold) {
            open = true;
            start = t;
            peak = lambda;
            return Transition::Opened;
        }
        return Transition::None;
    }
};

struct RestingOrder {
    bool active{false};
    Side side{Side::Buy}; // side we would execute on fill
    double price{0.0};
    double size{0.0};
};

void apply_fill(Position& position, Side side, double price, double size, double fee) {
    const double signed_qty = side == Side::Buy ? size : -size;
    const double new_inventory = position.inventory + signed_qty;
    const bool extending =
        position.inventory == 0.0 || (position.inventory > 0.0) == (signed_qty > 0.0);
    if (extending) {
        const double total = std::abs(position.inventory) + size;
        position.avg_entry_price =
            (std::abs(position.inventory) * position.avg_entry_price + size * price) / total;
    } else if (position.inventory * new_inventory < 0.0) {
        position.avg_entry_price = price; // flipped through flat: basis resets
    }
    position.inventory = new_inventory;
    position.cash += side == Side::Buy ? -price * size : price * size;
    position.cash -= fee;
}

// Cap so the post-fill inventory stays inside [-max, +max].
[[nodiscard]] double capped_size(double desired, Side side, double inventory, double max_inventory) {
    double room = side == Side::Buy ? max_inventory - inventory : max_inventory + inventory;
    room = std::max(room, 0.0);
    return std::min(std::min(desired, max_inventory), room);
}

void check_ledger(const Position& position, const std::vector<Trade>& trades, double fee) {
    double cash = 0.0;
    double inventory = 0.0;
    for (const Trade& trade : trades) {
        cash += trade.side == Side::Buy ? -trade.price * trade.size : trade.price * trade.size;
        cash -= fee;
        inventory += trade.side == Side::Buy ? trade.size : -trade.size;
    }
    if (std::abs(cash - position.cash) > 1e-9 || std::abs(inventory - position.inventory) > 1e-9)
        throw std::logic_error("inventory accounting violation");
}

} // namespace

void validate_config(const StrategyConfig& cfg) {
    if (!(cfg.threshold_multiplier > 0.0) || !std::isfinite(cfg.threshold_multiplier))
        throw std::invalid_argument("threshold_multiplier must be > 0");
    if (cfg.offset_ticks < 1) throw std::invalid_argument("offset_ticks must be >= 1");
    if (!(cfg.tick_size > 0.0) || !std::isfinite(cfg.tick_size))
        throw std::invalid_argument("tick_size must be > 0");
    if (!(cfg.base_order_size > 0.0) || !std::isfinite(cfg.base_order_size))
        throw std::invalid_argument("base_order_size must be > 0");
    if (cfg.stop_loss_ticks < 1) throw std::invalid_argument("stop_loss_ticks must be >= 1");
    if (!(cfg.cancel_decay_fraction > 0.0) || !(cfg.cancel_decay_fraction < 1.0))
        throw std::invalid_argument("cancel_decay_fraction must be in (0,1)");
    if (!(cfg.max_inventory > 0.0) || !std::isfinite(cfg.max_inventory))
        throw std::invalid_argument("max_inventory must be > 0");
    if (cfg.fee_per_trade < 0.0 || !std::isfinite(cfg.fee_per_trade))
        throw std::invalid_argument("fee_per_trade must be >= 0");
}

double mark_to_market(const Position& position, double last_price) {
    return position.cash + position.inventory * last_price;
}

std::vector<ClusterEvent> detect_clusters(const HawkesModel& model, const EventStream& stream,
                                          const StrategyConfig& cfg) {
    validate_model(model);
    validate_stream(stream);
    validate_config(cfg);

    std::array<ClusterTracker, 2> trackers;
    for (int i = 0; i < 2; ++i) {
        trackers[i].mu = model.mu[i];
        trackers[i].open_threshold = cfg.threshold_multiplier * model.mu[i];
        trackers[i].close_fraction = cfg.cancel_decay_fraction;
    }

    std::vector<ClusterEvent> clusters;
    for (const Event& event : stream.events) {
        const std::array<double, 2> lambda =
            intensity_at(model, stream, event.time, /*inclusive=*/true);
        for (int i = 0; i < 2; ++i) {
            const bool may_open = event.time < stream.horizon;
            const auto transition = trackers[i].update(event.time, lambda[i], may_open);
            if (transition == ClusterTracker::Transition::Closed)
                clusters.push_back({side_from_index(i), trackers[i].start, event.time,
                                    trackers[i].peak});
        }
    }
    for (int i = 0; i < 2; ++i) {
        if (trackers[i].open)
            clusters.push_back(
                {side_from_index(i), trackers[i].start, stream.horizon, trackers[i].peak});
    }
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const ClusterEvent& a, const ClusterEvent& b) { return a.start < b.start; });
    return clusters;
}

BacktestReport run_backtest(const HawkesModel& model, const EventStream& stream,
                            const StrategyConfig& cfg) {
    validate_model(model);
    validate_stream(stream);
    validate_config(cfg);
    for (const Event& event : stream.events)
        if (!event.price) throw std::invalid_argument("backtest requires prices on every event");

    std::array<ClusterTracker, 2> trackers;
    for (int i = 0; i < 2; ++i) {
        trackers[i].mu = model.mu[i];
        trackers[i].open_threshold = cfg.threshold_multiplier * model.mu[i];
        trackers[i].close_fraction = cfg.cancel_decay_fraction;
    }
    // orders[i] is the live order from the side-i cluster: a Buy cluster
    // posts a sell limit above the market, a Sell cluster a buy limit below.
    std::array<RestingOrder, 2> orders;

    BacktestReport report;
    Position position;
    double peak_pnl = 0.0;
    double last_price = 0.0;
    bool have_price = false;

    const auto record_pnl = [&](double t, double mark) {
        report.pnl_series.push_back({t, mark});
        peak_pnl = std::max(peak_pnl, mark);
        report.max_drawdown = std::max(report.max_drawdown, peak_pnl - mark);
    };

    for (const Event& event : stream.events) {
        const double t = event.time;
        const double price = *event.price;

        // 1. The arriving trade can fill resting limits placed earlier.
        for (int i = 0; i < 2; ++i) {
            RestingOrder& order = orders[i];
            if (!order.active) continue;
            const bool touched =
                order.side == Side::Sell ? price >= order.price : price <= order.price;
            if (!touched) continue;
            apply_fill(position, order.side, order.price, order.size, cfg.fee_per_trade);
            report.trades.push_back({t, order.side, order.price, order.size});
            order.active = false;
        }
        last_price = price;
        have_price = true;

        // 2. Cluster transitions drive placement and cancellation.
        const std::array<double, 2> lambda = intensity_at(model, stream, t, /*inclusive=*/true);
        for (int i = 0; i < 2; ++i) {
            const bool may_open = t < stream.horizon;
            const auto transition = trackers[i].update(t, lambda[i], may_open);
            if (transition == ClusterTracker::Transition::Closed) {
                ++report.n_clusters_detected;
                orders[i].active = false;
            } else if (transition == ClusterTracker::Transition::Opened) {
                const Side exec_side = i == 0 ? Side::Sell : Side::Buy;
                const double offset = cfg.offset_ticks * cfg.tick_size;
                const double limit = i == 0 ? price + offset : price - offset;
                double size = cfg.base_order_size;
                if (cfg.size_intensity_scaling)
                    size *= trackers[i].peak / trackers[i].open_threshold;
                size = capped_size(size, exec_side, position.inventory, cfg.max_inventory);
                if (size > 0.0 && limit > 0.0)
                    orders[i] = {true, exec_side, limit, size};
            }
        }

        // 3. Stop-loss flattens at market on an adverse move from basis.
        if (position.inventory != 0.0) {
            const double stop_distance = cfg.stop_loss_ticks * cfg.tick_size;
            const bool stopped =
                position.inventory > 0.0
                    ? price <= position.avg_entry_price - stop_distance
                    : price >= position.avg_entry_price + stop_distance;
            if (stopped) {
                const Side exec_side = position.inventory > 0.0 ? Side::Sell : Side::Buy;
                const double size = std::abs(position.inventory);
                apply_fill(position, exec_side, price, size, cfg.fee_per_trade);
                report.trades.push_back({t, exec_side, price, size});
                ++report.n_stop_loss_hits;
            }
        }

        if (std::abs(position.inventory) > cfg.max_inventory + 1e-12)
            throw std::logic_error("inventory accounting violation");
        record_pnl(t, mark_to_market(position, last_price));
    }

    for (int i = 0; i < 2; ++i) {
        if (trackers[i].open) {
            ++report.n_clusters_detected;
            orders[i].active = false;
        }
    }
    const double final_mark = have_price ? mark_to_market(position, last_price) : position.cash;
    record_pnl(stream.horizon, final_mark);
    report.total_pnl = final_mark;
    check_ledger(position, report.trades, cfg.fee_per_trade);
    return report;
}

void write_trades_csv(const std::vector<Trade>& trades, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "time,side,price,size\n";
    char buffer[160];
    for (const Trade& trade : trades) {
        std::snprintf(buffer, sizeof(buffer), "%.9f,%c,%.9f,%.9f\n", trade.time,
                      trade.side == Side::Buy ? 'B' : 'S', trade.price, trade.size);
        out << buffer;
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace lobhawkes
