#include "lobhawkes/simulate.hpp"

#include "lobhawkes/rng.hpp"

#include <cmath>

namespace lobhawkes {

namespace {

// Incremental inclusive intensity evaluation along a forward-only clock.
// Exponential kernels decay the per-pair recursion state in O(1); the
// power-law path sums over stored event times directly.
class IntensityClock {
public:
    explicit IntensityClock(const HawkesModel& model) : model_(model) {
        exponential_ = model.kind() == KernelKind::Exponential;
    }

    void advance_to(double t) {
        if (exponential_) {
            const double dt = t - time_;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    state_[i][j] *= std::exp(-model_.kernels[i][j].beta * dt);
                }
            }
        }
        time_ = t;
    }

    void add_event(double t, int component) {
        advance_to(t);
        if (exponential_) {
            state_[0][component] += 1.0;
            state_[1][component] += 1.0;
        } else {
            past_times_[component].push_back(t);
        }
    }

    // lambda_i(time+), inclusive of events at the current time.
    [[nodiscard]] std::array<double, 2> intensities() const {
        std::array<double, 2> lambda{model_.mu[0], model_.mu[1]};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const KernelSpec& k = model_.kernels[i][j];
                if (exponential_) {
                    lambda[i] += k.alpha * state_[i][j];
                } else {
                    for (double tm : past_times_[j]) {
                        lambda[i] += k.alpha * std::pow(time_ - tm + k.epsilon, -k.beta);
                    }
                }
            }
        }
        return lambda;
    }

private:
    const HawkesModel& model_;
    bool exponential_{true};
    double time_{0.0};
    double state_[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    std::vector<double> past_times_[2];
};

} // namespace

SimResult simulate(const HawkesModel& model, const SimConfig& cfg) {
    validate_model(model);
    if (!(cfg.horizon > 0.0)) {
        throw std::invalid_argument("simulation horizon must be > 0");
    }
    if (cfg.max_events == 0) {
        throw std::invalid_argument("max_events must be positive");
    }
    const StationarityReport stationarity = is_stationary(model);
    if (!stationarity.stationary && !cfg.allow_nonstationary) {
        throw std::invalid_argument("model is not stationary (" + stationarity.reason +
                                    "); pass allow_nonstationary to simulate anyway");
    }

    Rng rng(cfg.seed);
    IntensityClock clock(model);
    SimResult result;
    result.stream.horizon = cfg.horizon;

    double t = 0.0;
    while (true) {
        if (result.stream.events.size() >= cfg.max_events) {
            result.truncated = true;
            break;
        }
        const std::array<double, 2> bound_lambda = clock.intensities();
        const double bound = bound_lambda[0] + bound_lambda[1];
        if (!(bound > 0.0) || !std::isfinite(bound)) {
            throw std::runtime_error("non-finite intensity bound during simulation");
        }
        const double candidate = t + rng.exponential(bound);
        if (candidate > cfg.horizon) break;

        clock.advance_to(candidate);
        const std::array<double, 2> lambda = clock.intensities();
        const double total = lambda[0] + lambda[1];
        t = candidate;
        if (rng.uniform() * bound < total) {
            const int component = rng.uniform() * total < lambda[0] ? 0 : 1;
            clock.add_event(candidate, component);
            Event event;
            event.time = candidate;
            event.side = side_from_index(component);
            result.stream.events.push_back(event);
        }
        // Rejection keeps the advanced clock: the bound re-tightens for free.
    }

    validate_stream(result.stream);
    return result;
}

std::array<double, 2> expected_rates(const HawkesModel& model) {
    const StationarityReport report = is_stationary(model);
    if (!report.stationary) {
        throw std::invalid_argument("expected_rates requires a stationary model (" +
                                    report.reason + ")");
    }
    const BranchingMatrix branching = branching_matrix(model);
    const auto& K = branching.entries;
    const double det = (1.0 - K[0][0]) * (1.0 - K[1][1]) - K[0][1] * K[1][0];
    if (!(std::abs(det) > 1e-12)) {
        throw std::invalid_argument("I - K is singular");
    }
    return {((1.0 - K[1][1]) * model.mu[0] + K[0][1] * model.mu[1]) / det,
            (K[1][0] * model.mu[0] + (1.0 - K[0][0]) * model.mu[1]) / det};
}

} // namespace lobhawkes
