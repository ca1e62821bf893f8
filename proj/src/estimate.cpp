#include "lobhawkes/estimate.hpp"

#include "lobhawkes/optim.hpp"
#include "lobhawkes/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lobhawkes {

namespace {

constexpr std::size_t kBaseParameters = 10;

[[nodiscard]] double clamp_into(double value, double lo, double hi) {
    return std::min(std::max(value, lo), hi);
}

} // namespace

std::size_t parameter_count(KernelKind kind, bool free_epsilon) {
    return kBaseParameters + ((kind == KernelKind::PowerLaw && free_epsilon) ? 4 : 0);
}

std::vector<double> pack_parameters(const HawkesModel& model, bool free_epsilon) {
    std::vector<double> params;
    params.reserve(parameter_count(model.kind(), free_epsilon));
    params.push_back(model.mu[0]);
    params.push_back(model.mu[1]);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) params.push_back(model.kernels[i][j].alpha);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) params.push_back(model.kernels[i][j].beta);
    if (model.kind() == KernelKind::PowerLaw && free_epsilon) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) params.push_back(model.kernels[i][j].epsilon);
    }
    return params;
}

HawkesModel unpack_parameters(KernelKind kind, const std::vector<double>& params,
                              bool free_epsilon, double fixed_epsilon) {
    if (params.size() != parameter_count(kind, free_epsilon))
        throw std::invalid_argument("parameter vector has wrong length");
    HawkesModel model;
    model.mu = {params[0], params[1]};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const std::size_t flat = static_cast<std::size_t>(2 * i + j);
            KernelSpec& kernel = model.kernels[i][j];
            kernel.kind = kind;
            kernel.alpha = params[2 + flat];
            kernel.beta = params[6 + flat];
            if (kind == KernelKind::PowerLaw)
                kernel.epsilon = free_epsilon ? params[10 + flat] : fixed_epsilon;
        }
    }
    return model;
}

ParameterBounds default_bounds(KernelKind kind, const EventStream& stream, bool free_epsilon) {
    if (!(stream.horizon > 0.0)) throw std::invalid_argument("stream horizon must be positive");
    ParameterBounds bounds;
    const std::size_t n = parameter_count(kind, free_epsilon);
    bounds.lower.reserve(n);
    bounds.upper.reserve(n);
    for (int i = 0; i < 2; ++i) {
        const double count = std::max<double>(
            static_cast<double>(stream.count(side_from_index(i))), 1.0);
        bounds.lower.push_back(1e-6);
        bounds.upper.push_back(10.0 * count / stream.horizon);
    }
    for (int k = 0; k < 4; ++k) {
        bounds.lower.push_back(0.0);
        bounds.upper.push_back(1e3);
    }
    for (int k = 0; k < 4; ++k) {
        bounds.lower.push_back(kind == KernelKind::Exponential ? 1e-3 : 1.001);
        bounds.upper.push_back(kind == KernelKind::Exponential ? 1e4 : 10.0);
    }
    if (kind == KernelKind::PowerLaw && free_epsilon) {
        for (int k = 0; k < 4; ++k) {
            bounds.lower.push_back(1e-6);
            bounds.upper.push_back(1.0);
        }
    }
    return bounds;
}

std::vector<double> default_start(KernelKind kind, const EventStream& stream, std::size_t attempt,
                                  std::uint64_t seed, const ParameterBounds& bounds,
                                  bool free_epsilon) {
    const std::size_t n = parameter_count(kind, free_epsilon);
    if (bounds.lower.size() != n || bounds.upper.size() != n)
        throw std::invalid_argument("bounds do not match parameter count");
    std::vector<double> start;
    start.reserve(n);
    for (int i = 0; i < 2; ++i) {
        const double count = static_cast<double>(stream.count(side_from_index(i)));
        start.push_back(0.5 * count / stream.horizon);
    }
    for (int k = 0; k < 4; ++k) start.push_back(0.1);
    for (int k = 0; k < 4; ++k) start.push_back(kind == KernelKind::Exponential ? 1.0 : 2.0);
    if (kind == KernelKind::PowerLaw && free_epsilon)
        for (int k = 0; k < 4; ++k) start.push_back(0.01);

    if (attempt > 0) {
        // One decade of multiplicative jitter in each direction, one stream
        // per attempt so restarts are reproducible individually.
        Rng rng = Rng::split(seed, attempt);
        const double decade = std::log(10.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double factor = std::exp(rng.uniform(-decade, decade));
            const double base = start[k] > 0.0 ? start[k] : bounds.lower[k];
            start[k] = base > 0.0 ? base * factor : bounds.lower[k];
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        start[k] = clamp_into(start[k], bounds.lower[k], bounds.upper[k]);
    return start;
}

FitResult fit(const EventStream& stream, const FitConfig& cfg) {
    validate_stream(stream);
    if (stream.events.empty()) throw std::invalid_argument("cannot fit an empty event stream");
    if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (cfg.kind == KernelKind::PowerLaw && !cfg.free_epsilon &&
        !(cfg.fixed_epsilon > 0.0 && std::isfinite(cfg.fixed_epsilon)))
        throw std::invalid_argument("fixed_epsilon must be positive and finite");

    const std::size_t n = parameter_count(cfg.kind, cfg.free_epsilon);
    const ParameterBounds bounds =
        cfg.bounds ? *cfg.bounds : default_bounds(cfg.kind, stream, cfg.free_epsilon);
    if (bounds.lower.size() != n || bounds.upper.size() != n)
        throw std::invalid_argument("bounds do not match parameter count");
    if (cfg.initial && cfg.initial->size() != n)
        throw std::invalid_argument("initial point does not match parameter count");

    auto objective = [&](const std::vector<double>& x, std::vector<double>& grad) -> double {
        const HawkesModel model = unpack_parameters(cfg.kind, x, cfg.free_epsilon, cfg.fixed_epsilon);
        LogLikelihoodGradient g;
        try {
            g = log_likelihood_gradient(model, stream);
        } catch (const std::exception&) {
            // Overflow or a zero-intensity event inside the line search:
            // report +inf so the search backtracks instead of aborting.
            std::fill(grad.begin(), grad.end(), 0.0);
            return std::numeric_limits<double>::infinity();
        }
        grad.assign(n, 0.0);
        grad[0] = -g.d_mu[0];
        grad[1] = -g.d_mu[1];
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const std::size_t flat = static_cast<std::size_t>(2 * i + j);
                grad[2 + flat] = -g.d_alpha[i][j];
                grad[6 + flat] = -g.d_beta[i][j];
                if (cfg.kind == KernelKind::PowerLaw && cfg.free_epsilon)
                    grad[10 + flat] = -g.d_epsilon[i][j];
            }
        }
        return -g.value;
    };

    BoxMinimizeOptions options;
    options.max_iterations = cfg.max_iterations;
    options.objective_tolerance = cfg.objective_tolerance;
    options.gradient_tolerance = cfg.gradient_tolerance;

    std::optional<BoxMinimizeResult> best;
    std::vector<double> best_start;
    for (std::size_t attempt = 0; attempt < cfg.restarts; ++attempt) {
        std::vector<double> start =
            (attempt == 0 && cfg.initial)
                ? *cfg.initial
                : default_start(cfg.kind, stream, attempt, cfg.seed, bounds, cfg.free_epsilon);
        BoxMinimizeResult result =
            minimize_box(objective, start, bounds.lower, bounds.upper, options);
        if (!std::isfinite(result.objective)) continue;
        if (!best || result.objective < best->objective) {
            best = std::move(result);
            best_start = std::move(start);
        }
    }
    if (!best)
        throw std::runtime_error("optimization failed: objective non-finite at every start point");

    FitResult out;
    out.model = unpack_parameters(cfg.kind, best->x, cfg.free_epsilon, cfg.fixed_epsilon);
    out.neg_log_likelihood = best->objective;
    out.converged = best->converged;
    out.iterations = best->iterations;
    out.gradient_norm = best->projected_gradient_norm;
    out.start_point_used = best_start;
    out.aic = 2.0 * static_cast<double>(n) + 2.0 * best->objective;
    for (int i = 0; i < 2; ++i) {
        if (stream.count(side_from_index(i)) == 0)
            out.warnings.push_back(std::string("component ") + (i == 0 ? "buy" : "sell") +
                                   " has zero events; its parameters are weakly identified");
    }
    return out;
}

} // namespace lobhawkes
