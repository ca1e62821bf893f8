#include "lobhawkes/model.hpp"

#include <algorithm>
#include <cmath>

namespace lobhawkes {

namespace {

// d/dq [((tau+eps)^q - eps^q)/q], the beta-derivative core of the
// power-law integral: eps^q * (log(eps)*expm1(x)/q + L^2*g(x)) with
// L = log1p(tau/eps), x = q*L, g(x) = (x*e^x - expm1(x))/x^2. Uniformly
// accurate in q; g uses its series where the direct form cancels.
double power_integral_dq(double tau, double eps, double q) {
    const double log_eps = std::log(eps);
    const double L = std::log1p(tau / eps);
    const double x = q * L;
    const double g = std::abs(x) < 1e-3
                         ? 0.5 + x * (1.0 / 3.0 + x * (0.125 + x * (1.0 / 30.0)))
                         : (x * std::exp(x) - std::expm1(x)) / (x * x);
    const double h = q == 0.0 ? L : std::expm1(x) / q;
    return std::pow(eps, q) * (log_eps * h + L * L * g);
}

[[noreturn]] void throw_nonfinite(std::size_t event_index) {
    throw std::runtime_error("non-finite intensity at event index " +
                             std::to_string(event_index));
}

// Exponential-kernel likelihood via the per-pair recursion:
// R[i][j] = sum over past type-j events of exp(-beta_ij*(t - t_m)),
// U[i][j] = sum of (t - t_m)*exp(-beta_ij*(t - t_m)) for the beta partials.
// Events sharing a timestamp are processed as one group so an event never
// excites another event at the same instant.
LogLikelihoodGradient exponential_likelihood(const HawkesModel& model, const EventStream& stream,
                                             bool with_gradient) {
    LogLikelihoodGradient out;
    double alpha[2][2];
    double beta[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            alpha[i][j] = model.kernels[i][j].alpha;
            beta[i][j] = model.kernels[i][j].beta;
        }
    }

    double R[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double U[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double events_term = 0.0;
    const std::vector<Event>& events = stream.events;
    double prev_time = events.empty() ? 0.0 : events.front().time;

    std::size_t k = 0;
    while (k < events.size()) {
        const double t = events[k].time;
        const double dt = t - prev_time;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double decay = std::exp(-beta[i][j] * dt);
                if (with_gradient) U[i][j] = decay * (U[i][j] + dt * R[i][j]);
                R[i][j] *= decay;
            }
        }

        std::size_t group_end = k;
        while (group_end < events.size() && events[group_end].time == t) ++group_end;

        for (std::size_t m = k; m < group_end; ++m) {
            const int i = side_index(events[m].side);
            const double lambda = model.mu[i] + alpha[i][0] * R[i][0] + alpha[i][1] * R[i][1];
            const double log_lambda = std::log(lambda);
            if (!std::isfinite(log_lambda)) throw_nonfinite(m);
            events_term += log_lambda;
            if (with_gradient) {
                const double inv = 1.0 / lambda;
                out.d_mu[i] += inv;
                for (int j = 0; j < 2; ++j) {
                    out.d_alpha[i][j] += R[i][j] * inv;
                    out.d_beta[i][j] -= alpha[i][j] * U[i][j] * inv;
                }
            }
        }
        for (std::size_t m = k; m < group_end; ++m) {
            const int j = side_index(events[m].side);
            R[0][j] += 1.0;
            R[1][j] += 1.0;
        }
        prev_time = t;
        k = group_end;
    }

    // Compensator: Lambda_i = mu_i*T + sum_j alpha_ij/beta_ij * (1 - e^{-beta_ij*(T-t_m)}).
    const double T = stream.horizon;
    double comp = 0.0;
    for (const Event& e : events) {
        const int j = side_index(e.side);
        const double tau = T - e.time;
        for (int i = 0; i < 2; ++i) {
            const double b = beta[i][j];
            const double one_minus_decay = -std::expm1(-b * tau);
            comp += alpha[i][j] / b * one_minus_decay;
            if (with_gradient) {
                out.d_alpha[i][j] -= one_minus_decay / b;
                out.d_beta[i][j] -=
                    alpha[i][j] * (tau * std::exp(-b * tau) / b - one_minus_decay / (b * b));
            }
        }
    }
    comp += (model.mu[0] + model.mu[1]) * T;
    if (with_gradient) {
        out.d_mu[0] -= T;
        out.d_mu[1] -= T;
    }

    out.value = events_term - comp;
    if (!std::isfinite(out.value)) {
        throw std::runtime_error("non-finite log-likelihood");
    }
    return out;
}

// Power-law likelihood by direct summation over event pairs.
LogLikelihoodGradient power_law_likelihood(const HawkesModel& model, const EventStream& stream,
                                           bool with_gradient) {
    LogLikelihoodGradient out;
    double alpha[2][2];
    double beta[2][2];
    double eps[2][2];
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            alpha[i][j] = model.kernels[i][j].alpha;
            beta[i][j] = model.kernels[i][j].beta;
            eps[i][j] = model.kernels[i][j].epsilon;
        }
    }

    const std::vector<Event>& events = stream.events;
    double events_term = 0.0;
    for (std::size_t k = 0; k < events.size(); ++k) {
        const int i = side_index(events[k].side);
        const double t = events[k].time;
        double sum_w[2] = {0.0, 0.0};
        double sum_logw[2] = {0.0, 0.0};
        double sum_w_over_A[2] = {0.0, 0.0};
        for (std::size_t m = k; m-- > 0;) {
            if (events[m].time == t) continue; // cross-side tie: not a past event
            const int j = side_index(events[m].side);
            const double A = t - events[m].time + eps[i][j];
            const double w = std::pow(A, -beta[i][j]);
            sum_w[j] += w;
            if (with_gradient) {
                sum_logw[j] += std::log(A) * w;
                sum_w_over_A[j] += w / A;
            }
        }
        const double lambda = model.mu[i] + alpha[i][0] * sum_w[0] + alpha[i][1] * sum_w[1];
        const double log_lambda = std::log(lambda);
        if (!std::isfinite(log_lambda)) throw_nonfinite(k);
        events_term += log_lambda;
        if (with_gradient) {
            const double inv = 1.0 / lambda;
            out.d_mu[i] += inv;
            for (int j = 0; j < 2; ++j) {
                out.d_alpha[i][j] += sum_w[j] * inv;
                out.d_beta[i][j] -= alpha[i][j] * sum_logw[j] * inv;
                out.d_epsilon[i][j] -= alpha[i][j] * beta[i][j] * sum_w_over_A[j] * inv;
            }
        }
    }

    const double T = stream.horizon;
    double comp = (model.mu[0] + model.mu[1]) * T;
    for (const Event& e : events) {
        const int j = side_index(e.side);
        const double tau = T - e.time;
        for (int i = 0; i < 2; ++i) {
            const double unit_integral =
                integrate(KernelSpec::power_law(1.0, beta[i][j], eps[i][j]), tau);
            comp += alpha[i][j] * unit_integral;
            if (with_gradient) {
                const double A = tau + eps[i][j];
                const double B = eps[i][j];
                const double q = 1.0 - beta[i][j];
                out.d_alpha[i][j] -= unit_integral;
                out.d_beta[i][j] += alpha[i][j] * power_integral_dq(tau, eps[i][j], q);
                out.d_epsilon[i][j] -=
                    alpha[i][j] * (std::pow(A, -beta[i][j]) - std::pow(B, -beta[i][j]));
            }
        }
    }
    if (with_gradient) {
        out.d_mu[0] -= T;
        out.d_mu[1] -= T;
    }

    out.value = events_term - comp;
    if (!std::isfinite(out.value)) {
        throw std::runtime_error("non-finite log-likelihood");
    }
    return out;
}

} // namespace

void validate_model(const HawkesModel& model) {
    for (int i = 0; i < 2; ++i) {
        if (!(model.mu[i] > 0.0) || !std::isfinite(model.mu[i])) {
            throw std::invalid_argument("base intensity mu must be > 0 and finite");
        }
    }
    const KernelKind kind = model.kernels[0][0].kind;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            validate_kernel(model.kernels[i][j]);
            if (model.kernels[i][j].kind != kind) {
                throw std::invalid_argument("all four kernels must share one kind");
            }
        }
    }
}

std::array<double, 2> intensity_at(const HawkesModel& model, const EventStream& stream, double t,
                                   bool inclusive) {
    if (!(t >= 0.0) || t > stream.horizon) {
        throw std::invalid_argument("intensity query time outside [0, horizon]");
    }
    std::array<double, 2> lambda{model.mu[0], model.mu[1]};
    for (const Event& e : stream.events) {
        if (e.time > t) break;
        if (e.time == t && !inclusive) continue;
        const int j = side_index(e.side);
        const double tau = t - e.time;
        lambda[0] += evaluate(model.kernels[0][j], tau);
        lambda[1] += evaluate(model.kernels[1][j], tau);
    }
    return lambda;
}

std::vector<IntensitySample> intensity_path(const HawkesModel& model, const EventStream& stream,
                                            double grid_step) {
    if (!(grid_step > 0.0)) {
        throw std::invalid_argument("grid_step must be > 0");
    }
    std::vector<double> event_times;
    event_times.reserve(stream.events.size());
    for (const Event& e : stream.events) {
        if (event_times.empty() || event_times.back() != e.time) event_times.push_back(e.time);
    }

    std::vector<IntensitySample> samples;
    auto append = [&](double t, bool inclusive) {
        const std::array<double, 2> lambda = intensity_at(model, stream, t, inclusive);
        samples.push_back(IntensitySample{t, lambda[0], lambda[1]});
    };

    std::size_t next_event = 0;
    auto flush_events_before = [&](double t) {
        while (next_event < event_times.size() && event_times[next_event] < t) {
            append(event_times[next_event], false);
            append(event_times[next_event], true);
            ++next_event;
        }
    };

    for (std::size_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * grid_step;
        if (t >= stream.horizon) break;
        flush_events_before(t);
        if (next_event < event_times.size() && event_times[next_event] == t) {
            append(t, false);
            append(t, true);
            ++next_event;
        } else {
            append(t, true);
        }
    }
    flush_events_before(stream.horizon);
    if (next_event < event_times.size() && event_times[next_event] == stream.horizon) {
        append(stream.horizon, false);
        append(stream.horizon, true);
    } else {
        append(stream.horizon, true);
    }
    return samples;
}

double compensator_at(const HawkesModel& model, const EventStream& stream, int component,
                      double t) {
    if (component < 0 || component > 1) {
        throw std::invalid_argument("component must be 0 (Buy) or 1 (Sell)");
    }
    if (!(t >= 0.0) || t > stream.horizon) {
        throw std::invalid_argument("compensator time outside [0, horizon]");
    }
    double total = model.mu[component] * t;
    for (const Event& e : stream.events) {
        if (e.time >= t) break;
        total += integrate(model.kernels[component][side_index(e.side)], t - e.time);
    }
    return total;
}

double compensator(const HawkesModel& model, const EventStream& stream, int component) {
    return compensator_at(model, stream, component, stream.horizon);
}

double log_likelihood(const HawkesModel& model, const EventStream& stream) {
    if (model.kind() == KernelKind::Exponential) {
        return exponential_likelihood(model, stream, false).value;
    }
    return power_law_likelihood(model, stream, false).value;
}

LogLikelihoodGradient log_likelihood_gradient(const HawkesModel& model,
                                              const EventStream& stream) {
    if (model.kind() == KernelKind::Exponential) {
        return exponential_likelihood(model, stream, true);
    }
    return power_law_likelihood(model, stream, true);
}

} // namespace lobhawkes
