#pragma once

#include "lobhawkes/events.hpp"
#include "lobhawkes/kernels.hpp"

#include <array>
#include <vector>

namespace lobhawkes {

// Bivariate Hawkes model. Component 0 = Buy, 1 = Sell. kernels[i][j] is
// the influence of component j's events on component i's intensity. All
// four kernels share one kind.
struct HawkesModel {
    std::array<double, 2> mu{0.0, 0.0};
    std::array<std::array<KernelSpec, 2>, 2> kernels{};

    [[nodiscard]] KernelKind kind() const { return kernels[0][0].kind; }
};

void validate_model(const HawkesModel& model);

struct IntensitySample {
    double time{0.0};
    double lambda_buy{0.0};
    double lambda_sell{0.0};
};

// lambda_i(t) = mu_i + sum over events before t (or at t when inclusive)
// of phi_{i,side}. The exclusive form is the left limit used by the
// likelihood at event times. Requires 0 <= t <= horizon.
[[nodiscard]] std::array<double, 2> intensity_at(const HawkesModel& model,
                                                 const EventStream& stream, double t,
                                                 bool inclusive);

// Samples on the uniform grid {0, step, 2*step, ..., horizon} plus, at
// each event time, the left limit followed by the inclusive value, so an
// exported series shows the jumps.
[[nodiscard]] std::vector<IntensitySample> intensity_path(const HawkesModel& model,
                                                          const EventStream& stream,
                                                          double grid_step);

// Lambda_i(T) = mu_i*T + sum_j sum_{t_k} integral of phi_ij over
// [0, T - t_k], via the closed-form kernel integrals.
[[nodiscard]] double compensator(const HawkesModel& model, const EventStream& stream,
                                 int component);

// Compensator evaluated at an arbitrary upper limit t <= horizon.
[[nodiscard]] double compensator_at(const HawkesModel& model, const EventStream& stream,
                                    int component, double t);

// Standard point-process log-likelihood: sum of log left-limit
// intensities at events minus the compensators.
[[nodiscard]] double log_likelihood(const HawkesModel& model, const EventStream& stream);

// Partial derivatives of log_likelihood with respect to every model
// parameter. d_epsilon is only meaningful for power-law models.
struct LogLikelihoodGradient {
    double value{0.0};
    std::array<double, 2> d_mu{};
    std::array<std::array<double, 2>, 2> d_alpha{};
    std::array<std::array<double, 2>, 2> d_beta{};
    std::array<std::array<double, 2>, 2> d_epsilon{};
};

[[nodiscard]] LogLikelihoodGradient log_likelihood_gradient(const HawkesModel& model,
                                                            const EventStream& stream);

} // namespace lobhawkes
