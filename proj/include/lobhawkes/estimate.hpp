#pragma once

#include "lobhawkes/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace lobhawkes {

// Free-parameter packing order:
//   [mu_1, mu_2, alpha_11, alpha_12, alpha_21, alpha_22,
//    beta_11, beta_12, beta_21, beta_22,
//    eps_11, eps_12, eps_21, eps_22]   (epsilon block only when free)
struct ParameterBounds {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct FitConfig {
    KernelKind kind{KernelKind::Exponential};
    std::optional<ParameterBounds> bounds{};      // default_bounds when absent
    std::optional<std::vector<double>> initial{}; // explicit start for attempt 0
    std::size_t restarts{5};
    double objective_tolerance{1e-8};
    double gradient_tolerance{1e-5};
    std::size_t max_iterations{500};
    std::uint64_t seed{42};
    // epsilon is a regularizer and weakly identified jointly with beta on
    // short windows, so it is held at fixed_epsilon unless freed.
    bool free_epsilon{false};
    double fixed_epsilon{0.01};
};

struct FitResult {
    HawkesModel model{};
    double neg_log_likelihood{0.0};
    bool converged{false};
    std::size_t iterations{0};
    double gradient_norm{0.0};
    std::vector<double> start_point_used;
    double aic{0.0};
    std::vector<std::string> warnings;
};

[[nodiscard]] std::size_t parameter_count(KernelKind kind, bool free_epsilon);

[[nodiscard]] std::vector<double> pack_parameters(const HawkesModel& model, bool free_epsilon);

[[nodiscard]] HawkesModel unpack_parameters(KernelKind kind, const std::vector<double>& params,
                                            bool free_epsilon, double fixed_epsilon);

// mu_i in [1e-6, 10*n_i/T] (n_i floored at 1 for empty components),
// alpha in [0, 1e3], beta in [1e-3, 1e4] (exponential) or [1.001, 10]
// (power-law, keeping the kernel integrable), epsilon in [1e-6, 1].
[[nodiscard]] ParameterBounds default_bounds(KernelKind kind, const EventStream& stream,
                                             bool free_epsilon = false);

// Attempt 0: mu_i = 0.5*n_i/T, alpha = 0.1, beta = 1 (exponential) or 2
// (power-law), epsilon = 0.01. Later attempts apply a seeded log-uniform
// jitter of one decade each way, clamped into bounds.
[[nodiscard]] std::vector<double> default_start(KernelKind kind, const EventStream& stream,
                                                std::size_t attempt, std::uint64_t seed,
                                                const ParameterBounds& bounds,
                                                bool free_epsilon = false);

// Multi-start bounded minimization of the negative log-likelihood.
// Returns the best restart by objective (ties to the earlier attempt).
[[nodiscard]] FitResult fit(const EventStream& stream, const FitConfig& cfg);

} // namespace lobhawkes
