#pragma once

#include <functional>
#include <string>
#include <vector>

namespace lobhawkes {

// Objective callback: returns f(x) and fills grad (same length as x).
using ObjectiveWithGradient =
    std::function<double(const std::vector<double>&, std::vector<double>&)>;

struct BoxMinimizeOptions {
    std::size_t max_iterations{500};
    double objective_tolerance{1e-8}; // relative objective change
    double gradient_tolerance{1e-5};  // projected-gradient sup norm
    std::size_t history{8};
    std::size_t max_line_search_steps{50};
};

struct BoxMinimizeResult {
    std::vector<double> x;
    double objective{0.0};
    std::size_t iterations{0};
    double projected_gradient_norm{0.0};
    bool converged{false};
    std::string message;
};

// Limited-memory BFGS with box bounds handled by projection: search
// directions are projected at active bounds and the line search walks the
// projected path x(a) = clip(x + a*d). Falls back to projected steepest
// descent when the quasi-Newton direction stalls. Convergence is the
// projected-gradient test or a relative objective-change test.
[[nodiscard]] BoxMinimizeResult minimize_box(const ObjectiveWithGradient& objective,
                                             std::vector<double> x0,
                                             const std::vector<double>& lower,
                                             const std::vector<double>& upper,
                                             const BoxMinimizeOptions& options = {});

} // namespace lobhawkes
