#include "lobhawkes/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace lobhawkes {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kMinStep = 1e-20;

void clip_to_box(std::vector<double>& x, const std::vector<double>& lower,
                 const std::vector<double>& upper) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], lower[i], upper[i]);
    }
}

// Gradient with components pointing out of the box zeroed at active bounds.
std::vector<double> projected_gradient(const std::vector<double>& x,
                                       const std::vector<double>& grad,
                                       const std::vector<double>& lower,
                                       const std::vector<double>& upper) {
    std::vector<double> pg(grad);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if ((x[i] <= lower[i] && grad[i] > 0.0) || (x[i] >= upper[i] && grad[i] < 0.0)) {
            pg[i] = 0.0;
        }
    }
    return pg;
}

double sup_norm(const std::vector<double>& v) {
    double norm = 0.0;
    for (double value : v) norm = std::max(norm, std::abs(value));
    return norm;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

struct CurvaturePair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

// Standard two-loop recursion for -H*grad.
std::vector<double> lbfgs_direction(const std::deque<CurvaturePair>& memory,
                                    const std::vector<double>& grad) {
    std::vector<double> q(grad);
    std::vector<double> coeffs(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
        const CurvaturePair& pair = memory[m];
        coeffs[m] = pair.rho * dot(pair.s, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= coeffs[m] * pair.y[i];
    }
    if (!memory.empty()) {
        const CurvaturePair& last = memory.back();
        const double scale = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& value : q) value *= scale;
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
        const CurvaturePair& pair = memory[m];
        const double beta = pair.rho * dot(pair.y, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += (coeffs[m] - beta) * pair.s[i];
    }
    for (double& value : q) value = -value;
    return q;
}

} // namespace

BoxMinimizeResult minimize_box(const ObjectiveWithGradient& objective, std::vector<double> x0,
                               const std::vector<double>& lower,
                               const std::vector<double>& upper,
                               const BoxMinimizeOptions& options) {
    const std::size_t n = x0.size();
    if (lower.size() != n || upper.size() != n) {
        throw std::invalid_argument("bounds dimension mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(lower[i] < upper[i])) {
            throw std::invalid_argument("each lower bound must be below its upper bound");
        }
    }

    clip_to_box(x0, lower, upper);
    std::vector<double> x = std::move(x0);
    std::vector<double> grad(n, 0.0);
    double fx = objective(x, grad);

    BoxMinimizeResult result;
    if (!std::isfinite(fx)) {
        result.x = x;
        result.objective = fx;
        result.message = "objective non-finite at the start point";
        return result;
    }

    std::deque<CurvaturePair> memory;
    std::vector<double> candidate(n);
    std::vector<double> candidate_grad(n);

    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        result.iterations = iter;
        const std::vector<double> pg = projected_gradient(x, grad, lower, upper);
        const double pg_norm = sup_norm(pg);
        result.projected_gradient_norm = pg_norm;
        if (pg_norm < options.gradient_tolerance) {
            result.converged = true;
            result.message = "projected gradient below tolerance";
            break;
        }

        std::vector<double> direction = lbfgs_direction(memory, grad);
        // Block coordinates that push out of the box at an active bound.
        for (std::size_t i = 0; i < n; ++i) {
            if ((x[i] <= lower[i] && direction[i] < 0.0) ||
                (x[i] >= upper[i] && direction[i] > 0.0)) {
                direction[i] = 0.0;
            }
        }
        if (!(dot(direction, grad) < 0.0)) {
            memory.clear();
            direction = pg;
            for (double& value : direction) value = -value;
        }

        // Backtracking Armijo search along the projected path.
        double step = memory.empty() ? std::min(1.0, 1.0 / std::max(1.0, sup_norm(direction)))
                                     : 1.0;
        bool accepted = false;
        double f_candidate = fx;
        for (std::size_t ls = 0; ls < options.max_line_search_steps; ++ls) {
            for (std::size_t i = 0; i < n; ++i) {
                candidate[i] = std::clamp(x[i] + step * direction[i], lower[i], upper[i]);
            }
            f_candidate = objective(candidate, candidate_grad);
            if (std::isfinite(f_candidate)) {
                double displacement_slope = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    displacement_slope += grad[i] * (candidate[i] - x[i]);
                }
                if (f_candidate <= fx + kArmijoSlope * displacement_slope &&
                    displacement_slope < 0.0) {
                    accepted = true;
                    break;
                }
                // A flat projected displacement means every direction is blocked.
                if (displacement_slope == 0.0) break;
            }
            step *= 0.5;
            if (step < kMinStep) break;
        }

        if (!accepted) {
            if (!memory.empty()) {
                memory.clear(); // retry from steepest descent next iteration
                continue;
            }
            result.message = "line search could not make progress";
            break;
        }

        CurvaturePair pair;
        pair.s.resize(n);
        pair.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            pair.s[i] = candidate[i] - x[i];
            pair.y[i] = candidate_grad[i] - grad[i];
        }
        const double sy = dot(pair.s, pair.y);
        const double s_norm = std::sqrt(dot(pair.s, pair.s));
        const double y_norm = std::sqrt(dot(pair.y, pair.y));
        if (sy > 1e-10 * s_norm * y_norm) {
            pair.rho = 1.0 / sy;
            memory.push_back(std::move(pair));
            if (memory.size() > options.history) memory.pop_front();
        }

        const double previous = fx;
        x = candidate;
        grad = candidate_grad;
        fx = f_candidate;

        if (std::abs(previous - fx) <= options.objective_tolerance * std::max(1.0, std::abs(fx))) {
            const std::vector<double> pg_new = projected_gradient(x, grad, lower, upper);
            result.projected_gradient_norm = sup_norm(pg_new);
            result.iterations = iter + 1;
            result.converged = true;
            result.message = "objective change below tolerance";
            break;
        }
    }

    if (result.message.empty()) {
        result.message = "iteration limit reached";
        const std::vector<double> pg_final = projected_gradient(x, grad, lower, upper);
        result.projected_gradient_norm = sup_norm(pg_final);
    }
    result.x = std::move(x);
    result.objective = fx;
    return result;
}

} // namespace lobhawkes
