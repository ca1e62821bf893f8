#include "lobhawkes/kernels.hpp"

#include "lobhawkes/model.hpp"

#include <algorithm>

namespace lobhawkes {

void validate_kernel(const KernelSpec& k) {
    if (!(k.alpha >= 0.0) || !std::isfinite(k.alpha)) {
        throw std::invalid_argument("kernel alpha must be >= 0 and finite");
    }
    if (!(k.beta > 0.0) || !std::isfinite(k.beta)) {
        throw std::invalid_argument("kernel beta must be > 0 and finite");
    }
    if (k.kind == KernelKind::PowerLaw && (!(k.epsilon > 0.0) || !std::isfinite(k.epsilon))) {
        throw std::invalid_argument("power-law kernel epsilon must be > 0 and finite");
    }
}

double spectral_radius_2x2(const std::array<std::array<double, 2>, 2>& m) {
    // Non-negative entries: the discriminant (a-d)^2 + 4bc is never negative.
    const double trace = m[0][0] + m[1][1];
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double disc = std::sqrt(std::max(0.0, trace * trace - 4.0 * det));
    return std::max(std::abs((trace + disc) / 2.0), std::abs((trace - disc) / 2.0));
}

BranchingMatrix branching_matrix(const HawkesModel& model) {
    BranchingMatrix out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const KernelSpec& k = model.kernels[i][j];
            if (!integrable(k)) {
                throw std::invalid_argument("kernel (" + std::to_string(i) + "," +
                                            std::to_string(j) +
                                            ") has a divergent integral (beta <= 1)");
            }
            out.entries[i][j] = integrate(k, std::numeric_limits<double>::infinity());
            out.alpha_beta_ratio[i][j] = k.alpha / k.beta;
        }
    }
    out.spectral_radius = spectral_radius_2x2(out.entries);
    return out;
}

StationarityReport is_stationary(const HawkesModel& model) {
    StationarityReport report;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (!integrable(model.kernels[i][j])) {
                report.reason = "divergent kernel integral";
                return report;
            }
        }
    }
    report.integrable = true;
    const BranchingMatrix branching = branching_matrix(model);
    report.spectral_radius = branching.spectral_radius;
    report.per_entry_ratio_ok = true;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            if (!(branching.alpha_beta_ratio[i][j] < 1.0)) report.per_entry_ratio_ok = false;
        }
    }
    report.stationary = branching.spectral_radius < 1.0;
    if (!report.stationary) {
        report.reason = "spectral radius " + std::to_string(branching.spectral_radius) + " >= 1";
    }
    return report;
}

} // namespace lobhawkes
