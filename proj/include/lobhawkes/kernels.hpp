#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lobhawkes {

enum class KernelKind { Exponential, PowerLaw };

// Excitation kernel phi(tau): Exponential alpha*exp(-beta*tau) or
// PowerLaw alpha/(tau+epsilon)^beta.
struct KernelSpec {
    KernelKind kind{KernelKind::Exponential};
    double alpha{0.0};   // excitation strength, >= 0
    double beta{1.0};    // decay rate / exponent, > 0
    double epsilon{0.0}; // regularizer seconds, > 0 for PowerLaw

    static KernelSpec exponential(double alpha, double beta) {
        return KernelSpec{KernelKind::Exponential, alpha, beta, 0.0};
    }
    static KernelSpec power_law(double alpha, double beta, double epsilon) {
        return KernelSpec{KernelKind::PowerLaw, alpha, beta, epsilon};
    }
};

void validate_kernel(const KernelSpec& k);

// phi(tau). tau must be >= 0.
[[nodiscard]] inline double evaluate(const KernelSpec& k, double tau) {
    if (!(tau >= 0.0)) {
        throw std::invalid_argument("kernel evaluation requires tau >= 0");
    }
    if (k.kind == KernelKind::Exponential) {
        return k.alpha * std::exp(-k.beta * tau);
    }
    return k.alpha * std::pow(tau + k.epsilon, -k.beta);
}

// Integral of phi over [0, tau]; the expected offspring count within lag
// tau. tau may be +infinity for Exponential kernels and for PowerLaw
// kernels with beta > 1; otherwise an infinite tau throws.
[[nodiscard]] inline double integrate(const KernelSpec& k, double tau) {
    if (!(tau >= 0.0)) {
        throw std::invalid_argument("kernel integration requires tau >= 0");
    }
    if (k.kind == KernelKind::Exponential) {
        if (std::isinf(tau)) return k.alpha / k.beta;
        return -(k.alpha / k.beta) * std::expm1(-k.beta * tau);
    }
    if (std::isinf(tau)) {
        if (k.beta <= 1.0) {
            throw std::invalid_argument("power-law kernel integral diverges for beta <= 1");
        }
        return k.alpha * std::pow(k.epsilon, 1.0 - k.beta) / (k.beta - 1.0);
    }
    // ((tau+eps)^q - eps^q)/q with q = 1-beta, written as
    // eps^q * expm1(q*log1p(tau/eps))/q: the direct difference cancels
    // catastrophically near beta = 1, this form is uniformly accurate and
    // reduces to the logarithmic case exactly at beta == 1.
    const double q = 1.0 - k.beta;
    const double log_ratio = std::log1p(tau / k.epsilon);
    if (q == 0.0) return k.alpha * log_ratio;
    return (k.alpha / q) * std::pow(k.epsilon, q) * std::expm1(q * log_ratio);
}

[[nodiscard]] inline bool integrable(const KernelSpec& k) {
    return k.kind == KernelKind::Exponential || k.beta > 1.0;
}

struct HawkesModel; // defined in model.hpp

// Expected direct-offspring counts: entry (i,j) = integral of phi_ij over
// [0, inf). Throws if any kernel integral diverges.
struct BranchingMatrix {
    std::array<std::array<double, 2>, 2> entries{};
    double spectral_radius{0.0};
    // The per-entry alpha/beta ratios, reported alongside the spectral
    // radius (the authoritative criterion).
    std::array<std::array<double, 2>, 2> alpha_beta_ratio{};
};

[[nodiscard]] BranchingMatrix branching_matrix(const HawkesModel& model);

struct StationarityReport {
    bool stationary{false};      // spectral radius < 1, all kernels integrable
    bool integrable{false};
    double spectral_radius{std::numeric_limits<double>::quiet_NaN()};
    bool per_entry_ratio_ok{false}; // alpha_ij/beta_ij < 1 on every entry
    std::string reason{};           // set when not stationary
};

[[nodiscard]] StationarityReport is_stationary(const HawkesModel& model);

[[nodiscard]] double spectral_radius_2x2(const std::array<std::array<double, 2>, 2>& m);

} // namespace lobhawkes
