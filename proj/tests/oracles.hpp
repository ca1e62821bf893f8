#pragma once

#include "lobhawkes/model.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace lobhawkes::testing {

// Raw-formula kernel evaluation, independent of kernels.cpp.
[[nodiscard]] double oracle_kernel(const KernelSpec& kernel, double tau);

// Brute-force double loop over all (component, event) pairs.
[[nodiscard]] std::array<double, 2> oracle_intensity(const HawkesModel& model,
                                                     const EventStream& stream, double t,
                                                     bool inclusive);

// Adaptive Simpson integration of f over [a, b].
[[nodiscard]] double quadrature(const std::function<double(double)>& f, double a, double b,
                                double tol);

// Compensator by quadrature of the brute-force intensity with
// event-time breakpoints.
[[nodiscard]] double oracle_compensator(const HawkesModel& model, const EventStream& stream,
                                        int component, double t, double tol);

// Central finite differences of log_likelihood in the packed parameter
// layout (see estimate.hpp); steps are relative and assume the point is
// interior.
[[nodiscard]] std::vector<double> fd_gradient(const HawkesModel& model, const EventStream& stream,
                                              bool free_epsilon);

// Uniformly scattered two-sided stream with prices and sizes.
[[nodiscard]] EventStream random_stream(std::uint64_t seed, std::size_t n, double horizon);

[[nodiscard]] HawkesModel exponential_model(std::array<double, 2> mu, double alpha, double beta);
[[nodiscard]] HawkesModel power_law_model(std::array<double, 2> mu, double alpha, double beta,
                                          double epsilon);

} // namespace lobhawkes::testing
