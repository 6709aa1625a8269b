#pragma once

#include <span>

#include "mch/parallel.hpp"

// Pointwise grid kernels of the time stepper. Each kernel has a serial
// reference twin used by the tests and the benchmark; outputs are bitwise
// identical between the two paths.

namespace mch::kernels {

/// Nonlocal source of the conservation-law form: q = u^3 - u^2/2 + ux^2/2.
/// The sign of the u^2 term is fixed by requiring traveling waves of the
/// quartic machinery to satisfy u_t = -c u_x exactly.
void nonlinear_source(std::span<const double> u, std::span<const double> ux,
                      std::span<double> q);
void nonlinear_source_serial(std::span<const double> u, std::span<const double> ux,
                             std::span<double> q);

/// out = u^2/2 + p
void flux_combine(std::span<const double> u, std::span<const double> p, std::span<double> out);
void flux_combine_serial(std::span<const double> u, std::span<const double> p,
                         std::span<double> out);

/// out = x + alpha * y
void add_scaled(std::span<const double> x, double alpha, std::span<const double> y,
                std::span<double> out);
void add_scaled_serial(std::span<const double> x, double alpha, std::span<const double> y,
                       std::span<double> out);

/// out = u + dt/6 (k1 + 2 k2 + 2 k3 + k4)
void rk4_combine(std::span<const double> u, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4, double dt, std::span<double> out);
void rk4_combine_serial(std::span<const double> u, std::span<const double> k1,
                        std::span<const double> k2, std::span<const double> k3,
                        std::span<const double> k4, double dt, std::span<double> out);

double max_abs(std::span<const double> v);
double max_abs_serial(std::span<const double> v);

}  // namespace mch::kernels
