#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mch/errors.hpp"

namespace mch::pde {

/// Periodic spatial grid of n points on [0, length) carrying u at time t.
struct SimulationState {
  double length = 0.0;
  std::vector<double> u;
  double t = 0.0;

  SimulationState() = default;
  SimulationState(double domain_length, std::vector<double> u0, double t0 = 0.0);

  int n() const { return static_cast<int>(u.size()); }
  double dx() const { return length / n(); }
  double x(int i) const { return length * i / n(); }
};

struct InvariantTriple {
  double E = 0.0;  // -integral[u^4/8 + u ux^2/2]
  double F = 0.0;  // 1/2 integral[u^2 + ux^2]
  double V = 0.0;  // integral[u]
};

/// FFT workspace for one grid size: spectral derivatives and the inverse
/// Helmholtz operator (1 - dxx)^{-1}. One workspace per concurrent stepper.
class SpectralWorkspace {
 public:
  SpectralWorkspace(int n, double length);
  ~SpectralWorkspace();
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

  int n() const;
  void derivative(std::span<const double> in, std::span<double> out);
  void helmholtz(std::span<const double> in, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Serial reference: convolution with the periodized Green kernel
/// cosh(|x| - L/2) / (2 sinh(L/2)) by corrected trapezoid sums. O(n^2).
std::vector<double> helmholtz_reference(std::span<const double> f, double length);

/// du/dt = -d/dx [ u^2/2 + (1 - dxx)^{-1} (u^3 - u^2/2 + ux^2/2) ]
void rhs(const SimulationState& state, SpectralWorkspace& work, std::vector<double>& out);

InvariantTriple invariants(const SimulationState& state, SpectralWorkspace& work);

enum class StepStatus { ok, blow_up };

struct StepResult {
  StepStatus status = StepStatus::ok;
  double max_slope = 0.0;
};

inline constexpr double default_cfl = 0.3;
inline constexpr double default_blow_up_cap = 1e6;

/// Classical RK4 method-of-lines stepper. One stepper owns one state; steps
/// are strictly sequential. A non-finite stage aborts the step without
/// corrupting the state.
class Stepper {
 public:
  explicit Stepper(SimulationState initial, double cfl = default_cfl,
                   double blow_up_cap = default_blow_up_cap);

  /// Largest dt the CFL condition allows for the current state.
  double cfl_dt() const;

  /// Advance by dt; throws domain_error when dt violates the CFL bound.
  StepResult step(double dt);

  const SimulationState& state() const { return state_; }
  SpectralWorkspace& workspace() { return *work_; }
  double blow_up_cap() const { return cap_; }

 private:
  SimulationState state_;
  std::unique_ptr<SpectralWorkspace> work_;
  double cfl_;
  double cap_;
  std::vector<double> k1_, k2_, k3_, k4_, stage_, ux_;
};

/// Tracks the inflection point right of the maximum and the Riccati bound of
/// the steepening argument. threshold = -sqrt(2(M^2 + 2M^3)) with M the
/// running sup norm; tau_bound = -2k/sqrt(2 Mbar),
/// k = ln|(rho0 + sqrt(2 Mbar)) / (rho0 - sqrt(2 Mbar))|, fixed at start.
class BreakingMonitor {
 public:
  BreakingMonitor(const SimulationState& state, SpectralWorkspace& work,
                  double blow_up_cap = default_blow_up_cap);

  void update(const SimulationState& state, SpectralWorkspace& work);

  double xbar() const { return xbar_; }
  double rho() const { return rho_; }
  double rho0() const { return rho0_; }
  double sup_norm() const { return m_run_; }
  double mbar() const { return m_run_ * m_run_ + 2.0 * m_run_ * m_run_ * m_run_; }
  double threshold() const;
  std::optional<double> tau_bound() const { return tau_bound_; }
  bool tracking() const { return tracking_; }
  bool breaking() const { return breaking_; }

 private:
  bool locate(const SimulationState& state, SpectralWorkspace& work, bool near_previous);

  double cap_;
  double xbar_ = 0.0;
  double rho_ = 0.0;
  double rho0_ = 0.0;
  double m_run_ = 0.0;
  std::optional<double> tau_bound_;
  bool tracking_ = true;
  bool breaking_ = false;
};

/// Comparison ODE d(rho)/dt = -rho^2/2 + mbar integrated by adaptive RK4;
/// values at the requested times, -inf once the majorant has blown up.
std::vector<double> riccati_majorant(double rho0, double mbar, std::span<const double> times);

/// Translation speed of u_now relative to u_ref over elapsed time, from the
/// parabolic-refined peak of the circular cross-correlation.
double measure_translation_speed(std::span<const double> u_ref, std::span<const double> u_now,
                                 double length, double elapsed);

}  // namespace mch::pde
