#include "mch/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>

#include "mch/kernels.hpp"
#include "mch/parallel.hpp"

namespace mch::kernels {

namespace {
template <class Loop>
void map_kernel(std::ptrdiff_t n, Loop&& loop, bool parallel) {
  if (parallel)
    par::parallel_for(n, loop);
  else
    par::serial_for(n, loop);
}
}  // namespace

void nonlinear_source(std::span<const double> u, std::span<const double> ux,
                      std::span<double> q) {
  map_kernel(static_cast<std::ptrdiff_t>(u.size()),
             [&](std::ptrdiff_t i) {
               const auto j = static_cast<std::size_t>(i);
               q[j] = u[j] * u[j] * u[j] - 0.5 * u[j] * u[j] + 0.5 * ux[j] * ux[j];
             },
             true);
}
void nonlinear_source_serial(std::span<const double> u, std::span<const double> ux,
                             std::span<double> q) {
  map_kernel(static_cast<std::ptrdiff_t>(u.size()),
             [&](std::ptrdiff_t i) {
               const auto j = static_cast<std::size_t>(i);
               q[j] = u[j] * u[j] * u[j] - 0.5 * u[j] * u[j] + 0.5 * ux[j] * ux[j];
             },
             false);
}

void flux_combine(std::span<const double> u, std::span<const double> p, std::span<double> out) {
  map_kernel(static_cast<std::ptrdiff_t>(u.size()),
             [&](std::ptrdiff_t i) {
               const auto j = static_cast<std::size_t>(i);
               out[j] = 0.5 * u[j] * u[j] + p[j];
             },
             true);
}
void flux_combine_serial(std::span<const double> u, std::span<const double> p,
                         std::span<double> out) {
  map_kernel(static_cast<std::ptrdiff_t>(u.size()),
             [&](std::ptrdiff_t i) {
               const auto j = static_cast<std::size_t>(i);
               out[j] = 0.5 * u[j] * u[j] + p[j];
             },
             false);
}

void add_scaled(std::span<const double> x, double alpha, std::span<const double> y,
                std::span<double> out) {
  map_kernel(static_cast<std::ptrdiff_t>(x.size()),
             [&](std::ptrdiff_t i) {
               const auto j = static_cast<std::size_t>(i);
               out[j] = x[j] + alpha * y[j];
             },
             true);
}
void add_scaled_serial(std::span<const double> x, double alpha, std::span<const double> y,
                       std::span<double> out) {
  map_kernel(static_cast<std::ptrdiff_t>(x.size()),
             [&](std::ptrdiff_t i) {
               const auto j = static_cast<std::size_t>(i);
               out[j] = x[j] + alpha * y[j];
             },
             false);
}

void rk4_combine(std::span<const double> u, std::span<const double> k1,
                 std::span<const double> k2, std::span<const double> k3,
                 std::span<const double> k4, double dt, std::span<double> out) {
  map_kernel(static_cast<std::ptrdiff_t>(u.size()),
             [&](std::ptrdiff_t i) {
               const auto j = static_cast<std::size_t>(i);
               out[j] = u[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
             },
             true);
}
void rk4_combine_serial(std::span<const double> u, std::span<const double> k1,
                        std::span<const double> k2, std::span<const double> k3,
                        std::span<const double> k4, double dt, std::span<double> out) {
  map_kernel(static_cast<std::ptrdiff_t>(u.size()),
             [&](std::ptrdiff_t i) {
               const auto j = static_cast<std::size_t>(i);
               out[j] = u[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
             },
             false);
}

double max_abs(std::span<const double> v) {
  return par::block_max(static_cast<std::ptrdiff_t>(v.size()),
                        [&](std::ptrdiff_t i) { return std::abs(v[static_cast<std::size_t>(i)]); });
}
double max_abs_serial(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace mch::kernels

namespace mch::pde {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

std::mutex& plan_mutex() {
  static std::mutex m;  // FFTW planning is not thread-safe
  return m;
}
}  // namespace

SimulationState::SimulationState(double domain_length, std::vector<double> u0, double t0)
    : length(domain_length), u(std::move(u0)), t(t0) {
  if (!(length > 0.0)) throw domain_error("SimulationState: domain length must be positive");
  if (n() < 64) throw domain_error("SimulationState: need at least 64 grid points");
  for (double v : u)
    if (!std::isfinite(v)) throw domain_error("SimulationState: initial data must be finite");
}

struct SpectralWorkspace::Impl {
  int n;
  double length;
  double* real;
  fftw_complex* spec;
  fftw_plan fwd;
  fftw_plan bwd;

  Impl(int n_in, double len) : n(n_in), length(len) {
    real = fftw_alloc_real(static_cast<std::size_t>(n));
    spec = fftw_alloc_complex(static_cast<std::size_t>(n) / 2 + 1);
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(spec);
  }

  void load(std::span<const double> in) {
    std::copy(in.begin(), in.end(), real);
    fftw_execute(fwd);
  }
  void store(std::span<double> out) {
    fftw_execute(bwd);
    const double scale = 1.0 / n;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = real[i] * scale;
  }
};

SpectralWorkspace::SpectralWorkspace(int n, double length)
    : impl_(std::make_unique<Impl>(n, length)) {
  if (n < 2) throw domain_error("SpectralWorkspace: grid too small");
}
SpectralWorkspace::~SpectralWorkspace() = default;
int SpectralWorkspace::n() const { return impl_->n; }

void SpectralWorkspace::derivative(std::span<const double> in, std::span<double> out) {
  impl_->load(in);
  const int nh = impl_->n / 2;
  for (int j = 0; j <= nh; ++j) {
    const double k = two_pi * j / impl_->length;
    const double re = impl_->spec[j][0];
    const double im = impl_->spec[j][1];
    if (2 * j == impl_->n) {  // Nyquist mode has no odd derivative
      impl_->spec[j][0] = 0.0;
      impl_->spec[j][1] = 0.0;
    } else {
      impl_->spec[j][0] = -k * im;
      impl_->spec[j][1] = k * re;
    }
  }
  impl_->store(out);
}

void SpectralWorkspace::helmholtz(std::span<const double> in, std::span<double> out) {
  impl_->load(in);
  const int nh = impl_->n / 2;
  for (int j = 0; j <= nh; ++j) {
    const double k = two_pi * j / impl_->length;
    const double denom = 1.0 + k * k;
    impl_->spec[j][0] /= denom;
    impl_->spec[j][1] /= denom;
  }
  impl_->store(out);
}

std::vector<double> helmholtz_reference(std::span<const double> f, double length) {
  const int n = static_cast<int>(f.size());
  const double dx = length / n;
  const double sinh_half = std::sinh(0.5 * length);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  par::parallel_for(n, [&](std::ptrdiff_t i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      double d = std::abs((static_cast<double>(i) - j) * dx);
      if (d > 0.5 * length) d = length - d;
      acc += std::cosh(d - 0.5 * length) / (2.0 * sinh_half) * f[static_cast<std::size_t>(j)];
    }
    // trapezoid correction for the kernel's derivative kink at d = 0
    out[static_cast<std::size_t>(i)] =
        acc * dx - dx * dx / 12.0 * f[static_cast<std::size_t>(i)];
  });
  return out;
}

void rhs(const SimulationState& state, SpectralWorkspace& work, std::vector<double>& out) {
  const std::size_t n = state.u.size();
  static thread_local std::vector<double> ux, q, p, flux;
  ux.resize(n);
  q.resize(n);
  p.resize(n);
  flux.resize(n);
  out.resize(n);

  work.derivative(state.u, ux);
  kernels::nonlinear_source(state.u, ux, q);
  work.helmholtz(q, p);
  kernels::flux_combine(state.u, p, flux);
  work.derivative(flux, out);
  for (double& v : out) v = -v;
}

InvariantTriple invariants(const SimulationState& state, SpectralWorkspace& work) {
  const std::size_t n = state.u.size();
  std::vector<double> ux(n);
  work.derivative(state.u, ux);
  const double dx = state.dx();
  InvariantTriple inv;
  inv.E = -dx * par::block_sum(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
    const auto j = static_cast<std::size_t>(i);
    const double u = state.u[j];
    return u * u * u * u / 8.0 + 0.5 * u * ux[j] * ux[j];
  });
  inv.F = 0.5 * dx * par::block_sum(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
    const auto j = static_cast<std::size_t>(i);
    return state.u[j] * state.u[j] + ux[j] * ux[j];
  });
  inv.V = dx * par::block_sum(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
    return state.u[static_cast<std::size_t>(i)];
  });
  return inv;
}

Stepper::Stepper(SimulationState initial, double cfl, double blow_up_cap)
    : state_(std::move(initial)),
      work_(std::make_unique<SpectralWorkspace>(state_.n(), state_.length)),
      cfl_(cfl),
      cap_(blow_up_cap) {
  const std::size_t n = state_.u.size();
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  stage_.resize(n);
  ux_.resize(n);
}

double Stepper::cfl_dt() const {
  const double umax = std::max(1.0, kernels::max_abs(state_.u));
  return cfl_ * state_.dx() / umax;
}

StepResult Stepper::step(double dt) {
  if (!(dt > 0.0)) throw domain_error("step: dt must be positive");
  if (dt > cfl_dt() * (1.0 + 1e-12))
    throw domain_error("step: dt violates the CFL bound cfl*dx/max(1, |u|)");

  SimulationState scratch = state_;
  rhs(state_, *work_, k1_);
  kernels::add_scaled(state_.u, 0.5 * dt, k1_, scratch.u);
  rhs(scratch, *work_, k2_);
  kernels::add_scaled(state_.u, 0.5 * dt, k2_, scratch.u);
  rhs(scratch, *work_, k3_);
  kernels::add_scaled(state_.u, dt, k3_, scratch.u);
  rhs(scratch, *work_, k4_);
  kernels::rk4_combine(state_.u, k1_, k2_, k3_, k4_, dt, scratch.u);

  for (double v : scratch.u) {
    if (!std::isfinite(v)) return {StepStatus::blow_up, std::numeric_limits<double>::infinity()};
  }
  scratch.t = state_.t + dt;
  state_ = std::move(scratch);

  work_->derivative(state_.u, ux_);
  StepResult result;
  result.max_slope = kernels::max_abs(ux_);
  result.status = result.max_slope > cap_ ? StepStatus::blow_up : StepStatus::ok;
  return result;
}

double BreakingMonitor::threshold() const {
  return -std::sqrt(2.0 * (m_run_ * m_run_ + 2.0 * m_run_ * m_run_ * m_run_));
}

bool BreakingMonitor::locate(const SimulationState& state, SpectralWorkspace& work,
                             bool near_previous) {
  const int n = state.n();
  std::vector<double> ux(static_cast<std::size_t>(n)), uxx(static_cast<std::size_t>(n));
  work.derivative(state.u, ux);
  work.derivative(ux, uxx);
  for (double v : ux)
    if (!std::isfinite(v)) return false;

  int start = 0;
  double slope_floor = 0.0;
  if (!near_previous) {
    // first call: begin the scan at the global maximum of u, and ignore the
    // noise-level curvature crossings a saturated profile produces
    start = static_cast<int>(std::max_element(state.u.begin(), state.u.end()) - state.u.begin());
    slope_floor = 1e-6 * kernels::max_abs(ux);
  }

  const double dx = state.dx();
  double best_x = 0.0, best_rho = 0.0, best_dist = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int off = 0; off < n; ++off) {
    const int i = (start + off) % n;
    const int ip = (i + 1) % n;
    if (!(uxx[static_cast<std::size_t>(i)] < 0.0 && uxx[static_cast<std::size_t>(ip)] >= 0.0))
      continue;
    const double frac = uxx[static_cast<std::size_t>(i)] /
                        (uxx[static_cast<std::size_t>(i)] - uxx[static_cast<std::size_t>(ip)]);
    const double xc = std::fmod(state.x(i) + frac * dx, state.length);
    const double rho = ux[static_cast<std::size_t>(i)] +
                       frac * (ux[static_cast<std::size_t>(ip)] - ux[static_cast<std::size_t>(i)]);
    if (rho >= -slope_floor) continue;  // only descending flanks qualify
    if (!near_previous) {
      xbar_ = xc;
      rho_ = rho;
      return true;  // first crossing right of the maximum
    }
    double dist = std::abs(xc - xbar_);
    dist = std::min(dist, state.length - dist);
    if (dist < best_dist) {
      best_dist = dist;
      best_x = xc;
      best_rho = rho;
      found = true;
    }
  }
  if (!found || best_dist > state.length / 8.0) return near_previous ? false : found;
  xbar_ = best_x;
  rho_ = best_rho;
  return true;
}

BreakingMonitor::BreakingMonitor(const SimulationState& state, SpectralWorkspace& work,
                                 double blow_up_cap)
    : cap_(blow_up_cap) {
  m_run_ = kernels::max_abs(state.u);
  if (!locate(state, work, /*near_previous=*/false))
    throw domain_error("BreakingMonitor: no inflection point right of the maximum");
  rho0_ = rho_;
  const double mbar0 = m_run_ * m_run_ + 2.0 * m_run_ * m_run_ * m_run_;
  const double s = std::sqrt(2.0 * mbar0);
  if (rho0_ < -s) {
    const double k = std::log(std::abs((rho0_ + s) / (rho0_ - s)));
    tau_bound_ = -2.0 * k / s;
  }
}

void BreakingMonitor::update(const SimulationState& state, SpectralWorkspace& work) {
  if (breaking_) return;
  for (double v : state.u) {
    if (!std::isfinite(v)) {
      tracking_ = false;
      breaking_ = true;
      return;
    }
  }
  m_run_ = std::max(m_run_, kernels::max_abs(state.u));
  if (!locate(state, work, /*near_previous=*/true)) {
    tracking_ = false;
    return;
  }
  if (std::abs(rho_) > cap_) breaking_ = true;
}

std::vector<double> riccati_majorant(double rho0, double mbar, std::span<const double> times) {
  std::vector<double> out;
  out.reserve(times.size());
  double rho = rho0;
  double t = 0.0;
  bool blown = false;
  auto f = [mbar](double r) { return -0.5 * r * r + mbar; };
  for (double target : times) {
    while (!blown && t < target) {
      const double dt = std::min(target - t, 0.01 / std::max(1.0, std::abs(rho)));
      const double a1 = f(rho);
      const double a2 = f(rho + 0.5 * dt * a1);
      const double a3 = f(rho + 0.5 * dt * a2);
      const double a4 = f(rho + dt * a3);
      rho += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
      t += dt;
      if (rho < -1e12 || !std::isfinite(rho)) blown = true;
    }
    out.push_back(blown ? -std::numeric_limits<double>::infinity() : rho);
  }
  return out;
}

double measure_translation_speed(std::span<const double> u_ref, std::span<const double> u_now,
                                 double length, double elapsed) {
  const int n = static_cast<int>(u_ref.size());
  if (n == 0 || static_cast<int>(u_now.size()) != n || !(elapsed > 0.0))
    throw domain_error("measure_translation_speed: inconsistent input");
  // remove means so the correlation peak reflects shape, not offset
  double mean_ref = 0.0, mean_now = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_ref += u_ref[static_cast<std::size_t>(i)];
    mean_now += u_now[static_cast<std::size_t>(i)];
  }
  mean_ref /= n;
  mean_now /= n;

  std::vector<double> corr(static_cast<std::size_t>(n), 0.0);
  par::parallel_for(n, [&](std::ptrdiff_t lag) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const int j = (i - static_cast<int>(lag) % n + n) % n;
      acc += (u_now[static_cast<std::size_t>(i)] - mean_now) *
             (u_ref[static_cast<std::size_t>(j)] - mean_ref);
    }
    corr[static_cast<std::size_t>(lag)] = acc;
  });

  const int peak =
      static_cast<int>(std::max_element(corr.begin(), corr.end()) - corr.begin());
  const double cm = corr[static_cast<std::size_t>((peak - 1 + n) % n)];
  const double c0 = corr[static_cast<std::size_t>(peak)];
  const double cp = corr[static_cast<std::size_t>((peak + 1) % n)];
  const double denom = cm - 2.0 * c0 + cp;
  const double frac = std::abs(denom) > 0.0 ? 0.5 * (cm - cp) / denom : 0.0;
  const double dx = length / n;
  double lag = (peak + frac) * dx;
  if (lag > 0.5 * length) lag -= length;  // nearest-image convention
  return lag / elapsed;
}

}  // namespace mch::pde
