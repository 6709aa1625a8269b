#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mch/classify.hpp"

namespace mch::profile {

/// Sampled wave profile. Single waves are crest-centered (crest at xi = 0,
/// even about the crest); composites run from their first crest at xi = 0.
struct WaveProfile {
  std::vector<double> xi;
  std::vector<double> phi;
  std::optional<double> period;
  double crest_xi = 0.0;
  classify::WaveCategory category{classify::WaveKind::smooth_periodic};
  WaveParameters params;

  // composite bookkeeping; empty for single waves
  std::vector<WaveParameters> segments;
  std::vector<double> plateaus;
  std::vector<int> segment_of;  // per sample: segment index, -1 on plateaus

  double span_lo() const { return xi.front(); }
  double span_hi() const { return xi.back(); }
};

/// F(phi) = P(phi)/(c - phi) in root-factored form. When M = c the pole
/// cancels against the (M - phi) factor and the reduced polynomial is used.
double eval_F(double phi, const WaveParameters& params);

/// Per-interval quadrature lengths of xi(phi) = integral of 1/sqrt(F) over a
/// descending phi sample list. The parallel flag selects the OpenMP kernel or
/// its serial reference; both produce bitwise identical output.
std::vector<double> branch_interval_lengths(const WaveParameters& params,
                                            std::span<const double> phi_descending,
                                            bool parallel);

/// Invert xi(phi) on a monotone branch and reflect to a full period (or a
/// truncated decay tail). n_samples controls the total grid budget.
WaveProfile build_quadrature(const WaveParameters& params, int n_samples);

/// Period L = 2 * integral_m^{min(M,c)} sqrt(c-y)/sqrt(P(y)) dy via adaptive
/// panels, independent of the sampling grid used by build_quadrature.
double period(const WaveParameters& params);

/// Evaluate a quadrature-built wave at arbitrary xi (crest at 0) by local
/// inversion of the cumulative table. Build once, evaluate many times.
class ProfileEvaluator {
 public:
  ProfileEvaluator(const WaveParameters& params, int n_samples = 2048);
  ~ProfileEvaluator();
  ProfileEvaluator(ProfileEvaluator&&) noexcept;
  ProfileEvaluator& operator=(ProfileEvaluator&&) noexcept;

  double operator()(double xi) const;
  double half_span() const;
  bool periodic() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Constants of the closed-form periodic peakon
/// phi(xi) = m + D2 * tn^2(D1 |xi - xi0|; k') on |xi - xi0| <= L/2.
/// The corrected set carries D2 = B(c-m) and the period argument
/// asin(sqrt((1/B)/(1 + 1/B))); the uncorrected set (D2 = B^2(c-m),
/// reciprocal-squared argument) fails the quadrature cross-check and is kept
/// for the comparison report.
struct PeriodicPeakonForm {
  double D1, D2, D3, k, k_prime, L;
  bool corrected;
};
PeriodicPeakonForm periodic_peakon_constants(const WaveParameters& params, bool corrected = true);
double periodic_peakon_value(const PeriodicPeakonForm& form, const WaveParameters& params,
                             double xi);

/// Constants of the closed-form decay peakon
/// phi(xi) = m + D4 q / (D6 - q)^2 with q = exp(-D5 |xi - xi0|).
/// inverted_denominator = (D6 q - 1)^2 is the variant that fails the
/// quadrature cross-check (it has a spurious pole at q = 1/D6).
struct DecayPeakonForm {
  double D4, D5, D6;
  bool inverted_denominator;
};
DecayPeakonForm decay_peakon_constants(const WaveParameters& params,
                                       bool inverted_denominator = false);
double decay_peakon_value(const DecayPeakonForm& form, const WaveParameters& params, double xi);

/// Closed-form profiles sampled on their natural grids. Periodic peakons are
/// trough-centered (the formula's xi0 is a trough); decay peakons are
/// peak-centered.
WaveProfile explicit_periodic_peakon(const WaveParameters& params, int n_samples);
WaveProfile explicit_decay_peakon(const WaveParameters& params, int n_samples);

enum class FitPoint { crest, trough };

/// Log-log least-squares exponent of |phi - phi0| vs |xi - xi0| over the
/// window |xi - xi0| in [1e-4, 1e-2] * L. Expected values: 2/3 at cuspon
/// crests, 1 at peakon crests, 2 at smooth turning points. On decay tails
/// (trough of a decay category) the fit switches to the exponential rate of
/// phi -> m, fitted over the outer half of the tail.
double fit_local_exponent(const WaveProfile& profile, FitPoint at);

/// Concatenate peakon/cuspon segments (each one full crest-to-crest period)
/// with optional phi = c plateaus between them. plateaus must have
/// segments.size() - 1 entries; any positive plateau requires
/// a = 2c^3 - 2c^2.
WaveProfile assemble_composite(const std::vector<WaveParameters>& segments,
                               const std::vector<double>& plateaus);

}  // namespace mch::profile
