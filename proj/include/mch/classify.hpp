#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mch/wave_params.hpp"

namespace mch::classify {

enum class WaveKind {
  smooth_periodic,
  smooth_decay,
  kink,
  periodic_peakon,
  peakon_decay,
  periodic_cuspon,
  cuspon_decay,
  composite,
  stumpon,
  unbounded,
};

/// crest_up are the unprimed taxonomy cases, crest_down their primed mirrors.
enum class Orientation { crest_up, crest_down };

struct WaveCategory {
  WaveKind kind;
  Orientation orientation = Orientation::crest_up;
  bool operator==(const WaveCategory&) const = default;
};

/// Equality tolerance for the ordering comparisons of the taxonomy.
inline double ordering_tol(double c) { return 1e-9 * (1.0 + std::abs(c)); }

/// Map parameters to their category through the ordering of {z, r, m, M, c}.
/// The primed cases are matched by classifying the negated labels. Throws
/// ambiguous_boundary when the ordering sits on a case boundary or outside
/// the classified lists.
WaveCategory classify(const WaveParameters& params);

/// Stable lowercase names used by the CLI and JSON output.
std::string_view kind_name(WaveKind kind);
std::optional<WaveKind> kind_from_name(std::string_view name);

struct StumponPoint {
  double m, M, aux;  // aux: Im z (hyperboloid family) or r (ellipsoid family)
  double a;          // always 2c^3 - 2c^2
};

/// The two stumpon-admissible points at speed c, or an empty list when c is
/// outside the family's admissible range (hyperboloid: c < 0; ellipsoid:
/// 0 < c < 1).
std::vector<StumponPoint> stumpon_points(double c, quartic::QuadricFamily family);

/// True when every point shares the speed, the integration constant a (to
/// 1e-9) and the same quadric surface (constraint residuals agree to 1e-9).
/// Points must individually classify as peakon or cuspon types.
bool gluing_compatible(const std::vector<WaveParameters>& points);

/// Periodic cuspon on the c-ellipsoid with integration constant a and trough
/// value m, found by Newton continuation from the degenerate stumpon point.
/// The workhorse behind stumpon segments and matched-a composites.
WaveParameters ellipsoid_cuspon_with_a(double c, double a, double m);

/// Periodic peakon (M = c) of the four-real family with trough value m.
WaveParameters make_periodic_peakon(double c, double m);

/// Peakon with decay (r = m, M = c) of the four-real family; needs 1/3 < c < 3.
WaveParameters make_decay_peakon(double c);

/// Periodic peakon on the c-ellipsoid whose integration constant equals a,
/// solved by bisection along the M = c peakon family.
WaveParameters peakon_with_a(double c, double a);

}  // namespace mch::classify
