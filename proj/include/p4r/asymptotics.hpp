#pragma once

#include <array>
#include <string>
#include <vector>

#include "p4r/hp.hpp"
#include "p4r/painleve4.hpp"

namespace p4r {

/// Root of r^4 x^8 - 24 r^2 (r^2+r+1) x^4 + 32 r (2r^3+3r^2-3r-2) x^2
/// - 48 (r^2+r+1)^2 with Re > 0 and Im > 0. Throws NoValidRoot otherwise.
ComplexHP corner_point(const HpReal& r);

/// Residual of the corner octic at x.
ComplexHP corner_polynomial(const ComplexHP& x, const HpReal& r);

/// Left side of 3(1+r)^2 Q^4 + 8(1+r) r^{1/2} x Q^3 + 4(r-1+r x^2) Q^2 - 4.
ComplexHP q_quartic(const ComplexHP& q, const ComplexHP& x, const HpReal& r);

struct SpectralData {
  ComplexHP x;
  HpReal r;
  ComplexHP Q, S, a, b, c, Rc;
  std::string track_path;
};

/// Point on the continuation path together with the tracked branch values.
struct BranchState {
  ComplexHP x;
  ComplexHP Q;
  ComplexHP Rc;
};

/// Continues the physical sheet of Q (and the sign of R_c) from the anchor
/// x0 = max(10, 3|x_c|) on the positive real axis, where Q is the quartic
/// root nearest -x0. Paths run along the circle |x| = x0 to arg(x) and then
/// radially to |x|, so they never meet the cuts [-x_c, x_c], [-conj(x_c),
/// conj(x_c)]. The R_c sign at the anchor is fixed once per r so that the
/// boundary function is positive at x = 3|x_c| on the positive real axis.
class BranchTracker {
 public:
  explicit BranchTracker(const HpReal& r);

  const HpReal& r() const noexcept { return r_; }
  const ComplexHP& corner() const noexcept { return corner_; }
  const HpReal& anchor_radius() const noexcept { return anchor_radius_; }
  const BranchState& anchor() const noexcept { return anchor_; }

  /// Straight-segment continuation with adaptive steps.
  BranchState advance(const BranchState& from, const ComplexHP& to) const;
  /// Continuation along |x| = |from.x| to angle theta (radians, in (-pi, pi]).
  BranchState arc(const BranchState& from, const HpReal& theta) const;
  /// Full path from the anchor.
  BranchState at(const ComplexHP& x) const;

  /// Throws OnBranchCut when x lies within the margin of a cut segment.
  void check_cut(const ComplexHP& x) const;

 private:
  BranchState step_to(const BranchState& from, const ComplexHP& to, bool& ok) const;
  HpReal r_;
  HpReal sqrt_r_;
  ComplexHP corner_;
  HpReal anchor_radius_;
  BranchState anchor_;
};

/// Tracker for r, built once per distinct r and then shared.
const BranchTracker& branch_tracker(const HpReal& r);

inline constexpr double kCutMargin = 1e-12;

/// Q at x on the physical sheet; OnBranchCut / TrackingLoss on failure.
ComplexHP solve_Q(const ComplexHP& x, const HpReal& r);

/// Fills S, a, b, c, R_c; MomentViolation if the moment conditions fail.
SpectralData spectral_data(const ComplexHP& x, const HpReal& r);
SpectralData spectral_data(const BranchState& state, const BranchTracker& tracker);

/// Which of the four angular sectors cut out by the corners x contains:
/// 0 right, 1 top, 2 left, 3 bottom.
int sector_of(const ComplexHP& x, const ComplexHP& corner);

/// R~(z) with the straight cut [a, b] and R~(z) = z + O(1) at infinity.
ComplexHP r_tilde(const ComplexHP& z, const SpectralData& sd);

/// Re phi~(z); SingularPoint at z = 0 or on the open segment (a, b).
HpReal re_phi_tilde(const ComplexHP& z, const SpectralData& sd);

/// phi~'(z) = -((1+r) z + 2/Q) R~(z) / z^3.
ComplexHP phi_tilde_prime(const ComplexHP& z, const SpectralData& sd);

/// Real part of the bracketed boundary expression at the tracked R_c.
HpReal boundary_expression(const SpectralData& sd);

struct BoundaryValue {
  HpReal value;        // F(x; r)
  HpReal cross_check;  // sigma * Re phi~(c), sigma = +-1 relating R_c to R~(c)
  int sigma = 1;
};

inline constexpr double kBranchMismatchTolerance = 1e-14;

/// F(x; r), cross-checked against Re phi~(c) (BranchMismatch otherwise).
BoundaryValue boundary_value(const SpectralData& sd);
HpReal boundary_function(const ComplexHP& x, const HpReal& r);

struct BoundaryCurve {
  HpReal r;
  std::vector<ComplexHP> points;
  std::vector<HpReal> residuals;
  std::vector<bool> is_corner;
  ComplexHP corner;
  HpReal real_axis_crossing;
  HpReal imaginary_axis_crossing;
};

struct TraceOptions {
  int samples_per_quadrant = 180;
  double max_point_gap = 0.05;
  double tolerance = 1e-12;
  int radial_samples = 160;
};

/// Innermost sign change of F along each ray from the origin over the closed
/// upper half-plane, completed by conjugation. Throws NoCrossing.
BoundaryCurve trace_boundary(const HpReal& r, const TraceOptions& options = {});

/// Innermost crossing along the ray at angle theta.
ComplexHP boundary_crossing_on_ray(const HpReal& r, const HpReal& theta, double tolerance = 1e-12);

/// Re phi~ = 0 level line from a to b winding clockwise about 0.
std::vector<ComplexHP> trace_sigma(const SpectralData& sd, int max_steps = 4000);

/// Signed angle swept by the polyline about the origin.
HpReal winding_angle(const std::vector<ComplexHP>& path);

/// -1/Q - S/(2Q^2), 1/Q - S/(2Q^2), -2 r^{1/2} x + S/Q^2.
ComplexHP asymptotic_w(Family family, const SpectralData& sd);
ComplexHP asymptotic_w(Family family, const ComplexHP& x, const HpReal& r);

struct PhaseWindow {
  double x0, x1, y0, y1;
};

struct PhaseChart {
  PhaseWindow window;
  int grid = 0;
  /// Row-major, grid x grid: +1, -1, or 0 where undefined.
  std::vector<int> signs;
  ComplexHP a, b, c;
};

PhaseChart phase_chart(const SpectralData& sd, const PhaseWindow& window, int grid);

}  // namespace p4r
