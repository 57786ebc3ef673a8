#include "p4r/asymptotics.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "p4r/error.hpp"
#include "p4r/quartic.hpp"

namespace p4r {

namespace {

std::string show(const ComplexHP& z) { return "(" + z.re.to_string(12) + ", " + z.im.to_string(12) + ")"; }

HpReal relative(const ComplexHP& residual, const HpReal& scale) {
  return abs(residual) / max(scale, ldexp(HpReal(1), -400));
}

std::array<ComplexHP, 4> q_roots(const ComplexHP& x, const HpReal& r, const HpReal& sqrt_r) {
  const HpReal one_r = HpReal(1) + r;
  return solve_quartic(ComplexHP(one_r * one_r * HpReal(3)), x * (one_r * sqrt_r * HpReal(8)),
                       (x * x * r + ComplexHP(r - HpReal(1))) * HpReal(4), ComplexHP(), ComplexHP(-4));
}

// dQ/dx on the quartic's sheet through (x, Q).
ComplexHP q_slope(const ComplexHP& x, const ComplexHP& q, const HpReal& r, const HpReal& sqrt_r) {
  const HpReal one_r = HpReal(1) + r;
  const ComplexHP q2 = q * q;
  const ComplexHP fq = q2 * q * (one_r * one_r * HpReal(12)) + x * q2 * (one_r * sqrt_r * HpReal(24)) +
                       (x * x * r + ComplexHP(r - HpReal(1))) * q * HpReal(8);
  const ComplexHP fx = q2 * q * (one_r * sqrt_r * HpReal(8)) + x * q2 * (r * HpReal(8));
  if (fq.is_zero()) return {};
  return -fx / fq;
}

ComplexHP rc_squared(const ComplexHP& x, const ComplexHP& q, const HpReal& r, const HpReal& sqrt_r) {
  const HpReal one_r = HpReal(1) + r;
  const ComplexHP s = q * q * q * one_r + x * q * q * (sqrt_r * HpReal(2));
  const ComplexHP c = ComplexHP(-2) / (q * one_r);
  return c * c - s * c + q * q;
}

HpReal log_abs(const ComplexHP& z, const char* what) {
  const HpReal m = abs(z);
  if (m.is_zero()) throw Error(ErrorKind::SingularPoint, std::string("logarithm of zero in ") + what);
  return log(m);
}

SpectralData build_spectral(const ComplexHP& x, const ComplexHP& q, const ComplexHP& rc, const HpReal& r,
                            const ComplexHP& corner, std::string path) {
  SpectralData sd;
  sd.x = x;
  sd.r = r;
  sd.Q = q;
  sd.Rc = rc;
  sd.track_path = std::move(path);
  const HpReal one_r = HpReal(1) + r;
  const HpReal sqrt_r = sqrt(r);
  const ComplexHP q2 = q * q;
  sd.S = q2 * q * one_r + x * q2 * (sqrt_r * HpReal(2));
  const ComplexHP disc = sqrt(sd.S * sd.S - q2 * HpReal(4));
  ComplexHP z1 = (sd.S + disc) / HpReal(2);
  ComplexHP z2 = (sd.S - disc) / HpReal(2);
  // Recover the smaller root from the product to avoid cancellation.
  if (abs(z1) >= abs(z2)) {
    if (!z1.is_zero()) z2 = q2 / z1;
  } else {
    z1 = q2 / z2;
  }
  bool swap = false;
  switch (sector_of(x, corner)) {
    case 0: swap = z1.im > z2.im; break;   // Im(a) < Im(b)
    case 1: swap = z1.re < z2.re; break;   // Re(a) > Re(b)
    case 2: swap = z1.im < z2.im; break;   // Im(a) > Im(b)
    default: swap = z1.re > z2.re; break;  // Re(a) < Re(b)
  }
  if (swap) std::swap(z1, z2);
  sd.a = z1;
  sd.b = z2;
  sd.c = ComplexHP(-2) / (q * one_r);

  const HpReal tol24(1e-24);
  const HpReal tol20(1e-20);
  const ComplexHP x2 = x * x;
  const HpReal quartic_scale = abs(q2 * q2) * one_r * one_r * HpReal(3) + abs(x * q2 * q) * one_r * sqrt_r * HpReal(8) +
                               abs(x2 * r + ComplexHP(r - HpReal(1))) * abs(q2) * HpReal(4) + HpReal(4);
  if (relative(q_quartic(q, x, r), quartic_scale) > tol24) {
    throw Error(ErrorKind::MomentViolation, "Q misses its quartic at x = " + show(x));
  }
  const HpReal ab_scale = abs(sd.a) + abs(sd.b) + abs(sd.S) + abs(q2);
  if (relative(sd.a + sd.b - sd.S, ab_scale) > tol24 || relative(sd.a * sd.b - q2, ab_scale * ab_scale) > tol24) {
    throw Error(ErrorKind::MomentViolation, "a, b violate z^2 - S z + Q^2 = 0 at x = " + show(x));
  }
  const ComplexHP rc2 = sd.c * sd.c - sd.S * sd.c + q2;
  const HpReal rc_scale = abs(sd.c * sd.c) + abs(sd.S * sd.c) + abs(q2);
  if (relative(rc * rc - rc2, rc_scale) > tol24) {
    throw Error(ErrorKind::MomentViolation, "R_c^2 differs from c^2 - S c + Q^2 at x = " + show(x));
  }
  const ComplexHP first = (q2 * q * one_r - sd.S) / (q2 * HpReal(2)) + x * sqrt_r;
  const HpReal first_scale = (abs(q2 * q) * one_r + abs(sd.S)) / abs(q2 * HpReal(2)) + abs(x) * sqrt_r;
  const ComplexHP second =
      (q2 * HpReal(4) - q2 * q * sd.S * (one_r * HpReal(2)) - sd.S * sd.S) / (q2 * q2 * HpReal(8)) -
      ComplexHP((r - HpReal(1)) / HpReal(2));
  const HpReal second_scale =
      (abs(q2) * HpReal(4) + abs(q2 * q * sd.S) * one_r * HpReal(2) + abs(sd.S * sd.S)) / abs(q2 * q2 * HpReal(8)) +
      abs(r - HpReal(1));
  if (relative(first, first_scale) > tol20 || relative(second, second_scale) > tol20) {
    throw Error(ErrorKind::MomentViolation, "moment conditions fail at x = " + show(x));
  }
  return sd;
}

// Distance from x to the segment [-e, e].
HpReal distance_to_segment(const ComplexHP& x, const ComplexHP& e) {
  const HpReal len = abs(e);
  const ComplexHP u = e / len;
  HpReal t = (x * conj(u)).re;
  if (t > len) t = len;
  if (t < -len) t = -len;
  return abs(x - u * t);
}

HpReal boundary_at(const BranchState& s, const HpReal& r, const ComplexHP& corner) {
  return boundary_expression(build_spectral(s.x, s.Q, s.Rc, r, corner, {}));
}

}  // namespace

ComplexHP corner_polynomial(const ComplexHP& x, const HpReal& r) {
  const HpReal r2 = r * r;
  const HpReal poly = r2 + r + HpReal(1);
  const ComplexHP u = x * x;
  const ComplexHP u2 = u * u;
  return u2 * u2 * (r2 * r2) - u2 * (r2 * poly * HpReal(24)) +
         u * (r * (r2 * r * HpReal(2) + r2 * HpReal(3) - r * HpReal(3) - HpReal(2)) * HpReal(32)) -
         ComplexHP(poly * poly * HpReal(48));
}

ComplexHP corner_point(const HpReal& r) {
  if (!(r > HpReal(0))) throw Error(ErrorKind::DomainError, "corner point needs r > 0");
  const HpReal r2 = r * r;
  const HpReal poly = r2 + r + HpReal(1);
  const auto us = solve_quartic(ComplexHP(r2 * r2), ComplexHP(), ComplexHP(-(r2 * poly * HpReal(24))),
                                ComplexHP(r * (r2 * r * HpReal(2) + r2 * HpReal(3) - r * HpReal(3) - HpReal(2)) * HpReal(32)),
                                ComplexHP(-(poly * poly * HpReal(48))));
  const HpReal off_axis = ldexp(HpReal(1), -static_cast<long>(working_precision() / 2));
  for (const auto& u : us) {
    for (int sign : {1, -1}) {
      ComplexHP x = sqrt(u) * HpReal(static_cast<long>(sign));
      const HpReal scale = abs(x);
      if (x.re > off_axis * scale && x.im > off_axis * scale) {
        // Newton on the octic in x.
        for (int iter = 0; iter < 4; ++iter) {
          const ComplexHP f = corner_polynomial(x, r);
          const ComplexHP h = x * ldexp(HpReal(1), -static_cast<long>(working_precision() / 3));
          const ComplexHP df = (corner_polynomial(x + h, r) - corner_polynomial(x - h, r)) / (h * HpReal(2));
          if (df.is_zero()) break;
          const ComplexHP next = x - f / df;
          if (!(abs(corner_polynomial(next, r)) < abs(f))) break;
          x = next;
        }
        return x;
      }
    }
  }
  throw Error(ErrorKind::NoValidRoot, "no corner point in the open first quadrant for r = " + r.to_string(12));
}

ComplexHP q_quartic(const ComplexHP& q, const ComplexHP& x, const HpReal& r) {
  const HpReal one_r = HpReal(1) + r;
  const ComplexHP q2 = q * q;
  return q2 * q2 * (one_r * one_r * HpReal(3)) + x * q2 * q * (one_r * sqrt(r) * HpReal(8)) +
         (x * x * r + ComplexHP(r - HpReal(1))) * q2 * HpReal(4) - ComplexHP(4);
}

int sector_of(const ComplexHP& x, const ComplexHP& corner) {
  const HpReal theta = arg(x);
  const HpReal tc = arg(corner);
  const HpReal pi = HpReal::pi();
  if (abs(theta) <= tc) return 0;
  if (abs(theta) >= pi - tc) return 2;
  return theta.sign() > 0 ? 1 : 3;
}

BranchTracker::BranchTracker(const HpReal& r) : r_(r), sqrt_r_(sqrt(r)), corner_(corner_point(r)) {
  anchor_radius_ = max(HpReal(10), abs(corner_) * HpReal(3));
  const ComplexHP x0(anchor_radius_);
  const auto roots = q_roots(x0, r_, sqrt_r_);
  ComplexHP q = roots[0];
  for (const auto& cand : roots) {
    if (dist(cand, -x0) < dist(q, -x0)) q = cand;
  }
  anchor_ = {x0, q, sqrt(rc_squared(x0, q, r_, sqrt_r_))};
  // Sign calibration: F > 0 at 3|x_c| on the positive real axis.
  const BranchState probe = advance(anchor_, ComplexHP(abs(corner_) * HpReal(3)));
  if (boundary_at(probe, r_, corner_).sign() < 0) anchor_.Rc = -anchor_.Rc;
}

void BranchTracker::check_cut(const ComplexHP& x) const {
  const HpReal margin(kCutMargin);
  if (distance_to_segment(x, corner_) <= margin || distance_to_segment(x, conj(corner_)) <= margin) {
    throw Error(ErrorKind::OnBranchCut, "x = " + show(x) + " lies on a branch cut of Q");
  }
}

BranchState BranchTracker::step_to(const BranchState& from, const ComplexHP& to, bool& ok) const {
  using C = std::complex<double>;
  ok = false;
  // Sheet selection and separation in double precision; the chosen root is
  // then polished at the working precision.
  const double rd = r_.to_double();
  const double srd = sqrt_r_.to_double();
  const C xd = to.to_complex();
  const auto roots = solve_quartic(C(3 * (1 + rd) * (1 + rd)), 8 * (1 + rd) * srd * xd, 4.0 * (rd * xd * xd + (rd - 1)),
                                   C(), C(-4));
  const C predicted = (from.Q + q_slope(from.x, from.Q, r_, sqrt_r_) * (to - from.x)).to_complex();
  std::size_t best = 0;
  for (std::size_t k = 1; k < 4; ++k) {
    if (std::abs(roots[k] - predicted) < std::abs(roots[best] - predicted)) best = k;
  }
  double gap = std::abs(roots[0] - roots[1]);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) gap = std::min(gap, std::abs(roots[i] - roots[j]));
  }
  const C qd = roots[best];
  if (!(std::abs(qd - predicted) < gap / 4) || !(std::abs(qd - from.Q.to_complex()) < gap / 2)) return {};

  ComplexHP q(HpReal(qd.real()), HpReal(qd.imag()));
  const HpReal one_r = HpReal(1) + r_;
  const ComplexHP lin = (to * to * r_ + ComplexHP(r_ - HpReal(1))) * HpReal(4);
  const ComplexHP cub = to * (one_r * sqrt_r_ * HpReal(8));
  const HpReal quart = one_r * one_r * HpReal(3);
  const HpReal done = ldexp(HpReal(1), -static_cast<long>(working_precision()) + 6);
  bool converged = false;
  for (int iter = 0; iter < 10; ++iter) {
    const ComplexHP q2 = q * q;
    const ComplexHP value = q2 * (q2 * quart + q * cub + lin) - ComplexHP(4);
    const ComplexHP slope = q * (q2 * (quart * HpReal(4)) + q * (cub * HpReal(3)) + lin * HpReal(2));
    if (slope.is_zero()) return {};
    const ComplexHP delta = value / slope;
    q -= delta;
    if (abs(delta) <= done * abs(q)) {
      converged = true;
      break;
    }
  }
  if (!converged || !(abs(q - ComplexHP(HpReal(qd.real()), HpReal(qd.imag()))).to_double() < gap / 8)) return {};

  ComplexHP rc = sqrt(rc_squared(to, q, r_, sqrt_r_));
  if (dist(rc, from.Rc) > dist(-rc, from.Rc)) rc = -rc;
  const HpReal near = dist(rc, from.Rc);
  const HpReal far = dist(-rc, from.Rc);
  if (!(near < far / HpReal(2)) && far > ldexp(HpReal(1), -100)) return {};
  ok = true;
  return {to, q, rc};
}

BranchState BranchTracker::advance(const BranchState& from, const ComplexHP& to) const {
  BranchState cur = from;
  const HpReal total = dist(from.x, to);
  if (total.is_zero()) return cur;
  HpReal done;
  HpReal h = min(total, max(HpReal(1), abs(from.x)) * HpReal(0.05));
  const ComplexHP dir = (to - from.x) / total;
  while (done < total) {
    const HpReal cap = max(HpReal(0.02), abs(cur.x) * HpReal(0.05));
    h = min(h, min(cap, total - done));
    const HpReal target = done + h;
    const ComplexHP next_x = target >= total ? to : from.x + dir * target;
    bool ok = false;
    BranchState next = step_to(cur, next_x, ok);
    if (!ok) {
      h /= HpReal(2);
      if (h < ldexp(max(HpReal(1), abs(cur.x)), -90)) {
        throw Error(ErrorKind::TrackingLoss, "branch tracking step underflow near x = " + show(cur.x));
      }
      continue;
    }
    cur = std::move(next);
    done = target;
    h *= HpReal(1.5);
  }
  return cur;
}

BranchState BranchTracker::arc(const BranchState& from, const HpReal& theta) const {
  const HpReal radius = abs(from.x);
  const HpReal start = arg(from.x);
  const HpReal sweep = theta - start;
  const HpReal max_angle = min(HpReal(0.05), HpReal(0.5) / radius);
  const long pieces = std::max(1L, static_cast<long>((abs(sweep) / max_angle).to_double()) + 1);
  BranchState cur = from;
  for (long k = 1; k <= pieces; ++k) {
    const HpReal angle = start + sweep * HpReal(k) / HpReal(pieces);
    cur = advance(cur, ComplexHP::polar(radius, angle));
  }
  return cur;
}

BranchState BranchTracker::at(const ComplexHP& x) const {
  require_finite(x, "x");
  check_cut(x);
  const BranchState on_circle = arc(anchor_, arg(x));
  return advance(on_circle, ComplexHP::polar(anchor_radius_, arg(x)) * (abs(x) / anchor_radius_));
}

const BranchTracker& branch_tracker(const HpReal& r) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, unsigned>, std::unique_ptr<BranchTracker>> cache;
  const auto key = std::make_pair(r.to_string(40), working_precision());
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<BranchTracker>(r)).first;
  return *it->second;
}

ComplexHP solve_Q(const ComplexHP& x, const HpReal& r) { return branch_tracker(r).at(x).Q; }

SpectralData spectral_data(const BranchState& state, const BranchTracker& tracker) {
  const std::string path = "anchor " + tracker.anchor_radius().to_string(8) + ", arc to arg " +
                           arg(state.x).to_string(8) + ", radial to |x| " + abs(state.x).to_string(8);
  return build_spectral(state.x, state.Q, state.Rc, tracker.r(), tracker.corner(), path);
}

SpectralData spectral_data(const ComplexHP& x, const HpReal& r) {
  const BranchTracker& tracker = branch_tracker(r);
  return spectral_data(tracker.at(x), tracker);
}

ComplexHP r_tilde(const ComplexHP& z, const SpectralData& sd) {
  const ComplexHP mid = sd.S / HpReal(2);
  const ComplexHP half = (sd.b - sd.a) / HpReal(2);
  if (half.is_zero()) return z - mid;
  const ComplexHP w = (z - mid) / half;
  if (w.is_zero()) throw Error(ErrorKind::SingularPoint, "R~ evaluated at the midpoint of its cut");
  return half * w * sqrt(ComplexHP(1) - ComplexHP(1) / (w * w));
}

namespace {

void check_phi_domain(const ComplexHP& z, const SpectralData& sd) {
  if (z.is_zero()) throw Error(ErrorKind::SingularPoint, "phi~ is singular at z = 0");
  const ComplexHP half = (sd.b - sd.a) / HpReal(2);
  if (half.is_zero()) return;
  const ComplexHP w = (z - sd.S / HpReal(2)) / half;
  const HpReal eps = ldexp(HpReal(1), -static_cast<long>(working_precision() / 2));
  if (abs(w.im) <= eps && abs(w.re) < HpReal(1) - eps) {
    throw Error(ErrorKind::SingularPoint, "z = " + show(z) + " lies on the cut [a, b]");
  }
}

}  // namespace

HpReal re_phi_tilde(const ComplexHP& z, const SpectralData& sd) {
  check_phi_domain(z, sd);
  const HpReal one_r = HpReal(1) + sd.r;
  const ComplexHP R = r_tilde(z, sd);
  const ComplexHP& Q = sd.Q;
  const ComplexHP& S = sd.S;
  const ComplexHP q2 = Q * Q;
  const ComplexHP k = ComplexHP(one_r) - S / (q2 * Q * HpReal(2));
  const ComplexHP algebraic = R / (Q * z * z) + k * R / z;
  HpReal out = algebraic.re;
  out -= one_r * log_abs(z * HpReal(2) + R * HpReal(2) - S, "2z + 2R - S");
  out += (sd.r - HpReal(1)) * (log_abs(Q * R * HpReal(2) - S * z + q2 * HpReal(2), "2QR - Sz + 2Q^2") - log(abs(z)));
  out += log_abs(S * S - q2 * HpReal(4), "S^2 - 4Q^2");
  return require_finite(out, "Re phi~");
}

ComplexHP phi_tilde_prime(const ComplexHP& z, const SpectralData& sd) {
  check_phi_domain(z, sd);
  const HpReal one_r = HpReal(1) + sd.r;
  return -(z * one_r + ComplexHP(2) / sd.Q) * r_tilde(z, sd) / (z * z * z);
}

HpReal boundary_expression(const SpectralData& sd) {
  const HpReal one_r = HpReal(1) + sd.r;
  const HpReal sqrt_r = sqrt(sd.r);
  const ComplexHP& Q = sd.Q;
  const ComplexHP& S = sd.S;
  const ComplexHP& Rc = sd.Rc;
  const ComplexHP q2 = Q * Q;
  HpReal out = (sd.x * Rc * (one_r * sqrt_r / HpReal(2))).re;
  out -= one_r * log_abs(Rc * HpReal(2) - ComplexHP(4) / (Q * one_r) - S, "2R_c - 4/((1+r)Q) - S");
  out += (sd.r - HpReal(1)) * log_abs(q2 * Q * one_r + q2 * Rc * one_r + S, "(1+r)Q^3 + (1+r)Q^2 R_c + S");
  out += log_abs(S * S - q2 * HpReal(4), "S^2 - 4Q^2");
  return require_finite(out, "boundary function");
}

BoundaryValue boundary_value(const SpectralData& sd) {
  BoundaryValue out;
  out.value = boundary_expression(sd);
  const ComplexHP rt = r_tilde(sd.c, sd);
  out.sigma = dist(rt, sd.Rc) <= dist(rt, -sd.Rc) ? 1 : -1;
  out.cross_check = re_phi_tilde(sd.c, sd) * HpReal(static_cast<long>(out.sigma));
  if (abs(out.value - out.cross_check) > HpReal(kBranchMismatchTolerance)) {
    throw Error(ErrorKind::BranchMismatch, "boundary function " + out.value.to_string(16) + " disagrees with Re phi~(c) " +
                                               out.cross_check.to_string(16) + " at x = " + show(sd.x));
  }
  return out;
}

HpReal boundary_function(const ComplexHP& x, const HpReal& r) { return boundary_value(spectral_data(x, r)).value; }

ComplexHP asymptotic_w(Family family, const SpectralData& sd) {
  const ComplexHP q2 = sd.Q * sd.Q;
  switch (family) {
    case Family::I: return -(ComplexHP(1) / sd.Q) - sd.S / (q2 * HpReal(2));
    case Family::II: return ComplexHP(1) / sd.Q - sd.S / (q2 * HpReal(2));
    case Family::III: return sd.S / q2 - sd.x * (sqrt(sd.r) * HpReal(2));
  }
  throw Error(ErrorKind::DomainError, "unknown family");
}

ComplexHP asymptotic_w(Family family, const ComplexHP& x, const HpReal& r) {
  return asymptotic_w(family, spectral_data(x, r));
}

PhaseChart phase_chart(const SpectralData& sd, const PhaseWindow& window, int grid) {
  if (grid < 2) throw Error(ErrorKind::DomainError, "phase chart grid must be at least 2");
  PhaseChart out;
  out.window = window;
  out.grid = grid;
  out.a = sd.a;
  out.b = sd.b;
  out.c = sd.c;
  out.signs.assign(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid), 0);
  for (int iy = 0; iy < grid; ++iy) {
    const double y = window.y0 + (window.y1 - window.y0) * iy / (grid - 1);
    for (int ix = 0; ix < grid; ++ix) {
      const double xr = window.x0 + (window.x1 - window.x0) * ix / (grid - 1);
      int sign = 0;
      try {
        sign = re_phi_tilde(ComplexHP(HpReal(xr), HpReal(y)), sd).sign();
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularPoint && e.kind() != ErrorKind::Overflow) throw;
      }
      out.signs[static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid) + static_cast<std::size_t>(ix)] = sign;
    }
  }
  return out;
}

HpReal winding_angle(const std::vector<ComplexHP>& path) {
  HpReal total;
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (path[k - 1].is_zero() || path[k].is_zero()) continue;
    total += arg(path[k] * conj(path[k - 1]));
  }
  return total;
}

// ---------------------------------------------------------------------------
// Boundary tracing

namespace {

struct RaySample {
  HpReal radius;
  BranchState state;
  HpReal value;
};

class RayTracer {
 public:
  RayTracer(const BranchTracker& tracker, const HpReal& theta, double tolerance, int samples)
      : tracker_(tracker), theta_(theta), tolerance_(tolerance), samples_(samples) {}

  // Innermost crossing starting from the tracked state on the anchor circle.
  std::pair<ComplexHP, HpReal> crossing(const BranchState& on_circle) const {
    const HpReal outer = abs(tracker_.corner()) * HpReal(3);
    const HpReal inner(0.05);
    std::vector<RaySample> samples;
    samples.reserve(static_cast<std::size_t>(samples_) + 1);
    BranchState cur = tracker_.advance(on_circle, point(outer));
    for (int j = 0; j <= samples_; ++j) {
      const HpReal rho = outer - (outer - inner) * HpReal(j) / HpReal(samples_);
      cur = tracker_.advance(cur, point(rho));
      samples.push_back({rho, cur, value(cur)});
    }
    // samples run outward-to-inward; scan from the inside.
    std::vector<std::pair<std::size_t, std::size_t>> brackets;  // (outer index, inner index) on a finer list
    std::vector<RaySample> fine;
    for (std::size_t k = samples.size(); k-- > 1;) {
      const RaySample& in = samples[k];
      const RaySample& out = samples[k - 1];
      if (in.value.sign() != out.value.sign()) return refine(out, in);
      // Near-tangential double crossings hide between samples at local
      // minima of |F|; probe those intervals more densely.
      const bool local_min = k + 1 < samples.size() && abs(in.value) < abs(samples[k + 1].value) &&
                             abs(in.value) <= abs(out.value);
      if (local_min) {
        const RaySample& deeper = samples[k + 1];
        RaySample prev = deeper;
        const int probes = 32;
        for (int p = 1; p <= probes; ++p) {
          const HpReal rho = deeper.radius + (out.radius - deeper.radius) * HpReal(p) / HpReal(probes);
          BranchState s = tracker_.advance(prev.state, point(rho));
          RaySample next{rho, s, value(s)};
          if (next.value.sign() != prev.value.sign()) return refine(next, prev);
          prev = std::move(next);
        }
      }
    }
    throw Error(ErrorKind::NoCrossing, "no sign change of the boundary function on the ray at angle " +
                                           theta_.to_string(12) + " for r = " + tracker_.r().to_string(8));
  }

 private:
  ComplexHP point(const HpReal& rho) const { return ComplexHP::polar(rho, theta_); }

  // Sampling evaluates F alone; the located crossing gets the full checks.
  HpReal value(const BranchState& s) const {
    SpectralData sd;
    sd.x = s.x;
    sd.r = tracker_.r();
    sd.Q = s.Q;
    sd.Rc = s.Rc;
    const ComplexHP q2 = s.Q * s.Q;
    sd.S = q2 * s.Q * (HpReal(1) + sd.r) + s.x * q2 * (sqrt(sd.r) * HpReal(2));
    return boundary_expression(sd);
  }

  HpReal checked_value(const BranchState& s) const {
    return boundary_value(build_spectral(s.x, s.Q, s.Rc, tracker_.r(), tracker_.corner(), {})).value;
  }

  // Illinois regula falsi on [inner, outer]; states continue from `outer`.
  std::pair<ComplexHP, HpReal> refine(const RaySample& outer, const RaySample& inner) const {
    HpReal ro = outer.radius;
    HpReal ri = inner.radius;
    HpReal fo = outer.value;
    HpReal fi = inner.value;
    const HpReal tol(tolerance_);
    int side = 0;
    HpReal best_r = abs(fo) < abs(fi) ? ro : ri;
    HpReal best_f = abs(fo) < abs(fi) ? fo : fi;
    for (int iter = 0; iter < 200; ++iter) {
      HpReal rho = (ri * fo - ro * fi) / (fo - fi);
      if (!(rho > ri && rho < ro)) rho = (ri + ro) / HpReal(2);
      const BranchState s = tracker_.advance(outer.state, point(rho));
      const HpReal f = value(s);
      if (abs(f) < abs(best_f)) {
        best_f = f;
        best_r = rho;
      }
      if (abs(f) <= tol * HpReal(1e-3) && ro - ri <= tol) break;
      if (f.sign() == fo.sign()) {
        ro = rho;
        fo = f;
        if (side == 1) fi /= HpReal(2);
        side = 1;
      } else {
        ri = rho;
        fi = f;
        if (side == -1) fo /= HpReal(2);
        side = -1;
      }
      if (ro - ri <= tol * HpReal(1e-3)) break;
    }
    const BranchState final_state = tracker_.advance(outer.state, point(best_r));
    return {point(best_r), abs(checked_value(final_state))};
  }

  const BranchTracker& tracker_;
  HpReal theta_;
  double tolerance_;
  int samples_;
};

// F at a corner: the double root of the Q quartic is explicit and R_c = 0.
HpReal corner_residual(const ComplexHP& xc, const HpReal& r) {
  const HpReal sqrt_r = sqrt(r);
  const HpReal one_r = HpReal(1) + r;
  const ComplexHP x2 = xc * xc;
  const ComplexHP q = (ComplexHP(r * r * HpReal(4) + r * HpReal(4) + HpReal(4)) - x2 * x2 * (r * r)) /
                      ((xc * x2 * r + xc * ((HpReal(1) - r) * HpReal(2))) * (sqrt_r * one_r * HpReal(2)));
  SpectralData sd;
  sd.x = xc;
  sd.r = r;
  sd.Q = q;
  sd.S = q * q * q * one_r + xc * q * q * (sqrt_r * HpReal(2));
  sd.c = ComplexHP(-2) / (q * one_r);
  sd.Rc = ComplexHP();
  return abs(boundary_expression(sd));
}

}  // namespace

ComplexHP boundary_crossing_on_ray(const HpReal& r, const HpReal& theta, double tolerance) {
  const BranchTracker& tracker = branch_tracker(r);
  const TraceOptions defaults;
  RayTracer ray(tracker, theta, tolerance, defaults.radial_samples);
  return ray.crossing(tracker.arc(tracker.anchor(), theta)).first;
}

BoundaryCurve trace_boundary(const HpReal& r, const TraceOptions& options) {
  if (options.samples_per_quadrant < 1) throw Error(ErrorKind::DomainError, "samples per quadrant must be positive");
  const BranchTracker& tracker = branch_tracker(r);
  const ComplexHP xc = tracker.corner();
  const HpReal pi = HpReal::pi();
  const HpReal tc = arg(xc);
  const HpReal tc2 = pi - tc;
  const HpReal skip(1e-9);

  struct Entry {
    HpReal theta;
    BranchState on_circle;
    ComplexHP point;
    HpReal residual;
    bool corner = false;
  };
  std::vector<Entry> upper;
  const int rays = 2 * options.samples_per_quadrant;
  BranchState sweep = tracker.anchor();
  for (int k = 0; k <= rays; ++k) {
    const HpReal theta = pi * HpReal(k) / HpReal(rays);
    sweep = tracker.arc(sweep, theta);
    if (abs(theta - tc) < skip || abs(theta - tc2) < skip) continue;
    upper.push_back({theta, sweep, {}, {}, false});
  }
  for (auto& e : upper) {
    RayTracer ray(tracker, e.theta, options.tolerance, options.radial_samples);
    auto [p, res] = ray.crossing(e.on_circle);
    e.point = p;
    e.residual = res;
  }
  const ComplexHP left_corner = -conj(xc);
  const auto insert_corner = [&](const ComplexHP& x, const HpReal& theta) {
    auto pos = std::find_if(upper.begin(), upper.end(), [&](const Entry& e) { return e.theta > theta; });
    upper.insert(pos, Entry{theta, {}, x, corner_residual(x, r), true});
  };
  insert_corner(xc, tc);
  insert_corner(left_corner, tc2);

  // Extra rays wherever consecutive points are too far apart.
  const HpReal gap(options.max_point_gap);
  for (int pass = 0; pass < 12; ++pass) {
    bool inserted = false;
    std::vector<Entry> next;
    next.reserve(upper.size() * 2);
    for (std::size_t k = 0; k < upper.size(); ++k) {
      if (k > 0 && dist(upper[k - 1].point, upper[k].point) > gap) {
        const Entry& lo = upper[k - 1];
        const Entry& hi = upper[k];
        const HpReal theta = (lo.theta + hi.theta) / HpReal(2);
        const Entry& base = lo.corner ? hi : lo;
        const BranchState on_circle = tracker.arc(base.corner ? tracker.anchor() : base.on_circle, theta);
        RayTracer ray(tracker, theta, options.tolerance, options.radial_samples);
        auto [p, res] = ray.crossing(on_circle);
        next.push_back({theta, on_circle, p, res, false});
        inserted = true;
      }
      next.push_back(upper[k]);
    }
    upper = std::move(next);
    if (!inserted) break;
  }

  BoundaryCurve out;
  out.r = r;
  out.corner = xc;
  for (const auto& e : upper) {
    out.points.push_back(e.point);
    out.residuals.push_back(e.residual);
    out.is_corner.push_back(e.corner);
  }
  for (std::size_t k = upper.size() - 1; k-- > 1;) {
    out.points.push_back(conj(upper[k].point));
    out.residuals.push_back(upper[k].residual);
    out.is_corner.push_back(upper[k].corner);
  }
  out.real_axis_crossing = upper.front().point.re;
  const HpReal half_pi = pi / HpReal(2);
  const auto vertical = std::find_if(upper.begin(), upper.end(), [&](const Entry& e) { return abs(e.theta - half_pi) < skip; });
  if (vertical != upper.end()) {
    out.imaginary_axis_crossing = vertical->point.im;
  } else {
    RayTracer ray(tracker, half_pi, options.tolerance, options.radial_samples);
    out.imaginary_axis_crossing = ray.crossing(tracker.arc(tracker.anchor(), half_pi)).first.im;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sigma level line

std::vector<ComplexHP> trace_sigma(const SpectralData& sd, int max_steps) {
  const HpReal length = dist(sd.a, sd.b);
  if (length.is_zero()) throw Error(ErrorKind::TraceDiverged, "band endpoints coincide");
  const HpReal rho0 = length * HpReal(1e-3);
  const HpReal two_pi = HpReal::pi() * HpReal(2);

  // Zero-level directions leaving a: genuine zeros on a small circle, as
  // opposed to the sign jump where the circle crosses the cut.
  const int probes = 720;
  std::vector<HpReal> values(probes);
  HpReal peak;
  const auto probe_angle = [&](int k) { return two_pi * (HpReal(k) + HpReal(0.5)) / HpReal(probes); };
  for (int k = 0; k < probes; ++k) {
    HpReal angle = probe_angle(k);
    try {
      values[static_cast<std::size_t>(k)] = re_phi_tilde(sd.a + ComplexHP::polar(rho0, angle), sd);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularPoint) throw;
      angle += two_pi * HpReal(1e-6) / HpReal(probes);
      values[static_cast<std::size_t>(k)] = re_phi_tilde(sd.a + ComplexHP::polar(rho0, angle), sd);
    }
    peak = max(peak, abs(values[static_cast<std::size_t>(k)]));
  }
  std::vector<HpReal> directions;
  for (int k = 0; k < probes; ++k) {
    const HpReal& v0 = values[static_cast<std::size_t>(k)];
    const HpReal& v1 = values[static_cast<std::size_t>((k + 1) % probes)];
    if (v0.sign() == v1.sign()) continue;
    HpReal lo = probe_angle(k);
    HpReal hi = probe_angle(k + 1);
    HpReal flo = v0;
    HpReal fmid;
    bool on_cut = false;
    for (int it = 0; it < 80 && !on_cut; ++it) {
      const HpReal mid = (lo + hi) / HpReal(2);
      try {
        fmid = re_phi_tilde(sd.a + ComplexHP::polar(rho0, mid), sd);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularPoint) throw;
        on_cut = true;
        break;
      }
      if (fmid.sign() == flo.sign()) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    if (!on_cut && abs(fmid) <= peak * HpReal(1e-12)) directions.push_back((lo + hi) / HpReal(2));
  }

  const HpReal origin_guard = length * HpReal(1e-3);
  const HpReal escape = (abs(sd.a) + abs(sd.b) + HpReal(1)) * HpReal(100);
  const HpReal zero_tol(1e-14);
  for (const auto& phi0 : directions) {
    std::vector<ComplexHP> path = {sd.a};
    ComplexHP z = sd.a + ComplexHP::polar(rho0, phi0);
    path.push_back(z);
    ComplexHP tangent = (z - sd.a) / rho0;
    HpReal h = length * HpReal(0.01);
    bool reached = false;
    bool failed = false;
    for (int step = 0; step < max_steps && !failed; ++step) {
      if (dist(z, sd.b) <= h * HpReal(2)) {
        path.push_back(sd.b);
        reached = true;
        break;
      }
      ComplexHP d;
      try {
        d = ComplexHP::i() * conj(phi_tilde_prime(z, sd));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularPoint) throw;
        failed = true;
        break;
      }
      const HpReal dn = abs(d);
      if (dn.is_zero()) {
        failed = true;
        break;
      }
      d /= dn;
      if ((d * conj(tangent)).re.sign() < 0) d = -d;
      bool accepted = false;
      while (!accepted) {
        ComplexHP cand = z + d * h;
        bool converged = false;
        try {
          for (int it = 0; it < 12; ++it) {
            const HpReal f = re_phi_tilde(cand, sd);
            if (abs(f) <= zero_tol) {
              converged = true;
              break;
            }
            const ComplexHP g = phi_tilde_prime(cand, sd);
            cand -= conj(g) * (f / norm(g));
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::SingularPoint) throw;
          converged = false;
        }
        if (converged && dist(cand, z) <= h * HpReal(2) && abs(cand) > origin_guard) {
          tangent = (cand - z) / dist(cand, z);
          z = cand;
          path.push_back(z);
          accepted = true;
          h = min(h * HpReal(1.25), length * HpReal(0.02));
        } else {
          h /= HpReal(2);
          if (h < length * HpReal(1e-9)) {
            failed = true;
            break;
          }
        }
      }
      if (abs(z) > escape) failed = true;
    }
    if (reached && winding_angle(path).sign() < 0) return path;
  }
  throw Error(ErrorKind::TraceDiverged, "no clockwise level line from a reached b within " + std::to_string(max_steps) +
                                            " steps at x = " + show(sd.x));
}

}  // namespace p4r
