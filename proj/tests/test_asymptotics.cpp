#include <cmath>
#include <vector>

#include "doctest.h"
#include "p4r/asymptotics.hpp"
#include "p4r/error.hpp"
#include "p4r/painleve4.hpp"
#include "p4r/quartic.hpp"

using namespace p4r;

namespace {

ComplexHP cx(double re, double im = 0) { return ComplexHP(HpReal(re), HpReal(im)); }

}  // namespace

TEST_CASE("closed-form quartic") {
  const std::vector<ComplexHP> roots = {cx(1, 2), cx(-3, 0.5), cx(0.25), cx(-0.7, -1.1)};
  // Expand (z - r0)(z - r1)(z - r2)(z - r3) with c[k] the z^k coefficient.
  std::array<ComplexHP, 5> poly = {ComplexHP(1), ComplexHP(), ComplexHP(), ComplexHP(), ComplexHP()};
  int deg = 0;
  for (const auto& z : roots) {
    std::array<ComplexHP, 5> next;
    for (int k = 0; k <= deg + 1; ++k) {
      if (k > 0) next[static_cast<std::size_t>(k)] += poly[static_cast<std::size_t>(k - 1)];
      if (k <= deg) next[static_cast<std::size_t>(k)] -= z * poly[static_cast<std::size_t>(k)];
    }
    poly = next;
    ++deg;
  }
  const auto found = solve_quartic(poly[4], poly[3], poly[2], poly[1], poly[0]);
  for (const auto& z : roots) {
    HpReal best = dist(z, found[0]);
    for (const auto& w : found) best = min(best, dist(z, w));
    CHECK(best < HpReal(1e-40));
  }
  const auto bi = solve_quartic(ComplexHP(1), ComplexHP(), ComplexHP(-5), ComplexHP(), ComplexHP(4));
  for (const auto& w : bi) {
    const HpReal a = abs(w);
    CHECK((abs(a - HpReal(1)) < HpReal(1e-40) || abs(a - HpReal(2)) < HpReal(1e-40)));
  }
  const auto dbl = solve_quartic(std::complex<double>(2), 0.0, std::complex<double>(-10), 0.0, std::complex<double>(8));
  for (const auto& w : dbl) CHECK((std::abs(std::abs(w) - 1) < 1e-13 || std::abs(std::abs(w) - 2) < 1e-13));
  const ComplexHP z = cx(-8, 0);
  const ComplexHP root = cbrt(z);
  CHECK(dist(root * root * root, z) < HpReal(1e-45));
}

TEST_CASE("corner point") {
  const ComplexHP xc = corner_point(HpReal(1));
  const ComplexHP x4 = xc * xc * xc * xc;
  const HpReal target = HpReal(36) - HpReal(24) * sqrt(HpReal(3));
  CHECK(dist(x4, ComplexHP(target)) < HpReal(1e-20));
  CHECK(xc.re.to_double() == doctest::Approx(1.086).epsilon(5e-4));
  CHECK(xc.im.to_double() == doctest::Approx(1.086).epsilon(5e-4));
  CHECK(abs(xc.re - xc.im) < HpReal(1e-40));
  CHECK(abs(abs(xc) - sqrt(sqrt(abs(target)))) < HpReal(1e-40));
  for (double r : {1.0, 2.0, 5.0, 10.0, 30.0}) {
    CAPTURE(r);
    const ComplexHP x = corner_point(HpReal(r));
    CHECK(x.re.sign() > 0);
    CHECK(x.im.sign() > 0);
    CHECK(abs(corner_polynomial(x, HpReal(r))) < HpReal(1e-24));
  }
  CHECK_THROWS_AS(corner_point(HpReal(-1)), Error);
}

TEST_CASE("Q branch and spectral data") {
  const HpReal one(1);
  const SpectralData far = spectral_data(cx(10), one);
  CHECK(abs(far.Q + ComplexHP(HpReal(10))) <= HpReal(0.02));
  CHECK(abs(q_quartic(far.Q, far.x, one)) < HpReal(1e-24));

  const SpectralData sd = spectral_data(cx(1.4), one);
  CHECK(sd.a.im < sd.b.im);
  CHECK(sd.Q.re.to_double() == doctest::Approx(-1.53301175).epsilon(1e-8));
  CHECK_FALSE(sd.track_path.empty());

  std::vector<ComplexHP> probes;
  for (int k = 0; k < 24; ++k) {
    const double t = 2 * M_PI * (k + 0.37) / 24;
    probes.push_back(cx(2.2 * std::cos(t), 2.2 * std::sin(t)));
  }
  probes.push_back(cx(0.3, 0.2));
  probes.push_back(cx(-0.6, -0.1));
  for (double r : {1.0, 3.0, 10.0}) {
    const HpReal rr(r);
    const HpReal sqrt_r = sqrt(rr);
    for (const auto& x : probes) {
      CAPTURE(r);
      CAPTURE(x.to_complex());
      const SpectralData s = spectral_data(x, rr);
      CHECK(abs(s.a + s.b - s.S) < HpReal(1e-24));
      CHECK(abs(s.a * s.b - s.Q * s.Q) < HpReal(1e-24));
      CHECK(dist(s.c, ComplexHP(-2) / (s.Q * (HpReal(1) + rr))) < HpReal(1e-30));
      CHECK(abs(s.Rc * s.Rc - (s.c * s.c - s.S * s.c + s.Q * s.Q)) < HpReal(1e-24));
      const ComplexHP q2 = s.Q * s.Q;
      const ComplexHP m1 = (q2 * s.Q * (HpReal(1) + rr) - s.S) / (q2 * HpReal(2)) + x * sqrt_r;
      const ComplexHP m2 = (q2 * HpReal(4) - q2 * s.Q * s.S * (HpReal(2) + rr * HpReal(2)) - s.S * s.S) /
                               (q2 * q2 * HpReal(8)) - ComplexHP((rr - HpReal(1)) / HpReal(2));
      CHECK(abs(m1) < HpReal(1e-20));
      CHECK(abs(m2) < HpReal(1e-20));
    }
  }
  // Continuity: Q varies smoothly across the real axis outside the cuts.
  const SpectralData up = spectral_data(cx(3, 1e-9), one);
  const SpectralData down = spectral_data(cx(3, -1e-9), one);
  CHECK(dist(up.Q, down.Q) < HpReal(1e-8));
  // The negative real axis is reached through the upper half-plane and the
  // lower half-plane; both must agree away from the cuts.
  const SpectralData left_up = spectral_data(cx(-3, 1e-9), one);
  const SpectralData left_down = spectral_data(cx(-3, -1e-9), one);
  CHECK(dist(left_up.Q, left_down.Q) < HpReal(1e-8));
  // The quartic is invariant under (x, Q) -> (-x, -Q).
  CHECK(dist(left_up.Q, -up.Q) < HpReal(1e-8));

  CHECK_THROWS_AS(spectral_data(cx(0, 0), one), Error);
  const ComplexHP xc = corner_point(one);
  CHECK_THROWS_AS(spectral_data(xc * HpReal(0.5), one), Error);
}

TEST_CASE("sector ordering") {
  const ComplexHP xc = corner_point(HpReal(1));
  CHECK(sector_of(cx(2), xc) == 0);
  CHECK(sector_of(cx(0, 2), xc) == 1);
  CHECK(sector_of(cx(-2, 0.1), xc) == 2);
  CHECK(sector_of(cx(0.1, -2), xc) == 3);
  const SpectralData top = spectral_data(cx(0.2, 2.0), HpReal(1));
  CHECK(top.a.re > top.b.re);
}

TEST_CASE("phase function") {
  for (double r : {1.0, 10.0}) {
    CAPTURE(r);
    const SpectralData sd = spectral_data(cx(1.4, 0.2), HpReal(r));
    CHECK(abs(re_phi_tilde(sd.a, sd)) < HpReal(1e-18));
    CHECK(abs(re_phi_tilde(sd.b, sd)) < HpReal(1e-18));
    const HpReal f1 = re_phi_tilde(cx(50), sd);
    const HpReal f2 = re_phi_tilde(cx(500), sd);
    CHECK(f1.sign() < 0);
    CHECK(f2 < f1);
    // R~ behaves like z - S/2 at infinity.
    const ComplexHP big = cx(1e6, 3e5);
    CHECK(abs(r_tilde(big, sd) - big + sd.S / HpReal(2)) < HpReal(1e-4));
    // Derivative agrees with a central difference of Re phi~.
    const ComplexHP z = cx(2.5, -1.0);
    const HpReal h(1e-20);
    const HpReal dre = (re_phi_tilde(z + ComplexHP(h), sd) - re_phi_tilde(z - ComplexHP(h), sd)) / (h * HpReal(2));
    CHECK(abs(dre - phi_tilde_prime(z, sd).re) < HpReal(1e-15));
    CHECK_THROWS_AS(re_phi_tilde(ComplexHP(), sd), Error);
    CHECK_THROWS_AS(re_phi_tilde(sd.S / HpReal(2), sd), Error);
  }
}

TEST_CASE("boundary function") {
  const HpReal one(1);
  const BoundaryValue far = boundary_value(spectral_data(cx(3), one));
  CHECK(far.value.sign() > 0);
  CHECK(abs(far.value - far.cross_check) < HpReal(1e-14));
  CHECK(abs(boundary_function(cx(1.0253), one)) < HpReal(1e-3));
  // The r = 10 crossing sits at 1.2955611.
  CHECK(abs(boundary_function(cx(1.2955611), HpReal(10))) < HpReal(1e-5));
  CHECK(boundary_function(cx(0.5), one).sign() < 0);
  for (int k = 0; k < 40; ++k) {
    const double t = 2 * M_PI * (k + 0.5) / 40;
    const ComplexHP x = cx(2.5 * std::cos(t), 2.5 * std::sin(t));
    const BoundaryValue bv = boundary_value(spectral_data(x, HpReal(2)));
    CHECK(abs(bv.value - bv.cross_check) < HpReal(1e-14));
  }
}

TEST_CASE("boundary crossings on rays") {
  const ComplexHP one = boundary_crossing_on_ray(HpReal(1), HpReal(0));
  CHECK(one.re.to_double() == doctest::Approx(1.0253).epsilon(5e-4 / 1.0253));
  const ComplexHP ten = boundary_crossing_on_ray(HpReal(10), HpReal(0));
  CHECK(ten.re.to_double() == doctest::Approx(1.2953).epsilon(5e-4 / 1.2953));
  const ComplexHP vertical = boundary_crossing_on_ray(HpReal(1), HpReal::pi() / HpReal(2));
  CHECK(abs(vertical.im - one.re) < HpReal(1e-10));
}

TEST_CASE("coarse boundary trace") {
  TraceOptions opts;
  opts.samples_per_quadrant = 6;
  opts.radial_samples = 60;
  opts.max_point_gap = 0.3;
  const BoundaryCurve curve = trace_boundary(HpReal(1), opts);
  const ComplexHP xc = corner_point(HpReal(1));
  int corners = 0;
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    if (curve.is_corner[k]) {
      ++corners;
      CHECK(abs(abs(curve.points[k]) - abs(xc)) < HpReal(1e-30));
    }
    CHECK(curve.residuals[k] <= HpReal(1e-12));
    const auto& next = curve.points[(k + 1) % curve.points.size()];
    CHECK(dist(curve.points[k], next) <= HpReal(0.3));
    HpReal best = dist(conj(curve.points[k]), curve.points[0]);
    for (const auto& w : curve.points) best = min(best, dist(conj(curve.points[k]), w));
    CHECK(best < HpReal(1e-10));
  }
  CHECK(corners == 4);
  CHECK(curve.real_axis_crossing.to_double() == doctest::Approx(1.0253058).epsilon(1e-7));
  CHECK(curve.imaginary_axis_crossing.to_double() == doctest::Approx(1.0253058).epsilon(1e-7));
}

TEST_CASE("sigma level line") {
  const std::vector<std::pair<double, ComplexHP>> cases = {{1.0, cx(1.4, 0.3)}, {10.0, cx(1.4, 0.3)}, {1.0, cx(1.2)}};
  for (const auto& [r, x] : cases) {
    CAPTURE(r);
    CAPTURE(x.to_complex());
    const SpectralData sd = spectral_data(x, HpReal(r));
    const std::vector<ComplexHP> path = trace_sigma(sd);
    REQUIRE(path.size() > 3);
    CHECK(dist(path.front(), sd.a) < HpReal(1e-10));
    CHECK(dist(path.back(), sd.b) < HpReal(1e-6));
    for (std::size_t k = 1; k + 1 < path.size(); ++k) CHECK(abs(re_phi_tilde(path[k], sd)) <= HpReal(1e-10));
    CHECK(winding_angle(path).sign() < 0);
  }
  const std::vector<ComplexHP> square = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1), cx(1, 0)};
  CHECK(std::abs(winding_angle(square).to_double() - 2 * M_PI) < 1e-30);
}

TEST_CASE("asymptotic formulas") {
  for (double r : {1.0, 4.0, 10.0}) {
    const HpReal rr(r);
    for (int k = 0; k < 12; ++k) {
      const double t = 2 * M_PI * (k + 0.25) / 12;
      const SpectralData sd = spectral_data(cx(3 * std::cos(t), 3 * std::sin(t)), rr);
      const ComplexHP sum = asymptotic_w(Family::I, sd) + asymptotic_w(Family::II, sd) + asymptotic_w(Family::III, sd) +
                            sd.x * (sqrt(rr) * HpReal(2));
      CHECK(abs(sum) < HpReal(1e-20));
    }
  }
  // Regression values from the exact solutions at r = 1, x = 1.4.
  const ComplexHP x = cx(1.4);
  const HpReal one(1);
  const ComplexHP wi = asymptotic_w(Family::I, x, one);
  const ComplexHP wii = asymptotic_w(Family::II, x, one);
  CHECK(wi.re.to_double() == doctest::Approx(0.785322471017878593).epsilon(1e-14));
  CHECK(wii.re.to_double() == doctest::Approx(-0.519298971082872627).epsilon(1e-14));
  const double e5 = abs(scaled_eval(build_solution(Family::I, 5, 5), x) - wi).to_double();
  const double e10 = abs(scaled_eval(build_solution(Family::I, 10, 10), x) - wi).to_double();
  CHECK(e5 == doctest::Approx(0.026910301).epsilon(1e-6));
  CHECK(e10 == doctest::Approx(0.01274285).epsilon(1e-6));
  const double ratio = e10 / e5;
  CHECK(ratio > 0.3);
  CHECK(ratio < 0.7);
}

TEST_CASE("phase chart") {
  const SpectralData sd = spectral_data(cx(1.2), HpReal(1));
  const PhaseChart chart = phase_chart(sd, {-3, 3, -3, 3}, 41);
  REQUIRE(chart.signs.size() == 41u * 41u);
  CHECK(chart.signs[0] < 0);
  CHECK(chart.signs[41 * 41 - 1] < 0);
  CHECK(chart.signs[20 * 41 + 20] == 0);  // z = 0
  int positive = 0;
  for (int s : chart.signs) positive += s > 0;
  CHECK(positive > 0);
  CHECK_THROWS_AS(phase_chart(sd, {-1, 1, -1, 1}, 1), Error);
}
