#include "p4r/quartic.hpp"

#include <algorithm>
#include <cmath>

#include "p4r/error.hpp"

namespace p4r {

namespace {

ComplexHP horner4(const std::array<ComplexHP, 5>& c, const ComplexHP& z, ComplexHP& slope) {
  ComplexHP value = c[4];
  slope = ComplexHP();
  for (int k = 3; k >= 0; --k) {
    slope = slope * z + value;
    value = value * z + c[static_cast<std::size_t>(k)];
  }
  return value;
}

}  // namespace

ComplexHP cbrt(const ComplexHP& z) {
  if (z.is_zero()) return {};
  const HpReal third = HpReal(1) / HpReal(3);
  return ComplexHP::polar(exp(log(abs(z)) * third), arg(z) * third);
}

std::array<ComplexHP, 4> solve_quartic(const ComplexHP& c4, const ComplexHP& c3, const ComplexHP& c2,
                                       const ComplexHP& c1, const ComplexHP& c0) {
  if (c4.is_zero()) throw Error(ErrorKind::DomainError, "quartic with zero leading coefficient");
  const ComplexHP a = c3 / c4;
  const ComplexHP b = c2 / c4;
  const ComplexHP c = c1 / c4;
  const ComplexHP d = c0 / c4;

  // z = y - a/4 gives y^4 + p y^2 + q y + s = 0.
  const ComplexHP a2 = a * a;
  const ComplexHP shift = a / HpReal(4);
  const ComplexHP p = b - a2 * HpReal(0.375);
  const ComplexHP q = c - a * b / HpReal(2) + a2 * a / HpReal(8);
  const ComplexHP s = d - a * c / HpReal(4) + a2 * b / HpReal(16) - a2 * a2 * HpReal(3) / HpReal(256);

  std::array<ComplexHP, 4> roots;
  const HpReal tiny = ldexp(HpReal(1), -static_cast<long>(working_precision()) + 8);
  const HpReal scale = max(HpReal(1), max(abs(p), max(sqrt(abs(s)), abs(q))));
  if (abs(q) <= tiny * scale) {
    // Biquadratic: y^2 = (-p +- sqrt(p^2 - 4s)) / 2.
    const ComplexHP disc = sqrt(p * p - s * HpReal(4));
    const ComplexHP u1 = (-p + disc) / HpReal(2);
    const ComplexHP u2 = (-p - disc) / HpReal(2);
    const ComplexHP r1 = sqrt(u1);
    const ComplexHP r2 = sqrt(u2);
    roots = {r1, -r1, r2, -r2};
  } else {
    // Resolvent cubic 8m^3 + 8p m^2 + (2p^2 - 8s) m - q^2 = 0, monic form.
    const ComplexHP ra = p;
    const ComplexHP rb = p * p / HpReal(4) - s;
    const ComplexHP rc = -(q * q) / HpReal(8);
    const ComplexHP dp = rb - ra * ra / HpReal(3);
    const ComplexHP dq = ra * ra * ra * HpReal(2) / HpReal(27) - ra * rb / HpReal(3) + rc;
    const ComplexHP delta = sqrt(dq * dq / HpReal(4) + dp * dp * dp / HpReal(27));
    ComplexHP w1 = -dq / HpReal(2) + delta;
    const ComplexHP w2 = -dq / HpReal(2) - delta;
    if (abs(w2) > abs(w1)) w1 = w2;
    const ComplexHP cu = cbrt(w1);
    ComplexHP m;
    HpReal best(-1);
    const ComplexHP omega(HpReal(-0.5), sqrt(HpReal(3)) / HpReal(2));
    ComplexHP rot(1);
    for (int k = 0; k < 3; ++k) {
      const ComplexHP u = cu * rot;
      const ComplexHP cand = u.is_zero() ? -ra / HpReal(3) : u - dp / (u * HpReal(3)) - ra / HpReal(3);
      if (abs(cand) > best) {
        best = abs(cand);
        m = cand;
      }
      rot *= omega;
    }
    const ComplexHP root2m = sqrt(m * HpReal(2));
    const ComplexHP t = q * HpReal(2) / root2m;  // sqrt(2) q / sqrt(m) form
    const ComplexHP e1 = sqrt(-(p * HpReal(2) + m * HpReal(2) + t));
    const ComplexHP e2 = sqrt(-(p * HpReal(2) + m * HpReal(2) - t));
    roots = {(root2m + e1) / HpReal(2), (root2m - e1) / HpReal(2), (-root2m + e2) / HpReal(2),
             (-root2m - e2) / HpReal(2)};
  }

  const std::array<ComplexHP, 5> coeffs = {c0, c1, c2, c3, c4};
  for (auto& z : roots) {
    z -= shift;
    for (int iter = 0; iter < 3; ++iter) {
      ComplexHP slope;
      const ComplexHP value = horner4(coeffs, z, slope);
      if (value.is_zero() || slope.is_zero()) break;
      const ComplexHP next = z - value / slope;
      ComplexHP unused;
      if (!(abs(horner4(coeffs, next, unused)) < abs(value))) break;
      z = next;
    }
  }
  return roots;
}

std::array<std::complex<double>, 4> solve_quartic(std::complex<double> c4, std::complex<double> c3,
                                                  std::complex<double> c2, std::complex<double> c1,
                                                  std::complex<double> c0) {
  using C = std::complex<double>;
  if (c4 == 0.0) throw Error(ErrorKind::DomainError, "quartic with zero leading coefficient");
  const C a = c3 / c4;
  const C b = c2 / c4;
  const C c = c1 / c4;
  const C d = c0 / c4;
  const C a2 = a * a;
  const C p = b - 0.375 * a2;
  const C q = c - a * b / 2.0 + a2 * a / 8.0;
  const C s = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

  std::array<C, 4> roots;
  const double scale = std::max({1.0, std::abs(p), std::sqrt(std::abs(s)), std::abs(q)});
  if (std::abs(q) <= 1e-14 * scale) {
    const C disc = std::sqrt(p * p - 4.0 * s);
    const C r1 = std::sqrt((-p + disc) / 2.0);
    const C r2 = std::sqrt((-p - disc) / 2.0);
    roots = {r1, -r1, r2, -r2};
  } else {
    const C ra = p;
    const C rb = p * p / 4.0 - s;
    const C rc = -(q * q) / 8.0;
    const C dp = rb - ra * ra / 3.0;
    const C dq = 2.0 * ra * ra * ra / 27.0 - ra * rb / 3.0 + rc;
    const C delta = std::sqrt(dq * dq / 4.0 + dp * dp * dp / 27.0);
    C w1 = -dq / 2.0 + delta;
    const C w2 = -dq / 2.0 - delta;
    if (std::abs(w2) > std::abs(w1)) w1 = w2;
    const C cu = std::abs(w1) == 0.0 ? C() : std::polar(std::cbrt(std::abs(w1)), std::arg(w1) / 3.0);
    const C omega(-0.5, std::sqrt(3.0) / 2.0);
    C m;
    double best = -1;
    C rot(1.0);
    for (int k = 0; k < 3; ++k) {
      const C u = cu * rot;
      const C cand = std::abs(u) == 0.0 ? -ra / 3.0 : u - dp / (3.0 * u) - ra / 3.0;
      if (std::abs(cand) > best) {
        best = std::abs(cand);
        m = cand;
      }
      rot *= omega;
    }
    const C root2m = std::sqrt(2.0 * m);
    const C t = 2.0 * q / root2m;
    const C e1 = std::sqrt(-(2.0 * p + 2.0 * m + t));
    const C e2 = std::sqrt(-(2.0 * p + 2.0 * m - t));
    roots = {(root2m + e1) / 2.0, (root2m - e1) / 2.0, (-root2m + e2) / 2.0, (-root2m - e2) / 2.0};
  }
  for (auto& z : roots) {
    z -= a / 4.0;
    for (int iter = 0; iter < 3; ++iter) {
      const C value = (((c4 * z + c3) * z + c2) * z + c1) * z + c0;
      const C slope = ((4.0 * c4 * z + 3.0 * c3) * z + 2.0 * c2) * z + c1;
      if (std::abs(slope) == 0.0) break;
      const C next = z - value / slope;
      const C next_value = (((c4 * next + c3) * next + c2) * next + c1) * next + c0;
      if (!(std::abs(next_value) < std::abs(value))) break;
      z = next;
    }
  }
  return roots;
}

}  // namespace p4r
