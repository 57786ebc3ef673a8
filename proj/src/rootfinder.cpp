#include "p4r/rootfinder.hpp"

#include <random>
#include <string>

#include "p4r/error.hpp"
#include "p4r/hermite.hpp"
#include "p4r/hp_poly.hpp"

namespace p4r {

namespace {

// Scale-aware residual |p(z)| / (max|c| * max(1,|z|)^deg).
HpReal backward_residual(const HpPoly& p, const HpReal& max_coeff, const ComplexHP& z) {
  const HpReal value = abs(p.eval(z));
  const HpReal radius = max(HpReal(1), abs(z));
  return value / (max_coeff * pow(radius, static_cast<long>(p.degree())));
}

std::vector<ComplexHP> initial_guesses(std::size_t count, const HpReal& bound, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double scales[3] = {0.5, 1.0, 1.5};
  std::vector<ComplexHP> out;
  out.reserve(count);
  const HpReal two_pi = ldexp(HpReal::pi(), 1);
  for (int ring = 0; ring < 3; ++ring) {
    const std::size_t on_ring = count / 3 + (static_cast<std::size_t>(ring) < count % 3 ? 1 : 0);
    if (on_ring == 0) continue;
    const double offset = unit(rng);
    const HpReal radius = bound * HpReal(scales[ring]);
    for (std::size_t k = 0; k < on_ring; ++k) {
      const double jitter = 0.2 * (unit(rng) - 0.5);
      const HpReal angle = two_pi * HpReal((static_cast<double>(k) + offset + jitter) / static_cast<double>(on_ring));
      out.push_back(ComplexHP::polar(radius, angle));
    }
  }
  return out;
}

}  // namespace

HpReal cauchy_bound(const ExactPoly& p) {
  if (p.is_constant()) throw Error(ErrorKind::DomainError, "Cauchy bound of a constant polynomial");
  const std::size_t d = p.degree();
  std::vector<HpReal> a(d + 1);
  for (std::size_t k = 0; k <= d; ++k) a[k] = abs(HpReal(p.coeff(k)));
  // excess(t) = sum_{k<d} a_k t^{k-d} - a_d decreases in t and changes sign
  // exactly once, at the bound; bracket it and bisect geometrically.
  auto excess = [&](const HpReal& t) {
    const HpReal inv = HpReal(1) / t;
    HpReal acc;
    for (std::size_t k = 0; k < d; ++k) acc = (acc + a[k]) * inv;
    return acc - a[d];
  };
  HpReal top;
  for (std::size_t k = 0; k < d; ++k) top = max(top, a[k] / a[d]);
  if (top.is_zero()) return HpReal(0);
  HpReal hi = HpReal(1) + top;
  HpReal lo = ldexp(hi, -1);
  while (excess(lo).sign() <= 0) {
    hi = lo;
    lo = ldexp(lo, -1);
  }
  for (int iter = 0; iter < 80; ++iter) {
    const HpReal mid = sqrt(lo * hi);
    if (excess(mid).sign() > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const HpReal t = hi;
  return t * HpReal(1.0000001);
}

RootSet find_roots(const ExactPoly& p, unsigned precision_bits, const RootFinderOptions& options) {
  if (p.is_zero() || p.is_constant()) throw Error(ErrorKind::DomainError, "root finding needs a nonconstant polynomial");
  PrecisionScope scope(precision_bits);
  const std::size_t degree = p.degree();

  // Exact zero roots come from vanishing low-order coefficients.
  std::size_t zero_roots = 0;
  while (sgn(p.coeff(zero_roots)) == 0) ++zero_roots;
  const ExactPoly reduced(std::vector<mpq_class>(p.coeffs().begin() + static_cast<long>(zero_roots), p.coeffs().end()));
  const std::size_t d = reduced.degree();

  RootSet out;
  out.source_degree = degree;
  out.precision_bits = precision_bits;

  std::vector<ComplexHP> z;
  if (d > 0) {
    const HpPoly hp(reduced);
    z = initial_guesses(d, cauchy_bound(reduced), options.seed);
    std::vector<bool> done(d, false);
    const HpReal unit_roundoff = ldexp(HpReal(1), -static_cast<long>(precision_bits));
    const HpReal stop_factor = unit_roundoff * HpReal(static_cast<long>(8 * d + 8));
    HpReal sr, si, dr, di, den, t;
    int iter = 0;
    std::size_t remaining = d;
    for (; iter < options.max_iterations && remaining > 0; ++iter) {
      for (std::size_t i = 0; i < d; ++i) {
        if (done[i]) continue;
        ComplexHP value;
        ComplexHP slope;
        hp.eval_with_derivative(z[i], value, slope);
        if (abs(value) <= stop_factor * hp.abs_scale(abs(z[i]))) {
          done[i] = true;
          --remaining;
          continue;
        }
        mpfr_set_zero(sr.raw(), 1);
        mpfr_set_zero(si.raw(), 1);
        for (std::size_t j = 0; j < d; ++j) {
          if (j == i) continue;
          mpfr_sub(dr.raw(), z[i].re.raw(), z[j].re.raw(), MPFR_RNDN);
          mpfr_sub(di.raw(), z[i].im.raw(), z[j].im.raw(), MPFR_RNDN);
          mpfr_sqr(den.raw(), dr.raw(), MPFR_RNDN);
          mpfr_fma(den.raw(), di.raw(), di.raw(), den.raw(), MPFR_RNDN);
          mpfr_div(t.raw(), dr.raw(), den.raw(), MPFR_RNDN);
          mpfr_add(sr.raw(), sr.raw(), t.raw(), MPFR_RNDN);
          mpfr_div(t.raw(), di.raw(), den.raw(), MPFR_RNDN);
          mpfr_sub(si.raw(), si.raw(), t.raw(), MPFR_RNDN);
        }
        if (slope.is_zero()) {
          // Nudge off a critical point.
          z[i] += ComplexHP(ldexp(HpReal(1), -20), ldexp(HpReal(1), -21)) * max(HpReal(1), abs(z[i]));
          continue;
        }
        const ComplexHP ratio = value / slope;
        const ComplexHP correction = ratio / (ComplexHP(1) - ratio * ComplexHP(sr, si));
        z[i] -= correction;
        if (!z[i].is_finite()) throw Error(ErrorKind::NoConvergence, "Aberth iterate left the representable range");
        if (abs(correction) <= ldexp(abs(z[i]), -static_cast<long>(precision_bits) + 4)) {
          done[i] = true;
          --remaining;
        }
      }
    }
    out.iterations = iter;
    if (remaining > 0) {
      HpReal worst;
      for (std::size_t i = 0; i < d; ++i) {
        if (!done[i]) worst = max(worst, abs(hp.eval(z[i])) / hp.abs_scale(abs(z[i])));
      }
      throw Error(ErrorKind::NoConvergence, std::to_string(remaining) + " roots unconverged after " +
                                                std::to_string(iter) + " iterations, worst relative residual " +
                                                worst.to_string(6));
    }

    // Newton polish: keep a step only if it lowers |p|.
    for (auto& root : z) {
      for (int step = 0; step < 3; ++step) {
        ComplexHP value;
        ComplexHP slope;
        hp.eval_with_derivative(root, value, slope);
        if (value.is_zero() || slope.is_zero()) break;
        const ComplexHP next = root - value / slope;
        if (!(abs(hp.eval(next)) < abs(value))) break;
        root = next;
      }
    }
  }

  for (std::size_t k = 0; k < zero_roots; ++k) z.insert(z.begin(), ComplexHP());

  const HpPoly full(p);
  const HpReal max_coeff = full.max_abs_coeff();
  const HpReal accept = ldexp(HpReal(1), -static_cast<long>(precision_bits / 2));
  HpReal worst;
  for (const auto& root : z) {
    HpReal r = backward_residual(full, max_coeff, root);
    worst = max(worst, r);
    out.residuals.push_back(std::move(r));
  }
  if (worst > accept) {
    throw Error(ErrorKind::NoConvergence, "root residual " + worst.to_string(6) + " exceeds " + accept.to_string(6) +
                                              " after " + std::to_string(out.iterations) + " iterations");
  }

  const long cluster_exp = -static_cast<long>(precision_bits / 4);
  out.clustered.assign(z.size(), false);
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      const HpReal scale = max(HpReal(1), max(abs(z[i]), abs(z[j])));
      if (dist(z[i], z[j]) < ldexp(scale, cluster_exp)) {
        out.clustered[i] = true;
        out.clustered[j] = true;
      }
    }
  }
  out.roots = std::move(z);
  return out;
}

RootSet scaled_zero_cloud(unsigned m, unsigned n, ScaleVariable scale, unsigned precision_bits,
                          const RootFinderOptions& options) {
  if (m < 1 || n < 1) throw Error(ErrorKind::DomainError, "zero cloud needs m, n >= 1");
  RootSet out = find_roots(gen_hermite(m, n), precision_bits, options);
  PrecisionScope scope(precision_bits);
  const HpReal factor = sqrt(HpReal(static_cast<long>(scale == ScaleVariable::M ? m : n)));
  for (auto& root : out.roots) root /= factor;
  return out;
}

}  // namespace p4r
