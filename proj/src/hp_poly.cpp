#include "p4r/hp_poly.hpp"

#include "p4r/error.hpp"

namespace p4r {

namespace {

// acc = acc * y + c, in place on the raw components.
void horner_step(HpReal& ar, HpReal& ai, const HpReal& yr, const HpReal& yi, const HpReal* c, HpReal& t1,
                 HpReal& t2) {
  mpfr_mul(t1.raw(), ar.raw(), yr.raw(), MPFR_RNDN);
  mpfr_mul(t2.raw(), ai.raw(), yi.raw(), MPFR_RNDN);
  mpfr_sub(t1.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
  mpfr_mul(t2.raw(), ar.raw(), yi.raw(), MPFR_RNDN);
  mpfr_fma(ai.raw(), ai.raw(), yr.raw(), t2.raw(), MPFR_RNDN);
  if (c != nullptr) {
    mpfr_add(ar.raw(), t1.raw(), c->raw(), MPFR_RNDN);
  } else {
    mpfr_swap(ar.raw(), t1.raw());
  }
}

}  // namespace

HpPoly::HpPoly(const ExactPoly& p) {
  coeffs_.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) coeffs_.emplace_back(c);
}

ComplexHP HpPoly::eval(const ComplexHP& y) const {
  if (coeffs_.empty()) return {};
  HpReal ar = coeffs_.back();
  HpReal ai;
  HpReal t1;
  HpReal t2;
  mpfr_prec_round(ar.raw(), static_cast<mpfr_prec_t>(working_precision()), MPFR_RNDN);
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) horner_step(ar, ai, y.re, y.im, &coeffs_[k], t1, t2);
  ComplexHP out(std::move(ar), std::move(ai));
  require_finite(out, "polynomial value");
  return out;
}

void HpPoly::eval_with_derivative(const ComplexHP& y, ComplexHP& value, ComplexHP& slope) const {
  value = ComplexHP();
  slope = ComplexHP();
  if (coeffs_.empty()) return;
  HpReal ar = coeffs_.back();
  HpReal ai;
  HpReal dr;
  HpReal di;
  HpReal t1;
  HpReal t2;
  mpfr_prec_round(ar.raw(), static_cast<mpfr_prec_t>(working_precision()), MPFR_RNDN);
  for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
    horner_step(dr, di, y.re, y.im, nullptr, t1, t2);
    mpfr_add(dr.raw(), dr.raw(), ar.raw(), MPFR_RNDN);
    mpfr_add(di.raw(), di.raw(), ai.raw(), MPFR_RNDN);
    horner_step(ar, ai, y.re, y.im, &coeffs_[k], t1, t2);
  }
  value = ComplexHP(std::move(ar), std::move(ai));
  slope = ComplexHP(std::move(dr), std::move(di));
  require_finite(value, "polynomial value");
  require_finite(slope, "polynomial derivative");
}

HpReal HpPoly::abs_scale(const HpReal& t) const {
  HpReal acc;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    acc *= t;
    acc += abs(coeffs_[k]);
  }
  return acc;
}

HpReal HpPoly::max_abs_coeff() const {
  HpReal best;
  for (const auto& c : coeffs_) {
    if (best < abs(c)) best = abs(c);
  }
  return best;
}

ComplexHP poly_eval(const ExactPoly& p, const ComplexHP& y) {
  require_finite(y, "evaluation point");
  return HpPoly(p).eval(y);
}

}  // namespace p4r
