#pragma once

#include <cstddef>
#include <vector>

#include "p4r/exact_poly.hpp"
#include "p4r/hp.hpp"

namespace p4r {

/// Real-coefficient polynomial at extended precision, converted once from an
/// ExactPoly so repeated evaluations skip the rational-to-float rounding.
class HpPoly {
 public:
  HpPoly() = default;
  explicit HpPoly(const ExactPoly& p);

  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<HpReal>& coeffs() const noexcept { return coeffs_; }

  /// Horner evaluation; throws Overflow on a non-finite result.
  ComplexHP eval(const ComplexHP& y) const;
  /// p(y) and p'(y) in one Horner sweep.
  void eval_with_derivative(const ComplexHP& y, ComplexHP& value, ComplexHP& slope) const;
  /// sum_k |c_k| t^k, the scale against which |p(y)| is judged small.
  HpReal abs_scale(const HpReal& t) const;
  HpReal max_abs_coeff() const;

 private:
  std::vector<HpReal> coeffs_;
};

ComplexHP poly_eval(const ExactPoly& p, const ComplexHP& y);

}  // namespace p4r
