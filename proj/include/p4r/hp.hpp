#pragma once

// Extended-precision real and complex scalars backed by MPFR.
//
// Every HpReal is created at the calling thread's working precision, which
// is set with PrecisionScope. Arithmetic results are rounded to the working
// precision in effect when the operation runs.

#include <mpfr.h>
#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace p4r {

inline constexpr unsigned kDefaultPrecisionBits = 192;
inline constexpr unsigned kMinPrecisionBits = 64;

unsigned working_precision() noexcept;

class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

class HpReal {
 public:
  HpReal();
  HpReal(double v);  // NOLINT(google-explicit-constructor)
  HpReal(long v);    // NOLINT(google-explicit-constructor)
  HpReal(int v) : HpReal(static_cast<long>(v)) {}  // NOLINT
  explicit HpReal(const mpz_class& v);
  explicit HpReal(const mpq_class& v);

  /// Parses a decimal literal at the working precision.
  static HpReal parse(std::string_view text);
  static HpReal pi();
  static HpReal nan();

  HpReal(const HpReal& other);
  HpReal(HpReal&& other) noexcept;
  HpReal& operator=(const HpReal& other);
  HpReal& operator=(HpReal&& other) noexcept;
  ~HpReal();

  mpfr_ptr raw() noexcept { return value_; }
  mpfr_srcptr raw() const noexcept { return value_; }
  unsigned precision() const noexcept { return static_cast<unsigned>(mpfr_get_prec(value_)); }

  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }
  long exponent() const noexcept;  // floor(log2|v|) + 1, 0 for zero

  /// Shortest decimal string that reads back to the same value at this
  /// value's precision, using at most max_digits significant digits.
  std::string to_string(int max_digits = 25) const;

  HpReal& operator+=(const HpReal& o);
  HpReal& operator-=(const HpReal& o);
  HpReal& operator*=(const HpReal& o);
  HpReal& operator/=(const HpReal& o);
  HpReal operator-() const;

  friend HpReal operator+(HpReal a, const HpReal& b) { return a += b; }
  friend HpReal operator-(HpReal a, const HpReal& b) { return a -= b; }
  friend HpReal operator*(HpReal a, const HpReal& b) { return a *= b; }
  friend HpReal operator/(HpReal a, const HpReal& b) { return a /= b; }

  friend bool operator==(const HpReal& a, const HpReal& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend bool operator!=(const HpReal& a, const HpReal& b) { return !(a == b); }
  friend bool operator<(const HpReal& a, const HpReal& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
  friend bool operator>(const HpReal& a, const HpReal& b) { return b < a; }
  friend bool operator<=(const HpReal& a, const HpReal& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }
  friend bool operator>=(const HpReal& a, const HpReal& b) { return b <= a; }

 private:
  void init();
  mpfr_t value_;
};

HpReal abs(const HpReal& v);
HpReal sqrt(const HpReal& v);
HpReal log(const HpReal& v);
HpReal exp(const HpReal& v);
HpReal sin(const HpReal& v);
HpReal cos(const HpReal& v);
HpReal atan2(const HpReal& y, const HpReal& x);
HpReal hypot(const HpReal& a, const HpReal& b);
HpReal pow(const HpReal& base, long exponent);
HpReal ldexp(const HpReal& v, long exponent);
HpReal min(const HpReal& a, const HpReal& b);
HpReal max(const HpReal& a, const HpReal& b);

/// Complex number at extended precision. Non-finite components are an
/// error state: operations that can overflow are checked by require_finite.
struct ComplexHP {
  HpReal re;
  HpReal im;

  ComplexHP() = default;
  ComplexHP(HpReal real, HpReal imag = HpReal()) : re(std::move(real)), im(std::move(imag)) {}  // NOLINT
  ComplexHP(double real) : re(real), im() {}  // NOLINT
  ComplexHP(int real) : re(real), im() {}     // NOLINT
  ComplexHP(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT

  static ComplexHP i() { return {HpReal(0), HpReal(1)}; }
  static ComplexHP polar(const HpReal& radius, const HpReal& angle);

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  ComplexHP& operator+=(const ComplexHP& o);
  ComplexHP& operator-=(const ComplexHP& o);
  ComplexHP& operator*=(const ComplexHP& o);
  ComplexHP& operator/=(const ComplexHP& o);
  ComplexHP& operator*=(const HpReal& s);
  ComplexHP& operator/=(const HpReal& s);
  ComplexHP operator-() const { return {-re, -im}; }

  friend ComplexHP operator+(ComplexHP a, const ComplexHP& b) { return a += b; }
  friend ComplexHP operator-(ComplexHP a, const ComplexHP& b) { return a -= b; }
  friend ComplexHP operator*(ComplexHP a, const ComplexHP& b) { return a *= b; }
  friend ComplexHP operator/(ComplexHP a, const ComplexHP& b) { return a /= b; }
  friend ComplexHP operator*(ComplexHP a, const HpReal& s) { return a *= s; }
  friend ComplexHP operator*(const HpReal& s, ComplexHP a) { return a *= s; }
  friend ComplexHP operator/(ComplexHP a, const HpReal& s) { return a /= s; }
  friend bool operator==(const ComplexHP& a, const ComplexHP& b) { return a.re == b.re && a.im == b.im; }
};

HpReal abs(const ComplexHP& z);
HpReal norm(const ComplexHP& z);  // |z|^2
HpReal arg(const ComplexHP& z);
ComplexHP conj(const ComplexHP& z);
/// Principal square root (branch cut on the negative real axis).
ComplexHP sqrt(const ComplexHP& z);
/// Principal logarithm, Im in (-pi, pi].
ComplexHP log(const ComplexHP& z);
ComplexHP exp(const ComplexHP& z);
ComplexHP pow(const ComplexHP& z, int exponent);
HpReal dist(const ComplexHP& a, const ComplexHP& b);

/// Throws Error(Overflow) naming `what` when z has a NaN or infinite part.
const ComplexHP& require_finite(const ComplexHP& z, std::string_view what);
const HpReal& require_finite(const HpReal& v, std::string_view what);

}  // namespace p4r
