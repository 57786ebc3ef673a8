#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

namespace p4r {

/// Dense univariate polynomial in y with exact rational coefficients,
/// ascending degree order. The coefficient vector never carries trailing
/// zeros; the zero polynomial has an empty vector.
class ExactPoly {
 public:
  ExactPoly() = default;
  explicit ExactPoly(std::vector<mpq_class> coeffs);
  ExactPoly(std::initializer_list<long> coeffs);

  static ExactPoly constant(const mpq_class& c);
  static ExactPoly monomial(const mpq_class& c, std::size_t degree);
  static ExactPoly from_integers(std::vector<mpz_class> coeffs);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree; the zero polynomial reports 0 (check is_zero() first).
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  const std::vector<mpq_class>& coeffs() const noexcept { return coeffs_; }
  /// Coefficient of y^k (zero beyond the degree).
  mpq_class coeff(std::size_t k) const;
  const mpq_class& leading() const;
  bool is_integral() const;
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }

  ExactPoly& operator+=(const ExactPoly& o);
  ExactPoly& operator-=(const ExactPoly& o);
  ExactPoly& operator*=(const ExactPoly& o);
  ExactPoly& operator*=(const mpq_class& s);
  ExactPoly operator-() const;

  friend ExactPoly operator+(ExactPoly a, const ExactPoly& b) { return a += b; }
  friend ExactPoly operator-(ExactPoly a, const ExactPoly& b) { return a -= b; }
  friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
  friend ExactPoly operator*(ExactPoly a, const mpq_class& s) { return a *= s; }
  friend ExactPoly operator*(const mpq_class& s, ExactPoly a) { return a *= s; }
  friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Human-readable form such as "4*y^2 - 2".
  std::string to_string() const;

 private:
  void trim();
  std::vector<mpq_class> coeffs_;
};

ExactPoly poly_derivative(const ExactPoly& p);
mpq_class evaluate(const ExactPoly& p, const mpq_class& y);

struct PolyDivision {
  ExactPoly quotient;
  ExactPoly remainder;
};

/// Euclidean division over Q[y]; throws DomainError for a zero divisor.
PolyDivision divmod(const ExactPoly& a, const ExactPoly& b);

/// a / b when b divides a exactly in Q[y]; throws InexactDivision otherwise.
ExactPoly divide_exact(const ExactPoly& a, const ExactPoly& b);

/// Monic greatest common divisor over Q[y] (zero when both inputs are zero).
ExactPoly poly_gcd(const ExactPoly& a, const ExactPoly& b);

/// Integer content-free representation: p = scale * primitive, primitive has
/// coprime integer coefficients and positive leading coefficient.
struct PrimitiveForm {
  std::vector<mpz_class> primitive;
  mpq_class scale;
};
PrimitiveForm primitive_form(const ExactPoly& p);

/// Reduced quotient of two polynomials: gcd(numerator, denominator) is
/// constant and the denominator is monic.
class ExactRationalFn {
 public:
  ExactRationalFn() : num_(), den_(ExactPoly::constant(1)) {}
  ExactRationalFn(ExactPoly numerator, ExactPoly denominator);
  explicit ExactRationalFn(ExactPoly p) : ExactRationalFn(std::move(p), ExactPoly::constant(1)) {}

  const ExactPoly& numerator() const noexcept { return num_; }
  const ExactPoly& denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  ExactRationalFn& operator+=(const ExactRationalFn& o);
  ExactRationalFn& operator-=(const ExactRationalFn& o);
  ExactRationalFn& operator*=(const ExactRationalFn& o);
  ExactRationalFn& operator/=(const ExactRationalFn& o);

  friend ExactRationalFn operator+(ExactRationalFn a, const ExactRationalFn& b) { return a += b; }
  friend ExactRationalFn operator-(ExactRationalFn a, const ExactRationalFn& b) { return a -= b; }
  friend ExactRationalFn operator*(ExactRationalFn a, const ExactRationalFn& b) { return a *= b; }
  friend ExactRationalFn operator/(ExactRationalFn a, const ExactRationalFn& b) { return a /= b; }
  friend bool operator==(const ExactRationalFn& a, const ExactRationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  ExactPoly num_;
  ExactPoly den_;
};

ExactRationalFn derivative(const ExactRationalFn& f);

/// d/dy log(top/bottom) = top'/top - bottom'/bottom, reduced.
ExactRationalFn log_derivative_ratio(const ExactPoly& top, const ExactPoly& bottom);

mpz_class factorial(unsigned long n);

}  // namespace p4r
