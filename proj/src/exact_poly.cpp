#include "p4r/exact_poly.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "p4r/error.hpp"

namespace p4r {

namespace {

struct IntegerForm {
  std::vector<mpz_class> coeffs;
  mpz_class denominator = 1;
};

IntegerForm integer_form(const ExactPoly& p) {
  IntegerForm out;
  for (const auto& c : p.coeffs()) {
    mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), c.get_den_mpz_t());
  }
  out.coeffs.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    mpz_class v = out.denominator / c.get_den();
    v *= c.get_num();
    out.coeffs.push_back(std::move(v));
  }
  return out;
}

std::vector<mpz_class> multiply_integers(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<mpz_class> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return out;
}

void trim_integers(std::vector<mpz_class>& v) {
  while (!v.empty() && sgn(v.back()) == 0) v.pop_back();
}

mpz_class content(const std::vector<mpz_class>& v) {
  mpz_class g = 0;
  for (const auto& c : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

void make_primitive(std::vector<mpz_class>& v) {
  trim_integers(v);
  if (v.empty()) return;
  mpz_class g = content(v);
  if (sgn(v.back()) < 0) g = -g;
  if (g != 1) {
    for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  }
}

// Pseudo-remainder of integer polynomials, returned primitive.
std::vector<mpz_class> primitive_prem(std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
  const std::size_t db = b.size() - 1;
  const mpz_class& lb = b.back();
  while (!a.empty() && a.size() - 1 >= db) {
    const std::size_t shift = a.size() - 1 - db;
    const mpz_class la = a.back();
    for (auto& c : a) c *= lb;
    for (std::size_t j = 0; j <= db; ++j) {
      mpz_submul(a[shift + j].get_mpz_t(), la.get_mpz_t(), b[j].get_mpz_t());
    }
    trim_integers(a);
    make_primitive(a);
  }
  return a;
}

}  // namespace

ExactPoly::ExactPoly(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

ExactPoly::ExactPoly(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

ExactPoly ExactPoly::constant(const mpq_class& c) { return ExactPoly(std::vector<mpq_class>{c}); }

ExactPoly ExactPoly::monomial(const mpq_class& c, std::size_t degree) {
  std::vector<mpq_class> v(degree + 1);
  v[degree] = c;
  return ExactPoly(std::move(v));
}

ExactPoly ExactPoly::from_integers(std::vector<mpz_class> coeffs) {
  std::vector<mpq_class> v;
  v.reserve(coeffs.size());
  for (auto& c : coeffs) v.emplace_back(std::move(c));
  ExactPoly out;
  out.coeffs_ = std::move(v);
  out.trim();
  return out;
}

void ExactPoly::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

mpq_class ExactPoly::coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : mpq_class(0); }

const mpq_class& ExactPoly::leading() const {
  if (coeffs_.empty()) throw Error(ErrorKind::DomainError, "leading coefficient of the zero polynomial");
  return coeffs_.back();
}

bool ExactPoly::is_integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpq_class& c) { return c.get_den() == 1; });
}

ExactPoly& ExactPoly::operator+=(const ExactPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

ExactPoly& ExactPoly::operator-=(const ExactPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

ExactPoly& ExactPoly::operator*=(const ExactPoly& o) {
  *this = *this * o;
  return *this;
}

ExactPoly& ExactPoly::operator*=(const mpq_class& s) {
  if (sgn(s) == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= s;
  return *this;
}

ExactPoly ExactPoly::operator-() const {
  ExactPoly out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const IntegerForm ia = integer_form(a);
  const IntegerForm ib = integer_form(b);
  std::vector<mpz_class> product = multiply_integers(ia.coeffs, ib.coeffs);
  const mpz_class den = ia.denominator * ib.denominator;
  if (den == 1) return ExactPoly::from_integers(std::move(product));
  std::vector<mpq_class> out;
  out.reserve(product.size());
  for (auto& c : product) out.emplace_back(c, den);
  return ExactPoly(std::move(out));
}

std::string ExactPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const mpq_class& c = coeffs_[k];
    if (sgn(c) == 0) continue;
    mpq_class mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (k == 0 || mag != 1) {
      os << mag.get_str();
      if (k > 0) os << "*";
    }
    if (k >= 1) os << "y";
    if (k >= 2) os << "^" << k;
  }
  return os.str();
}

ExactPoly poly_derivative(const ExactPoly& p) {
  if (p.coeffs().size() <= 1) return {};
  std::vector<mpq_class> out(p.coeffs().size() - 1);
  for (std::size_t k = 1; k < p.coeffs().size(); ++k) out[k - 1] = p.coeffs()[k] * static_cast<unsigned long>(k);
  return ExactPoly(std::move(out));
}

mpq_class evaluate(const ExactPoly& p, const mpq_class& y) {
  mpq_class acc = 0;
  for (std::size_t k = p.coeffs().size(); k-- > 0;) {
    acc *= y;
    acc += p.coeffs()[k];
  }
  return acc;
}

PolyDivision divmod(const ExactPoly& a, const ExactPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::DomainError, "division by the zero polynomial");
  if (a.is_zero() || a.degree() < b.degree()) return {ExactPoly{}, a};
  std::vector<mpq_class> rem = a.coeffs();
  const std::size_t db = b.degree();
  std::vector<mpq_class> quot(a.degree() - db + 1);
  const mpq_class inv_lead = 1 / b.leading();
  for (std::size_t i = quot.size(); i-- > 0;) {
    const mpq_class q = rem[i + db] * inv_lead;
    quot[i] = q;
    if (sgn(q) == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[i + j] -= q * b.coeffs()[j];
  }
  rem.resize(db);
  return {ExactPoly(std::move(quot)), ExactPoly(std::move(rem))};
}

ExactPoly divide_exact(const ExactPoly& a, const ExactPoly& b) {
  PolyDivision d = divmod(a, b);
  if (!d.remainder.is_zero()) {
    throw Error(ErrorKind::InexactDivision, "nonzero remainder dividing degree " + std::to_string(a.degree()) +
                                                " by degree " + std::to_string(b.degree()));
  }
  return std::move(d.quotient);
}

PrimitiveForm primitive_form(const ExactPoly& p) {
  PrimitiveForm out;
  if (p.is_zero()) {
    out.scale = 0;
    return out;
  }
  IntegerForm f = integer_form(p);
  mpz_class g = content(f.coeffs);
  if (sgn(f.coeffs.back()) < 0) g = -g;
  for (auto& c : f.coeffs) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  out.primitive = std::move(f.coeffs);
  out.scale = mpq_class(g, f.denominator);
  out.scale.canonicalize();
  return out;
}

ExactPoly poly_gcd(const ExactPoly& a, const ExactPoly& b) {
  if (a.is_zero() && b.is_zero()) return {};
  if (a.is_zero() || b.is_zero()) {
    const ExactPoly& p = a.is_zero() ? b : a;
    return p * mpq_class(1 / p.leading());
  }
  std::vector<mpz_class> u = primitive_form(a).primitive;
  std::vector<mpz_class> v = primitive_form(b).primitive;
  if (u.size() < v.size()) std::swap(u, v);
  while (!v.empty()) {
    if (v.size() == 1) return ExactPoly::constant(1);
    std::vector<mpz_class> r = primitive_prem(u, v);
    u = std::move(v);
    v = std::move(r);
  }
  ExactPoly g = ExactPoly::from_integers(std::move(u));
  return g * mpq_class(1 / g.leading());
}

ExactRationalFn::ExactRationalFn(ExactPoly numerator, ExactPoly denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw Error(ErrorKind::DomainError, "rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = ExactPoly::constant(1);
    return;
  }
  if (!den_.is_constant()) {
    const ExactPoly g = poly_gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = divide_exact(num_, g);
      den_ = divide_exact(den_, g);
    }
  }
  const mpq_class lead = den_.leading();
  if (lead != 1) {
    const mpq_class inv = 1 / lead;
    num_ *= inv;
    den_ *= inv;
  }
}

ExactRationalFn& ExactRationalFn::operator+=(const ExactRationalFn& o) {
  *this = ExactRationalFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  return *this;
}

ExactRationalFn& ExactRationalFn::operator-=(const ExactRationalFn& o) {
  *this = ExactRationalFn(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  return *this;
}

ExactRationalFn& ExactRationalFn::operator*=(const ExactRationalFn& o) {
  *this = ExactRationalFn(num_ * o.num_, den_ * o.den_);
  return *this;
}

ExactRationalFn& ExactRationalFn::operator/=(const ExactRationalFn& o) {
  if (o.is_zero()) throw Error(ErrorKind::DomainError, "division by the zero rational function");
  *this = ExactRationalFn(num_ * o.den_, den_ * o.num_);
  return *this;
}

ExactRationalFn derivative(const ExactRationalFn& f) {
  const ExactPoly& n = f.numerator();
  const ExactPoly& d = f.denominator();
  return {poly_derivative(n) * d - n * poly_derivative(d), d * d};
}

ExactRationalFn log_derivative_ratio(const ExactPoly& top, const ExactPoly& bottom) {
  if (top.is_zero() || bottom.is_zero()) {
    throw Error(ErrorKind::DomainError, "logarithmic derivative of a zero polynomial");
  }
  return {poly_derivative(top) * bottom - top * poly_derivative(bottom), top * bottom};
}

mpz_class factorial(unsigned long n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

}  // namespace p4r
