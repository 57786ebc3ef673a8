#include "p4r/hp.hpp"

#include <cstdlib>
#include <memory>
#include <string>

#include "p4r/error.hpp"

namespace p4r {

namespace {

thread_local unsigned tls_precision = kDefaultPrecisionBits;

struct MpfrString {
  char* text = nullptr;
  ~MpfrString() {
    if (text != nullptr) mpfr_free_str(text);
  }
};

// Formats a digit string d1 d2 ... dk representing 0.d1d2...dk * 10^exp10.
std::string format_decimal(bool negative, std::string digits, long exp10) {
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
  std::string out = negative ? "-" : "";
  const long k = static_cast<long>(digits.size());
  if (exp10 > 0 && exp10 <= 21) {
    if (exp10 >= k) {
      out += digits;
      out.append(static_cast<std::size_t>(exp10 - k), '0');
    } else {
      out += digits.substr(0, static_cast<std::size_t>(exp10));
      out += '.';
      out += digits.substr(static_cast<std::size_t>(exp10));
    }
  } else if (exp10 <= 0 && exp10 > -5) {
    out += "0.";
    out.append(static_cast<std::size_t>(-exp10), '0');
    out += digits;
  } else {
    out += digits[0];
    if (k > 1) {
      out += '.';
      out += digits.substr(1);
    }
    const long e = exp10 - 1;
    out += (e < 0) ? "e-" : "e+";
    out += std::to_string(std::labs(e));
  }
  return out;
}

}  // namespace

unsigned working_precision() noexcept { return tls_precision; }

PrecisionScope::PrecisionScope(unsigned bits) : saved_(tls_precision) {
  if (bits < kMinPrecisionBits) {
    throw Error(ErrorKind::DomainError, "precision below " + std::to_string(kMinPrecisionBits) + " bits");
  }
  tls_precision = bits;
}

PrecisionScope::~PrecisionScope() { tls_precision = saved_; }

void HpReal::init() { mpfr_init2(value_, static_cast<mpfr_prec_t>(tls_precision)); }

HpReal::HpReal() {
  init();
  mpfr_set_zero(value_, 1);
}

HpReal::HpReal(double v) {
  init();
  mpfr_set_d(value_, v, MPFR_RNDN);
}

HpReal::HpReal(long v) {
  init();
  mpfr_set_si(value_, v, MPFR_RNDN);
}

HpReal::HpReal(const mpz_class& v) {
  init();
  mpfr_set_z(value_, v.get_mpz_t(), MPFR_RNDN);
}

HpReal::HpReal(const mpq_class& v) {
  init();
  mpfr_set_q(value_, v.get_mpq_t(), MPFR_RNDN);
}

HpReal HpReal::parse(std::string_view text) {
  HpReal out;
  const std::string buf(text);
  if (mpfr_set_str(out.value_, buf.c_str(), 10, MPFR_RNDN) != 0) {
    throw Error(ErrorKind::DomainError, "not a decimal number: '" + buf + "'");
  }
  return out;
}

HpReal HpReal::pi() {
  HpReal out;
  mpfr_const_pi(out.value_, MPFR_RNDN);
  return out;
}

HpReal HpReal::nan() {
  HpReal out;
  mpfr_set_nan(out.value_);
  return out;
}

HpReal::HpReal(const HpReal& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

HpReal::HpReal(HpReal&& other) noexcept {
  // Leave `other` as a valid one-limb zero so its destructor stays cheap.
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

HpReal& HpReal::operator=(const HpReal& other) {
  if (this != &other) {
    if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) {
      mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

HpReal& HpReal::operator=(HpReal&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

HpReal::~HpReal() { mpfr_clear(value_); }

long HpReal::exponent() const noexcept {
  if (!mpfr_regular_p(value_)) return 0;
  return mpfr_get_exp(value_);
}

std::string HpReal::to_string(int max_digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(value_)) return "0";
  const bool negative = mpfr_sgn(value_) < 0;
  mpfr_t probe;
  mpfr_init2(probe, mpfr_get_prec(value_));
  std::string best;
  long best_exp = 0;
  for (int digits = 1; digits <= max_digits; ++digits) {
    mpfr_exp_t exp10 = 0;
    MpfrString s;
    s.text = mpfr_get_str(nullptr, &exp10, 10, static_cast<std::size_t>(digits), value_, MPFR_RNDN);
    std::string text = s.text;
    if (negative) text.erase(0, 1);
    best = text;
    best_exp = exp10;
    const std::string literal = (negative ? "-0." : "0.") + text + "e" + std::to_string(exp10);
    mpfr_set_str(probe, literal.c_str(), 10, MPFR_RNDN);
    if (mpfr_equal_p(probe, value_)) break;
  }
  mpfr_clear(probe);
  return format_decimal(negative, best, best_exp);
}

HpReal& HpReal::operator+=(const HpReal& o) {
  mpfr_prec_round(value_, static_cast<mpfr_prec_t>(tls_precision), MPFR_RNDN);
  mpfr_add(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

HpReal& HpReal::operator-=(const HpReal& o) {
  mpfr_prec_round(value_, static_cast<mpfr_prec_t>(tls_precision), MPFR_RNDN);
  mpfr_sub(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

HpReal& HpReal::operator*=(const HpReal& o) {
  mpfr_prec_round(value_, static_cast<mpfr_prec_t>(tls_precision), MPFR_RNDN);
  mpfr_mul(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

HpReal& HpReal::operator/=(const HpReal& o) {
  mpfr_prec_round(value_, static_cast<mpfr_prec_t>(tls_precision), MPFR_RNDN);
  mpfr_div(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

HpReal HpReal::operator-() const {
  HpReal out;
  mpfr_neg(out.value_, value_, MPFR_RNDN);
  return out;
}

HpReal abs(const HpReal& v) {
  HpReal out;
  mpfr_abs(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

HpReal sqrt(const HpReal& v) {
  HpReal out;
  mpfr_sqrt(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

HpReal log(const HpReal& v) {
  HpReal out;
  mpfr_log(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

HpReal exp(const HpReal& v) {
  HpReal out;
  mpfr_exp(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

HpReal sin(const HpReal& v) {
  HpReal out;
  mpfr_sin(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

HpReal cos(const HpReal& v) {
  HpReal out;
  mpfr_cos(out.raw(), v.raw(), MPFR_RNDN);
  return out;
}

HpReal atan2(const HpReal& y, const HpReal& x) {
  HpReal out;
  mpfr_atan2(out.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return out;
}

HpReal hypot(const HpReal& a, const HpReal& b) {
  HpReal out;
  mpfr_hypot(out.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return out;
}

HpReal pow(const HpReal& base, long exponent) {
  HpReal out;
  mpfr_pow_si(out.raw(), base.raw(), exponent, MPFR_RNDN);
  return out;
}

HpReal ldexp(const HpReal& v, long exponent) {
  HpReal out;
  mpfr_mul_2si(out.raw(), v.raw(), exponent, MPFR_RNDN);
  return out;
}

HpReal min(const HpReal& a, const HpReal& b) { return b < a ? b : a; }
HpReal max(const HpReal& a, const HpReal& b) { return a < b ? b : a; }

ComplexHP ComplexHP::polar(const HpReal& radius, const HpReal& angle) {
  HpReal s;
  HpReal c;
  mpfr_sin_cos(s.raw(), c.raw(), angle.raw(), MPFR_RNDN);
  return {radius * c, radius * s};
}

ComplexHP& ComplexHP::operator+=(const ComplexHP& o) {
  re += o.re;
  im += o.im;
  return *this;
}

ComplexHP& ComplexHP::operator-=(const ComplexHP& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

ComplexHP& ComplexHP::operator*=(const ComplexHP& o) {
  HpReal t1;
  HpReal t2;
  mpfr_mul(t1.raw(), re.raw(), o.re.raw(), MPFR_RNDN);
  mpfr_mul(t2.raw(), im.raw(), o.im.raw(), MPFR_RNDN);
  HpReal t3;
  HpReal t4;
  mpfr_mul(t3.raw(), re.raw(), o.im.raw(), MPFR_RNDN);
  mpfr_mul(t4.raw(), im.raw(), o.re.raw(), MPFR_RNDN);
  HpReal nr;
  HpReal ni;
  mpfr_sub(nr.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
  mpfr_add(ni.raw(), t3.raw(), t4.raw(), MPFR_RNDN);
  re = std::move(nr);
  im = std::move(ni);
  return *this;
}

ComplexHP& ComplexHP::operator/=(const ComplexHP& o) {
  // Smith's algorithm keeps intermediate magnitudes bounded.
  if (abs(o.re) >= abs(o.im)) {
    const HpReal ratio = o.im / o.re;
    const HpReal denom = o.re + o.im * ratio;
    HpReal nr = (re + im * ratio) / denom;
    HpReal ni = (im - re * ratio) / denom;
    re = std::move(nr);
    im = std::move(ni);
  } else {
    const HpReal ratio = o.re / o.im;
    const HpReal denom = o.re * ratio + o.im;
    HpReal nr = (re * ratio + im) / denom;
    HpReal ni = (im * ratio - re) / denom;
    re = std::move(nr);
    im = std::move(ni);
  }
  return *this;
}

ComplexHP& ComplexHP::operator*=(const HpReal& s) {
  re *= s;
  im *= s;
  return *this;
}

ComplexHP& ComplexHP::operator/=(const HpReal& s) {
  re /= s;
  im /= s;
  return *this;
}

HpReal abs(const ComplexHP& z) { return hypot(z.re, z.im); }
HpReal norm(const ComplexHP& z) { return z.re * z.re + z.im * z.im; }
HpReal arg(const ComplexHP& z) { return atan2(z.im, z.re); }
ComplexHP conj(const ComplexHP& z) { return {z.re, -z.im}; }

ComplexHP sqrt(const ComplexHP& z) {
  if (z.is_zero()) return {};
  const HpReal modulus = abs(z);
  // Compute the larger component directly, recover the other from im/(2t).
  HpReal t = sqrt(ldexp(modulus + abs(z.re), -1));
  if (z.re.sign() >= 0) {
    HpReal other = z.im / ldexp(t, 1);
    return {std::move(t), std::move(other)};
  }
  HpReal other = abs(z.im) / ldexp(t, 1);
  if (z.im.sign() < 0) t = -t;
  return {std::move(other), std::move(t)};
}

ComplexHP log(const ComplexHP& z) { return {log(abs(z)), arg(z)}; }

ComplexHP exp(const ComplexHP& z) { return ComplexHP::polar(exp(z.re), z.im); }

ComplexHP pow(const ComplexHP& z, int exponent) {
  if (exponent < 0) return ComplexHP(1) / pow(z, -exponent);
  ComplexHP result(1);
  ComplexHP base = z;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if ((e & 1U) != 0) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return result;
}

HpReal dist(const ComplexHP& a, const ComplexHP& b) { return abs(a - b); }

const ComplexHP& require_finite(const ComplexHP& z, std::string_view what) {
  if (!z.is_finite()) throw Error(ErrorKind::Overflow, std::string(what) + " is not finite");
  return z;
}

const HpReal& require_finite(const HpReal& v, std::string_view what) {
  if (!v.is_finite()) throw Error(ErrorKind::Overflow, std::string(what) + " is not finite");
  return v;
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InexactDivision: return "InexactDivision";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NearPole: return "NearPole";
    case ErrorKind::DegenerateDeterminant: return "DegenerateDeterminant";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoValidRoot: return "NoValidRoot";
    case ErrorKind::OnBranchCut: return "OnBranchCut";
    case ErrorKind::TrackingLoss: return "TrackingLoss";
    case ErrorKind::MomentViolation: return "MomentViolation";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::BranchMismatch: return "BranchMismatch";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::TraceDiverged: return "TraceDiverged";
  }
  return "Unknown";
}

}  // namespace p4r
