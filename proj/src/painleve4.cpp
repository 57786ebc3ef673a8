#include "p4r/painleve4.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "p4r/error.hpp"
#include "p4r/hermite.hpp"
#include "p4r/hp_poly.hpp"

namespace p4r {

namespace {

std::string describe(Family f, int m, int n) {
  return "(" + std::string(to_string(f)) + ", m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")";
}

// Solves A p = rhs over Q by Gaussian elimination; false when A is singular.
bool solve_exact(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> rhs, std::vector<mpq_class>& out) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && sgn(a[pivot][k]) == 0) ++pivot;
    if (pivot == n) return false;
    std::swap(a[k], a[pivot]);
    std::swap(rhs[k], rhs[pivot]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a[i][k]) == 0) continue;
      const mpq_class f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      rhs[i] -= f * rhs[k];
    }
  }
  out.assign(n, mpq_class(0));
  for (std::size_t k = n; k-- > 0;) {
    mpq_class acc = rhs[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= a[k][j] * out[j];
    out[k] = acc / a[k][k];
  }
  return true;
}

ExactPoly checked_T(long m, unsigned n) {
  ExactPoly t = moment_hankel_det(m, n);
  if (t.is_zero()) {
    throw Error(ErrorKind::DegenerateDeterminant,
                "T_{" + std::to_string(m) + "," + std::to_string(n) + "} is the zero polynomial");
  }
  return t;
}

// Monic psi_n^{(m)} from the moment conditions at a rational y, compared with
// the determinant ratios for psi_n(0) and h_n.
bool orthogonality_at(long m, unsigned n, const mpq_class& y, const ExactPoly& t_mn, const ExactPoly& t_m1n,
                      const ExactPoly& t_mn1, bool& solved) {
  std::vector<mpq_class> mu(2 * n + 1);
  for (unsigned j = 0; j <= 2 * n; ++j) mu[j] = evaluate(moment_poly(m, j), y);
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
  std::vector<mpq_class> rhs(n);
  for (unsigned j = 0; j < n; ++j) {
    for (unsigned i = 0; i < n; ++i) a[j][i] = mu[i + j];
    rhs[j] = -mu[n + j];
  }
  std::vector<mpq_class> p;
  solved = solve_exact(a, rhs, p);
  if (!solved) return true;
  p.emplace_back(1);
  mpq_class h = 0;
  for (unsigned i = 0; i <= n; ++i) h -= p[i] * mu[i + n];

  const mpq_class tmn = evaluate(t_mn, y);
  const mpq_class psi0 = ((n % 2 == 0) ? 1 : -1) * evaluate(t_m1n, y) / tmn;
  const mpq_class hn = -evaluate(t_mn1, y) / tmn;
  return p[0] == psi0 && h == hn;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::I: return "I";
    case Family::II: return "II";
    case Family::III: return "III";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view text) {
  std::string t;
  for (char ch : text) t += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  if (t == "I" || t == "1") return Family::I;
  if (t == "II" || t == "2") return Family::II;
  if (t == "III" || t == "3") return Family::III;
  return std::nullopt;
}

bool valid_indices(Family family, int m, int n) noexcept {
  switch (family) {
    case Family::I: return m >= 0 && n >= 1;
    case Family::II: return m >= 1 && n >= 0;
    case Family::III: return m >= 0 && n >= 0;
  }
  return false;
}

FamilyParams family_params(Family family, int m, int n) {
  if (!valid_indices(family, m, n)) throw Error(ErrorKind::DomainError, "indices outside validity range " + describe(family, m, n));
  const long lm = m;
  const long ln = n;
  switch (family) {
    case Family::I: return {family, m, n, 2 * lm + ln + 1, -2 * ln * ln};
    case Family::II: return {family, m, n, -(lm + 2 * ln + 1), -2 * lm * lm};
    case Family::III: return {family, m, n, ln - lm, -2 * (lm + ln + 1) * (lm + ln + 1)};
  }
  throw Error(ErrorKind::DomainError, "unknown family");
}

LogDerivRational build_solution(Family family, int m, int n) {
  family_params(family, m, n);
  const auto um = static_cast<unsigned>(m);
  const auto un = static_cast<unsigned>(n);
  switch (family) {
    case Family::I: return {family, m, n, gen_hermite(um + 1, un), gen_hermite(um, un), mpq_class(0), 1};
    case Family::II: return {family, m, n, gen_hermite(um, un + 1), gen_hermite(um, un), mpq_class(0), -1};
    case Family::III: return {family, m, n, gen_hermite(um, un + 1), gen_hermite(um + 1, un), mpq_class(-2), 1};
  }
  throw Error(ErrorKind::DomainError, "unknown family");
}

ExactRationalFn as_rational(const LogDerivRational& w) {
  ExactRationalFn out = log_derivative_ratio(w.top, w.bottom);
  if (w.sign < 0) out = ExactRationalFn() - out;
  if (sgn(w.affine_slope) != 0) out += ExactRationalFn(ExactPoly::monomial(w.affine_slope, 1));
  return out;
}

ComplexHP eval_solution(const LogDerivRational& w, const ComplexHP& y, double near_pole) {
  require_finite(y, "evaluation point");
  const HpReal radius = abs(y);
  const HpReal threshold(near_pole);
  auto log_slope = [&](const ExactPoly& p, const char* name) {
    const HpPoly hp(p);
    ComplexHP value;
    ComplexHP slope;
    hp.eval_with_derivative(y, value, slope);
    if (abs(value) <= threshold * hp.abs_scale(radius)) {
      throw Error(ErrorKind::NearPole, std::string(name) + " polynomial nearly vanishes at y = " + y.re.to_string(12) +
                                           " + " + y.im.to_string(12) + "i");
    }
    return slope / value;
  };
  ComplexHP out = log_slope(w.top, "top") - log_slope(w.bottom, "bottom");
  if (w.sign < 0) out = -out;
  if (sgn(w.affine_slope) != 0) out += y * HpReal(w.affine_slope);
  return require_finite(out, "solution value");
}

ExactRationalFn p4_residual(const LogDerivRational& w) {
  const FamilyParams params = family_params(w.family, w.m, w.n);
  // w = N/D over the common denominator D = top*bottom. Multiplying the
  // residual by 2 N D^3 clears every denominator, leaving a polynomial E;
  // the residual is E / (2 N D^3).
  const ExactPoly d = w.top * w.bottom;
  ExactPoly n = poly_derivative(w.top) * w.bottom - w.top * poly_derivative(w.bottom);
  if (w.sign < 0) n = -n;
  if (sgn(w.affine_slope) != 0) n += ExactPoly::monomial(w.affine_slope, 1) * d;
  if (n.is_zero()) throw Error(ErrorKind::DomainError, "solution is identically zero " + describe(w.family, w.m, w.n));

  const ExactPoly dd = poly_derivative(d);
  const ExactPoly p = poly_derivative(n) * d - n * dd;
  const ExactPoly d2 = d * d;
  const ExactPoly n2 = n * n;
  const ExactPoly y = ExactPoly::monomial(1, 1);
  const ExactPoly y2_minus_alpha = ExactPoly::monomial(1, 2) - ExactPoly::constant(params.alpha);

  ExactPoly e = ExactPoly::constant(2) * n * (poly_derivative(p) * d - ExactPoly::constant(2) * p * dd);
  e -= p * p;
  e -= ExactPoly::constant(3) * n2 * n2;
  e -= ExactPoly::constant(8) * y * n2 * n * d;
  e -= ExactPoly::constant(4) * y2_minus_alpha * n2 * d2;
  e -= ExactPoly::constant(2 * params.beta) * d2 * d2;
  if (e.is_zero()) return {};
  return ExactRationalFn(e, ExactPoly::constant(2) * n * d2 * d);
}

ComplexHP scaled_eval(const LogDerivRational& w, const ComplexHP& x) {
  if (w.m < 1 || w.n < 1) {
    throw Error(ErrorKind::DomainError, "scaled evaluation needs m, n >= 1 " + describe(w.family, w.m, w.n));
  }
  const HpReal sm = sqrt(HpReal(static_cast<long>(w.m)));
  const HpReal sn = sqrt(HpReal(static_cast<long>(w.n)));
  return eval_solution(w, x * sm) / sn;
}

LemmaSwitchCheck check_lemma_switch(unsigned m, unsigned n) {
  if (n < 1 || m < n) throw Error(ErrorKind::DomainError, "lemma check needs m >= n >= 1");
  LemmaSwitchCheck out;
  out.tau = tau_det(m, n);

  mpz_class factor = 1;
  mpz_class hmn_factor = 1;
  for (unsigned k = 0; k < n; ++k) {
    mpz_class pow2;
    mpz_ui_pow_ui(pow2.get_mpz_t(), 2, k);
    factor *= factorial(m + k) * pow2;
    hmn_factor *= factorial(k) * pow2;
  }
  // ceil((n-1)/2) = floor(n/2) for n >= 1
  const unsigned ceil_half = n / 2;
  if (ceil_half % 2 == 1) hmn_factor = -hmn_factor;
  out.hmn_prefactor = hmn_factor;

  const ExactPoly t = moment_hankel_det(static_cast<long>(m) - static_cast<long>(n) + 1, n);
  out.difference = out.tau - ExactPoly::constant(mpq_class(factor)) * t;
  out.holds = out.difference.is_zero();
  out.hmn_difference = out.tau - ExactPoly::constant(mpq_class(hmn_factor)) * gen_hermite(m, n);
  out.hmn_holds = out.hmn_difference.is_zero();
  return out;
}

PsiCheck check_psi_representations(unsigned m, unsigned n) {
  if (n < 1 || m < n) throw Error(ErrorKind::DomainError, "representation check needs m >= n >= 1");
  const long base = static_cast<long>(m) - static_cast<long>(n);
  PsiCheck out;

  const ExactPoly t_i_top = checked_T(base + 2, n);
  const ExactPoly t_i_bottom = checked_T(base + 1, n);
  const ExactPoly t_ii_bottom = checked_T(base, n + 1);
  const ExactPoly t_ii_top = t_i_bottom;
  const auto mi = static_cast<int>(m);
  const auto ni = static_cast<int>(n);
  out.family_I = log_derivative_ratio(t_i_top, t_i_bottom) == as_rational(build_solution(Family::I, mi, ni));
  out.family_II = log_derivative_ratio(t_ii_top, t_ii_bottom) == as_rational(build_solution(Family::II, mi, ni));

  // Orthogonal polynomials psi_n^{(k)} for the two shifts k used above.
  const std::vector<mpq_class> samples = {mpq_class(1, 3), mpq_class(2), mpq_class(-5, 7), mpq_class(11, 4)};
  out.orthogonality = true;
  for (long k : {base + 1, base}) {
    const ExactPoly t_kn = checked_T(k, n);
    const ExactPoly t_k1n = checked_T(k + 1, n);
    const ExactPoly t_kn1 = checked_T(k, n + 1);
    int used = 0;
    for (const auto& y : samples) {
      bool solved = false;
      if (!orthogonality_at(k, n, y, t_kn, t_k1n, t_kn1, solved)) out.orthogonality = false;
      if (solved) ++used;
    }
    if (used == 0) out.orthogonality = false;
  }
  return out;
}

}  // namespace p4r
