#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "p4r/exact_poly.hpp"
#include "p4r/hp.hpp"

namespace p4r {

enum class Family { I, II, III };

std::string_view to_string(Family f);
/// Accepts "I", "II", "III" (case-insensitive) or "1", "2", "3".
std::optional<Family> parse_family(std::string_view text);

struct FamilyParams {
  Family family;
  int m;
  int n;
  long alpha;
  long beta;
};

/// Throws DomainError when (m, n) is outside the family's validity range:
/// I needs m >= 0, n >= 1; II needs m >= 1, n >= 0; III needs m, n >= 0.
FamilyParams family_params(Family family, int m, int n);
bool valid_indices(Family family, int m, int n) noexcept;

/// w(y) = affine_slope*y + sign * d/dy log(top/bottom).
struct LogDerivRational {
  Family family;
  int m;
  int n;
  ExactPoly top;
  ExactPoly bottom;
  mpq_class affine_slope;
  int sign;
};

LogDerivRational build_solution(Family family, int m, int n);

/// The solution as one reduced rational function.
ExactRationalFn as_rational(const LogDerivRational& w);

inline constexpr double kNearPoleRelative = 1e-30;

/// Evaluates the structural form directly. Throws NearPole when |top(y)| or
/// |bottom(y)| falls below near_pole * sum_k |c_k| |y|^k.
ComplexHP eval_solution(const LogDerivRational& w, const ComplexHP& y, double near_pole = kNearPoleRelative);

/// Left side minus right side of Painleve-IV for the family's (alpha, beta),
/// as a reduced rational function; zero exactly when w solves the equation.
ExactRationalFn p4_residual(const LogDerivRational& w);

/// n^{-1/2} w(m^{1/2} x). Requires m, n >= 1.
ComplexHP scaled_eval(const LogDerivRational& w, const ComplexHP& x);

struct LemmaSwitchCheck {
  bool holds = false;       // tau_{m,n} == prod (m+k)! 2^k * T_{m-n+1,n}
  bool hmn_holds = false;   // tau_{m,n} == (-1)^ceil((n-1)/2) prod k! 2^k * H_{m,n}
  ExactPoly tau;
  ExactPoly difference;      // tau - prod * T
  ExactPoly hmn_difference;  // tau - prefactor * H_{m,n}
  mpz_class hmn_prefactor;
};

/// Requires m >= n >= 1.
LemmaSwitchCheck check_lemma_switch(unsigned m, unsigned n);

struct PsiCheck {
  bool family_I = false;      // w^(I) as d log(T_{m-n+2,n}/T_{m-n+1,n})
  bool family_II = false;     // w^(II) as d log(T_{m-n+1,n}/T_{m-n,n+1})
  bool orthogonality = false; // psi_n(0) and h_n from a direct moment solve
  bool holds() const noexcept { return family_I && family_II && orthogonality; }
};

/// Requires m >= n >= 1; throws DegenerateDeterminant if a T is identically 0.
PsiCheck check_psi_representations(unsigned m, unsigned n);

}  // namespace p4r
