#pragma once

#include <array>
#include <complex>

#include "p4r/hp.hpp"

namespace p4r {

/// Roots of c4 z^4 + c3 z^3 + c2 z^2 + c1 z + c0 (c4 != 0) by Ferrari's
/// method at the working precision, each root followed by Newton polishing.
std::array<ComplexHP, 4> solve_quartic(const ComplexHP& c4, const ComplexHP& c3, const ComplexHP& c2,
                                       const ComplexHP& c1, const ComplexHP& c0);

/// Double-precision counterpart of solve_quartic.
std::array<std::complex<double>, 4> solve_quartic(std::complex<double> c4, std::complex<double> c3,
                                                  std::complex<double> c2, std::complex<double> c1,
                                                  std::complex<double> c0);

/// Principal cube root.
ComplexHP cbrt(const ComplexHP& z);

}  // namespace p4r
