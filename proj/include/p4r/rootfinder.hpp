#pragma once

#include <cstdint>
#include <vector>

#include "p4r/exact_poly.hpp"
#include "p4r/hp.hpp"

namespace p4r {

struct RootSet {
  std::vector<ComplexHP> roots;
  /// |p(root)| / (max|c_k| * max(1, |root|)^degree), one per root.
  std::vector<HpReal> residuals;
  /// Roots closer than 2^{-bits/4} (relative) to another root.
  std::vector<bool> clustered;
  std::size_t source_degree = 0;
  unsigned precision_bits = 0;
  int iterations = 0;
};

struct RootFinderOptions {
  int max_iterations = 500;
  std::uint64_t seed = 20140801;
};

/// All complex roots of a nonconstant p by Aberth-Ehrlich iteration at
/// precision_bits, each polished by Newton steps. Throws DomainError for a
/// constant p and NoConvergence when a residual stays above 2^{-bits/2}.
RootSet find_roots(const ExactPoly& p, unsigned precision_bits, const RootFinderOptions& options = {});

/// Positive root of |c_d| t^d = sum_{k<d} |c_k| t^k; every root of p lies in
/// the disk of this radius.
HpReal cauchy_bound(const ExactPoly& p);

enum class ScaleVariable { M, N };

/// Zeros of H_{m,n} divided by sqrt(m) (the x variable) or sqrt(n) (chi).
RootSet scaled_zero_cloud(unsigned m, unsigned n, ScaleVariable scale, unsigned precision_bits,
                          const RootFinderOptions& options = {});

}  // namespace p4r
