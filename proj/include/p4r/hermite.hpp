#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "p4r/exact_poly.hpp"

namespace p4r {

/// Physicists' Hermite polynomial H_m via H_{k+1} = 2y H_k - 2k H_{k-1}.
ExactPoly hermite(unsigned m);

/// Generalized Hermite polynomials H_{m,n}, built from the two bilinear
/// recurrences
///   2m H_{m+1,n} H_{m-1,n} =  H H'' - (H')^2 + 2m H^2   (H = H_{m,n})
///   2n H_{m,n+1} H_{m,n-1} = -H H'' + (H')^2 + 2n H^2
/// seeded with H_{m,0} = H_{0,n} = 1 and H_{1,1} = 2y. Results are memoized;
/// lookups and inserts are serialized by an internal mutex.
class GenHermiteTable {
 public:
  const ExactPoly& get(unsigned m, unsigned n);

 private:
  const ExactPoly& get_locked(unsigned m, unsigned n);
  std::mutex mutex_;
  std::map<std::pair<unsigned, unsigned>, ExactPoly> memo_;
};

/// Process-wide memo table used by gen_hermite().
GenHermiteTable& default_gen_hermite_table();

/// H_{m,n}; every division in the recurrence is checked to be exact and the
/// result is checked to have integer coefficients (InexactDivision otherwise).
ExactPoly gen_hermite(unsigned m, unsigned n);

/// Row-major square matrix of polynomials.
using PolyMatrix = std::vector<std::vector<ExactPoly>>;

/// Determinant by fraction-free (Bareiss) elimination over Q[y]. The empty
/// matrix has determinant 1.
ExactPoly hankel_det(const PolyMatrix& entries);

/// mu_j^{(m)} = H_{m+j} / (m+j)!; DomainError when m + j < 0.
ExactPoly moment_poly(long m, long j);

/// tau_{m,n}: n x n Hankel determinant with entries H_{m+j+k}; tau_{m,0} = 1.
ExactPoly tau_det(unsigned m, unsigned n);

/// T_{m,n}: n x n Hankel determinant with entries mu_{j+k}^{(m)}; T_{m,0} = 1.
ExactPoly moment_hankel_det(long m, unsigned n);

/// H_{m,n}(iy) == i^{mn} H_{n,m}(y), compared coefficient by coefficient.
bool check_hermite_symmetry(unsigned m, unsigned n);

/// H_{k,1} == H_k and H_{1,k}(y) == i^{-k} H_k(iy).
bool check_hermite_specializations(unsigned k);

}  // namespace p4r
