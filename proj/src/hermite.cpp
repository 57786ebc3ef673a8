#include "p4r/hermite.hpp"

#include <algorithm>
#include <string>

#include "p4r/error.hpp"

namespace p4r {

namespace {

using IntPoly = std::vector<mpz_class>;

void trim(IntPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

IntPoly to_int_poly(const ExactPoly& p) {
  IntPoly out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    if (c.get_den() != 1) throw Error(ErrorKind::InexactDivision, "non-integer coefficient in H_{m,n} table");
    out.push_back(c.get_num());
  }
  return out;
}

IntPoly mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
  }
  return out;
}

IntPoly derivative(const IntPoly& p) {
  if (p.size() <= 1) return {};
  IntPoly out(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) out[k - 1] = p[k] * static_cast<unsigned long>(k);
  return out;
}

// num / den over Z[y], requiring every quotient coefficient to be an integer
// and the remainder to vanish.
IntPoly divide_exact_integer(IntPoly num, const IntPoly& den, const std::string& context) {
  trim(num);
  if (den.empty()) throw Error(ErrorKind::InexactDivision, context + ": zero divisor");
  if (num.empty()) return {};
  if (num.size() < den.size()) throw Error(ErrorKind::InexactDivision, context + ": divisor degree too large");
  const std::size_t dd = den.size() - 1;
  IntPoly quot(num.size() - dd);
  const mpz_class& lead = den.back();
  for (std::size_t i = quot.size(); i-- > 0;) {
    mpz_class& top = num[i + dd];
    if (sgn(top) == 0) continue;
    if (mpz_divisible_p(top.get_mpz_t(), lead.get_mpz_t()) == 0) {
      throw Error(ErrorKind::InexactDivision, context + ": coefficient not divisible");
    }
    mpz_divexact(quot[i].get_mpz_t(), top.get_mpz_t(), lead.get_mpz_t());
    for (std::size_t j = 0; j <= dd; ++j) mpz_submul(num[i + j].get_mpz_t(), quot[i].get_mpz_t(), den[j].get_mpz_t());
  }
  for (const auto& c : num) {
    if (sgn(c) != 0) throw Error(ErrorKind::InexactDivision, context + ": nonzero remainder");
  }
  trim(quot);
  return quot;
}

std::string label(unsigned m, unsigned n) {
  return "H_{" + std::to_string(m) + "," + std::to_string(n) + "}";
}

}  // namespace

ExactPoly hermite(unsigned m) {
  IntPoly prev{1};
  if (m == 0) return ExactPoly::from_integers(prev);
  IntPoly cur{0, 2};
  for (unsigned k = 1; k < m; ++k) {
    IntPoly next(cur.size() + 1);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] = 2 * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= 2UL * k * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return ExactPoly::from_integers(std::move(cur));
}

const ExactPoly& GenHermiteTable::get(unsigned m, unsigned n) {
  std::lock_guard<std::mutex> lock(mutex_);
  return get_locked(m, n);
}

const ExactPoly& GenHermiteTable::get_locked(unsigned m, unsigned n) {
  const auto key = std::make_pair(m, n);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  if (m == 0 || n == 0) return memo_.emplace(key, ExactPoly{1}).first->second;
  if (m == 1 && n == 1) return memo_.emplace(key, ExactPoly{0, 2}).first->second;

  // Row m = 1 advances in n; every other entry advances in m along its column.
  // Both predecessors are memoized first, so the recursion depth stays
  // bounded by one level per call chain below.
  if (m == 1) {
    for (unsigned k = 2; k <= n; ++k) {
      if (memo_.count({1, k}) != 0) continue;
      const IntPoly h = to_int_poly(get_locked(1, k - 1));
      const IntPoly lower = to_int_poly(get_locked(1, k - 2));
      const IntPoly dh = derivative(h);
      IntPoly num = mul(dh, dh);
      const IntPoly hh2 = mul(h, derivative(dh));
      const IntPoly h2 = mul(h, h);
      const unsigned long twok = 2UL * (k - 1);
      num.resize(std::max({num.size(), hh2.size(), h2.size()}));
      for (std::size_t i = 0; i < hh2.size(); ++i) num[i] -= hh2[i];
      for (std::size_t i = 0; i < h2.size(); ++i) num[i] += twok * h2[i];
      IntPoly den = lower;
      for (auto& c : den) c *= twok;
      IntPoly q = divide_exact_integer(std::move(num), den, label(1, k));
      memo_.emplace(std::make_pair(1U, k), ExactPoly::from_integers(std::move(q)));
    }
    return memo_.at(key);
  }

  for (unsigned k = 2; k <= m; ++k) {
    if (memo_.count({k, n}) != 0) continue;
    const IntPoly h = to_int_poly(get_locked(k - 1, n));
    const IntPoly lower = to_int_poly(get_locked(k - 2, n));
    const IntPoly dh = derivative(h);
    IntPoly num = mul(h, derivative(dh));
    const IntPoly dh2 = mul(dh, dh);
    const IntPoly h2 = mul(h, h);
    const unsigned long twok = 2UL * (k - 1);
    num.resize(std::max({num.size(), dh2.size(), h2.size()}));
    for (std::size_t i = 0; i < dh2.size(); ++i) num[i] -= dh2[i];
    for (std::size_t i = 0; i < h2.size(); ++i) num[i] += twok * h2[i];
    IntPoly den = lower;
    for (auto& c : den) c *= twok;
    IntPoly q = divide_exact_integer(std::move(num), den, label(k, n));
    memo_.emplace(std::make_pair(k, n), ExactPoly::from_integers(std::move(q)));
  }
  const ExactPoly& out = memo_.at(key);
  if (out.degree() != static_cast<std::size_t>(m) * n) {
    throw Error(ErrorKind::InexactDivision, label(m, n) + " has degree " + std::to_string(out.degree()));
  }
  return out;
}

GenHermiteTable& default_gen_hermite_table() {
  static GenHermiteTable table;
  return table;
}

ExactPoly gen_hermite(unsigned m, unsigned n) { return default_gen_hermite_table().get(m, n); }

ExactPoly hankel_det(const PolyMatrix& entries) {
  const std::size_t n = entries.size();
  for (const auto& row : entries) {
    if (row.size() != n) throw Error(ErrorKind::DomainError, "hankel_det needs a square matrix");
  }
  if (n == 0) return ExactPoly{1};
  if (n == 1) return entries[0][0];

  PolyMatrix a = entries;
  bool negate = false;
  ExactPoly previous{1};
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && a[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return {};
      std::swap(a[k], a[swap_row]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        ExactPoly t = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        a[i][j] = divide_exact(t, previous);
      }
    }
    previous = a[k][k];
  }
  return negate ? -a[n - 1][n - 1] : a[n - 1][n - 1];
}

ExactPoly moment_poly(long m, long j) {
  if (j < 0 || m + j < 0) {
    throw Error(ErrorKind::DomainError,
                "moment index m + j = " + std::to_string(m + j) + " (j = " + std::to_string(j) + ") is negative");
  }
  const auto k = static_cast<unsigned>(m + j);
  return hermite(k) * mpq_class(1, factorial(k));
}

ExactPoly tau_det(unsigned m, unsigned n) {
  PolyMatrix a(n, std::vector<ExactPoly>(n));
  for (unsigned j = 0; j < n; ++j) {
    for (unsigned k = 0; k < n; ++k) a[j][k] = hermite(m + j + k);
  }
  return hankel_det(a);
}

ExactPoly moment_hankel_det(long m, unsigned n) {
  PolyMatrix a(n, std::vector<ExactPoly>(n));
  for (unsigned j = 0; j < n; ++j) {
    for (unsigned k = 0; k < n; ++k) a[j][k] = moment_poly(m, static_cast<long>(j + k));
  }
  return hankel_det(a);
}

namespace {

// p(iy) == i^shift q(y) for real p, q: coefficient k picks up i^(k - shift),
// which must be real wherever either side is nonzero.
bool rotated_equal(const ExactPoly& p, const ExactPoly& q, long shift) {
  const std::size_t top = std::max(p.coeffs().size(), q.coeffs().size());
  for (std::size_t k = 0; k < top; ++k) {
    const mpq_class a = p.coeff(k);
    const mpq_class b = q.coeff(k);
    const long e = static_cast<long>(k) - shift;
    if (e % 2 != 0) {
      if (sgn(a) != 0 || sgn(b) != 0) return false;
      continue;
    }
    const bool negate = ((e / 2) % 2) != 0;
    if (a != (negate ? mpq_class(-b) : b)) return false;
  }
  return true;
}

}  // namespace

bool check_hermite_symmetry(unsigned m, unsigned n) {
  return rotated_equal(gen_hermite(m, n), gen_hermite(n, m), static_cast<long>(m) * static_cast<long>(n));
}

bool check_hermite_specializations(unsigned k) {
  if (gen_hermite(k, 1) != hermite(k)) return false;
  // i^{-k} H_k(iy) == H_{1,k}(y)  <=>  H_k(iy) == i^k H_{1,k}(y)
  return rotated_equal(hermite(k), gen_hermite(1, k), static_cast<long>(k));
}

}  // namespace p4r
