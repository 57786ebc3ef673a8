#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "p4r/error.hpp"
#include "p4r/hermite.hpp"
#include "p4r/rootfinder.hpp"

using namespace p4r;

namespace {

// Eigenvalues of the companion matrix in double precision.
std::vector<std::complex<double>> companion_roots(const ExactPoly& p) {
  const auto d = static_cast<Eigen::Index>(p.degree());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
  const double lead = p.leading().get_d();
  for (Eigen::Index i = 1; i < d; ++i) c(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) c(i, d - 1) = -p.coeff(static_cast<std::size_t>(i)).get_d() / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(c, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < d; ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

// Largest distance after greedy nearest matching.
double match_distance(const std::vector<ComplexHP>& found, std::vector<std::complex<double>> oracle) {
  double worst = 0;
  for (const auto& z : found) {
    const std::complex<double> zd = z.to_complex();
    auto it = std::min_element(oracle.begin(), oracle.end(),
                               [&](const auto& a, const auto& b) { return std::abs(a - zd) < std::abs(b - zd); });
    worst = std::max(worst, std::abs(*it - zd));
    oracle.erase(it);
  }
  return worst;
}

HpReal set_distance(const std::vector<ComplexHP>& a, const std::vector<ComplexHP>& b) {
  HpReal worst;
  for (const auto& z : a) {
    HpReal best = dist(z, b.front());
    for (const auto& w : b) best = min(best, dist(z, w));
    worst = max(worst, best);
  }
  return worst;
}

}  // namespace

TEST_CASE("simple roots") {
  const RootSet quad = find_roots(ExactPoly{-1, 0, 1}, 192);
  REQUIRE(quad.roots.size() == 2);
  std::vector<double> re;
  for (const auto& z : quad.roots) {
    CHECK(abs(z.im) < HpReal(1e-50));
    re.push_back(z.re.to_double());
  }
  std::sort(re.begin(), re.end());
  CHECK(re[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(re[1] == doctest::Approx(1.0).epsilon(1e-15));

  const RootSet h2 = find_roots(hermite(2), 192);
  const HpReal target = sqrt(HpReal(1) / HpReal(2));
  for (const auto& z : h2.roots) CHECK(abs(abs(z) - target) < HpReal(1e-50));

  const RootSet zero = find_roots(ExactPoly{0, 0, 0, 1}, 128);
  REQUIRE(zero.roots.size() == 3);
  for (const auto& z : zero.roots) CHECK(z.is_zero());
  CHECK_THROWS_AS(find_roots(ExactPoly{5}, 128), Error);
}

TEST_CASE("companion oracle, degree up to 8") {
  std::vector<ExactPoly> suite = {gen_hermite(2, 2), gen_hermite(2, 1), gen_hermite(3, 2), gen_hermite(2, 4),
                                  gen_hermite(4, 2), hermite(7), hermite(8), ExactPoly{1, 1, 1, 1, 1}};
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> coeff(-20, 20);
  for (int trial = 0; trial < 12; ++trial) {
    const int deg = 1 + trial % 8;
    std::vector<long> c;
    for (int k = 0; k < deg; ++k) c.push_back(coeff(rng));
    c.push_back(1 + std::abs(coeff(rng)));
    if (c[0] == 0) c[0] = 3;
    ExactPoly p;
    for (std::size_t k = 0; k < c.size(); ++k) p = p + ExactPoly::monomial(mpq_class(c[k]), k);
    suite.push_back(p);
  }
  for (const auto& p : suite) {
    CAPTURE(p.degree());
    const RootSet rs = find_roots(p, 192);
    CHECK(rs.roots.size() == p.degree());
    CHECK(match_distance(rs.roots, companion_roots(p)) < 1e-12);
  }
}

TEST_CASE("root set invariants for H_{m,n}") {
  for (unsigned m = 1; m <= 5; ++m) {
    for (unsigned n = 1; n <= 5; ++n) {
      CAPTURE(m);
      CAPTURE(n);
      const ExactPoly p = gen_hermite(m, n);
      const RootSet rs = find_roots(p, 192);
      REQUIRE(rs.roots.size() == static_cast<std::size_t>(m * n));
      CHECK(rs.source_degree == static_cast<std::size_t>(m * n));
      for (const auto& res : rs.residuals) CHECK(res <= ldexp(HpReal(1), -96));
      for (bool c : rs.clustered) CHECK_FALSE(c);

      std::vector<ComplexHP> conj_set;
      std::vector<ComplexHP> neg_set;
      ComplexHP sum;
      for (const auto& z : rs.roots) {
        conj_set.push_back(conj(z));
        neg_set.push_back(-z);
        sum += z;
      }
      CHECK(set_distance(rs.roots, conj_set) < HpReal(1e-20));
      CHECK(set_distance(rs.roots, neg_set) < HpReal(1e-20));
      const HpReal vieta(mpq_class(-p.coeff(p.degree() - 1) / p.leading()));
      CHECK(abs(sum - ComplexHP(vieta)) < HpReal(1e-20));
    }
  }
}

TEST_CASE("scaled zero cloud") {
  const RootSet one = scaled_zero_cloud(1, 1, ScaleVariable::M, 128);
  REQUIRE(one.roots.size() == 1);
  CHECK(one.roots[0].is_zero());
  const RootSet two = scaled_zero_cloud(2, 1, ScaleVariable::M, 192);
  REQUIRE(two.roots.size() == 2);
  for (const auto& z : two.roots) CHECK(abs(abs(z) - HpReal(0.5)) < HpReal(1e-40));
  const RootSet chi = scaled_zero_cloud(2, 4, ScaleVariable::N, 192);
  const RootSet raw = find_roots(gen_hermite(2, 4), 192);
  std::vector<ComplexHP> scaled;
  for (const auto& z : raw.roots) scaled.push_back(z / HpReal(2));
  CHECK(set_distance(chi.roots, scaled) < HpReal(1e-40));
  CHECK_THROWS_AS(scaled_zero_cloud(0, 3, ScaleVariable::M, 128), Error);
}

TEST_CASE("determinism and bounds") {
  const ExactPoly p = gen_hermite(3, 3);
  const RootSet a = find_roots(p, 160, {500, 99});
  const RootSet b = find_roots(p, 160, {500, 99});
  REQUIRE(a.roots.size() == b.roots.size());
  for (std::size_t k = 0; k < a.roots.size(); ++k) CHECK(a.roots[k].re == b.roots[k].re);
  const HpReal bound = cauchy_bound(p);
  for (const auto& z : a.roots) CHECK(abs(z) <= bound);
  RootFinderOptions starved;
  starved.max_iterations = 1;
  CHECK_THROWS_AS(find_roots(gen_hermite(6, 6), 192, starved), Error);
}
