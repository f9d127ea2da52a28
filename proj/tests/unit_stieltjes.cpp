#include <doctest.h>

#include <cmath>
#include <complex>

#include "rmtlab/errors.hpp"
#include "rmtlab/stieltjes.hpp"
#include "rmtlab/wigner.hpp"

using namespace rmtlab;

TEST_CASE("transform at i and at the real boundary") {
  const cd si = semicircle_stieltjes(cd(0.0, 1.0));
  CHECK(si.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(si.imag() ==
        doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-12));
  CHECK(std::abs(si - cd(0.0, 0.618034)) <= 1e-6);

  const cd s3 = semicircle_stieltjes(cd(3.0, 0.0));
  CHECK(s3.imag() == 0.0);
  CHECK(s3.real() ==
        doctest::Approx((-3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(std::abs(s3.real() + 0.381966) <= 1e-6);

  const cd sm3 = semicircle_stieltjes(cd(-3.0, 0.0));
  CHECK(std::abs(sm3) <= 1.0);

  CHECK_THROWS_AS(semicircle_stieltjes(cd(1.5, 0.0)), BranchUndefined);
  CHECK_THROWS_AS(semicircle_stieltjes(cd(2.0, 0.0)), BranchUndefined);
  CHECK_THROWS_AS(semicircle_stieltjes(cd(0.3, -0.2)), BranchUndefined);
}

TEST_CASE("quadratic, branch and bounded-modulus properties on the window") {
  const DomainG dom(2.0, 1.0, 500);
  for (const cd z : domain_grid(dom, 9, 5)) {
    const cd s = semicircle_stieltjes(z);
    CHECK(s.imag() > 0.0);
    CHECK(std::abs(s) <= 1.0 + 1e-12);
    CHECK(std::abs(s * s + z * s + 1.0) <= 1e-12);
    const cd w = sqrt_z2m4(z);
    CHECK(std::abs(1.0 - s * s - s * w) <= 1e-12);
    CHECK(std::abs(w * w - (z * z - 4.0)) <= 1e-10);
  }
  // far from the spectrum too
  for (const cd z : {cd(0.0, 2.0), cd(1.0, 0.05), cd(-1.7, 0.3)}) {
    const cd s = semicircle_stieltjes(z);
    CHECK(std::abs(1.0 - s * s - s * sqrt_z2m4(z)) <= 1e-12);
  }
}

TEST_CASE("transform decays like -1/z upward") {
  for (double y : {10.0, 100.0}) {
    const cd z(0.0, y);
    CHECK(std::abs(semicircle_stieltjes(z) * z + 1.0) <= 2.0 / (y * y));
  }
}

TEST_CASE("empirical transform: single pole and symmetric pair") {
  Spectrum one{{0.0}, {1, 0, "manual"}};
  const cd m1 = empirical_stieltjes(one, cd(0.0, 1.0));
  CHECK(m1.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m1.imag() == doctest::Approx(1.0).epsilon(1e-15));

  Spectrum pair{{-1.0, 1.0}, {2, 0, "manual"}};
  const cd m2 = empirical_stieltjes(pair, cd(0.0, 1.0));
  CHECK(m2.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m2.imag() == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(empirical_stieltjes(pair, cd(0.5, 0.0)), UsageError);
}

TEST_CASE("empirical transform: Herglotz and conjugation symmetry") {
  const WignerMatrix w = build_wigner(30, EntryLaw::gaussian(), 3);
  const Spectrum s = eigenvalues(w);
  for (const cd z : {cd(0.2, 0.5), cd(-1.0, 0.01), cd(1.9, 2.0)}) {
    const cd m = empirical_stieltjes(s, z);
    CHECK(m.imag() > 0.0);
    const cd mc = empirical_stieltjes(s, std::conj(z));
    CHECK(std::abs(mc - std::conj(m)) <= 1e-15);
  }
}

TEST_CASE("window geometry at n=1000, A0=2, a=1") {
  const DomainG dom(2.0, 1.0, 1000);
  CHECK(dom.v0() == doctest::Approx(0.002).epsilon(1e-15));
  CHECK(dom.eps() == doctest::Approx(0.025198420997897464).epsilon(1e-9));
  CHECK(std::abs(dom.eps() - 0.025198) <= 1e-6);
  // defining relation, to relative 1e-12
  CHECK(std::pow(dom.eps(), 1.5) ==
        doctest::Approx(2.0 * dom.v0() * 1.0).epsilon(1e-12));
  CHECK(dom.v_min(1.0) == doctest::Approx(0.002).epsilon(1e-12));
  CHECK(dom.v_min(1.9) == doctest::Approx(0.0063245553).epsilon(1e-6));
  CHECK(dom.contains(0.0, 0.002));
  CHECK_FALSE(dom.contains(0.0, 0.0005));
  CHECK_FALSE(dom.contains(1.999, 0.5));
}

TEST_CASE("grid points all pass the window test") {
  for (int n : {100, 400, 1000}) {
    const DomainG dom(2.0, 1.0, n);
    const auto grid = domain_grid(dom, 21, 8);
    CHECK(grid.size() == 21u * 8u);
    for (const cd z : grid) {
      CHECK(dom.contains(z.real(), z.imag()));
      CHECK(z.imag() * std::sqrt(dom.gamma(z.real())) >=
            dom.v0() * (1.0 - 1e-12));
      CHECK(z.imag() <= 1.0 + 1e-12);
    }
  }
  CHECK_THROWS_AS(DomainG(2.0, 1000.0, 10), EmptyDomain);
  const DomainG ok(2.0, 1.0, 100);
  CHECK_THROWS_AS(domain_grid(ok, 1, 8), UsageError);
}

TEST_CASE("bound shape: frozen value, scaling in n, monotone in v") {
  const DomainG dom100(2.0, 1.0, 100);
  const cd z(0.0, 0.1);
  const double b = stieltjes_bound(dom100, z);
  // 1/(100 * 0.1^{3/4}) + 1/(1000 * 0.1^{3/2} * 4.01^{1/4})
  CHECK(std::abs(b - 0.07858) <= 5e-5);

  const DomainG dom200(2.0, 1.0, 200);
  const double b2 = stieltjes_bound(dom200, z);
  const double first_100 = 1.0 / (100.0 * std::pow(0.1, 0.75));
  const double second_100 = b - first_100;
  CHECK(b2 == doctest::Approx(first_100 / 2.0 +
                              second_100 / (2.0 * std::sqrt(2.0)))
                  .epsilon(1e-12));

  double prev = stieltjes_bound(dom100, cd(0.0, 0.05));
  for (double v : {0.1, 0.2, 0.5, 1.0}) {
    const double cur = stieltjes_bound(dom100, cd(0.0, v));
    CHECK(cur < prev);
    prev = cur;
  }

  CHECK_THROWS_AS(stieltjes_bound(dom100, cd(0.0, 1e-5)), OutsideDomain);
  CHECK_THROWS_AS(stieltjes_bound(dom100, cd(1.999, 0.5)), OutsideDomain);
}
