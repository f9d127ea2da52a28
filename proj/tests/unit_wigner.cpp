#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "oracles.hpp"
#include "rmtlab/eigen_sym.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/wigner.hpp"

using namespace rmtlab;

TEST_CASE("1x1 rademacher matrix is just a sign") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 99ULL}) {
    const WignerMatrix w = build_wigner(1, EntryLaw::rademacher(), seed);
    CHECK((w.mat.at(0, 0) == 1.0 || w.mat.at(0, 0) == -1.0));
  }
}

TEST_CASE("same seed gives bitwise identical matrices") {
  const WignerMatrix a = build_wigner(2, EntryLaw::gaussian(), 12345);
  const WignerMatrix b = build_wigner(2, EntryLaw::gaussian(), 12345);
  CHECK(a.mat.a == b.mat.a);
  const WignerMatrix c = build_wigner(2, EntryLaw::gaussian(), 12346);
  CHECK(a.mat.a != c.mat.a);

  const WignerMatrix big_a = build_wigner(40, EntryLaw::pareto(4.5), 8,
                                          TruncationSpec{1.0, 0.5});
  const WignerMatrix big_b = build_wigner(40, EntryLaw::pareto(4.5), 8,
                                          TruncationSpec{1.0, 0.5});
  CHECK(big_a.mat.a == big_b.mat.a);
}

TEST_CASE("symmetry is exact, not approximate") {
  const WignerMatrix w = build_wigner(37, EntryLaw::gaussian(), 17);
  for (int i = 0; i < 37; ++i)
    for (int j = 0; j < 37; ++j) CHECK(w.mat.at(i, j) == w.mat.at(j, i));
}

TEST_CASE("gaussian n=1000: entry bound and Frobenius mass") {
  const int n = 1000;
  double fro_over_n_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const WignerMatrix w = build_wigner(n, EntryLaw::gaussian(), 1000 + seed);
    if (seed < 3) {
      double max_abs = 0.0;
      for (double v : w.mat.a) max_abs = std::max(max_abs, std::abs(v));
      CHECK(max_abs <= 7.0 / std::sqrt(static_cast<double>(n)));
    }
    fro_over_n_sum += w.mat.frobenius_sq() / n;
  }
  // E |W|_F^2 = n exactly: every entry has unit variance and the 1/sqrt(n)
  // scaling divides the n^2 total by n.
  CHECK(fro_over_n_sum / 100.0 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("minor: empty deletion, direct deletion, nesting") {
  const WignerMatrix w = build_wigner(8, EntryLaw::gaussian(), 5);

  const MinorView all = minor(w, {});
  CHECK(all.n() == 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(all.at(i, j) == w.mat.at(i, j));

  const WignerMatrix w2 = build_wigner(2, EntryLaw::gaussian(), 6);
  const MinorView m2 = minor(w2, {1});
  CHECK(m2.n() == 1);
  CHECK(m2.at(0, 0) == w2.mat.at(0, 0));

  // deleting {3} then local index of parent 5 equals deleting {3,5}
  const MinorView first = minor(w, {3});
  int local_of_5 = -1;
  for (int i = 0; i < first.n(); ++i) {
    if (first.parent_index(i) == 5) local_of_5 = i;
  }
  REQUIRE(local_of_5 >= 0);
  const MinorView nested = first.minor({local_of_5});
  const MinorView direct = minor(w, {3, 5});
  REQUIRE(nested.n() == direct.n());
  for (int i = 0; i < nested.n(); ++i) {
    CHECK(nested.parent_index(i) == direct.parent_index(i));
    for (int j = 0; j < nested.n(); ++j) {
      CHECK(nested.at(i, j) == direct.at(i, j));
    }
  }

  CHECK_THROWS_AS(minor(w, {8}), IndexOutOfRange);
  CHECK_THROWS_AS(minor(w, {-1}), IndexOutOfRange);
  CHECK_THROWS_AS(first.minor({7}), IndexOutOfRange);
}

TEST_CASE("minor eigenvalues interlace the parent's") {
  for (std::uint64_t seed : {3ULL, 4ULL, 5ULL}) {
    const WignerMatrix w = build_wigner(8, EntryLaw::gaussian(), seed);
    const auto parent = sym_eigenvalues(w.mat);
    const auto inner = sym_eigenvalues(minor(w, {3}));
    for (int k = 0; k < 7; ++k) {
      CHECK(parent[k] <= inner[k]);
      CHECK(inner[k] <= parent[k + 1]);
    }
  }
  // and at n = 64, exact comparisons across every deleted index
  const WignerMatrix w = build_wigner(64, EntryLaw::rademacher(), 11);
  const auto parent = sym_eigenvalues(w.mat);
  for (int j : {0, 31, 63}) {
    const auto inner = sym_eigenvalues(minor(w, {j}));
    for (int k = 0; k < 63; ++k) {
      CHECK(parent[k] <= inner[k]);
      CHECK(inner[k] <= parent[k + 1]);
    }
  }
}

TEST_CASE("binary file round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rmtlab_test_io";
  fs::create_directories(dir);
  const std::string path = (dir / "w.mat").string();

  const WignerMatrix w = build_wigner(19, EntryLaw::pareto(5.5), 321,
                                      TruncationSpec{1.25, 0.75});
  save_wigner(w, path);
  const WignerMatrix r = load_wigner(path);
  CHECK(r.n() == w.n());
  CHECK(r.seed == w.seed);
  CHECK(r.law.id() == w.law.id());
  REQUIRE(r.trunc.has_value());
  CHECK(r.trunc->d_const == w.trunc->d_const);
  CHECK(r.trunc->kappa == w.trunc->kappa);
  CHECK(r.mat.a == w.mat.a);

  const WignerMatrix plain = build_wigner(5, EntryLaw::gaussian(), 9);
  save_wigner(plain, path);
  const WignerMatrix rp = load_wigner(path);
  CHECK_FALSE(rp.trunc.has_value());
  CHECK(rp.mat.a == plain.mat.a);

  CHECK_THROWS_AS(load_wigner((dir / "missing.mat").string()), IoError);
  fs::remove_all(dir);
}
