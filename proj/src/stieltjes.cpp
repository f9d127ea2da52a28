#include "rmtlab/stieltjes.hpp"

#include <algorithm>
#include <cmath>

#include "rmtlab/errors.hpp"

namespace rmtlab {

cd semicircle_stieltjes(cd z) {
  const bool upper = z.imag() > 0.0;
  if (!upper) {
    if (z.imag() < 0.0 || std::abs(z.real()) <= 2.0) {
      throw BranchUndefined(
          "semicircle transform needs Im z > 0 or real |z| > 2");
    }
  }
  // Roots of s^2 + z s + 1 multiply to 1; compute the numerically safe one
  // first and take the reciprocal for the other.
  const cd w = std::sqrt(z * z - 4.0);
  const cd zw = (std::real(std::conj(z) * w) >= 0.0) ? w : -w;
  const cd big = -(z + zw) / 2.0;  // |big| >= 1
  const cd small = 1.0 / big;
  if (upper) return small.imag() > 0.0 ? small : big;
  return small;  // real boundary: |s| <= 1 root
}

cd sqrt_z2m4(cd z) {
  const cd s = semicircle_stieltjes(z);
  return (1.0 - s * s) / s;
}

cd empirical_stieltjes(std::span<const double> lambda, int n, cd z) {
  if (z.imag() == 0.0) {
    throw UsageError("empirical transform needs Im z != 0");
  }
  cd sum = 0.0;
  for (double l : lambda) sum += 1.0 / (cd(l, 0.0) - z);
  return sum / static_cast<double>(n);
}

cd empirical_stieltjes(const Spectrum& s, cd z) {
  return empirical_stieltjes(std::span<const double>(s.lambda), s.n(), z);
}

DomainG::DomainG(double a0_, double a_param_, int n_)
    : a0(a0_), a_param(a_param_), n(n_) {
  if (!(a0 > 0.0) || !(a_param > 0.0) || n < 1) {
    throw UsageError("domain needs A0 > 0, a > 0, n >= 1");
  }
  eps_ = std::pow(2.0 * v0() * a_param, 2.0 / 3.0);
  if (eps_ >= 2.0) {
    throw EmptyDomain("window eps >= 2: n too small for A0=" +
                      std::to_string(a0) + ", a=" + std::to_string(a_param));
  }
}

bool DomainG::contains(double u, double v) const {
  if (std::abs(u) > 2.0 - eps_) return false;
  return v * std::sqrt(gamma(u)) >= v0();
}

std::vector<cd> domain_grid(const DomainG& dom, int n_u, int n_v) {
  if (n_u < 2 || n_v < 2) throw UsageError("grid needs n_u >= 2 and n_v >= 2");
  const double u_max = 2.0 - dom.eps();
  std::vector<cd> pts;
  pts.reserve(std::size_t(n_u) * n_v);
  for (int i = 0; i < n_u; ++i) {
    double u = -u_max + 2.0 * u_max * i / (n_u - 1);
    if (i == n_u - 1) u = u_max;
    u = std::clamp(u, -u_max, u_max);
    // Nudge the lower v edge up until it clears the window test; rounding
    // in v0/sqrt(gamma) can land a hair below it.
    double lo = dom.v_min(u);
    while (!dom.contains(u, lo)) lo *= 1.0 + 4e-16;
    const double hi = 1.0;
    // Geometric spacing; if the window already starts above 1, keep the
    // single admissible point v_min.
    for (int k = 0; k < n_v; ++k) {
      double v;
      if (lo >= hi) {
        v = lo;
      } else {
        v = lo * std::pow(hi / lo, static_cast<double>(k) / (n_v - 1));
        if (k == 0) v = lo;
        if (k == n_v - 1) v = hi;
      }
      if (!dom.contains(u, v)) v = lo;
      pts.emplace_back(u, v);
    }
  }
  return pts;
}

double stieltjes_bound(const DomainG& dom, cd z) {
  const double u = z.real();
  const double v = z.imag();
  if (!dom.contains(u, v)) {
    throw OutsideDomain("bound requested outside the spectral window");
  }
  const double n = static_cast<double>(dom.n);
  const double edge = std::pow(std::abs(z * z - 4.0), 0.25);
  return 1.0 / (n * std::pow(v, 0.75)) +
         1.0 / (std::pow(n, 1.5) * std::pow(v, 1.5) * edge);
}

}  // namespace rmtlab
