#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rmtlab/spectral.hpp"

namespace rmtlab {

using cd = std::complex<double>;

// Stieltjes transform of the semicircle law: the root of s^2 + z s + 1 = 0
// with Im s > 0 for Im z > 0; real z with |z| > 2 is taken as the boundary
// limit (the root with |s| <= 1).  BranchUndefined on [-2,2].
cd semicircle_stieltjes(cd z);

// The square root of z^2 - 4 on the branch adapted to the transform:
// 1 - s(z)^2 = s(z) * sqrt_z2m4(z) holds identically.
cd sqrt_z2m4(cd z);

// m_n(z) = (1/n) sum_j 1/(lambda_j - z); requires Im z != 0.
cd empirical_stieltjes(const Spectrum& s, cd z);
cd empirical_stieltjes(std::span<const double> lambda, int n, cd z);

// Spectral window where the transform bounds are tracked: |u| <= 2 - eps
// and v sqrt(gamma) >= v0 with gamma = |2 - |u||, v0 = A0/n and
// eps^{3/2} = 2 v0 a.
struct DomainG {
  double a0 = 2.0;
  double a_param = 1.0;
  int n = 0;

  DomainG(double a0_, double a_param_, int n_);  // EmptyDomain when eps >= 2

  double v0() const { return a0 / n; }
  double eps() const { return eps_; }
  double gamma(double u) const { return std::abs(2.0 - std::abs(u)); }
  double v_min(double u) const { return v0() / std::sqrt(gamma(u)); }
  bool contains(double u, double v) const;

 private:
  double eps_ = 0.0;
};

// n_u uniform u-points across the window; per u, n_v geometrically spaced
// v-points from v_min(u) up to 1.  Every emitted point is inside.
std::vector<cd> domain_grid(const DomainG& dom, int n_u, int n_v);

// Bound shape 1/(n v^{3/4}) + 1/(n^{3/2} v^{3/2} |z^2-4|^{1/4}) with unit
// constant; consumers divide an observed gap by this to trace the constant.
double stieltjes_bound(const DomainG& dom, cd z);

}  // namespace rmtlab
