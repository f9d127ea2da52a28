#include "rmtlab/complex_lu.hpp"

#include <cmath>
#include <utility>

#include "rmtlab/errors.hpp"

namespace rmtlab {

cd ComplexMatrix::trace() const {
  cd t = 0.0;
  for (int i = 0; i < n; ++i) t += at(i, i);
  return t;
}

cd ComplexMatrix::trace_of_square() const {
  cd t = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t += at(i, j) * at(j, i);
  return t;
}

namespace {

// y[0..m) -= alpha * x[0..m), spelled out on doubles so the compiler can
// vectorize the complex multiply.
inline void caxpy(cd* __restrict y, const cd* __restrict x, cd alpha, int m) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  double* __restrict yy = reinterpret_cast<double*>(y);
  const double* __restrict xx = reinterpret_cast<const double*>(x);
  for (int j = 0; j < m; ++j) {
    const double xr = xx[2 * j];
    const double xi = xx[2 * j + 1];
    yy[2 * j] -= ar * xr - ai * xi;
    yy[2 * j + 1] -= ar * xi + ai * xr;
  }
}

inline double abs1(cd v) { return std::abs(v.real()) + std::abs(v.imag()); }

}  // namespace

ComplexLU::ComplexLU(ComplexMatrix m)
    : n_(m.n), lu_(std::move(m.a)), pivot_(m.n) {
  const int n = n_;
  auto row = [&](int i) { return lu_.data() + std::size_t(i) * n; };
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = abs1(row(k)[k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = abs1(row(i)[k]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    pivot_[k] = piv;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(row(k)[j], row(piv)[j]);
    }
    const cd akk = row(k)[k];
    if (akk == cd(0.0, 0.0)) {
      throw SolveFailure("zero pivot at column " + std::to_string(k));
    }
    const cd inv = 1.0 / akk;
    for (int i = k + 1; i < n; ++i) {
      const cd lik = row(i)[k] * inv;
      row(i)[k] = lik;
      caxpy(row(i) + k + 1, row(k) + k + 1, lik, n - k - 1);
    }
  }
}

void ComplexLU::solve_in_place(std::vector<cd>& b) const {
  const int n = n_;
  if (static_cast<int>(b.size()) != n) {
    throw UsageError("rhs length does not match system size");
  }
  const auto row = [&](int i) { return lu_.data() + std::size_t(i) * n; };
  // All recorded swaps first, then clean triangular solves against the
  // final factors.
  for (int k = 0; k < n; ++k) {
    if (pivot_[k] != k) std::swap(b[k], b[pivot_[k]]);
  }
  for (int k = 0; k < n; ++k) {
    for (int i = k + 1; i < n; ++i) b[i] -= row(i)[k] * b[k];
  }
  for (int k = n - 1; k >= 0; --k) {
    b[k] /= row(k)[k];
    for (int i = 0; i < k; ++i) b[i] -= row(i)[k] * b[k];
  }
}

ComplexMatrix ComplexLU::inverse() const {
  const int n = n_;
  ComplexMatrix x(n);
  for (int i = 0; i < n; ++i) x.at(i, i) = 1.0;
  const auto lurow = [&](int i) { return lu_.data() + std::size_t(i) * n; };
  const auto xrow = [&](int i) { return x.a.data() + std::size_t(i) * n; };
  for (int k = 0; k < n; ++k) {
    if (pivot_[k] != k) {
      cd* a = xrow(k);
      cd* b = xrow(pivot_[k]);
      for (int j = 0; j < n; ++j) std::swap(a[j], b[j]);
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = k + 1; i < n; ++i) caxpy(xrow(i), xrow(k), lurow(i)[k], n);
  }
  for (int k = n - 1; k >= 0; --k) {
    const cd inv = 1.0 / lurow(k)[k];
    cd* xk = xrow(k);
    const double ar = inv.real();
    const double ai = inv.imag();
    for (int j = 0; j < n; ++j) {
      const double xr = xk[j].real();
      const double xi = xk[j].imag();
      xk[j] = cd(ar * xr - ai * xi, ar * xi + ai * xr);
    }
    for (int i = 0; i < k; ++i) caxpy(xrow(i), xk, lurow(i)[k], n);
  }
  return x;
}

namespace {

ComplexMatrix shifted_inverse_impl(int n, const auto& entry, cd z) {
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.at(i, j) = entry(i, j);
      if (i == j) m.at(i, j) -= z;
    }
  return ComplexLU(std::move(m)).inverse();
}

}  // namespace

ComplexMatrix shifted_inverse(const SymMatrix& m, cd z) {
  return shifted_inverse_impl(
      m.n, [&](int i, int j) { return m.at(i, j); }, z);
}

ComplexMatrix shifted_inverse(const MinorView& m, cd z) {
  return shifted_inverse_impl(
      m.n(), [&](int i, int j) { return m.at(i, j); }, z);
}

}  // namespace rmtlab
