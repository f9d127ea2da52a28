#pragma once

#include <complex>
#include <vector>

#include "rmtlab/wigner.hpp"

namespace rmtlab {

using cd = std::complex<double>;

// Dense complex matrix, row-major.
struct ComplexMatrix {
  int n = 0;
  std::vector<cd> a;

  explicit ComplexMatrix(int dim = 0) : n(dim), a(std::size_t(dim) * dim) {}

  cd& at(int i, int j) { return a[std::size_t(i) * n + j]; }
  cd at(int i, int j) const { return a[std::size_t(i) * n + j]; }

  cd trace() const;
  // Trace of the matrix square; for a (complex-)symmetric matrix this is
  // the sum of squared entries.
  cd trace_of_square() const;
};

// LU with partial pivoting for dense complex systems.
class ComplexLU {
 public:
  explicit ComplexLU(ComplexMatrix m);  // SolveFailure on a zero pivot

  int n() const { return n_; }

  void solve_in_place(std::vector<cd>& b) const;
  ComplexMatrix inverse() const;

 private:
  int n_;
  std::vector<cd> lu_;
  std::vector<int> pivot_;
};

// (m - z I)^{-1} for a real symmetric m.
ComplexMatrix shifted_inverse(const SymMatrix& m, cd z);
ComplexMatrix shifted_inverse(const MinorView& m, cd z);

}  // namespace rmtlab
