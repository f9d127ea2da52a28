#pragma once

#include <vector>

#include "rmtlab/wigner.hpp"

namespace rmtlab {

// Householder reduction of a dense symmetric matrix to tridiagonal form.
// `a` is row-major n*n, only the lower triangle is read, contents are
// destroyed.  On return d holds the diagonal and e[1..n-1] the subdiagonal
// (e[0] = 0).
void householder_tridiag(std::vector<double>& a, int n, std::vector<double>& d,
                         std::vector<double>& e);

// Implicit-shift QL iteration on a tridiagonal matrix, eigenvalues only.
// e uses the convention of householder_tridiag.  Throws NoConvergence when
// an eigenvalue fails to settle within 50 sweeps.
void ql_implicit(std::vector<double>& d, std::vector<double>& e);

// All eigenvalues, ascending.
std::vector<double> sym_eigenvalues(const SymMatrix& m);
std::vector<double> sym_eigenvalues(const MinorView& m);

}  // namespace rmtlab
