#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmtlab/entry_laws.hpp"

namespace rmtlab {

// Dense real symmetric matrix, row-major, both triangles stored and kept
// bitwise equal.
struct SymMatrix {
  int n = 0;
  std::vector<double> a;

  explicit SymMatrix(int dim = 0) : n(dim), a(std::size_t(dim) * dim, 0.0) {}

  double& at(int i, int j) { return a[std::size_t(i) * n + j]; }
  double at(int i, int j) const { return a[std::size_t(i) * n + j]; }

  void set_sym(int i, int j, double v) {
    at(i, j) = v;
    at(j, i) = v;
  }

  double trace() const;
  double frobenius_sq() const;
};

// Symmetric random matrix W = X / sqrt(n) with reproducible provenance.
struct WignerMatrix {
  SymMatrix mat;
  EntryLaw law;
  std::uint64_t seed = 0;
  std::optional<TruncationSpec> trunc;

  int n() const { return mat.n; }
};

// Upper triangle (diagonal included) drawn i.i.d. in row-major order from
// the (possibly truncated) law, scaled by 1/sqrt(n).  Deterministic in
// (n, law, seed, trunc).
WignerMatrix build_wigner(int n, const EntryLaw& law, std::uint64_t seed,
                          const std::optional<TruncationSpec>& trunc = {});

// Read-only principal-submatrix view.  Indices live in parent coordinates
// so the bookkeeping of per-index decompositions never shifts.
class MinorView {
 public:
  MinorView(const SymMatrix& parent, std::vector<int> keep);

  int n() const { return static_cast<int>(keep_.size()); }
  double at(int i, int j) const { return parent_->at(keep_[i], keep_[j]); }
  int parent_index(int i) const { return keep_[i]; }
  const std::vector<int>& kept() const { return keep_; }

  // Delete further rows/columns, indices in this view's coordinates.
  MinorView minor(const std::vector<int>& local_deleted) const;

  SymMatrix dense() const;

 private:
  const SymMatrix* parent_;
  std::vector<int> keep_;  // ascending parent indices
};

// View of w with rows/columns `deleted` (parent coordinates, 0-based)
// removed; the parent's 1/sqrt(n) scaling is untouched.
MinorView minor(const WignerMatrix& w, const std::vector<int>& deleted);
MinorView minor(const SymMatrix& m, const std::vector<int>& deleted);

// Binary round-trip: header (n, law id, seed, truncation) followed by the
// packed row-major upper triangle as 64-bit floats.
void save_wigner(const WignerMatrix& w, const std::string& path);
WignerMatrix load_wigner(const std::string& path);

}  // namespace rmtlab
