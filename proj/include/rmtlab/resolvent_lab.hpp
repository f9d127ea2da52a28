#pragma once

#include <optional>
#include <vector>

#include "rmtlab/complex_lu.hpp"
#include "rmtlab/entry_laws.hpp"
#include "rmtlab/stieltjes.hpp"
#include "rmtlab/wigner.hpp"

namespace rmtlab {

struct Resolvent {
  cd z;
  ComplexMatrix entries;  // (W - zI)^{-1}
};

// Dense complex LU with partial pivoting; capped at n <= 1024.
Resolvent resolvent(const WignerMatrix& w, cd z);
Resolvent resolvent(const SymMatrix& m, cd z);

// Correction terms expressing R_jj through the j-deleted resolvent M
// (all minor traces normalized by the parent n):
//   eps1 = W_jj
//   eps2 = - sum_{l != k, l,k != j} W_jl W_jk M_lk
//   eps3 = - sum_{l != j} (W_jl^2 - 1/n) M_ll
//   eps4 = (1/n)(Tr R - Tr M)
// With eps their sum, the closed identity R_jj = -1/(z + m_n - eps) holds
// exactly, and substituting 1/s = -(z+s) gives the fixed-point form
// R_jj = s + s(Lambda_n - eps) R_jj with Lambda_n = m_n - s.
struct ResolventDecomposition {
  int j = 0;
  cd z;
  cd eps1, eps2, eps3, eps4;
  cd eps_total;
  cd m_n;        // (1/n) Tr R, solve route
  cd m_n_minor;  // (1/n) Tr M, independent minor solve
  cd lambda_n;   // m_n - s(z)
  cd r_jj;
  double residual_schur = 0.0;  // closed identity
  double residual_rjj1 = 0.0;   // fixed-point form
};

// The minor resolvent is factored directly (not derived from R), so the
// residuals genuinely tie two independent solves together.
ResolventDecomposition decompose(const WignerMatrix& w, int j, cd z);

// Machine-precision residuals of the whole identity family at one (W, z).
struct IdentityReport {
  int n = 0;
  cd z;
  double max_residual_schur = 0.0;   // closed identity, max over j
  double max_residual_rjj1 = 0.0;    // fixed-point form, max over j
  double max_residual_trace = 0.0;   // trace-difference identity
                                     // Tr R - Tr M = (1 + b^T M^2 b) R_jj
  double residual_73 = 0.0;          // sum_j eps4 R_jj = (1/n) Tr R^2,
                                     // worse of eigenvalue / matrix routes
  double residual_lambda = 0.0;      // Lambda_n (z+s+m_n) = T_n
  double max_eps4_ratio = 0.0;       // max_j n v |eps4| (interlacing <= 1)
  double minor_xcheck = 0.0;         // downdate vs direct factorization
  cd m_n_solve;
  cd m_n_eig;
  double m_route_diff = 0.0;         // |m_n_eig - m_n_solve|
};

// Runs every per-index check.  Minor quantities come from an exact O(n^2)
// downdate of R; `direct_checks` indices are additionally re-solved from a
// scratch minor factorization and compared (minor_xcheck).  n <= 512.
IdentityReport identity_suite(const WignerMatrix& w, cd z,
                              int direct_checks = 4);

struct RjjMomentEstimate {
  int n = 0;
  cd z;
  int p = 0;
  double mean_pow = 0.0;    // estimate of E|R_jj|^p pooled over j
  double stderr_pow = 0.0;  // replica-level standard error
  double norm = 0.0;        // mean_pow^{1/p}
};

// Monte-Carlo estimate of (E|R_jj|^p)^{1/p} over `replicas` fresh matrices;
// replica r draws from stream base_seed ^ r.
RjjMomentEstimate rjj_moment_probe(
    const EntryLaw& law, int n, cd z, int p, int replicas,
    std::uint64_t base_seed, const std::optional<TruncationSpec>& trunc = {},
    int threads = 1);

// Off-diagonal quadratic form Q = sum_{l != k} a_lk xi_l xi_k.
struct QuadraticFormProbe {
  SymMatrix coefficients;  // zero diagonal
  EntryLaw law = EntryLaw::rademacher();
  int q = 4;  // even, >= 4

  double mc_estimate = 0.0;  // E|Q|^q
  double mc_stderr = 0.0;
  double rhs_value = 0.0;  // moment-inequality bracket at unit constant
  std::optional<double> exact_value;  // sign enumeration (Rademacher, dim<=14)
  double k_hat = 0.0;                 // (mc / rhs)^{1/q}
};

// Exact E|Q|^q by enumerating all sign vectors; EnumerationCap beyond 14.
double enumerate_quadratic_form_moment(const SymMatrix& coefficients, int q);

// Symmetric zero-diagonal coefficients, entries uniform on [-1,1].
SymMatrix random_coefficients(int dim, RngStream& rng);

// Moment bracket q^q sigma^q (sum |a|^2)^{q/2}
//   + mu_q q^{3q/2} sum_l (sum_k |a_kl|^2)^{q/2} + q^{2q} mu_q^2 sum |a|^q
// with sigma = 1 (unit-variance entries) and unit leading constant.
double quadratic_form_rhs(const SymMatrix& coefficients, const EntryLaw& law,
                          int q);

// Fills mc/rhs/exact/k_hat.  The exact value is attached automatically
// exactly when the law is Rademacher and dim <= 14.
void fill_quadratic_form_probe(QuadraticFormProbe& probe, int mc_samples,
                               std::uint64_t seed);

struct LambdaProbeEstimate {
  int n = 0;
  cd z;
  double lambda2_scaled = 0.0;  // E|m_n - s|^2 * n^2 v^2
  double lambda2_scaled_stderr = 0.0;
  double eps2_const = 0.0;  // normalized eps2 moment, C-hat
  double eps3_const = 0.0;
  double kappa_used = 0.0;
  int eps_samples = 0;
};

// Dimensionless constants that the transform-gap and row-term bounds say
// stay O(1).  The gap part uses every replica (eigenvalues only); the row
// terms need a minor factorization, so they are sampled on the first
// `eps_replicas` replicas with one rotating index each.
LambdaProbeEstimate lambda_probe(const EntryLaw& law, int n, cd z,
                                 int replicas, std::uint64_t base_seed,
                                 int eps_replicas = 50,
                                 const std::optional<TruncationSpec>& trunc = {},
                                 int threads = 1);

}  // namespace rmtlab
