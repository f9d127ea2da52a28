#include "rmtlab/resolvent_lab.hpp"

#include <algorithm>
#include <cmath>

#include "rmtlab/eigen_sym.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/parallel.hpp"

namespace rmtlab {

namespace {

constexpr int kDenseCap = 1024;
constexpr int kSuiteCap = 512;

void require_upper(cd z, const char* who) {
  if (!(z.imag() > 0.0)) {
    throw UsageError(std::string(who) + " needs Im z > 0");
  }
}

}  // namespace

Resolvent resolvent(const SymMatrix& m, cd z) {
  if (z.imag() == 0.0) throw UsageError("resolvent needs Im z != 0");
  if (m.n > kDenseCap) {
    throw DimensionCap("dense resolvent capped at n <= " +
                       std::to_string(kDenseCap) + ", got " +
                       std::to_string(m.n));
  }
  return Resolvent{z, shifted_inverse(m, z)};
}

Resolvent resolvent(const WignerMatrix& w, cd z) { return resolvent(w.mat, z); }

namespace {

// Everything decompose needs from one minor resolvent M and the entry row
// b_l = W_jl (l != j).
struct MinorTerms {
  cd tr_m;       // Tr M
  cd quad;       // b^T M b
  cd diag_quad;  // sum_l b_l^2 M_ll
  cd mb_sq;      // b^T M^2 b
};

MinorTerms minor_terms_direct(const SymMatrix& mat, int j, cd z) {
  const MinorView mv = minor(mat, {j});
  const ComplexMatrix m = shifted_inverse(mv, z);
  const int nm = m.n;
  std::vector<cd> b(nm);
  for (int l = 0; l < nm; ++l) b[l] = mat.at(j, mv.parent_index(l));

  MinorTerms t{0.0, 0.0, 0.0, 0.0};
  t.tr_m = m.trace();
  std::vector<cd> mb(nm, 0.0);
  for (int l = 0; l < nm; ++l) {
    cd acc = 0.0;
    for (int k = 0; k < nm; ++k) acc += m.at(l, k) * b[k];
    mb[l] = acc;
  }
  for (int l = 0; l < nm; ++l) {
    t.quad += b[l] * mb[l];
    t.diag_quad += b[l] * b[l] * m.at(l, l);
    t.mb_sq += mb[l] * mb[l];
  }
  return t;
}

// Same quantities extracted from the full resolvent by the rank-one
// identity M = R_TT - R_Tj R_jT / R_jj; O(n^2), no fresh factorization.
MinorTerms minor_terms_downdate(const SymMatrix& mat, const ComplexMatrix& r,
                                int j) {
  const int n = mat.n;
  const cd rjj = r.at(j, j);
  std::vector<cd> b(n);
  for (int k = 0; k < n; ++k) b[k] = k == j ? cd(0.0) : cd(mat.at(j, k));

  // q = R b with the j-th source zeroed
  std::vector<cd> q(n, 0.0);
  for (int l = 0; l < n; ++l) {
    const cd* row = r.a.data() + std::size_t(l) * n;
    cd acc = 0.0;
    for (int k = 0; k < n; ++k) acc += row[k] * b[k];
    q[l] = acc;
  }

  MinorTerms t{0.0, 0.0, 0.0, 0.0};
  cd tr_r = 0.0;
  cd col_sq = 0.0;
  cd bq = 0.0;
  for (int l = 0; l < n; ++l) {
    tr_r += r.at(l, l);
    if (l == j) continue;
    const cd rlj = r.at(l, j);
    col_sq += rlj * rlj;
    bq += b[l] * q[l];
    t.diag_quad += b[l] * b[l] * (r.at(l, l) - rlj * rlj / rjj);
    const cd mbl = q[l] - rlj * q[j] / rjj;
    t.mb_sq += mbl * mbl;
  }
  t.tr_m = (tr_r - rjj) - col_sq / rjj;
  t.quad = bq - q[j] * q[j] / rjj;
  return t;
}

struct EpsTerms {
  cd eps1, eps2, eps3, eps4, total;
};

EpsTerms eps_from_terms(const SymMatrix& mat, int j, cd m_n,
                        const MinorTerms& t, int n) {
  EpsTerms e;
  e.eps1 = mat.at(j, j);
  e.eps2 = -(t.quad - t.diag_quad);
  e.eps3 = -t.diag_quad + t.tr_m / static_cast<double>(n);
  e.eps4 = m_n - t.tr_m / static_cast<double>(n);
  e.total = e.eps1 + e.eps2 + e.eps3 + e.eps4;
  return e;
}

}  // namespace

ResolventDecomposition decompose(const WignerMatrix& w, int j, cd z) {
  require_upper(z, "decompose");
  const int n = w.n();
  if (j < 0 || j >= n) {
    throw IndexOutOfRange("decompose index " + std::to_string(j) +
                          " outside matrix of size " + std::to_string(n));
  }
  const Resolvent r = resolvent(w, z);
  const MinorTerms t = minor_terms_direct(w.mat, j, z);

  ResolventDecomposition d;
  d.j = j;
  d.z = z;
  d.m_n = r.entries.trace() / static_cast<double>(n);
  d.m_n_minor = t.tr_m / static_cast<double>(n);
  const EpsTerms e = eps_from_terms(w.mat, j, d.m_n, t, n);
  d.eps1 = e.eps1;
  d.eps2 = e.eps2;
  d.eps3 = e.eps3;
  d.eps4 = e.eps4;
  d.eps_total = e.total;
  d.r_jj = r.entries.at(j, j);
  const cd s = semicircle_stieltjes(z);
  d.lambda_n = d.m_n - s;
  d.residual_schur = std::abs(d.r_jj + 1.0 / (z + d.m_n - d.eps_total));
  d.residual_rjj1 =
      std::abs(d.r_jj - s - s * (d.lambda_n - d.eps_total) * d.r_jj);
  return d;
}

IdentityReport identity_suite(const WignerMatrix& w, cd z, int direct_checks) {
  require_upper(z, "identity_suite");
  const int n = w.n();
  if (n > kSuiteCap) {
    throw DimensionCap("identity suite capped at n <= " +
                       std::to_string(kSuiteCap));
  }
  const double v = z.imag();
  const Resolvent r = resolvent(w, z);
  const cd s = semicircle_stieltjes(z);

  IdentityReport rep;
  rep.n = n;
  rep.z = z;
  rep.m_n_solve = r.entries.trace() / static_cast<double>(n);
  rep.m_n_eig = 0.0;

  // Independent route: eigenvalues feed both m_n and (1/n) Tr R^2.
  const std::vector<double> lambda = sym_eigenvalues(w.mat);
  cd tr2_eig = 0.0;
  for (double l : lambda) {
    const cd den = cd(l, 0.0) - z;
    rep.m_n_eig += 1.0 / den;
    tr2_eig += 1.0 / (den * den);
  }
  rep.m_n_eig /= static_cast<double>(n);
  tr2_eig /= static_cast<double>(n);
  rep.m_route_diff = std::abs(rep.m_n_eig - rep.m_n_solve);
  const cd tr2_mat = r.entries.trace_of_square() / static_cast<double>(n);

  const cd m_n = rep.m_n_solve;
  const cd lambda_n = m_n - s;
  cd t_sum = 0.0;     // sum_j eps_j R_jj
  cd eps4_sum = 0.0;  // sum_j eps4_j R_jj
  for (int j = 0; j < n; ++j) {
    const MinorTerms t = minor_terms_downdate(w.mat, r.entries, j);
    const EpsTerms e = eps_from_terms(w.mat, j, m_n, t, n);
    const cd rjj = r.entries.at(j, j);

    rep.max_residual_schur = std::max(
        rep.max_residual_schur, std::abs(rjj + 1.0 / (z + m_n - e.total)));
    rep.max_residual_rjj1 =
        std::max(rep.max_residual_rjj1,
                 std::abs(rjj - s - s * (lambda_n - e.total) * rjj));
    // Tr R - Tr M = (1 + b^T M^2 b) R_jj
    rep.max_residual_trace =
        std::max(rep.max_residual_trace,
                 std::abs(static_cast<double>(n) * e.eps4 -
                          (1.0 + t.mb_sq) * rjj));
    rep.max_eps4_ratio = std::max(
        rep.max_eps4_ratio, std::abs(e.eps4) * static_cast<double>(n) * v);
    t_sum += e.total * rjj;
    eps4_sum += e.eps4 * rjj;
  }
  rep.residual_73 = std::max(std::abs(eps4_sum - tr2_eig),
                             std::abs(eps4_sum - tr2_mat));
  rep.residual_lambda =
      std::abs(lambda_n * (z + s + m_n) - t_sum / static_cast<double>(n));

  // Re-solve a few minors from scratch and compare the extracted terms.
  const int checks = std::min(direct_checks, n);
  for (int i = 0; i < checks; ++i) {
    const int j = static_cast<int>(static_cast<long>(i) * n / checks);
    const MinorTerms dd = minor_terms_downdate(w.mat, r.entries, j);
    const MinorTerms di = minor_terms_direct(w.mat, j, z);
    double worst = std::abs(dd.tr_m - di.tr_m);
    worst = std::max(worst, std::abs(dd.quad - di.quad));
    worst = std::max(worst, std::abs(dd.diag_quad - di.diag_quad));
    worst = std::max(worst, std::abs(dd.mb_sq - di.mb_sq));
    rep.minor_xcheck = std::max(rep.minor_xcheck, worst);
  }
  return rep;
}

RjjMomentEstimate rjj_moment_probe(const EntryLaw& law, int n, cd z, int p,
                                   int replicas, std::uint64_t base_seed,
                                   const std::optional<TruncationSpec>& trunc,
                                   int threads) {
  if (p < 2 || p % 2 != 0) throw UsageError("probe power p must be even >= 2");
  if (replicas < 2) throw UsageError("probe needs at least 2 replicas");
  std::vector<double> replica_mean(replicas, 0.0);
  parallel_for(replicas, threads, [&](std::size_t rep) {
    const WignerMatrix w =
        build_wigner(n, law, base_seed ^ static_cast<std::uint64_t>(rep),
                     trunc);
    const Resolvent r = resolvent(w, z);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += std::pow(std::abs(r.entries.at(j, j)), p);
    }
    replica_mean[rep] = acc / n;
  });
  RjjMomentEstimate est;
  est.n = n;
  est.z = z;
  est.p = p;
  double mean = 0.0;
  for (double m : replica_mean) mean += m;
  mean /= replicas;
  double var = 0.0;
  for (double m : replica_mean) var += (m - mean) * (m - mean);
  var /= (replicas - 1);
  est.mean_pow = mean;
  est.stderr_pow = std::sqrt(var / replicas);
  est.norm = std::pow(mean, 1.0 / p);
  return est;
}

SymMatrix random_coefficients(int dim, RngStream& rng) {
  SymMatrix m(dim);
  for (int l = 0; l < dim; ++l) {
    for (int k = l + 1; k < dim; ++k) {
      m.set_sym(l, k, 2.0 * rng.uniform() - 1.0);
    }
  }
  return m;
}

double enumerate_quadratic_form_moment(const SymMatrix& coefficients, int q) {
  const int dim = coefficients.n;
  if (dim > 14) {
    throw EnumerationCap("sign enumeration capped at dim <= 14, got " +
                         std::to_string(dim));
  }
  double total = 0.0;
  const std::uint64_t count = 1ULL << dim;
  std::vector<double> xi(dim);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < dim; ++i) xi[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    double quad = 0.0;
    for (int l = 0; l < dim; ++l) {
      double row = 0.0;
      for (int k = 0; k < dim; ++k) {
        if (k != l) row += coefficients.at(l, k) * xi[k];
      }
      quad += xi[l] * row;
    }
    total += std::pow(std::abs(quad), q);
  }
  return total / static_cast<double>(count);
}

double quadratic_form_rhs(const SymMatrix& coefficients, const EntryLaw& law,
                          int q) {
  const int dim = coefficients.n;
  const double mu_q = law.analytic_moment(q);
  const double qd = static_cast<double>(q);
  double sum_sq = 0.0;
  double sum_q = 0.0;
  double row_term = 0.0;
  for (int l = 0; l < dim; ++l) {
    double row_sq = 0.0;
    for (int k = 0; k < dim; ++k) {
      if (k == l) continue;
      const double a = std::abs(coefficients.at(l, k));
      row_sq += a * a;
      sum_sq += a * a;
      sum_q += std::pow(a, qd);
    }
    row_term += std::pow(row_sq, qd / 2.0);
  }
  const double sigma = 1.0;
  return std::pow(qd, qd) * std::pow(sigma, qd) * std::pow(sum_sq, qd / 2.0) +
         mu_q * std::pow(qd, 1.5 * qd) * row_term +
         std::pow(qd, 2.0 * qd) * mu_q * mu_q * sum_q;
}

void fill_quadratic_form_probe(QuadraticFormProbe& probe, int mc_samples,
                               std::uint64_t seed) {
  const int dim = probe.coefficients.n;
  if (probe.q < 4 || probe.q % 2 != 0) {
    throw UsageError("quadratic form probe needs even q >= 4");
  }
  for (int i = 0; i < dim; ++i) {
    if (probe.coefficients.at(i, i) != 0.0) {
      throw UsageError("quadratic form coefficients must have zero diagonal");
    }
  }
  if (mc_samples < 2) throw UsageError("probe needs at least 2 MC samples");

  RngStream rng(seed);
  std::vector<double> xi(dim);
  double mean = 0.0;
  double m2 = 0.0;
  for (int sidx = 0; sidx < mc_samples; ++sidx) {
    for (int i = 0; i < dim; ++i) xi[i] = probe.law.sample(rng);
    double quad = 0.0;
    for (int l = 0; l < dim; ++l) {
      double row = 0.0;
      for (int k = 0; k < dim; ++k) {
        if (k != l) row += probe.coefficients.at(l, k) * xi[k];
      }
      quad += xi[l] * row;
    }
    const double val = std::pow(std::abs(quad), probe.q);
    // Welford running moments
    const double delta = val - mean;
    mean += delta / (sidx + 1);
    m2 += delta * (val - mean);
  }
  probe.mc_estimate = mean;
  probe.mc_stderr =
      std::sqrt(m2 / (mc_samples - 1) / static_cast<double>(mc_samples));
  probe.rhs_value = quadratic_form_rhs(probe.coefficients, probe.law, probe.q);
  if (probe.law.kind() == LawKind::Rademacher && dim <= 14) {
    probe.exact_value =
        enumerate_quadratic_form_moment(probe.coefficients, probe.q);
  } else {
    probe.exact_value.reset();
  }
  probe.k_hat = probe.rhs_value > 0.0
                    ? std::pow(probe.mc_estimate / probe.rhs_value,
                               1.0 / probe.q)
                    : 0.0;
}

LambdaProbeEstimate lambda_probe(const EntryLaw& law, int n, cd z,
                                 int replicas, std::uint64_t base_seed,
                                 int eps_replicas,
                                 const std::optional<TruncationSpec>& trunc,
                                 int threads) {
  require_upper(z, "lambda_probe");
  if (replicas < 2) throw UsageError("probe needs at least 2 replicas");
  const double v = z.imag();
  const cd s = semicircle_stieltjes(z);
  const double kappa = law.probe_kappa();
  const double expo = 4.0 + kappa;
  const int eps_n = std::min(eps_replicas, replicas);

  std::vector<double> lam2(replicas, 0.0);
  std::vector<double> ratio2(eps_n, 0.0);
  std::vector<double> ratio3(eps_n, 0.0);
  parallel_for(replicas, threads, [&](std::size_t rep) {
    const WignerMatrix w =
        build_wigner(n, law, base_seed ^ static_cast<std::uint64_t>(rep),
                     trunc);
    const std::vector<double> lambda = sym_eigenvalues(w.mat);
    const cd m_n = empirical_stieltjes(lambda, n, z);
    const cd gap = m_n - s;
    lam2[rep] = std::norm(gap);

    if (static_cast<int>(rep) < eps_n) {
      const int j = static_cast<int>(rep) % n;
      const MinorTerms t = minor_terms_direct(w.mat, j, z);
      const EpsTerms e = eps_from_terms(w.mat, j, m_n, t, n);
      const double im_minor = (t.tr_m / static_cast<double>(n)).imag();
      const double base =
          std::sqrt(std::max(im_minor, 0.0)) / std::sqrt(n * v);
      if (base > 0.0) {
        // the off-diagonal row term is bounded at moment order 4+kappa,
        // the squared-entry row term at half that order
        ratio2[rep] = std::pow(std::abs(e.eps2) / base, expo);
        ratio3[rep] = std::pow(std::abs(e.eps3) / base, expo / 2.0);
      }
    }
  });

  LambdaProbeEstimate est;
  est.n = n;
  est.z = z;
  est.kappa_used = kappa;
  est.eps_samples = eps_n;
  double mean = 0.0;
  for (double x : lam2) mean += x;
  mean /= replicas;
  double var = 0.0;
  for (double x : lam2) var += (x - mean) * (x - mean);
  var /= (replicas - 1);
  const double scale = static_cast<double>(n) * v;
  est.lambda2_scaled = mean * scale * scale;
  est.lambda2_scaled_stderr = std::sqrt(var / replicas) * scale * scale;
  double r2 = 0.0;
  double r3 = 0.0;
  for (double x : ratio2) r2 += x;
  for (double x : ratio3) r3 += x;
  if (eps_n > 0) {
    est.eps2_const = std::pow(r2 / eps_n, 1.0 / expo);
    est.eps3_const = std::pow(r3 / eps_n, 2.0 / expo);
  }
  return est;
}

}  // namespace rmtlab
