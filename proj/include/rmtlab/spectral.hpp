#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rmtlab/wigner.hpp"

namespace rmtlab {

struct SpectrumSource {
  int n = 0;
  std::uint64_t seed = 0;
  std::string law_id;
};

// Sorted eigenvalues of one matrix sample.
struct Spectrum {
  std::vector<double> lambda;  // ascending
  SpectrumSource source;

  int n() const { return static_cast<int>(lambda.size()); }
};

// Eigenvalues via Householder + implicit QL; validates the trace and
// Frobenius sum rules against the matrix before returning.
Spectrum eigenvalues(const WignerMatrix& w);
Spectrum eigenvalues(const SymMatrix& m, const SpectrumSource& source);

// Semicircle distribution function G on [-2,2] and its density g.
double semicircle_cdf(double x);
double semicircle_density(double x);

// Piecewise-constant CDF: a single-sample spectral distribution, or the
// pooled average of many samples.
struct StepCDF {
  std::vector<double> jumps;  // strictly ascending
  std::vector<double> cum;    // strictly increasing, ends at 1

  double value_before(std::size_t i) const { return i == 0 ? 0.0 : cum[i - 1]; }
  // CDF evaluated at x.
  double at(double x) const;
};

StepCDF esd(const Spectrum& s);

// Pooled spectral CDF with mass 1/(n*R) per eigenvalue, duplicate jump
// points merged.  Above `histogram_threshold` total values, falls back to
// a 1e5-bin histogram on [-3,3]; the induced sup-distance resolution
// penalty is bounded by 6e-5 (one bin width).
StepCDF pool(std::span<const Spectrum> spectra);
StepCDF pool_with_threshold(std::span<const Spectrum> spectra,
                            std::size_t histogram_threshold);

// sup_x |F(x) - G(x)|, exact: evaluated from both sides of every jump.
double kolmogorov_distance(const StepCDF& f);

}  // namespace rmtlab
