#include "rmtlab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "rmtlab/eigen_sym.hpp"
#include "rmtlab/errors.hpp"

namespace rmtlab {

namespace {

void check_sum_rules(const SymMatrix& m, const std::vector<double>& lambda) {
  const int n = m.n;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double l : lambda) {
    sum += l;
    sum_sq += l * l;
  }
  const double tr = m.trace();
  const double fro = m.frobenius_sq();
  const double tol_tr = 1e-8 * n * std::max(1.0, std::abs(tr));
  const double tol_fro = 1e-8 * n * std::max(1.0, fro);
  if (std::abs(sum - tr) > tol_tr) {
    throw NumericError("eigenvalue sum violates the trace rule");
  }
  if (std::abs(sum_sq - fro) > tol_fro) {
    throw NumericError("eigenvalue square sum violates the Frobenius rule");
  }
}

}  // namespace

Spectrum eigenvalues(const SymMatrix& m, const SpectrumSource& source) {
  Spectrum s;
  s.lambda = sym_eigenvalues(m);
  s.source = source;
  check_sum_rules(m, s.lambda);
  return s;
}

Spectrum eigenvalues(const WignerMatrix& w) {
  return eigenvalues(w.mat, SpectrumSource{w.n(), w.seed, w.law.id()});
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * M_PI) +
         std::asin(x / 2.0) / M_PI;
}

double semicircle_density(double x) {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * M_PI);
}

double StepCDF::at(double x) const {
  const auto it = std::upper_bound(jumps.begin(), jumps.end(), x);
  if (it == jumps.begin()) return 0.0;
  return cum[static_cast<std::size_t>(it - jumps.begin()) - 1];
}

namespace {

StepCDF from_sorted_values(const std::vector<double>& values) {
  StepCDF f;
  const std::size_t total = values.size();
  std::size_t i = 0;
  std::size_t count = 0;
  while (i < total) {
    std::size_t j = i;
    while (j < total && values[j] == values[i]) ++j;
    count += j - i;
    f.jumps.push_back(values[i]);
    f.cum.push_back(static_cast<double>(count) / static_cast<double>(total));
    i = j;
  }
  return f;
}

constexpr std::size_t kHistogramBins = 100000;
constexpr double kHistogramLo = -3.0;
constexpr double kHistogramHi = 3.0;

StepCDF histogram_cdf(std::span<const Spectrum> spectra, std::size_t total) {
  std::vector<std::size_t> counts(kHistogramBins, 0);
  const double width = (kHistogramHi - kHistogramLo) / kHistogramBins;
  for (const Spectrum& s : spectra) {
    for (double v : s.lambda) {
      auto bin = static_cast<long>((v - kHistogramLo) / width);
      bin = std::clamp(bin, 0L, static_cast<long>(kHistogramBins) - 1);
      ++counts[static_cast<std::size_t>(bin)];
    }
  }
  StepCDF f;
  std::size_t running = 0;
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    if (counts[b] == 0) continue;
    running += counts[b];
    f.jumps.push_back(kHistogramLo + width * static_cast<double>(b + 1));
    f.cum.push_back(static_cast<double>(running) /
                    static_cast<double>(total));
  }
  return f;
}

}  // namespace

StepCDF esd(const Spectrum& s) {
  if (s.n() == 0) throw UsageError("empty spectrum");
  return from_sorted_values(s.lambda);
}

StepCDF pool_with_threshold(std::span<const Spectrum> spectra,
                            std::size_t histogram_threshold) {
  if (spectra.empty()) throw UsageError("pool needs at least one spectrum");
  const int n = spectra.front().n();
  std::size_t total = 0;
  for (const Spectrum& s : spectra) {
    if (s.n() != n) {
      throw MixedDimensions("pool saw spectra of sizes " + std::to_string(n) +
                            " and " + std::to_string(s.n()));
    }
    total += s.lambda.size();
  }
  if (total > histogram_threshold) return histogram_cdf(spectra, total);

  std::vector<double> values;
  values.reserve(total);
  for (const Spectrum& s : spectra) {
    values.insert(values.end(), s.lambda.begin(), s.lambda.end());
  }
  std::sort(values.begin(), values.end());
  return from_sorted_values(values);
}

StepCDF pool(std::span<const Spectrum> spectra) {
  return pool_with_threshold(spectra, 10'000'000);
}

double kolmogorov_distance(const StepCDF& f) {
  if (f.jumps.empty()) throw UsageError("empty step CDF");
  double sup = 0.0;
  for (std::size_t i = 0; i < f.jumps.size(); ++i) {
    const double g = semicircle_cdf(f.jumps[i]);
    sup = std::max(sup, std::abs(f.value_before(i) - g));
    sup = std::max(sup, std::abs(f.cum[i] - g));
  }
  return sup;
}

}  // namespace rmtlab
