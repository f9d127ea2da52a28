#pragma once

#include <optional>
#include <string>

#include "rmtlab/rng.hpp"

namespace rmtlab {

enum class LawKind { Rademacher, Gaussian, SymmetrizedPareto };

// A zero-mean unit-variance scalar law used for matrix entries.
//
// The symmetrized Pareto family carries a tail exponent beta > 4: the
// magnitude |X| has survival function (y0/t)^beta for t >= y0, with
// y0 = sqrt((beta-2)/beta) fixed by the unit-variance constraint, so
// E|X|^q is finite exactly for q < beta.
class EntryLaw {
 public:
  static EntryLaw rademacher();
  static EntryLaw gaussian();
  static EntryLaw pareto(double beta);  // InvalidLaw unless beta > 4

  LawKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double y0() const { return y0_; }

  double sample(RngStream& rng) const;

  // E|X|^q, exact; +infinity when the moment diverges.
  double analytic_moment(double q) const;
  bool has_finite_moment(double q) const;

  // Largest moment-margin exponent this law supports for diagnostic probes:
  // the probes raise |.| to the power 4+kappa, which must stay strictly
  // inside the finite-moment range.
  double probe_kappa() const;

  // "rademacher" | "gaussian" | "pareto:<beta>"
  std::string id() const;
  static EntryLaw parse(const std::string& spec);

 private:
  EntryLaw(LawKind kind, double beta, double y0)
      : kind_(kind), beta_(beta), y0_(y0) {}

  LawKind kind_;
  double beta_;
  double y0_;
};

// Entry clipping at threshold(n) = D * n^alpha with alpha = 2/(4+kappa).
struct TruncationSpec {
  double d_const = 1.0;
  double kappa = 0.5;

  double alpha() const { return 2.0 / (4.0 + kappa); }
  double threshold(int n) const;

  void validate() const;  // d_const > 0, kappa in (0,4]

  std::string id() const;
  static TruncationSpec parse(const std::string& spec);  // "D=<d>,kappa=<k>"
};

// Second moment of X * 1{|X| <= tau}; closed form for every supported law.
double truncated_second_moment(const EntryLaw& law, double tau);

// Sampler for the clipped-and-restandardized law: X is replaced by zero
// beyond the threshold, then rescaled back to unit variance (the mean is
// already zero by symmetry).  Precomputes the rescaling constant once.
class TruncatedLaw {
 public:
  TruncatedLaw(const EntryLaw& law, const TruncationSpec& spec, int n);

  double sample(RngStream& rng) const;

  double threshold() const { return tau_; }
  double sd() const { return sd_; }
  // Hard magnitude bound on every sample: threshold / sd.
  double bound() const { return tau_ / sd_; }
  const EntryLaw& law() const { return law_; }

 private:
  EntryLaw law_;
  double tau_;
  double sd_;
};

// One-shot variant of the truncated sampler.
double truncate_standardize(const EntryLaw& law, const TruncationSpec& spec,
                            int n, RngStream& rng);

}  // namespace rmtlab
