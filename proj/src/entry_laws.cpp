#include "rmtlab/entry_laws.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rmtlab/errors.hpp"

namespace rmtlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EntryLaw EntryLaw::rademacher() {
  return EntryLaw(LawKind::Rademacher, 0.0, 1.0);
}

EntryLaw EntryLaw::gaussian() { return EntryLaw(LawKind::Gaussian, 0.0, 0.0); }

EntryLaw EntryLaw::pareto(double beta) {
  if (!(beta > 4.0)) {
    throw InvalidLaw("pareto tail exponent must exceed 4, got " +
                     std::to_string(beta));
  }
  const double y0 = std::sqrt((beta - 2.0) / beta);
  return EntryLaw(LawKind::SymmetrizedPareto, beta, y0);
}

double EntryLaw::sample(RngStream& rng) const {
  switch (kind_) {
    case LawKind::Rademacher:
      return rng.coin() ? 1.0 : -1.0;
    case LawKind::Gaussian:
      return rng.normal();
    case LawKind::SymmetrizedPareto: {
      const double sign = rng.coin() ? 1.0 : -1.0;
      const double u = rng.uniform();
      return sign * y0_ * std::pow(u, -1.0 / beta_);
    }
  }
  return 0.0;  // unreachable
}

double EntryLaw::analytic_moment(double q) const {
  if (q < 0.0) throw UsageError("analytic_moment requires q >= 0");
  switch (kind_) {
    case LawKind::Rademacher:
      return 1.0;
    case LawKind::Gaussian:
      // E|N(0,1)|^q = 2^{q/2} Gamma((q+1)/2) / sqrt(pi)
      return std::pow(2.0, q / 2.0) * std::tgamma((q + 1.0) / 2.0) /
             std::sqrt(M_PI);
    case LawKind::SymmetrizedPareto:
      if (q >= beta_) return kInf;
      return beta_ * std::pow(y0_, q) / (beta_ - q);
  }
  return 0.0;  // unreachable
}

bool EntryLaw::has_finite_moment(double q) const {
  return kind_ != LawKind::SymmetrizedPareto || q < beta_;
}

double EntryLaw::probe_kappa() const {
  if (kind_ == LawKind::SymmetrizedPareto) {
    // Halfway into the admissible margin, capped at the usual 4.
    return std::min(4.0, (beta_ - 4.0) / 2.0);
  }
  return 0.5;
}

std::string EntryLaw::id() const {
  switch (kind_) {
    case LawKind::Rademacher:
      return "rademacher";
    case LawKind::Gaussian:
      return "gaussian";
    case LawKind::SymmetrizedPareto: {
      std::ostringstream os;
      os << "pareto:" << beta_;
      return os.str();
    }
  }
  return "";  // unreachable
}

EntryLaw EntryLaw::parse(const std::string& spec) {
  if (spec == "rademacher") return rademacher();
  if (spec == "gaussian") return gaussian();
  if (spec.rfind("pareto:", 0) == 0) {
    const std::string tail = spec.substr(7);
    std::size_t pos = 0;
    double beta = 0.0;
    try {
      beta = std::stod(tail, &pos);
    } catch (const std::exception&) {
      throw InvalidLaw("bad pareto tail exponent in '" + spec + "'");
    }
    if (pos != tail.size()) {
      throw InvalidLaw("trailing characters in law spec '" + spec + "'");
    }
    return pareto(beta);
  }
  throw InvalidLaw("unknown law spec '" + spec +
                   "' (expected rademacher, gaussian or pareto:<beta>)");
}

double TruncationSpec::threshold(int n) const {
  return d_const * std::pow(static_cast<double>(n), alpha());
}

void TruncationSpec::validate() const {
  if (!(d_const > 0.0)) throw UsageError("truncation D must be positive");
  if (!(kappa > 0.0 && kappa <= 4.0)) {
    throw UsageError("truncation kappa must lie in (0,4]");
  }
}

std::string TruncationSpec::id() const {
  std::ostringstream os;
  os << "D=" << d_const << ",kappa=" << kappa;
  return os.str();
}

TruncationSpec TruncationSpec::parse(const std::string& spec) {
  TruncationSpec out;
  std::istringstream is(spec);
  std::string field;
  bool saw_d = false;
  bool saw_k = false;
  while (std::getline(is, field, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) {
      throw UsageError("bad truncation field '" + field +
                       "' (expected D=<d>,kappa=<k>)");
    }
    const std::string key = field.substr(0, eq);
    const std::string val = field.substr(eq + 1);
    try {
      if (key == "D") {
        out.d_const = std::stod(val);
        saw_d = true;
      } else if (key == "kappa") {
        out.kappa = std::stod(val);
        saw_k = true;
      } else {
        throw UsageError("unknown truncation key '" + key + "'");
      }
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("bad number in truncation spec '" + spec + "'");
    }
  }
  if (!saw_d || !saw_k) {
    throw UsageError("truncation spec needs both D and kappa, got '" + spec +
                     "'");
  }
  out.validate();
  return out;
}

double truncated_second_moment(const EntryLaw& law, double tau) {
  if (tau <= 0.0) return 0.0;
  switch (law.kind()) {
    case LawKind::Rademacher:
      return tau >= 1.0 ? 1.0 : 0.0;
    case LawKind::Gaussian:
      // int_{-tau}^{tau} x^2 phi(x) dx = erf(tau/sqrt 2) - 2 tau phi(tau)
      return std::erf(tau / std::sqrt(2.0)) -
             tau * std::sqrt(2.0 / M_PI) * std::exp(-tau * tau / 2.0);
    case LawKind::SymmetrizedPareto: {
      const double beta = law.beta();
      const double y0 = law.y0();
      if (tau < y0) return 0.0;
      return 1.0 - beta / (beta - 2.0) * std::pow(y0, beta) *
                       std::pow(tau, 2.0 - beta);
    }
  }
  return 0.0;  // unreachable
}

TruncatedLaw::TruncatedLaw(const EntryLaw& law, const TruncationSpec& spec,
                           int n)
    : law_(law), tau_(0.0), sd_(0.0) {
  if (n < 1) throw UsageError("truncation needs n >= 1");
  spec.validate();
  tau_ = spec.threshold(n);
  const double var = truncated_second_moment(law, tau_);
  sd_ = std::sqrt(var);
  if (!(sd_ >= 1e-6)) {
    std::ostringstream os;
    os << "threshold " << tau_ << " leaves sd " << sd_ << " for law "
       << law.id() << " at n=" << n;
    throw DegenerateTruncation(os.str());
  }
}

double TruncatedLaw::sample(RngStream& rng) const {
  double x = law_.sample(rng);
  if (std::abs(x) > tau_) x = 0.0;
  x /= sd_;
  if (std::abs(x) > bound() * (1.0 + 1e-12)) {
    throw NumericError("truncated sample exceeded its magnitude bound");
  }
  return x;
}

double truncate_standardize(const EntryLaw& law, const TruncationSpec& spec,
                            int n, RngStream& rng) {
  return TruncatedLaw(law, spec, n).sample(rng);
}

}  // namespace rmtlab
