#include "ncsverify/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ncsverify/errors.hpp"

namespace ncsverify {

namespace {

double log_inv(double delta) { return -std::log(delta); }

// Ceiling that ignores representation noise of ~1e-12 relative, so exact
// integers such as 2 log(e) / 1 do not round up to 3.
std::uint64_t tolerant_ceil(double x) {
  return static_cast<std::uint64_t>(std::ceil(x * (1.0 - 1e-12)));
}

}  // namespace

MarginSpec::MarginSpec(double q, double threshold, double delta)
    : q_(q), threshold_(threshold), margin_(std::abs(q - threshold)), delta_(delta) {
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("q must lie in [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (!std::isfinite(threshold)) throw InputError("threshold must be finite");
  if (!(margin_ > 0.0)) throw InputError("zero stability margin: q sits exactly at the critical rate");
}

MarginSpec MarginSpec::from_radius(double q, double rho, double delta) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InputError("spectral radius must be positive");
  return MarginSpec(q, 1.0 - 1.0 / (rho * rho), delta);
}

double correctness_bound(const MarginSpec& spec, std::uint64_t n) {
  if (n == 0) throw InputError("sample count must be positive");
  const double dn = static_cast<double>(n);
  const double slack = spec.margin() - std::sqrt(log_inv(spec.delta()) / (2.0 * dn));
  if (slack <= 0.0) return 0.0;
  return -std::expm1(-2.0 * dn * slack * slack);
}

std::uint64_t hoeffding_sample_size(const MarginSpec& spec) {
  const double m = spec.margin();
  return std::max<std::uint64_t>(1, tolerant_ceil(2.0 * log_inv(spec.delta()) / (m * m)));
}

bool bernstein_condition(const MarginSpec& spec, std::uint64_t n) {
  if (n == 0) return false;
  const double dn = static_cast<double>(n);
  const double l = log_inv(spec.delta());
  const double eps = spec.margin() - l / dn;
  if (eps <= 0.0) return false;
  const double variance = spec.q() * (1.0 - spec.q());
  return dn * eps * eps / 2.0 / (variance + eps / 3.0) >= l;
}

std::uint64_t bernstein_sample_size(const MarginSpec& spec) {
  // Below log(1/delta)/margin the deviation term is non-positive; above it the
  // left-hand side increases in n, so the feasible set is a half-line.
  std::uint64_t lo = static_cast<std::uint64_t>(std::floor(log_inv(spec.delta()) / spec.margin()));
  std::uint64_t hi = std::max<std::uint64_t>(lo + 1, 1);
  while (!bernstein_condition(spec, hi)) {
    if (hi > std::numeric_limits<std::uint64_t>::max() / 4) {
      throw InputError("Bernstein sample size overflows");
    }
    lo = hi;
    hi *= 2;
  }
  // Invariant: condition(hi) holds, condition(lo) fails or lo is below the half-line.
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (bernstein_condition(spec, mid) ? hi : lo) = mid;
  }
  return hi;
}

bool low_variance_regime(const MarginSpec& spec, double c) {
  if (!(c > 0.0)) throw InputError("c must be positive");
  return spec.q() * (1.0 - spec.q()) <= c * spec.margin();
}

}  // namespace ncsverify
