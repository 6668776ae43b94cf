#include "ncsverify/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ncsverify/errors.hpp"

namespace ncsverify {

namespace {

constexpr double kBisectionWidth = 1e-12;

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eps must be positive");
}

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

RateInterval symmetric(IntervalMethod m, SuccessCount c, double delta, double half_width) {
  const double q_hat = sample_mean(c);
  return {clip01(q_hat - half_width), clip01(q_hat + half_width), m, delta, c.total, q_hat};
}

double log_pmf(std::uint64_t j, std::uint64_t n, double q) {
  const double dj = static_cast<double>(j);
  const double dn = static_cast<double>(n);
  return std::lgamma(dn + 1) - std::lgamma(dj + 1) - std::lgamma(dn - dj + 1) +
         dj * std::log(q) + (dn - dj) * std::log1p(-q);
}

// Sum of pmf(j) for j = from, from-1, ..., 0 (down) or from, ..., n (up).
// Callers only start on the side of the mean where terms decrease
// monotonically, so the first term is the largest.
double tail_sum(std::uint64_t from, std::uint64_t n, double q, bool down) {
  double term = std::exp(log_pmf(from, n, q));
  double sum = term;
  if (term == 0.0) return 0.0;
  const double odds = q / (1.0 - q);
  std::uint64_t j = from;
  while (down ? j > 0 : j < n) {
    if (down) {
      term *= static_cast<double>(j) / (static_cast<double>(n - j + 1) * odds);
      --j;
    } else {
      term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * odds;
      ++j;
    }
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

double lower_tail(std::uint64_t k, std::uint64_t n, double q);

double upper_tail(std::uint64_t k, std::uint64_t n, double q) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return 1.0;
  if (static_cast<double>(k) > static_cast<double>(n) * q) return std::min(1.0, tail_sum(k, n, q, false));
  return std::max(0.0, 1.0 - lower_tail(k - 1, n, q));
}

double lower_tail(std::uint64_t k, std::uint64_t n, double q) {
  if (k >= n) return 1.0;
  if (q <= 0.0) return 1.0;
  if (q >= 1.0) return 0.0;
  if (static_cast<double>(k) < static_cast<double>(n) * q) return std::min(1.0, tail_sum(k, n, q, true));
  return std::max(0.0, 1.0 - upper_tail(k + 1, n, q));
}

}  // namespace

std::string_view method_name(IntervalMethod m) {
  switch (m) {
    case IntervalMethod::Hoeffding: return "hoeffding";
    case IntervalMethod::BernsteinFast: return "bernstein-fast";
    case IntervalMethod::ExactBinomial: return "exact";
    case IntervalMethod::NormalApprox: return "normal";
  }
  return "unknown";
}

IntervalMethod parse_method(std::string_view name) {
  for (auto m : {IntervalMethod::Hoeffding, IntervalMethod::BernsteinFast,
                 IntervalMethod::ExactBinomial, IntervalMethod::NormalApprox}) {
    if (method_name(m) == name) return m;
  }
  throw InputError("unknown interval method '" + std::string(name) + "'");
}

double hoeffding_tail(std::uint64_t n, double eps) {
  if (n == 0) throw InputError("sample count must be positive");
  check_eps(eps);
  return std::exp(-2.0 * static_cast<double>(n) * eps * eps);
}

double bernstein_tail(std::uint64_t n, double eps, double q) {
  if (n == 0) throw InputError("sample count must be positive");
  check_eps(eps);
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("q must lie in [0, 1]");
  const double exponent = (static_cast<double>(n) * eps * eps / 2.0) / (q * (1.0 - q) + eps / 3.0);
  return std::exp(-exponent);
}

double binomial_cdf(std::uint64_t k, std::uint64_t n, double q) { return lower_tail(k, n, q); }

double binomial_sf(std::uint64_t k, std::uint64_t n, double q) { return upper_tail(k, n, q); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("quantile level must lie in (0, 1)");
  // Acklam's rational approximation (relative error ~1.2e-9), then one Halley
  // step against erfc, which brings the error to double precision.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

RateInterval hoeffding_interval(SuccessCount c, double delta) {
  check_delta(delta);
  const double n = static_cast<double>(c.total);
  return symmetric(IntervalMethod::Hoeffding, c, delta, std::sqrt(std::log(1.0 / delta) / (2.0 * n)));
}

RateInterval bernstein_fast_interval(SuccessCount c, double delta) {
  check_delta(delta);
  return symmetric(IntervalMethod::BernsteinFast, c, delta,
                   std::log(1.0 / delta) / static_cast<double>(c.total));
}

RateInterval normal_interval(SuccessCount c, double delta) {
  check_delta(delta);
  const double q_hat = sample_mean(c);
  // z = Phi^{-1}(1 - delta), evaluated in the accurate lower tail.
  const double z = -normal_quantile(delta);
  return symmetric(IntervalMethod::NormalApprox, c, delta,
                   z * std::sqrt(q_hat * (1.0 - q_hat) / static_cast<double>(c.total)));
}

RateInterval exact_interval(SuccessCount c, double delta) {
  check_delta(delta);
  const double q_hat = sample_mean(c);
  const auto k = c.successes;
  const auto n = c.total;

  // Both tails are monotone in q: P(X >= k) increases, P(X <= k) decreases.
  // The returned end of the bracket is the conservative one.
  double lo = 0.0;
  if (k > 0) {
    double a = 0.0, b = 1.0;
    while (b - a > kBisectionWidth) {
      const double mid = 0.5 * (a + b);
      (upper_tail(k, n, mid) < delta ? a : b) = mid;
    }
    lo = a;
  }
  double hi = 1.0;
  if (k < n) {
    double a = 0.0, b = 1.0;
    while (b - a > kBisectionWidth) {
      const double mid = 0.5 * (a + b);
      (lower_tail(k, n, mid) > delta ? a : b) = mid;
    }
    hi = b;
  }
  return {lo, hi, IntervalMethod::ExactBinomial, delta, n, q_hat};
}

RateInterval make_interval(IntervalMethod m, SuccessCount c, double delta) {
  switch (m) {
    case IntervalMethod::Hoeffding: return hoeffding_interval(c, delta);
    case IntervalMethod::BernsteinFast: return bernstein_fast_interval(c, delta);
    case IntervalMethod::ExactBinomial: return exact_interval(c, delta);
    case IntervalMethod::NormalApprox: return normal_interval(c, delta);
  }
  throw InputError("unknown interval method");
}

RateInterval hoeffding_interval(const ChannelTrace& t, double delta) { return hoeffding_interval(t.count(), delta); }
RateInterval bernstein_fast_interval(const ChannelTrace& t, double delta) {
  return bernstein_fast_interval(t.count(), delta);
}
RateInterval exact_interval(const ChannelTrace& t, double delta) { return exact_interval(t.count(), delta); }
RateInterval normal_interval(const ChannelTrace& t, double delta) { return normal_interval(t.count(), delta); }
RateInterval make_interval(IntervalMethod m, const ChannelTrace& t, double delta) {
  return make_interval(m, t.count(), delta);
}

}  // namespace ncsverify
