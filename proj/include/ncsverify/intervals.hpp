#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ncsverify/channel.hpp"

namespace ncsverify {

enum class IntervalMethod { Hoeffding, BernsteinFast, ExactBinomial, NormalApprox };

/// CLI/JSON spelling: hoeffding, bernstein-fast, exact, normal.
std::string_view method_name(IntervalMethod m);
/// Inverse of method_name; throws InputError on an unknown name.
IntervalMethod parse_method(std::string_view name);

/// Confidence interval [lo, hi] on the packet success rate. Both ends are
/// one-sided 1 - delta bounds under the method's guarantee, clipped to [0, 1].
struct RateInterval {
  double lo = 0.0;
  double hi = 1.0;
  IntervalMethod method = IntervalMethod::Hoeffding;
  double delta = 0.0;
  std::uint64_t n = 0;
  double q_hat = 0.0;
};

/// exp(-2 n eps^2): bound on each deviation tail of the sample mean.
double hoeffding_tail(std::uint64_t n, double eps);
/// exp(-(n eps^2 / 2) / (q(1-q) + eps/3)).
double bernstein_tail(std::uint64_t n, double eps, double q);

RateInterval hoeffding_interval(SuccessCount c, double delta);
RateInterval bernstein_fast_interval(SuccessCount c, double delta);
RateInterval exact_interval(SuccessCount c, double delta);
RateInterval normal_interval(SuccessCount c, double delta);
RateInterval make_interval(IntervalMethod m, SuccessCount c, double delta);

RateInterval hoeffding_interval(const ChannelTrace& t, double delta);
RateInterval bernstein_fast_interval(const ChannelTrace& t, double delta);
RateInterval exact_interval(const ChannelTrace& t, double delta);
RateInterval normal_interval(const ChannelTrace& t, double delta);
RateInterval make_interval(IntervalMethod m, const ChannelTrace& t, double delta);

/// P(Bin(n, q) <= k), summed over the shorter tail.
double binomial_cdf(std::uint64_t k, std::uint64_t n, double q);
/// P(Bin(n, q) >= k).
double binomial_sf(std::uint64_t k, std::uint64_t n, double q);

/// Standard normal quantile Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

}  // namespace ncsverify
