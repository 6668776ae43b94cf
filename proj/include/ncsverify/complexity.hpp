#pragma once

#include <cstdint>

namespace ncsverify {

/// True rate, critical rate and confidence level for the closed-form sample
/// complexity curves. margin = |q - threshold| must be positive.
class MarginSpec {
 public:
  /// Throws InputError for q outside [0, 1], delta outside (0, 1), or a zero
  /// margin.
  MarginSpec(double q, double threshold, double delta);
  /// Uses threshold = 1 - 1/rho^2.
  static MarginSpec from_radius(double q, double rho, double delta);

  double q() const { return q_; }
  double threshold() const { return threshold_; }
  double margin() const { return margin_; }
  double delta() const { return delta_; }

 private:
  double q_, threshold_, margin_, delta_;
};

/// 1 - exp(-2n [margin - sqrt(log(1/delta) / 2n)]_+^2): lower bound on the
/// probability that the Hoeffding stability test answers correctly.
double correctness_bound(const MarginSpec& spec, std::uint64_t n);

/// ceil(2 log(1/delta) / margin^2).
std::uint64_t hoeffding_sample_size(const MarginSpec& spec);

/// Whether n samples satisfy the Bernstein sufficiency inequality for the
/// fast-shrinking interval, with eps = margin - log(1/delta)/n required > 0:
///   n eps^2 / 2 / (q(1-q) + eps/3) >= log(1/delta).
bool bernstein_condition(const MarginSpec& spec, std::uint64_t n);

/// Least n >= 1 with bernstein_condition(spec, n).
std::uint64_t bernstein_sample_size(const MarginSpec& spec);

/// q(1-q) <= c * margin. Throws InputError unless c > 0.
bool low_variance_regime(const MarginSpec& spec, double c);

}  // namespace ncsverify
