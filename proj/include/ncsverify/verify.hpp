#pragma once

#include <string>
#include <vector>

#include "ncsverify/channel.hpp"
#include "ncsverify/intervals.hpp"
#include "ncsverify/sysmodel.hpp"

namespace ncsverify {

/// Affirm means the queried property holds (stable / cost <= J_req), Deny
/// means its negation holds.
enum class Decision { Affirm, Deny, Undetermined };

std::string_view decision_name(Decision d);

struct Verdict {
  Decision decision = Decision::Undetermined;
  RateInterval interval;
  /// Stability threshold for stability queries, J_req for cost queries.
  double threshold_or_target = 0.0;
  /// "trivially_stable", "grid_certified", ...
  std::vector<std::string> flags;

  IntervalMethod method() const { return interval.method; }
  bool has_flag(std::string_view f) const;
};

/// Sample-based stability check for the simple model. Affirm iff the
/// threshold is strictly below interval.lo, Deny iff strictly above
/// interval.hi. Plants with rho(A) < 1 are affirmed without looking at the
/// data (flag "trivially_stable").
Verdict stability_test(const PlantModel& plant, SuccessCount counts, double delta, IntervalMethod method);
Verdict stability_test(const PlantModel& plant, const ChannelTrace& trace, double delta,
                       IntervalMethod method);

/// Sample-based cost check: Affirm iff J(lo) <= j_req, Deny iff J(hi) >= j_req
/// (or is infinite).
Verdict cost_test(const PlantModel& plant, SuccessCount counts, double delta, double j_req,
                  IntervalMethod method);
Verdict cost_test(const PlantModel& plant, const ChannelTrace& trace, double delta, double j_req,
                  IntervalMethod method);

constexpr double kDefaultGridStep = 1e-4;

/// Kronecker-condition sweep over a grid on [lo, hi] (endpoints included,
/// spacing <= grid_step <= 1e-3). Affirm if every grid point is stable, Deny
/// if none is. The condition need not be convex in q, so the result is only
/// certified on the grid (flag "grid_certified").
Verdict general_test(const PlantModel& plant, SuccessCount counts, double delta, IntervalMethod method,
                     double grid_step = kDefaultGridStep);
Verdict general_test(const PlantModel& plant, const ChannelTrace& trace, double delta,
                     IntervalMethod method, double grid_step = kDefaultGridStep);

/// One-line JSON: decision, method, delta, n, q_hat, lo, hi, threshold or
/// j_req, flags.
std::string verdict_to_json(const Verdict& v, bool cost_query);

}  // namespace ncsverify
